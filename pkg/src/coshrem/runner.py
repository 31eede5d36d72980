"""Shared detection pipeline and shearlet-system cache for the CLI/service."""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass, field

import numpy as np

from .imagecore import BinaryMap, GrayImage
from .measures import (CurvatureMap, DetectionParams, MeasureMap,
                       OrientationMap, curvature_along, edge_measure,
                       orientation_map, ridge_measure)
from .postprocess import hysteresis_threshold, prune_small_components, thin
from .shearlets import (ShearletSystem, SystemParams, build_system, cache_key,
                        Orientation)
from .xform import analyze

CACHE_FORMAT_VERSION = 1


class SystemCache:
    """In-memory (and optionally on-disk) cache of built shearlet systems.

    Disk entries are a raw float32 .npy spectrum stack plus a JSON sidecar
    (format version, params, gains, orientation table); loading uses memory
    mapping so a cache hit costs milliseconds instead of a rebuild.
    """

    def __init__(self, cache_dir: str | None = None):
        self.cache_dir = cache_dir
        self._mem: dict[str, ShearletSystem] = {}
        self._lock = threading.Lock()

    def get(self, params: SystemParams, width: int, height: int):
        """Returns (system, cache_hit, build_ms)."""
        key = cache_key(params, width, height)
        with self._lock:
            if key in self._mem:
                return self._mem[key], True, 0.0
        t0 = time.perf_counter()
        system = self._load_disk(key, params, width, height)
        hit = system is not None
        if system is None:
            system = build_system(params, width, height)
            self._save_disk(key, system)
        build_ms = (time.perf_counter() - t0) * 1000.0
        with self._lock:
            self._mem[key] = system
        return system, hit, build_ms

    def _paths(self, key: str):
        return (os.path.join(self.cache_dir, f"{key}.npy"),
                os.path.join(self.cache_dir, f"{key}.json"))

    def _load_disk(self, key, params, width, height):
        if not self.cache_dir:
            return None
        npy, meta_path = self._paths(key)
        if not (os.path.exists(npy) and os.path.exists(meta_path)):
            return None
        try:
            with open(meta_path) as fh:
                meta = json.load(fh)
            if meta.get("format") != CACHE_FORMAT_VERSION:
                return None
            spectra = np.load(npy, mmap_mode="r")
            orientations = [Orientation(*o) for o in meta["orientations"]]
            return ShearletSystem(params, width, height, spectra,
                                  np.array(meta["gains"]), orientations, key)
        except Exception:
            return None

    def _save_disk(self, key, system: ShearletSystem):
        if not self.cache_dir:
            return
        os.makedirs(self.cache_dir, exist_ok=True)
        npy, meta_path = self._paths(key)
        np.save(npy, system.even_spectra)
        meta = {
            "format": CACHE_FORMAT_VERSION,
            "gains": system.scale_gains.tolist(),
            "orientations": [[o.cone, o.shear, o.angle]
                             for o in system.orientations],
            "params": system.params.to_dict(),
            "width": system.width,
            "height": system.height,
        }
        with open(meta_path, "w") as fh:
            json.dump(meta, fh)


@dataclass(frozen=True)
class DetectSettings:
    mode: str = "edge"  # edge | ridge
    system: SystemParams = SystemParams()
    detection: DetectionParams = DetectionParams()
    low: float = 0.3
    high: float = 0.5
    min_component: int = 0

    def __post_init__(self):
        if self.mode not in ("edge", "ridge"):
            raise ValueError(f"mode must be 'edge' or 'ridge', got {self.mode!r}")
        if not (0.0 <= self.low <= self.high <= 1.0):
            raise ValueError("thresholds must satisfy 0 <= low <= high <= 1")


@dataclass
class DetectResult:
    measure: MeasureMap
    orientation: OrientationMap
    skeleton: BinaryMap
    curvature: CurvatureMap
    stats: dict
    timings: dict
    cache_hit: bool


def run_detection(image: GrayImage, settings: DetectSettings,
                  cache: SystemCache) -> DetectResult:
    t_total = time.perf_counter()
    system, hit, build_ms = cache.get(settings.system, image.width, image.height)

    t0 = time.perf_counter()
    volume = analyze(system, image)
    analyze_ms = (time.perf_counter() - t0) * 1000.0

    t0 = time.perf_counter()
    measure_fn = edge_measure if settings.mode == "edge" else ridge_measure
    measure, pivot = measure_fn(volume, system, settings.detection)
    del volume
    orient = orientation_map(measure, pivot, system)
    measure_ms = (time.perf_counter() - t0) * 1000.0

    t0 = time.perf_counter()
    skeleton = thin(hysteresis_threshold(measure, settings.low, settings.high))
    if settings.min_component > 1:
        skeleton = prune_small_components(skeleton, settings.min_component)
    curvature = curvature_along(skeleton, orient)
    post_ms = (time.perf_counter() - t0) * 1000.0

    finite_curv = curvature.values[np.isfinite(curvature.values)]
    stats = {
        "onPixels": skeleton.count(),
        "measureMax": float(measure.values.max()),
        "measureMean": float(measure.values.mean()),
        "positivePixels": int((measure.values > 0).sum()),
        "medianCurvature": (float(np.median(finite_curv))
                            if finite_curv.size else None),
        "skippedCurvaturePixels": curvature.skipped,
    }
    timings = {
        "systemBuildMs": round(build_ms, 2),
        "analyzeMs": round(analyze_ms, 2),
        "measureMs": round(measure_ms, 2),
        "postprocessMs": round(post_ms, 2),
        "totalMs": round((time.perf_counter() - t_total) * 1000.0, 2),
    }
    return DetectResult(measure, orient, skeleton, curvature, stats, timings, hit)
