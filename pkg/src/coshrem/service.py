"""HTTP tuning service: parameter schema, detection runs, rendered layers."""

from __future__ import annotations

import io
import json
import threading
import uuid
from collections import OrderedDict

import numpy as np
from fastapi import FastAPI, File, Form, UploadFile
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from . import bench as bench_mod
from .imagecore import (GrayImage, ImageFormatError, render_anglemap,
                        render_overlay)
from .measures import DetectionParams
from .phantoms import PhantomSpec, STANDARD_PHANTOMS, corrupt, generate, poissonize
from .runner import DetectSettings, SystemCache, run_detection
from .shearlets import SystemParams

MAX_RUNS = 32

PARAM_SCHEMA = [
    # group: system (the six system parameters)
    {"name": "waveletSupport", "group": "system", "type": "float",
     "min": 8, "max": 200, "default": 60.0,
     "label": "Wavelet support (px)"},
    {"name": "gaussianSupport", "group": "system", "type": "float",
     "min": 4, "max": 120, "default": 28.0,
     "label": "Transverse support (px)"},
    {"name": "scalesPerOctave", "group": "system", "type": "int",
     "min": 1, "max": 6, "default": 2, "label": "Scales per octave"},
    {"name": "octaves", "group": "system", "type": "float",
     "min": 0.5, "max": 6, "default": 2.5, "label": "Octaves"},
    {"name": "shearLevel", "group": "system", "type": "int",
     "min": 0, "max": 4, "default": 3, "label": "Shear level"},
    {"name": "alpha", "group": "system", "type": "float",
     "min": 0.0, "max": 1.0, "default": 0.7, "label": "Anisotropy alpha"},
    # group: detection (the four detection parameters)
    {"name": "minContrast", "group": "detection", "type": "float",
     "min": 0.5, "max": 255, "default": 85.0, "label": "Minimum contrast"},
    {"name": "epsilonFactor", "group": "detection", "type": "float",
     "min": 0.001, "max": 10, "default": 0.1, "label": "Epsilon factor"},
    {"name": "pivotScales", "group": "detection", "type": "intlist",
     "min": 0, "max": 15, "default": [0, 1, 2], "label": "Pivot scales"},
    {"name": "polarity", "group": "detection", "type": "enum",
     "choices": ["positive", "negative", "both"], "default": "both",
     "label": "Polarity"},
    # group: postprocess (hysteresis thresholds)
    {"name": "lowThreshold", "group": "postprocess", "type": "float",
     "min": 0.0, "max": 1.0, "default": 0.3, "label": "Hysteresis low"},
    {"name": "highThreshold", "group": "postprocess", "type": "float",
     "min": 0.0, "max": 1.0, "default": 0.5, "label": "Hysteresis high"},
]

LAYERS = ("measure", "overlay", "orientation", "curvature", "skeleton")


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, field: str = None):
        self.status = status
        self.body = {"code": code, "message": message}
        if field:
            self.body["field"] = field
        super().__init__(message)


def _png_bytes(rgb) -> bytes:
    from PIL import Image

    buf = io.BytesIO()
    Image.fromarray(rgb.channels, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def _gray_png_bytes(values: np.ndarray) -> bytes:
    from PIL import Image

    arr = np.clip(np.floor(values + 0.5), 0, 255).astype(np.uint8)
    buf = io.BytesIO()
    Image.fromarray(arr, mode="L").save(buf, format="PNG")
    return buf.getvalue()


class RunStore:
    """Bounded store of recent runs (layer PNGs, stats, source images)."""

    def __init__(self, cap: int = MAX_RUNS):
        self.cap = cap
        self._runs: OrderedDict[str, dict] = OrderedDict()
        self._lock = threading.Lock()

    def put(self, entry: dict) -> str:
        run_id = uuid.uuid4().hex[:12]
        with self._lock:
            self._runs[run_id] = entry
            while len(self._runs) > self.cap:
                self._runs.popitem(last=False)
        return run_id

    def get(self, run_id: str) -> dict:
        with self._lock:
            if run_id not in self._runs:
                raise ApiError(404, "unknown_run",
                               f"run {run_id!r} expired or never existed")
            return self._runs[run_id]


def _require(cond, code, message, field=None, status=422):
    if not cond:
        raise ApiError(status, code, message, field)


def _parse_params(raw: str) -> dict:
    try:
        params = json.loads(raw) if raw else {}
    except json.JSONDecodeError as exc:
        raise ApiError(400, "bad_json", f"params is not valid JSON: {exc}")
    _require(isinstance(params, dict), "bad_json", "params must be an object")
    return params


def _schema_entry(name: str) -> dict:
    for entry in PARAM_SCHEMA:
        if entry["name"] == name:
            return entry
    raise KeyError(name)


def _checked(params: dict, name: str, default):
    if name not in params:
        return default
    entry = _schema_entry(name)
    value = params[name]
    if entry["type"] == "enum":
        _require(value in entry["choices"], "out_of_range",
                 f"{name} must be one of {entry['choices']}", field=name)
        return value
    if entry["type"] == "intlist":
        _require(isinstance(value, list) and len(value) > 0
                 and all(isinstance(v, int) for v in value),
                 "bad_type", f"{name} must be a nonempty list of ints",
                 field=name)
        for v in value:
            _require(entry["min"] <= v <= entry["max"], "out_of_range",
                     f"{name} entries must lie in "
                     f"[{entry['min']}, {entry['max']}]", field=name)
        return tuple(value)
    _require(isinstance(value, (int, float)) and not isinstance(value, bool),
             "bad_type", f"{name} must be a number", field=name)
    _require(entry["min"] <= value <= entry["max"], "out_of_range",
             f"{name} must lie in [{entry['min']}, {entry['max']}]", field=name)
    return int(value) if entry["type"] == "int" else float(value)


def settings_from_params(params: dict) -> DetectSettings:
    mode = params.get("mode", "edge")
    _require(mode in ("edge", "ridge"), "out_of_range",
             "mode must be 'edge' or 'ridge'", field="mode")
    sysd = params.get("system", {})
    detd = params.get("detection", {})
    thr = params.get("thresholds", {})
    base_sys = (bench_mod.GRID_EDGE_SYSTEM if mode == "edge"
                else bench_mod.GRID_RIDGE_SYSTEM)
    base_det = (bench_mod.GRID_EDGE_DETECTION if mode == "edge"
                else bench_mod.GRID_RIDGE_DETECTION)
    system = SystemParams(
        wavelet_support=_checked(sysd, "waveletSupport", base_sys.wavelet_support),
        gaussian_support=_checked(sysd, "gaussianSupport",
                                  base_sys.gaussian_support),
        scales_per_octave=_checked(sysd, "scalesPerOctave",
                                   base_sys.scales_per_octave),
        octaves=_checked(sysd, "octaves", base_sys.octaves),
        shear_level=_checked(sysd, "shearLevel", base_sys.shear_level),
        alpha=_checked(sysd, "alpha", base_sys.alpha),
    )
    pivot = _checked(detd, "pivotScales", base_det.pivot_scales)
    pivot = tuple(s for s in pivot if s < system.scale_count)
    _require(len(pivot) > 0, "out_of_range",
             "pivotScales has no entry below the scale count",
             field="pivotScales")
    detection = DetectionParams(
        min_contrast=_checked(detd, "minContrast", base_det.min_contrast),
        epsilon_factor=_checked(detd, "epsilonFactor", base_det.epsilon_factor),
        pivot_scales=pivot,
        polarity=_checked(detd, "polarity", base_det.polarity),
    )
    low = _checked(thr, "lowThreshold", 0.3)
    high = _checked(thr, "highThreshold", 0.5)
    _require(low <= high, "out_of_range",
             "lowThreshold must not exceed highThreshold", field="lowThreshold")
    return DetectSettings(mode=mode, system=system, detection=detection,
                          low=low, high=high,
                          min_component=int(params.get("minComponent", 0)))


def create_app(cache_dir: str = None, ui_dir: str = None) -> FastAPI:
    app = FastAPI(title="coshrem tuning service")
    cache = SystemCache(cache_dir)
    runs = RunStore()

    @app.exception_handler(ApiError)
    async def _api_error(request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.body)

    @app.exception_handler(Exception)
    async def _unhandled(request, exc: Exception):
        return JSONResponse(status_code=500,
                            content={"code": "internal", "message": str(exc)})

    @app.get("/api/params/schema")
    def params_schema():
        return {"parameters": PARAM_SCHEMA,
                "groups": ["system", "detection", "postprocess"]}

    @app.post("/api/detect")
    async def detect(image: UploadFile = File(None), params: str = Form("")):
        pd = _parse_params(params)
        if image is not None:
            data = await image.read()
            gray = _decode_upload(data, image.filename or "upload")
        elif "imageRef" in pd:
            entry = runs.get(str(pd["imageRef"]))
            _require("image" in entry, "bad_ref",
                     "referenced run has no stored image", field="imageRef")
            gray = entry["image"]
        else:
            raise ApiError(400, "missing_image",
                           "provide a multipart 'image' file or an imageRef",
                           field="image")
        settings = settings_from_params(pd)
        result = run_detection(gray, settings, cache)
        layers = {
            "measure": _gray_png_bytes(result.measure.values * 255.0),
            "overlay": _png_bytes(render_overlay(gray, result.skeleton)),
            "orientation": _png_bytes(render_anglemap(result.orientation, 90.0)),
            "curvature": _png_bytes(render_anglemap(
                result.curvature, float(pd.get("curvatureRange", 5.0)))),
            "skeleton": _gray_png_bytes(result.skeleton.mask * 255.0),
        }
        run_id = runs.put({"layers": layers, "image": gray,
                           "stats": result.stats, "params": pd})
        return {"runId": run_id, "stats": result.stats,
                "cacheHit": result.cache_hit, "timings": result.timings}

    @app.get("/api/result/{run_id}/{layer}")
    def result_layer(run_id: str, layer: str):
        _require(layer in LAYERS, "unknown_layer",
                 f"layer must be one of {LAYERS}", field="layer", status=404)
        entry = runs.get(run_id)
        return Response(content=entry["layers"][layer], media_type="image/png")

    @app.post("/api/phantom")
    def phantom(body: dict):
        if "standard" in body:
            name = body["standard"]
            _require(name in STANDARD_PHANTOMS, "unknown_phantom",
                     f"standard must be one of {sorted(STANDARD_PHANTOMS)}",
                     field="standard")
            image, gt = STANDARD_PHANTOMS[name]()
        elif "spec" in body:
            try:
                image, gt = generate(PhantomSpec.from_dict(body["spec"]))
            except (KeyError, ValueError) as exc:
                raise ApiError(422, "bad_spec", f"invalid phantom spec: {exc}",
                               field="spec")
        else:
            raise ApiError(400, "missing_spec",
                           "provide 'standard' or 'spec'", field="spec")
        seed = int(body.get("seed", 0))
        blur = float(body.get("blur", 0.0))
        noise = float(body.get("noise", 0.0))
        if blur or noise:
            image = corrupt(image, blur, noise, seed=seed)
        if body.get("poisson"):
            image = poissonize(image, seed=seed ^ bench_mod.POISSON_SEED_SALT)
        run_id = runs.put({"layers": {}, "image": image,
                           "stats": {"gtPixels": gt.map.count()}, "params": body})
        return {"runId": run_id, "width": image.width, "height": image.height,
                "gtPixels": gt.map.count()}

    if ui_dir:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    return app


def _decode_upload(data: bytes, filename: str) -> GrayImage:
    import tempfile, os

    suffix = ".pgm" if (data[:2] == b"P5" or filename.endswith(".pgm")) else ".png"
    fd, path = tempfile.mkstemp(suffix=suffix)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        from .imagecore import load_gray

        return load_gray(path)
    except ImageFormatError as exc:
        raise ApiError(422, "bad_image", str(exc), field="image")
    finally:
        os.unlink(path)
