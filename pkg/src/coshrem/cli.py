"""Command-line interface: phantom, detect, bench, pfom, serve."""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import bench as bench_mod
from .imagecore import (BinaryMap, GrayImage, ImageFormatError, load_gray,
                        render_anglemap, render_overlay, save_gray,
                        save_gray16, save_rgb)
from .measures import DetectionParams
from .metrics import pfom
from .phantoms import (STANDARD_PHANTOMS, PhantomSpec, corrupt, generate,
                       poissonize, save_ground_truth)
from .runner import DetectSettings, SystemCache, run_detection
from .shearlets import SystemParams

EXIT_USAGE = 2


def _add_system_flags(p: argparse.ArgumentParser):
    g = p.add_argument_group("shearlet system")
    g.add_argument("--wavelet-support", type=float, default=None,
                   help="effective support of the 1D even wavelet (px)")
    g.add_argument("--gaussian-support", type=float, default=None,
                   help="effective support of the transverse bump (px)")
    g.add_argument("--scales-per-octave", type=int, default=None)
    g.add_argument("--octaves", type=float, default=None)
    g.add_argument("--shear-level", type=int, default=None)
    g.add_argument("--alpha", type=float, default=None,
                   help="anisotropy exponent in [0, 1]")


def _add_detection_flags(p: argparse.ArgumentParser):
    g = p.add_argument_group("detection")
    g.add_argument("--min-contrast", type=float, default=None)
    g.add_argument("--epsilon-factor", type=float, default=None)
    g.add_argument("--pivot-scales", type=str, default=None,
                   help="comma-separated scale indices, e.g. 0,1,2")
    g.add_argument("--polarity", choices=["positive", "negative", "both"],
                   default=None)
    g.add_argument("--low", type=float, default=0.3,
                   help="hysteresis low threshold (fraction of 1.0)")
    g.add_argument("--high", type=float, default=0.5,
                   help="hysteresis high threshold (fraction of 1.0)")
    g.add_argument("--min-component", type=int, default=0,
                   help="drop detected components smaller than this (px)")


def _system_from_args(args, mode: str) -> SystemParams:
    base = (bench_mod.GRID_EDGE_SYSTEM if mode == "edge"
            else bench_mod.GRID_RIDGE_SYSTEM)
    return SystemParams(
        wavelet_support=args.wavelet_support or base.wavelet_support,
        gaussian_support=args.gaussian_support or base.gaussian_support,
        scales_per_octave=args.scales_per_octave or base.scales_per_octave,
        octaves=args.octaves or base.octaves,
        shear_level=(args.shear_level if args.shear_level is not None
                     else base.shear_level),
        alpha=args.alpha if args.alpha is not None else base.alpha,
    )


def _detection_from_args(args, mode: str) -> DetectionParams:
    base = (bench_mod.GRID_EDGE_DETECTION if mode == "edge"
            else bench_mod.GRID_RIDGE_DETECTION)
    pivot = base.pivot_scales
    if args.pivot_scales:
        pivot = tuple(int(s) for s in args.pivot_scales.split(","))
    return DetectionParams(
        min_contrast=args.min_contrast or base.min_contrast,
        epsilon_factor=args.epsilon_factor or base.epsilon_factor,
        pivot_scales=pivot,
        polarity=args.polarity or base.polarity,
    )


def cmd_phantom(args) -> int:
    if args.spec:
        with open(args.spec) as fh:
            spec = PhantomSpec.from_dict(json.load(fh))
        image, gt = generate(spec)
    else:
        if args.standard not in STANDARD_PHANTOMS:
            print(f"unknown standard phantom {args.standard!r}; choices: "
                  f"{', '.join(sorted(STANDARD_PHANTOMS))}", file=sys.stderr)
            return EXIT_USAGE
        image, gt = STANDARD_PHANTOMS[args.standard]()
    if args.blur or args.noise:
        image = corrupt(image, args.blur, args.noise, seed=args.seed)
    if args.poisson:
        image = poissonize(image, seed=args.seed ^ bench_mod.POISSON_SEED_SALT)
    save_gray(image, args.out)
    if args.gt_out:
        save_ground_truth(gt, args.gt_out)
    if args.gt_map_out:
        save_gray(GrayImage(gt.map.mask * 255.0), args.gt_map_out)
    print(f"wrote {args.out}" + (f" and {args.gt_out}" if args.gt_out else ""))
    return 0


def cmd_detect(args) -> int:
    if not os.path.exists(args.image):
        print(f"error: image file {args.image!r} does not exist", file=sys.stderr)
        return EXIT_USAGE
    try:
        image = load_gray(args.image)
    except ImageFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    settings = DetectSettings(
        mode=args.mode,
        system=_system_from_args(args, args.mode),
        detection=_detection_from_args(args, args.mode),
        low=args.low, high=args.high, min_component=args.min_component,
    )
    cache = SystemCache(args.cache_dir)
    result = run_detection(image, settings, cache)

    os.makedirs(args.out_dir, exist_ok=True)
    out = lambda name: os.path.join(args.out_dir, name)
    save_gray16(GrayImage(result.measure.values * 255.0), out("measure.pgm"))
    save_rgb(render_overlay(image, result.skeleton), out("overlay.png"))
    save_rgb(render_anglemap(result.orientation, 90.0), out("orientation.png"))
    save_rgb(render_anglemap(result.curvature, args.curvature_range),
             out("curvature.png"))
    save_gray(GrayImage(result.skeleton.mask * 255.0), out("skeleton.png"))
    summary = {
        "image": os.path.abspath(args.image),
        "mode": args.mode,
        "stats": result.stats,
        "timings": result.timings,
        "cacheHit": result.cache_hit,
        "system": settings.system.to_dict(),
        "detection": settings.detection.to_dict(),
        "thresholds": {"low": settings.low, "high": settings.high},
    }
    with open(out("summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2)
    print(json.dumps(summary["timings"] | {"cacheHit": result.cache_hit,
                                           "onPixels": result.stats["onPixels"]}))
    return 0


def cmd_bench(args) -> int:
    if args.config:
        with open(args.config) as fh:
            config = bench_mod.BenchConfig.from_dict(json.load(fh))
    else:
        config = bench_mod.BenchConfig(phantom=args.phantom,
                                       poisson=args.poisson,
                                       master_seed=args.seed)
        if args.phantom.startswith("ridge"):
            config.detectors = bench_mod.default_roster("ridge")
        if args.canny_sigma or args.canny_low or args.canny_high:
            from .baselines import CannyParams

            canny_params = CannyParams(
                sigma=args.canny_sigma or bench_mod.GRID_CANNY.sigma,
                low_frac=(args.canny_low if args.canny_low is not None
                          else bench_mod.GRID_CANNY.low_frac),
                high_frac=(args.canny_high if args.canny_high is not None
                           else bench_mod.GRID_CANNY.high_frac))
            config.detectors = [
                d if d.kind != "canny" else bench_mod.DetectorSpec(
                    d.name, d.kind, canny_params=canny_params,
                    min_component=d.min_component)
                for d in config.detectors]
        if args.sobel_threshold is not None:
            config.detectors = [
                d if d.kind != "sobel" else bench_mod.DetectorSpec(
                    d.name, d.kind, sobel_threshold=args.sobel_threshold,
                    min_component=d.min_component)
                for d in config.detectors]
    report = bench_mod.run_grid(config)
    paths = bench_mod.write_report(report, args.out_dir)
    print(report.results_csv(), end="")
    print(f"wrote {paths['results']}", file=sys.stderr)
    return 0


def cmd_pfom(args) -> int:
    try:
        detected = load_gray(args.detected)
        truth = load_gray(args.truth)
    except ImageFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    score = pfom(BinaryMap(detected.pixels > 127),
                 BinaryMap(truth.pixels > 127), a=args.a)
    print(f"{score:.6f}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(cache_dir=args.cache_dir, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coshrem",
        description="Complex shearlet-based ridge and edge detection")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phantom", help="generate a mock image + ground truth")
    p.add_argument("--standard", default="edge512",
                   help=f"one of: {', '.join(sorted(STANDARD_PHANTOMS))}")
    p.add_argument("--spec", help="JSON phantom spec file (overrides --standard)")
    p.add_argument("--out", required=True, help="output image (.pgm/.png)")
    p.add_argument("--gt-out", help="ground-truth JSON sidecar path")
    p.add_argument("--gt-map-out", help="ground-truth mask image path")
    p.add_argument("--blur", type=float, default=0.0)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--poisson", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_phantom)

    p = sub.add_parser("detect", help="run edge/ridge detection on an image")
    p.add_argument("--image", required=True)
    p.add_argument("--mode", choices=["edge", "ridge"], default="edge")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--cache-dir", default=None,
                   help="directory for the shearlet system disk cache")
    p.add_argument("--curvature-range", type=float, default=5.0,
                   help="degrees/px that saturates the curvature render")
    _add_system_flags(p)
    _add_detection_flags(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("bench", help="run the corruption-grid benchmark")
    p.add_argument("--config", help="BenchConfig JSON file")
    p.add_argument("--phantom", default="edge512")
    p.add_argument("--poisson", action="store_true")
    p.add_argument("--seed", type=int, default=20160914)
    p.add_argument("--out-dir", required=True)
    g = p.add_argument_group("baseline detectors")
    g.add_argument("--canny-sigma", type=float, default=None)
    g.add_argument("--canny-low", type=float, default=None)
    g.add_argument("--canny-high", type=float, default=None)
    g.add_argument("--sobel-threshold", type=float, default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("pfom", help="score a detection against ground truth")
    p.add_argument("--detected", required=True, help="binary image (>127 = on)")
    p.add_argument("--truth", required=True)
    p.add_argument("--a", type=float, default=1.0 / 9.0)
    p.set_defaults(func=cmd_pfom)

    p = sub.add_parser("serve", help="run the HTTP tuning service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8571)
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--ui-dir", default=None,
                   help="serve the built tuner UI from this directory "
                        "(e.g. frontend/dist)")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
