"""Reproduce the benchmark tables: edge grid, ridge grid and Poisson row.

Writes results.csv / timings.csv / report.json per experiment under the
given output directory (default bench_out/).
"""

import argparse
import os
import sys

from coshrem.bench import BenchConfig, default_roster, run_grid, write_report


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="bench_out")
    ap.add_argument("--seed", type=int, default=20160914)
    ap.add_argument("--skip-baselines", action="store_true",
                    help="run only the shearlet detectors (faster)")
    args = ap.parse_args()

    experiments = {
        "edge_grid": BenchConfig(phantom="edge512", master_seed=args.seed),
        "ridge_grid": BenchConfig(phantom="ridge512", master_seed=args.seed,
                                  detectors=default_roster("ridge")),
        "edge_poisson": BenchConfig(phantom="edge512", poisson=True,
                                    blurs=(0.0,), master_seed=args.seed),
    }
    if args.skip_baselines:
        for cfg in experiments.values():
            cfg.detectors = [d for d in cfg.detectors
                             if d.kind.startswith("coshrem")]

    for name, cfg in experiments.items():
        out = os.path.join(args.out_dir, name)
        print(f"== {name} -> {out}")
        report = run_grid(cfg)
        write_report(report, out)
        for det in sorted({r.detector for r in report.rows}):
            scores = [r.score for r in report.rows if r.detector == det]
            print(f"  {det}: min={min(scores):.3f} max={max(scores):.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
