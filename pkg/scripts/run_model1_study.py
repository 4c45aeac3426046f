#!/usr/bin/env python3
"""Monte Carlo benchmark for the 2-D, period-3 preset model.

Simulates M independent trajectories of length L, estimates the six
2x2 coefficient matrices on each by both routes (moment-based "YW-CV"
and spectral-measure-based "YW-T"), and writes the replicate-quantile
summary as a long-format CSV (one row per method/alpha/coefficient).

By default the study runs at the model's own stability index; pass
``--sweep`` to repeat it over indices 1.1 .. 1.9.

Examples, from the repository root:

    python scripts/run_model1_study.py --out model1_study.csv
    python scripts/run_model1_study.py -L 2000 -M 1000 --sweep --out sweep.csv
"""

import argparse
import sys
import time

import numpy as np

from stablepar.mc import DEFAULT_ALPHA_SWEEP, McConfig, model1_preset, run_mc_study


def summarize(report, model) -> None:
    print(f"{'method':8s} {'alpha':>5s} {'worst |median-true|':>20s} "
          f"{'mean IQR':>9s} {'failures':>8s}")
    for method in report.config.methods:
        for alpha in report.config.alphas:
            devs, iqrs = [], []
            for v in range(1, model.period + 1):
                med = report.coefficient_matrix(method, alpha, v)
                devs.append(np.max(np.abs(med - model.theta[v - 1])))
                iqrs.append(
                    report.coefficient_matrix(method, alpha, v, "q75")
                    - report.coefficient_matrix(method, alpha, v, "q25")
                )
            print(f"{method:8s} {alpha:5.1f} {max(devs):20.4f} "
                  f"{np.mean(iqrs):9.4f} {report.failures[(method, alpha)]:8d}")


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("-L", "--length", type=int, default=1000,
                        help="trajectory length (default 1000)")
    parser.add_argument("-M", "--replicates", type=int, default=200,
                        help="number of Monte Carlo replicates (default 200)")
    parser.add_argument("--sweep", action="store_true",
                        help=f"sweep the stability index over {DEFAULT_ALPHA_SWEEP}")
    parser.add_argument("--methods", nargs="+", default=["YW-CV", "YW-T"],
                        choices=["YW-CV", "YW-T"])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="model1_study.csv",
                        help="long-format CSV output path")
    args = parser.parse_args(argv)

    model = model1_preset()
    config = McConfig(
        model=model,
        L=args.length,
        M=args.replicates,
        alphas=DEFAULT_ALPHA_SWEEP if args.sweep else (),
        methods=tuple(args.methods),
        seed=args.seed,
    )
    t0 = time.perf_counter()
    report = run_mc_study(config)
    print(f"study done in {time.perf_counter() - t0:.1f}s "
          f"(L={args.length}, M={args.replicates})", file=sys.stderr)
    summarize(report, model)
    report.to_csv(args.out)
    print(f"wrote {len(report.cells)} rows to {args.out}", file=sys.stderr)


if __name__ == "__main__":
    main()
