#!/usr/bin/env python3
"""Nominal-order sanity study: smooth initial profile, external potential.

All eight schemes should show their classical orders here (one for FD1,
EI1, LIE, ULI1; two for FD2, EI2, STRANG, ULI2) in relative H^2 error.
"""

import argparse

from nlde.harness import StudyConfig, run_convergence_study, write_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-modes", type=int, default=256)
    ap.add_argument("--t-final", type=float, default=1.0)
    ap.add_argument("--reference-tau", type=float, default=1e-5)
    ap.add_argument("--cache-dir", default="nde-cache")
    ap.add_argument("--out", default="smooth_orders.csv")
    args = ap.parse_args()

    cfg = StudyConfig(
        potential="external",
        lam=1.0,
        profile="smooth",
        n_modes=args.n_modes,
        t_final=args.t_final,
        tau_list=tuple(0.1 * 2.0**-k for k in range(7)),
        error_r=2.0,
        reference_tau=args.reference_tau,
        cache_dir=args.cache_dir,
    )
    report = run_convergence_study(cfg)
    write_report(report, args.out)
    print(f"wrote {args.out}")
    for scheme, fit in report.slopes.items():
        print(f"{scheme:8s} slope {fit[0]:+.3f}")


if __name__ == "__main__":
    main()
