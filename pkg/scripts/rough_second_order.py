#!/usr/bin/env python3
"""Rough-data study for the second-order schemes.

H^2.2 initial data, error measured in H^1 at T = 1. The extended
low-regularity scheme keeps (nearly) second order; FD2, EI2 and Strang
splitting are visibly reduced. See rough_first_order.py for the step
size regime note.
"""

import argparse

from nlde.harness import StudyConfig, run_convergence_study, write_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--potential", choices=["external", "poisson", "both"], default="both")
    ap.add_argument("--theta", type=float, default=2.2)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--n-modes", type=int, default=4096)
    ap.add_argument("--reference-tau", type=float, default=2e-5)
    ap.add_argument("--tau-points", type=int, default=5)
    ap.add_argument("--cache-dir", default="nde-cache")
    ap.add_argument("--out", default="rough_second_order")
    ap.add_argument("--large-scale", action="store_true",
                    help="N = 2^15 and tau_ref = 1e-6 (slow)")
    args = ap.parse_args()

    kinds = ["external", "poisson"] if args.potential == "both" else [args.potential]
    n_modes = 2**15 if args.large_scale else args.n_modes
    tau_ref = 1e-6 if args.large_scale else args.reference_tau
    for kind in kinds:
        cfg = StudyConfig(
            potential=kind,
            lam=1.0,
            theta=args.theta,
            n_modes=n_modes,
            t_final=1.0,
            tau_list=tuple(0.1 * 2.0**-k for k in range(args.tau_points)),
            error_r=1.0,
            schemes=("ULI2", "FD2", "EI2", "STRANG"),
            reference_tau=tau_ref,
            seed=args.seed,
            cache_dir=args.cache_dir,
        )
        report = run_convergence_study(cfg)
        out = f"{args.out}_{kind}.csv"
        write_report(report, out)
        print(f"[{kind}] wrote {out}")
        for scheme, fit in report.slopes.items():
            if fit is None:
                print(f"  {scheme:6s} H^1 slope undefined")
            else:
                print(f"  {scheme:6s} H^1 slope {fit[0]:+.3f}")


if __name__ == "__main__":
    main()
