"""Command line front end: single runs, convergence studies, reference builds."""

from __future__ import annotations

import argparse
import sys

from .harness import (
    StudyConfig,
    config_from_dict,
    effective_tau,
    evolve,
    initial_spinor,
    load_study_config,
    make_model_config,
    reference_metadata,
    reference_path,
    reference_solution,
    run_convergence_study,
    save_reference,
    write_report,
)
from .spectral import SpectralGrid, sobolev_norm, to_spectral


def _add_study_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="flat JSON file mirroring the study config fields")
    p.add_argument("--scheme", action="append", dest="schemes", metavar="ID",
                   help="scheme to include (repeatable); default: all")
    p.add_argument("--potential", choices=["external", "poisson"])
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--n-modes", dest="n_modes", type=int)
    p.add_argument("--tau-list", dest="tau_list",
                   help="comma separated step sizes, e.g. 0.1,0.05,0.025")
    p.add_argument("--t-final", dest="t_final", type=float)
    p.add_argument("--theta", type=float, help="Sobolev exponent of rough initial data")
    p.add_argument("--profile", help="named smooth initial profile (instead of --theta)")
    p.add_argument("--seed", type=int)
    p.add_argument("--error-r", dest="error_r", type=float)
    p.add_argument("--reference-tau", dest="reference_tau", type=float)
    p.add_argument("--cache-dir", dest="cache_dir")
    p.add_argument("--out")


def _study_config(args) -> StudyConfig:
    data = {}
    if args.config:
        data.update(vars(load_study_config(args.config)))
    overrides = {
        k: getattr(args, k)
        for k in ("schemes", "potential", "lam", "n_modes", "tau_list", "t_final",
                  "theta", "profile", "seed", "error_r", "reference_tau",
                  "cache_dir", "out")
        if getattr(args, k, None) is not None
    }
    if "tau_list" in overrides and isinstance(overrides["tau_list"], str):
        overrides["tau_list"] = tuple(float(t) for t in overrides["tau_list"].split(","))
    if "theta" in overrides:
        data.pop("profile", None)
    if "profile" in overrides:
        data.pop("theta", None)
    data.update(overrides)
    if "potential" not in data:
        raise SystemExit("error: --potential (or a config file) is required")
    return config_from_dict(data)


def _cmd_study(args) -> int:
    cfg = _study_config(args)
    report = run_convergence_study(cfg)
    out = cfg.out or "report.csv"
    write_report(report, out)
    print(f"wrote {out} and {out}.meta.json")
    for scheme, fit in report.slopes.items():
        if fit is None:
            print(f"{scheme:8s} slope: undefined (fewer than 3 usable cells)")
        else:
            print(f"{scheme:8s} slope: {fit[0]:+.3f}   intercept: {fit[1]:+.3f}")
    return 0


def _cmd_reference(args) -> int:
    cfg = _study_config(args)
    path = cfg.out or reference_path(cfg)
    reference_solution(cfg, path=path)
    print(f"reference ready at {path}")
    return 0


def _cmd_run(args) -> int:
    if (args.theta is None) == (args.profile is None):
        raise SystemExit("error: exactly one of --theta / --profile is required")
    cfg = StudyConfig(
        potential=args.potential,
        lam=args.lam if args.lam is not None else 1.0,
        theta=args.theta,
        profile=args.profile,
        n_modes=args.n_modes if args.n_modes is not None else 4096,
        t_final=args.t_final if args.t_final is not None else 1.0,
        tau_list=(args.tau,),
        error_r=args.error_r if args.error_r is not None else 2.0,
        seed=args.seed if args.seed is not None else 0,
        reference_tau=0.0,
    )
    tau, steps = effective_tau(args.tau, cfg.t_final)
    model_cfg = make_model_config(cfg)
    result = evolve(initial_spinor(cfg), args.scheme, tau, cfg.t_final, model_cfg)
    final = result.final
    print(f"scheme={args.scheme} steps={steps} tau={tau!r}")
    print(f"l2_drift={result.l2_drift!r}")
    print(f"H^{cfg.error_r} norm of final state: {sobolev_norm(final, cfg.error_r)!r}")
    if args.out:
        save_reference(args.out, reference_metadata(cfg), to_spectral(final.values))
        print(f"saved final state to {args.out}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nlde",
        description="Spectral integrators for the 1D nonlinear Dirac equation "
        "and Dirac-Poisson system on the torus",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="evolve a single trajectory")
    p_run.add_argument("--scheme", required=True)
    p_run.add_argument("--potential", choices=["external", "poisson"], required=True)
    p_run.add_argument("--lambda", dest="lam", type=float)
    p_run.add_argument("--n-modes", dest="n_modes", type=int)
    p_run.add_argument("--tau", type=float, required=True)
    p_run.add_argument("--t-final", dest="t_final", type=float)
    p_run.add_argument("--theta", type=float)
    p_run.add_argument("--profile")
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--error-r", dest="error_r", type=float)
    p_run.add_argument("--out")
    p_run.set_defaults(func=_cmd_run)

    p_study = sub.add_parser("study", help="run a convergence matrix and fit orders")
    _add_study_flags(p_study)
    p_study.set_defaults(func=_cmd_study)

    p_ref = sub.add_parser("reference", help="build or refresh a cached reference solution")
    _add_study_flags(p_ref)
    p_ref.set_defaults(func=_cmd_reference)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
