"""Batch driver: trajectories, cached reference solutions, convergence studies.

A study evolves one initial spinor with several schemes over a grid of
step sizes, compares every run at the final time against a fine-step
reference trajectory on the same spatial grid, and fits the observed
order from the (tau, relative H^r error) pairs. Reports go to CSV plus a
JSON sidecar; reference solutions are cached on disk in a small binary
format so repeated studies reuse them.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import classical, uli
from .classical import BlowUpError, SchemeId
from .model import (
    ExternalPotential,
    ModelConfig,
    PoissonPotential,
    SpinorField,
    external_sine_potential,
)
from .roughdata import RNG_ALGORITHM, RoughDataSpec, generate_rough_spinor
from .spectral import (
    PHYSICAL,
    SPECTRAL,
    SpectralGrid,
    sobolev_norm_coeffs,
    to_spectral,
)

REFERENCE_MAGIC = b"NDEREF1"
COEFF_CONVENTION = "coeffs-1-over-N"

DEFAULT_TAU_LIST = tuple(0.1 * 2.0**-k for k in range(8))
ALL_SCHEMES = ("FD1", "FD2", "EI1", "EI2", "LIE", "STRANG", "ULI1", "ULI2")

STEPPERS = {
    SchemeId.FD1: classical.Fd1,
    SchemeId.FD2: classical.Fd2,
    SchemeId.EI1: classical.Ei1,
    SchemeId.EI2: classical.Ei2,
    SchemeId.LIE: classical.Lie,
    SchemeId.STRANG: classical.Strang,
    SchemeId.ULI1: uli.Uli1,
    SchemeId.ULI2: uli.Uli2,
}


def _smooth_profile(grid: SpectralGrid) -> SpinorField:
    x = grid.points
    vals = np.stack(
        [np.exp(1j * x) / (2.0 + np.cos(x)), np.exp(-1j * x) / (2.0 + np.sin(x))]
    )
    return SpinorField(grid, vals, PHYSICAL)


SMOOTH_PROFILES = {"smooth": _smooth_profile}


@dataclass
class StudyConfig:
    """Everything a convergence study needs; mirrors the config file 1:1."""

    potential: str
    lam: float = 1.0
    theta: float | None = None
    profile: str | None = None
    n_modes: int = 4096
    t_final: float = 1.0
    tau_list: tuple = DEFAULT_TAU_LIST
    error_r: float = 2.0
    schemes: tuple = ALL_SCHEMES
    reference_scheme: str = "STRANG"
    reference_tau: float = 1e-5
    seed: int = 0
    out: str | None = None
    cache_dir: str = "nde-cache"

    def __post_init__(self):
        if self.potential not in ("external", "poisson"):
            raise ValueError("potential must be 'external' or 'poisson'")
        if (self.theta is None) == (self.profile is None):
            raise ValueError("exactly one of theta / profile must be set")
        if self.profile is not None and self.profile not in SMOOTH_PROFILES:
            raise ValueError(f"unknown profile {self.profile!r}")
        if self.error_r < 0:
            raise ValueError("error_r must be >= 0")
        if not self.tau_list:
            raise ValueError("tau_list must not be empty")
        self.tau_list = tuple(sorted((float(t) for t in self.tau_list), reverse=True))
        self.schemes = tuple(SchemeId(s).value for s in self.schemes)
        for tau in self.tau_list:
            if effective_tau(tau, self.t_final)[0] <= self.reference_tau:
                raise ValueError("every tau must stay above reference_tau")

    def initial_data_tag(self) -> str:
        return repr(self.theta) if self.theta is not None else f"profile:{self.profile}"


def config_from_dict(data: dict) -> StudyConfig:
    """Build a StudyConfig from a flat mapping; unknown keys are an error."""
    known = {f.name for f in dataclasses.fields(StudyConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(unknown)}")
    return StudyConfig(**data)


def load_study_config(path: str) -> StudyConfig:
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a flat JSON object")
    return config_from_dict(data)


def make_model_config(cfg: StudyConfig, grid: SpectralGrid | None = None) -> ModelConfig:
    grid = grid or SpectralGrid.of_size(cfg.n_modes)
    if cfg.potential == "poisson":
        pot = PoissonPotential()
    else:
        pot = external_sine_potential(grid)
    return ModelConfig(grid=grid, lam=cfg.lam, potential=pot)


def initial_spinor(cfg: StudyConfig) -> SpinorField:
    if cfg.theta is not None:
        return generate_rough_spinor(RoughDataSpec(cfg.theta, cfg.n_modes, cfg.seed))
    return SMOOTH_PROFILES[cfg.profile](SpectralGrid.of_size(cfg.n_modes))


def make_stepper(scheme: SchemeId | str, cfg: ModelConfig, tau: float):
    return STEPPERS[SchemeId(scheme)](cfg, tau)


def effective_tau(tau: float, t_final: float) -> tuple[float, int]:
    """Round tau so that it divides t_final; returns (tau, steps)."""
    steps = max(1, round(t_final / tau))
    return t_final / steps, steps


@dataclass
class EvolveResult:
    final: SpinorField
    steps: int
    l2_drift: float


def evolve(
    phi0: SpinorField,
    scheme: SchemeId | str,
    tau: float,
    t_final: float,
    cfg: ModelConfig,
) -> EvolveResult:
    """Apply round(t_final/tau) steps of the scheme; raises BlowUpError
    if the trajectory leaves floating-point range."""
    if t_final == 0:
        return EvolveResult(phi0.in_physical().copy(), 0, 0.0)
    n = round(t_final / tau)
    if n < 1 or abs(t_final / tau - n) > 1e-9:
        raise ValueError(f"t_final/tau = {t_final / tau!r} is not an integer")
    stepper = make_stepper(scheme, cfg, tau)
    start = phi0.in_physical().values
    norm0 = sobolev_norm_coeffs(to_spectral(start), cfg.grid, 0.0)
    out = stepper.run(start, n)
    norm1 = sobolev_norm_coeffs(to_spectral(out), cfg.grid, 0.0)
    drift = abs(norm1 - norm0) / norm0 if norm0 > 0 else 0.0
    return EvolveResult(SpinorField(cfg.grid, out, PHYSICAL), n, drift)


# ---------------------------------------------------------------------------
# reference solutions and their on-disk cache


def reference_metadata(cfg: StudyConfig) -> str:
    return (
        f"n_modes={cfg.n_modes} t_final={cfg.t_final!r} tau_ref={cfg.reference_tau!r} "
        f"potential={cfg.potential} lambda={cfg.lam!r} theta={cfg.initial_data_tag()} "
        f"seed={cfg.seed} convention={COEFF_CONVENTION}"
    )


def reference_path(cfg: StudyConfig) -> str:
    key = reference_metadata(cfg) + f" scheme={cfg.reference_scheme}"
    digest = hashlib.sha256(key.encode()).hexdigest()[:16]
    return os.path.join(cfg.cache_dir, f"ref-{digest}.nderef")


def save_reference(path: str, metadata: str, coeffs: np.ndarray) -> None:
    payload = np.empty(coeffs.shape + (2,), dtype="<f8")
    payload[..., 0] = coeffs.real
    payload[..., 1] = coeffs.imag
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "wb") as f:
        f.write(REFERENCE_MAGIC + b"\n")
        f.write(metadata.encode("ascii") + b"\n")
        f.write(payload.tobytes())


def load_reference(path: str) -> tuple[str, np.ndarray]:
    with open(path, "rb") as f:
        magic = f.readline().rstrip(b"\n")
        if magic != REFERENCE_MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}")
        metadata = f.readline().rstrip(b"\n").decode("ascii")
        raw = np.frombuffer(f.read(), dtype="<f8")
    pairs = raw.reshape(2, -1, 2)
    return metadata, pairs[..., 0] + 1j * pairs[..., 1]


def reference_solution(cfg: StudyConfig, path: str | None = None) -> SpinorField:
    """Fine-step trajectory at t_final, loaded from cache when the stored
    metadata matches bit-exactly, recomputed (with a warning) otherwise."""
    path = path or reference_path(cfg)
    metadata = reference_metadata(cfg)
    grid = SpectralGrid.of_size(cfg.n_modes)
    if os.path.exists(path):
        stored, coeffs = load_reference(path)
        if stored == metadata:
            return SpinorField(grid, coeffs, SPECTRAL)
        warnings.warn(
            f"reference cache {path} does not match the requested config; recomputing"
        )
    tau_ref, _ = effective_tau(cfg.reference_tau, cfg.t_final)
    model_cfg = make_model_config(cfg, grid)
    result = evolve(initial_spinor(cfg), cfg.reference_scheme, tau_ref, cfg.t_final, model_cfg)
    coeffs = to_spectral(result.final.values)
    save_reference(path, metadata, coeffs)
    return SpinorField(grid, coeffs, SPECTRAL)


# ---------------------------------------------------------------------------
# convergence studies


@dataclass
class CellResult:
    scheme: str
    tau: float
    steps: int
    error_rel: float
    l2_drift: float
    status: str  # "ok" or "blowup"


@dataclass
class ConvergenceReport:
    config: StudyConfig
    cells: list = field(default_factory=list)
    slopes: dict = field(default_factory=dict)
    rng_algorithm: str = RNG_ALGORITHM

    def errors_for(self, scheme: str) -> list:
        return [(c.tau, c.error_rel) for c in self.cells if c.scheme == scheme and c.status == "ok"]


def fit_order(pairs) -> tuple[float, float]:
    """Least-squares slope/intercept of log(error) against log(tau)."""
    pairs = list(pairs)
    if len(pairs) < 3:
        raise ValueError("need at least 3 (tau, error) pairs")
    taus = np.array([p[0] for p in pairs], dtype=float)
    errs = np.array([p[1] for p in pairs], dtype=float)
    if np.any(taus <= 0) or np.any(errs <= 0):
        raise ValueError("taus and errors must all be positive")
    slope, intercept = np.polyfit(np.log(taus), np.log(errs), 1)
    return float(slope), float(intercept)


def saturation_floor(reference_tau: float, taus, errors) -> float:
    """Error level considered contaminated by the reference accuracy.

    Cells below 10 * (tau_ref / tau_min) * min(error) sit too close to
    the reference's own error to inform the fit. With a properly fine
    reference (tau_ref << tau_min) the floor lies below every cell.
    """
    tau_min = min(taus)
    return 10.0 * (reference_tau / tau_min) * min(errors)


def _fit_cells(cfg: StudyConfig, cells) -> tuple[float, float] | None:
    good = [(c.tau, c.error_rel) for c in cells if c.status == "ok" and c.error_rel > 0]
    if len(good) < 3:
        return None
    floor = saturation_floor(cfg.reference_tau, [t for t, _ in good], [e for _, e in good])
    kept = [(t, e) for t, e in good if e >= floor]
    if len(kept) < 3:
        return None
    return fit_order(kept)


def run_convergence_study(cfg: StudyConfig) -> ConvergenceReport:
    grid = SpectralGrid.of_size(cfg.n_modes)
    model_cfg = make_model_config(cfg, grid)
    phi0 = initial_spinor(cfg)
    ref = reference_solution(cfg)
    ref_coeffs = ref.values
    ref_norm = sobolev_norm_coeffs(ref_coeffs, grid, cfg.error_r)
    report = ConvergenceReport(config=cfg)
    for scheme in cfg.schemes:
        for tau in cfg.tau_list:
            tau_eff, steps = effective_tau(tau, cfg.t_final)
            try:
                res = evolve(phi0, scheme, tau_eff, cfg.t_final, model_cfg)
                diff = to_spectral(res.final.values) - ref_coeffs
                err = sobolev_norm_coeffs(diff, grid, cfg.error_r) / ref_norm
                cell = CellResult(scheme, tau_eff, steps, err, res.l2_drift, "ok")
            except BlowUpError:
                cell = CellResult(scheme, tau_eff, steps, float("nan"), float("nan"), "blowup")
            report.cells.append(cell)
        report.slopes[scheme] = _fit_cells(cfg, [c for c in report.cells if c.scheme == scheme])
    return report


# ---------------------------------------------------------------------------
# report output


def report_csv_lines(report: ConvergenceReport) -> list:
    lines = ["scheme,tau,steps,error_rel,l2_drift,status"]
    for c in report.cells:
        lines.append(
            f"{c.scheme},{c.tau!r},{c.steps},{c.error_rel!r},{c.l2_drift!r},{c.status}"
        )
    return lines


def write_report(report: ConvergenceReport, out_path: str) -> None:
    """CSV body plus a JSON sidecar (config echo, RNG id, fitted slopes)."""
    os.makedirs(os.path.dirname(out_path) or ".", exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as f:
        f.write("\n".join(report_csv_lines(report)) + "\n")
    sidecar = {
        "config": dataclasses.asdict(report.config),
        "rng_algorithm": report.rng_algorithm,
        "slopes": {
            s: None if v is None else {"slope": v[0], "intercept": v[1]}
            for s, v in report.slopes.items()
        },
    }
    with open(out_path + ".meta.json", "w", encoding="utf-8") as f:
        json.dump(sidecar, f, indent=2, sort_keys=True)
        f.write("\n")
