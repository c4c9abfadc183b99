"""Spinor-level model pieces for the 1D nonlinear Dirac equation on the torus.

Equation: i u_t = -i*alpha*u_x + beta*u + V*u + F(u) for a two-component
complex field u = (u1, u2), with the cubic term
F(u) = lam*(|u1|^2 - |u2|^2)*beta*u and an electric potential V that is
either a fixed external function or the zero-mean solution of
-V_xx = |u1|^2 + |u2|^2 (self-consistent coupling).

Everything here is a pure function; pointwise products are formed on the
N-point grid (pseudospectral, no dealiasing unless the config asks for
the 2/3 rule).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import (
    PHYSICAL,
    SPECTRAL,
    ComplexField,
    SpectralGrid,
    dealias_mask,
    inverse_laplacian,
    poisson_potential_values,
    to_physical,
    to_spectral,
)

ALPHA = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
BETA = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(eq=False)
class SpinorField:
    """Two-component periodic complex field, values of shape (2, N)."""

    grid: SpectralGrid
    values: np.ndarray
    space: str = PHYSICAL

    @property
    def phi1(self) -> ComplexField:
        return ComplexField(self.grid, self.values[0], self.space)

    @property
    def phi2(self) -> ComplexField:
        return ComplexField(self.grid, self.values[1], self.space)

    def in_physical(self) -> "SpinorField":
        if self.space == PHYSICAL:
            return self
        return type(self)(self.grid, to_physical(self.values), PHYSICAL)

    def in_spectral(self) -> "SpinorField":
        if self.space == SPECTRAL:
            return self
        return type(self)(self.grid, to_spectral(self.values), SPECTRAL)

    def copy(self) -> "SpinorField":
        return type(self)(self.grid, self.values.copy(), self.space)


class GField(SpinorField):
    """Inhomogeneity G = beta*u + V*u + F(u), spinor shaped."""


@dataclass(frozen=True, eq=False)
class ExternalPotential:
    """Fixed real-valued potential sampled on the grid."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if np.iscomplexobj(v) and np.max(np.abs(v.imag)) > 1e-10:
            raise ValueError("external potential must be real valued")
        object.__setattr__(self, "values", v.real.astype(float))


@dataclass(frozen=True)
class PoissonPotential:
    """Marker: V solves -V_xx = |u|^2 with zero mean, recomputed from the state."""


@dataclass(frozen=True, eq=False)
class ModelConfig:
    grid: SpectralGrid
    lam: float
    potential: ExternalPotential | PoissonPotential
    dealias: bool = False

    @property
    def is_poisson(self) -> bool:
        return isinstance(self.potential, PoissonPotential)


def _abs2(z: np.ndarray) -> np.ndarray:
    return z.real * z.real + z.imag * z.imag


def _dealias(values: np.ndarray, cfg: ModelConfig) -> np.ndarray:
    if not cfg.dealias:
        return values
    return to_physical(dealias_mask(cfg.grid) * to_spectral(values))


def thirring_values(vals: np.ndarray, lam: float) -> np.ndarray:
    g = _abs2(vals[0]) - _abs2(vals[1])
    return np.stack([lam * g * vals[0], -lam * g * vals[1]])


def thirring_nonlinearity(phi: SpinorField, lam: float) -> SpinorField:
    """Cubic term lam*(|u1|^2 - |u2|^2)*beta*u, pointwise on the grid."""
    p = phi.in_physical()
    return SpinorField(p.grid, thirring_values(p.values, lam), PHYSICAL)


def plus_minus(phi: SpinorField) -> tuple[ComplexField, ComplexField]:
    """(u1 + u2, u1 - u2), the eigencomponents of alpha."""
    p = phi.in_physical()
    return (
        ComplexField(p.grid, p.values[0] + p.values[1], PHYSICAL),
        ComplexField(p.grid, p.values[0] - p.values[1], PHYSICAL),
    )


def project(phi: SpinorField, sign: int) -> SpinorField:
    """Apply the constant projector P(+/-) = [[1, s], [s, 1]]/2, s = sign."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    half = 0.5 * (phi.values[0] + sign * phi.values[1])
    return SpinorField(phi.grid, np.stack([half, sign * half]), phi.space)


def shift_values(vals: np.ndarray, s: float, grid: SpectralGrid) -> np.ndarray:
    """exp(s*alpha*d_x) on physical samples: u1+u2 translates by +s,
    u1-u2 by -s."""
    ep = np.exp(1j * s * grid.modes)
    return shift_apply(vals, ep, ep.conj())


def shift_apply(vals: np.ndarray, e_plus: np.ndarray, e_minus: np.ndarray) -> np.ndarray:
    """Same as shift_values with the two phase tables precomputed."""
    up = to_physical(e_plus * to_spectral(vals[0] + vals[1]))
    um = to_physical(e_minus * to_spectral(vals[0] - vals[1]))
    return np.stack([0.5 * (up + um), 0.5 * (up - um)])


def shift_propagator(phi: SpinorField, s: float) -> SpinorField:
    """The isometric propagator exp(s*alpha*d_x); s -> -s inverts it."""
    p = phi.in_physical()
    return SpinorField(p.grid, shift_values(p.values, s, p.grid), PHYSICAL)


def density(phi: SpinorField) -> ComplexField:
    """|u1|^2 + |u2|^2 as a real-valued physical field."""
    p = phi.in_physical()
    rho = _abs2(p.values[0]) + _abs2(p.values[1])
    return ComplexField(p.grid, rho.astype(complex), PHYSICAL)


def potential_values(vals: np.ndarray, cfg: ModelConfig) -> np.ndarray:
    """Real potential samples for the current physical state."""
    if cfg.is_poisson:
        rho = _abs2(vals[0]) + _abs2(vals[1])
        rho = _dealias(rho, cfg).real if cfg.dealias else rho
        return poisson_potential_values(rho, cfg.grid)
    return cfg.potential.values


def potential_field(phi: SpinorField, cfg: ModelConfig) -> ComplexField:
    p = phi.in_physical()
    v = potential_values(p.values, cfg)
    return ComplexField(p.grid, v.astype(complex), PHYSICAL)


def g_values(vals: np.ndarray, v: np.ndarray, lam: float, cfg: ModelConfig | None = None) -> np.ndarray:
    """beta*u + V*u + F(u) on physical samples, given potential samples v."""
    f = thirring_values(vals, lam)
    if cfg is not None and cfg.dealias:
        f = _dealias(f, cfg)
        vu = _dealias(np.stack([v * vals[0], v * vals[1]]), cfg)
    else:
        vu = np.stack([v * vals[0], v * vals[1]])
    return np.stack([vals[0] + vu[0] + f[0], -vals[1] + vu[1] + f[1]])


def g_field(phi: SpinorField, cfg: ModelConfig) -> GField:
    p = phi.in_physical()
    v = potential_values(p.values, cfg)
    return GField(p.grid, g_values(p.values, v, cfg.lam, cfg), PHYSICAL)


def gateaux_values(vals: np.ndarray, gvals: np.ndarray, cfg: ModelConfig) -> np.ndarray:
    """Directional derivative of the nonlinear part at u in direction i*G.

    External potential: the nonlinear part is F alone. Self-consistent
    case: it also carries the coupling -(d_xx^-1 |u|^2)*u, contributing
    the two extra nonlocal terms below.
    """
    u1, u2 = vals
    g1, g2 = gvals
    gd = _abs2(u1) - _abs2(u2)
    im_plus = (u1 * g1.conj() + u2.conj() * g2).imag
    lam = cfg.lam
    out0 = 1j * lam * gd * g1 + 2.0 * lam * im_plus * u1
    out1 = -1j * lam * gd * g2 - 2.0 * lam * im_plus * u2
    if cfg.is_poisson:
        rho = _abs2(u1) + _abs2(u2)
        w = -poisson_potential_values(rho, cfg.grid)  # d_xx^-1 rho
        im_minus = (u1 * g1.conj() - u2.conj() * g2).imag
        invlap = inverse_laplacian(cfg.grid).factors
        p = to_physical(invlap * to_spectral(im_minus.astype(complex))).real
        out0 = out0 - 1j * w * g1 - 2.0 * p * u1
        out1 = out1 - 1j * w * g2 - 2.0 * p * u2
    out = np.stack([out0, out1])
    return _dealias(out, cfg) if cfg.dealias else out


def gateaux_term(phi: SpinorField, g: GField, cfg: ModelConfig) -> SpinorField:
    p = phi.in_physical()
    gv = g.in_physical()
    return SpinorField(p.grid, gateaux_values(p.values, gv.values, cfg), PHYSICAL)


def potential_phase_values(vals: np.ndarray, t: float, v: np.ndarray, lam: float) -> np.ndarray:
    """Exact diagonal flow of i u_t = V*u + F(u) over time t.

    The pointwise moduli are invariant, so freezing V and the density
    difference at entry integrates this subproblem exactly.
    """
    g = _abs2(vals[0]) - _abs2(vals[1])
    return np.stack(
        [
            np.exp(-1j * t * (v + lam * g)) * vals[0],
            np.exp(-1j * t * (v - lam * g)) * vals[1],
        ]
    )


def potential_phase_flow(phi: SpinorField, t: float, cfg: ModelConfig) -> SpinorField:
    p = phi.in_physical()
    v = potential_values(p.values, cfg)
    return SpinorField(p.grid, potential_phase_values(p.values, t, v, cfg.lam), PHYSICAL)


def external_sine_potential(grid: SpectralGrid, amplitude: float = 2.0) -> ExternalPotential:
    """The stock external potential amplitude*sin(x)."""
    return ExternalPotential(amplitude * np.sin(grid.points))
