"""Low-regularity exponential-type integrators (ULI1, ULI2).

The one-step map is built on the variation-of-constants formula with the
transport propagator exp(-tau*alpha*d_x) rather than the full free-Dirac
flow. Because alpha*d_x diagonalizes into plain translations of u1+u2
and u1-u2, every term of the first Picard iterate integrates in closed
form: the mass term and the cubic term via phi1 multipliers at doubled
wavenumbers, the potential term by smoothing V itself (external case) or
through the inverse Laplacian of translated densities (self-consistent
case). No spatial derivative of the state is ever taken, which is what
preserves the convergence order on rough data.

The order-2 variant adds O(tau^2) corrections built from the
inhomogeneity G and the directional derivative of the nonlinear part;
this costs one derivative of smoothness but stays one below classical
order-2 schemes.
"""

from __future__ import annotations

import numpy as np

from . import model
from .classical import SchemeState, Stepper
from .model import ModelConfig, SpinorField
from .spectral import (
    ComplexField,
    apply_multiplier_values,
    inverse_laplacian,
    phi1,
    to_physical,
    to_spectral,
)


def _abs2(z):
    return z.real * z.real + z.imag * z.imag


class Uli1(Stepper):
    """First-order low-regularity step for either potential kind."""

    def __init__(self, cfg: ModelConfig, tau: float):
        super().__init__(cfg, tau)
        l = self.grid.modes
        self.p2p = phi1(2j * tau * l)  # phi1(2*tau*d_x)
        self.p2m = phi1(-2j * tau * l)
        self.e_minus_tau = np.exp(-1j * tau * l)  # exp(-tau*d_x) on u1+u2
        self.e_plus_tau = np.exp(1j * tau * l)
        self.invlap = inverse_laplacian(self.grid).factors
        if not cfg.is_poisson:
            v = cfg.potential.values
            # smoothed potentials are fixed per (V, tau); cache them
            self.w_plus = apply_multiplier_values(phi1(1j * tau * l), v.astype(complex))
            self.w_minus = apply_multiplier_values(phi1(-1j * tau * l), v.astype(complex))

    def _i1(self, fp, fm):
        a = to_physical(self.p2p * to_spectral(fm)) * 0.5
        b = to_physical(self.p2m * to_spectral(fp)) * 0.5
        return self.tau * np.stack([a + b, a - b])

    def _i2_external(self, fp, fm):
        sp = self.w_plus * fp
        sm = self.w_minus * fm
        return 0.5 * self.tau * np.stack([sp + sm, sp - sm])

    def _i2_poisson(self, fp, fm):
        rp_hat = to_spectral(_abs2(fp))
        rm_hat = to_spectral(_abs2(fm))
        s_plus = to_physical(self.invlap * (self.p2p * rm_hat + rp_hat))
        s_minus = to_physical(self.invlap * (self.p2m * rp_hat + rm_hat))
        sp = fp * s_plus
        sm = fm * s_minus
        return -0.25 * self.tau * np.stack([sp + sm, sp - sm])

    def _i3(self, fp, fm):
        t1 = fp.conj() * to_physical(self.p2p * to_spectral(fm * fm))
        t2 = fp * to_physical(self.p2p * to_spectral(_abs2(fm)))
        t3 = fm * to_physical(self.p2m * to_spectral(_abs2(fp)))
        t4 = fm.conj() * to_physical(self.p2m * to_spectral(fp * fp))
        even = t1 + t2
        odd = t3 + t4
        return 0.25 * self.tau * self.cfg.lam * np.stack([even + odd, even - odd])

    def integrals(self, vals: np.ndarray) -> np.ndarray:
        fp = vals[0] + vals[1]
        fm = vals[0] - vals[1]
        i2 = self._i2_poisson(fp, fm) if self.cfg.is_poisson else self._i2_external(fp, fm)
        return self._i1(fp, fm) + i2 + self._i3(fp, fm)

    def step(self, vals):
        u = vals - 1j * self.integrals(vals)
        return model.shift_apply(u, self.e_minus_tau, self.e_plus_tau)


class Uli2(Stepper):
    """Second-order variant: the order-1 map plus tau^2 corrections."""

    def __init__(self, cfg: ModelConfig, tau: float):
        super().__init__(cfg, tau)
        self.base = Uli1(cfg, tau)

    def step(self, vals):
        out = self.base.step(vals)
        v = model.potential_values(vals, self.cfg)
        g = model.g_values(vals, v, self.cfg.lam, self.cfg)
        lg = np.stack([g[0], -g[1]])  # beta*G
        if not self.cfg.is_poisson:
            lg = lg + v * g
        ng = model.gateaux_values(vals, g, self.cfg)
        return out - 0.5 * self.tau**2 * lg + 0.5j * self.tau**2 * ng


def uli1_integrals_ext(
    phi: SpinorField, tau: float, v: ComplexField, lam: float
) -> tuple[SpinorField, SpinorField, SpinorField]:
    """The three closed-form integrals of the order-1 map, external V."""
    p = phi.in_physical()
    cfg = ModelConfig(p.grid, lam, model.ExternalPotential(v.in_physical().values))
    st = Uli1(cfg, tau)
    fp = p.values[0] + p.values[1]
    fm = p.values[0] - p.values[1]

    def mk(a):
        return SpinorField(p.grid, a, model.PHYSICAL)

    return mk(st._i1(fp, fm)), mk(st._i2_external(fp, fm)), mk(st._i3(fp, fm))


def uli1_integral2_dp(phi: SpinorField, tau: float) -> SpinorField:
    """Potential integral of the order-1 map, self-consistent case."""
    p = phi.in_physical()
    cfg = ModelConfig(p.grid, 1.0, model.PoissonPotential())
    st = Uli1(cfg, tau)
    fp = p.values[0] + p.values[1]
    fm = p.values[0] - p.values[1]
    return SpinorField(p.grid, st._i2_poisson(fp, fm), model.PHYSICAL)


def _require(state: SchemeState, poisson: bool, what: str):
    if state.cfg.is_poisson != poisson:
        kind = "self-consistent" if poisson else "external"
        raise ValueError(f"{what} expects a {kind} potential configuration")


def step_uli1_ext(state: SchemeState) -> SchemeState:
    _require(state, False, "step_uli1_ext")
    return Uli1(state.cfg, state.tau).advance(state)


def step_uli1_dp(state: SchemeState) -> SchemeState:
    _require(state, True, "step_uli1_dp")
    return Uli1(state.cfg, state.tau).advance(state)


def step_uli2_ext(state: SchemeState) -> SchemeState:
    _require(state, False, "step_uli2_ext")
    return Uli2(state.cfg, state.tau).advance(state)


def step_uli2_dp(state: SchemeState) -> SchemeState:
    _require(state, True, "step_uli2_dp")
    return Uli2(state.cfg, state.tau).advance(state)
