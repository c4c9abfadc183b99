"""Baseline one-step and two-step time integrators.

Six classical schemes: semi-implicit finite differences of order one and
two (FD1, FD2), Gautschi-type exponential integrators (EI1, EI2), and
Lie/Strang splitting with exact sub-flows. All of them lose accuracy on
rough data; they are the comparison set for the low-regularity schemes
in :mod:`nlde.uli`.

Each scheme is a class precomputing its per-mode tables once for a given
(grid, tau, config); ``step`` maps physical samples (2, N) -> (2, N),
``advance`` maps SchemeState -> SchemeState, and ``run`` iterates with
blow-up detection.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import model
from .model import GField, ModelConfig, SpinorField
from .spectral import fd_resolvent, free_dirac_matrix_function, to_physical, to_spectral


class SchemeId(str, enum.Enum):
    FD1 = "FD1"
    FD2 = "FD2"
    EI1 = "EI1"
    EI2 = "EI2"
    LIE = "LIE"
    STRANG = "STRANG"
    ULI1 = "ULI1"
    ULI2 = "ULI2"


@dataclass
class SchemeState:
    """Current spinor plus whatever history the scheme carries."""

    current: SpinorField
    tau: float
    cfg: ModelConfig
    step_index: int = 0
    previous: Optional[SpinorField] = None
    previous_g: Optional[GField] = None


class BlowUpError(RuntimeError):
    """Trajectory produced non-finite values."""

    def __init__(self, step_index: int):
        super().__init__(f"non-finite state at step {step_index}")
        self.step_index = step_index


class Stepper:
    """Base: one-level scheme defined by ``step`` on physical samples."""

    def __init__(self, cfg: ModelConfig, tau: float):
        if tau < 0:
            raise ValueError("tau must be >= 0")
        self.cfg = cfg
        self.tau = tau
        self.grid = cfg.grid

    def step(self, vals: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def advance(self, state: SchemeState) -> SchemeState:
        cur = state.current.in_physical()
        out = SpinorField(self.grid, self.step(cur.values), model.PHYSICAL)
        return replace(state, current=out, previous=cur, step_index=state.step_index + 1)

    def run(self, vals: np.ndarray, n_steps: int) -> np.ndarray:
        for k in range(n_steps):
            vals = self.step(vals)
            if not np.isfinite(vals).all():
                raise BlowUpError(k + 1)
        return vals

    def _potential(self, vals: np.ndarray) -> np.ndarray:
        return model.potential_values(vals, self.cfg)


class Fd1(Stepper):
    """Semi-implicit order-1 finite differences: the transport part is
    implicit (resolvent applied per mode), the rest explicit."""

    def __init__(self, cfg, tau):
        super().__init__(cfg, tau)
        self.resolvent = _mat_tuple(fd_resolvent(self.grid, tau))

    def step(self, vals):
        v = self._potential(vals)
        g = model.g_values(vals, v, self.cfg.lam, self.cfg)
        rhs = to_spectral(vals - 1j * self.tau * g)
        return to_physical(_mat_apply(self.resolvent, rhs))


class Fd2(Stepper):
    """Semi-implicit leapfrog; the first level comes from a Taylor step."""

    def __init__(self, cfg, tau):
        super().__init__(cfg, tau)
        l = self.grid.modes.astype(float)
        denom = 1.0 + (tau * l) ** 2
        # (I + i*tau*l*alpha)^-1 and (I - i*tau*l*alpha) per mode
        self.inv = ((1.0 / denom).astype(complex), -1j * tau * l / denom,
                    -1j * tau * l / denom, (1.0 / denom).astype(complex))
        self.fwd = (np.ones_like(l, dtype=complex), -1j * tau * l,
                    -1j * tau * l, np.ones_like(l, dtype=complex))
        self.l = l

    def startup(self, vals):
        v = self._potential(vals)
        g = model.g_values(vals, v, self.cfg.lam, self.cfg)
        hat = to_spectral(vals)
        # -i*alpha*d_x u has coefficients l*alpha*u_hat
        transport = to_physical(np.stack([self.l * hat[1], self.l * hat[0]]))
        return vals - 1j * self.tau * (transport + g)

    def leap(self, cur, prev):
        v = self._potential(cur)
        g_hat = to_spectral(model.g_values(cur, v, self.cfg.lam, self.cfg))
        rhs = _mat_apply(self.fwd, to_spectral(prev)) - 2j * self.tau * g_hat
        return to_physical(_mat_apply(self.inv, rhs))

    def advance(self, state):
        cur = state.current.in_physical()
        if state.step_index == 0:
            out = self.startup(cur.values)
        else:
            if state.previous is None:
                raise ValueError("FD2 needs the previous level for step_index >= 1")
            out = self.leap(cur.values, state.previous.in_physical().values)
        return replace(
            state,
            current=SpinorField(self.grid, out, model.PHYSICAL),
            previous=cur,
            step_index=state.step_index + 1,
        )

    def run(self, vals, n_steps):
        if n_steps == 0:
            return vals
        prev, cur = vals, self.startup(vals)
        if not np.isfinite(cur).all():
            raise BlowUpError(1)
        for k in range(1, n_steps):
            prev, cur = cur, self.leap(cur, prev)
            if not np.isfinite(cur).all():
                raise BlowUpError(k + 1)
        return cur


def _ei_g_values(vals, v, lam, cfg):
    # exponential integrators keep beta inside the linear flow
    f = model.thirring_values(vals, lam)
    out = np.stack([v * vals[0] + f[0], v * vals[1] + f[1]])
    return model._dealias(out, cfg) if cfg.dealias else out


class Ei1(Stepper):
    """Gautschi-type order-1 exponential integrator."""

    def __init__(self, cfg, tau):
        super().__init__(cfg, tau)
        self.exp = _mat_tuple(free_dirac_matrix_function(self.grid, "exp", tau))
        self.p1 = _mat_tuple(free_dirac_matrix_function(self.grid, "phi1", tau))

    def g_hat(self, vals):
        v = self._potential(vals)
        return to_spectral(_ei_g_values(vals, v, self.cfg.lam, self.cfg))

    def step(self, vals):
        hat = to_spectral(vals)
        out = _mat_apply(self.exp, hat) - 1j * self.tau * _mat_apply(self.p1, self.g_hat(vals))
        return to_physical(out)


class Ei2(Ei1):
    """Order-2 exponential integrator with two-level extrapolation of G;
    the first step falls back to the order-1 variant."""

    def __init__(self, cfg, tau):
        super().__init__(cfg, tau)
        self.p2 = _mat_tuple(free_dirac_matrix_function(self.grid, "phi2", tau))

    def step_two_level(self, vals, g_hat_prev):
        g_hat = self.g_hat(vals)
        hat = to_spectral(vals)
        out = (
            _mat_apply(self.exp, hat)
            - 1j * self.tau * _mat_apply(self.p1, g_hat)
            - 1j * self.tau * _mat_apply(self.p2, g_hat - g_hat_prev)
        )
        return to_physical(out), g_hat

    def advance(self, state):
        cur = state.current.in_physical()
        if state.step_index == 0:
            out = Ei1.step(self, cur.values)
            g_prev = to_physical(self.g_hat(cur.values))
        else:
            if state.previous_g is None:
                raise ValueError("EI2 needs the previous G for step_index >= 1")
            g_hat_prev = to_spectral(state.previous_g.in_physical().values)
            out, g_hat = self.step_two_level(cur.values, g_hat_prev)
            g_prev = to_physical(g_hat)
        return replace(
            state,
            current=SpinorField(self.grid, out, model.PHYSICAL),
            previous=cur,
            previous_g=GField(self.grid, g_prev, model.PHYSICAL),
            step_index=state.step_index + 1,
        )

    def run(self, vals, n_steps):
        if n_steps == 0:
            return vals
        g_hat_prev = self.g_hat(vals)
        vals = Ei1.step(self, vals)
        if not np.isfinite(vals).all():
            raise BlowUpError(1)
        for k in range(1, n_steps):
            vals, g_hat_prev = self.step_two_level(vals, g_hat_prev)
            if not np.isfinite(vals).all():
                raise BlowUpError(k + 1)
        return vals


class Lie(Stepper):
    """Lie splitting: exact potential flow, then exact free flow."""

    def __init__(self, cfg, tau):
        super().__init__(cfg, tau)
        self.exp = _mat_tuple(free_dirac_matrix_function(self.grid, "exp", tau))

    def step(self, vals):
        v = self._potential(vals)
        mid = model.potential_phase_values(vals, self.tau, v, self.cfg.lam)
        return to_physical(_mat_apply(self.exp, to_spectral(mid)))


class Strang(Stepper):
    """Strang splitting: half potential flow, free flow, half potential
    flow with densities (and the self-consistent V) taken at its entry."""

    def __init__(self, cfg, tau):
        super().__init__(cfg, tau)
        self.exp = _mat_tuple(free_dirac_matrix_function(self.grid, "exp", tau))

    def step(self, vals):
        half = 0.5 * self.tau
        v = self._potential(vals)
        mid = model.potential_phase_values(vals, half, v, self.cfg.lam)
        mid = to_physical(_mat_apply(self.exp, to_spectral(mid)))
        v = self._potential(mid)
        return model.potential_phase_values(mid, half, v, self.cfg.lam)


def _mat_tuple(m):
    return (m.m11, m.m12, m.m21, m.m22)


def _mat_apply(m, hat):
    return np.stack([m[0] * hat[0] + m[1] * hat[1], m[2] * hat[0] + m[3] * hat[1]])


def step_fd1(state: SchemeState) -> SchemeState:
    return Fd1(state.cfg, state.tau).advance(state)


def step_fd2(state: SchemeState) -> SchemeState:
    return Fd2(state.cfg, state.tau).advance(state)


def step_ei1(state: SchemeState) -> SchemeState:
    return Ei1(state.cfg, state.tau).advance(state)


def step_ei2(state: SchemeState) -> SchemeState:
    return Ei2(state.cfg, state.tau).advance(state)


def step_lie(state: SchemeState) -> SchemeState:
    return Lie(state.cfg, state.tau).advance(state)


def step_strang(state: SchemeState) -> SchemeState:
    return Strang(state.cfg, state.tau).advance(state)
