"""Fourier spectral core on the 2*pi torus.

Grid construction, forward/inverse transforms, per-mode scalar and 2x2
matrix multipliers (phase shifts, phi functions, free-Dirac matrix
functions, semi-implicit resolvents, the inverse Laplacian), Sobolev
norms and the zero-mean Poisson solve.

Conventions, fixed once for the whole package: N grid points
x_j = 2*pi*j/N, integer modes in standard FFT order
(0, 1, ..., N/2-1, -N/2, ..., -1), normalized coefficients
c_l = (1/N) * sum_j f(x_j) * exp(-i*l*x_j).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PHYSICAL = "physical"
SPECTRAL = "spectral"

# Series cutoff for phi1/phi2: below this the closed forms cancel badly.
_PHI_SERIES_RADIUS = 1e-4


@dataclass(frozen=True, eq=False)
class SpectralGrid:
    """Equispaced periodic grid together with its FFT mode indices."""

    n_modes: int
    points: np.ndarray = field(repr=False)
    modes: np.ndarray = field(repr=False)

    @classmethod
    def of_size(cls, n_modes: int) -> "SpectralGrid":
        if n_modes < 4 or n_modes % 2 != 0:
            raise ValueError(f"n_modes must be even and >= 4, got {n_modes}")
        j = np.arange(n_modes)
        points = 2.0 * np.pi * j / n_modes
        modes = np.concatenate(
            [np.arange(0, n_modes // 2), np.arange(-(n_modes // 2), 0)]
        )
        return cls(n_modes=n_modes, points=points, modes=modes)


@dataclass(eq=False)
class ComplexField:
    """One periodic complex function, stored either as grid samples or
    as normalized Fourier coefficients (see module docstring)."""

    grid: SpectralGrid
    values: np.ndarray
    space: str = PHYSICAL

    def in_physical(self) -> "ComplexField":
        if self.space == PHYSICAL:
            return self
        return ComplexField(self.grid, to_physical(self.values), PHYSICAL)

    def in_spectral(self) -> "ComplexField":
        if self.space == SPECTRAL:
            return self
        return ComplexField(self.grid, to_spectral(self.values), SPECTRAL)

    def copy(self) -> "ComplexField":
        return ComplexField(self.grid, self.values.copy(), self.space)


@dataclass(frozen=True, eq=False)
class ScalarMultiplier:
    """Diagonal operator in Fourier space: coefficient l gets factor
    ``factors[l]`` (FFT mode order)."""

    factors: np.ndarray


@dataclass(frozen=True, eq=False)
class MatrixMultiplier:
    """Per-mode 2x2 complex matrix acting on two-component coefficients."""

    m11: np.ndarray
    m12: np.ndarray
    m21: np.ndarray
    m22: np.ndarray


def to_spectral(values: np.ndarray) -> np.ndarray:
    """Samples -> normalized coefficients, along the last axis."""
    return np.fft.fft(values, axis=-1, norm="forward")


def to_physical(coeffs: np.ndarray) -> np.ndarray:
    """Normalized coefficients -> samples, along the last axis."""
    return np.fft.ifft(coeffs, axis=-1, norm="forward")


def forward_transform(field_: ComplexField) -> ComplexField:
    if field_.space != PHYSICAL:
        raise ValueError("forward_transform expects a physical-space field")
    return ComplexField(field_.grid, to_spectral(field_.values), SPECTRAL)


def inverse_transform(field_: ComplexField) -> ComplexField:
    if field_.space != SPECTRAL:
        raise ValueError("inverse_transform expects a spectral-space field")
    return ComplexField(field_.grid, to_physical(field_.values), PHYSICAL)


def apply_scalar_multiplier(mult: ScalarMultiplier, field_: ComplexField) -> ComplexField:
    """Multiply coefficient-wise; the result keeps the input representation."""
    if field_.space == SPECTRAL:
        return ComplexField(field_.grid, mult.factors * field_.values, SPECTRAL)
    out = to_physical(mult.factors * to_spectral(field_.values))
    return ComplexField(field_.grid, out, PHYSICAL)


def apply_multiplier_values(factors: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Array-level multiplier application on physical-space samples."""
    return to_physical(factors * to_spectral(values))


def apply_matrix_multiplier_coeffs(mult: MatrixMultiplier, coeffs: np.ndarray) -> np.ndarray:
    """Apply a per-mode 2x2 matrix to spinor coefficients of shape (2, N)."""
    return np.stack(
        [
            mult.m11 * coeffs[0] + mult.m12 * coeffs[1],
            mult.m21 * coeffs[0] + mult.m22 * coeffs[1],
        ]
    )


def phi1(z):
    """phi1(z) = (exp(z) - 1)/z with the removable singularity at 0."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < _PHI_SERIES_RADIUS
    out = np.empty_like(z)
    zs = z[small]
    out[small] = 1.0 + zs / 2.0 + zs * zs / 6.0 + zs * zs * zs / 24.0
    zb = z[~small]
    out[~small] = np.expm1(zb) / zb
    return out if out.ndim else complex(out)


def phi2(z):
    """phi2(z) = (exp(z) - z - 1)/z**2, value 1/2 at z = 0."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < _PHI_SERIES_RADIUS
    out = np.empty_like(z)
    zs = z[small]
    out[small] = 0.5 + zs / 6.0 + zs * zs / 24.0 + zs * zs * zs / 120.0
    zb = z[~small]
    out[~small] = (np.expm1(zb) - zb) / (zb * zb)
    return out if out.ndim else complex(out)


def translation_multiplier(grid: SpectralGrid, s: float) -> ScalarMultiplier:
    """Symbol of the shift f(x) -> f(x + s): factor exp(i*s*l)."""
    return ScalarMultiplier(np.exp(1j * s * grid.modes))


def phi1_shift_multiplier(grid: SpectralGrid, a: float) -> ScalarMultiplier:
    """Per-mode factor phi1(i*a*l); the zero mode gets 1."""
    return ScalarMultiplier(phi1(1j * a * grid.modes))


def inverse_laplacian(grid: SpectralGrid) -> ScalarMultiplier:
    """Natural inverse of d_xx: factor -1/l**2, zero mode annihilated."""
    l = grid.modes.astype(float)
    factors = np.zeros(grid.n_modes, dtype=complex)
    nz = l != 0
    factors[nz] = -1.0 / l[nz] ** 2
    return ScalarMultiplier(factors)


def free_dirac_matrix_function(grid: SpectralGrid, kind: str, tau: float) -> MatrixMultiplier:
    """f(-i*tau*T) for the free Dirac operator T = -i*alpha*d_x + beta.

    Per mode l the symbol is T_l = l*alpha + beta with eigenvalues
    +/- mu, mu = sqrt(1 + l**2); the matrix function is assembled from
    the analytic eigenprojections, exactly and in O(1) per mode.

    kind selects f: "exp" (e**z), "phi1" or "phi2".
    """
    if tau < 0:
        raise ValueError("tau must be >= 0")
    funcs = {"exp": np.exp, "phi1": phi1, "phi2": phi2}
    if kind not in funcs:
        raise ValueError(f"unknown kind {kind!r}, expected one of {sorted(funcs)}")
    f = funcs[kind]
    l = grid.modes.astype(float)
    mu = np.sqrt(1.0 + l * l)
    a = f(-1j * tau * mu)
    b = f(1j * tau * mu)
    half_sum = 0.5 * (a + b)
    half_diff = 0.5 * (a - b)
    return MatrixMultiplier(
        m11=half_sum + half_diff / mu,
        m12=half_diff * l / mu,
        m21=half_diff * l / mu,
        m22=half_sum - half_diff / mu,
    )


def fd_resolvent(grid: SpectralGrid, tau: float) -> MatrixMultiplier:
    """(I + tau*alpha*d_x)^(-1): per mode (I - i*tau*l*alpha)/(1 + tau**2*l**2)."""
    if tau <= 0:
        raise ValueError("tau must be > 0")
    l = grid.modes.astype(float)
    denom = 1.0 + (tau * l) ** 2
    diag = (1.0 / denom).astype(complex)
    off = -1j * tau * l / denom
    return MatrixMultiplier(m11=diag, m12=off, m21=off, m22=diag)


def sobolev_weights(grid: SpectralGrid, r: float) -> np.ndarray:
    l = grid.modes.astype(float)
    return (1.0 + l * l) ** r


def sobolev_norm(field_, r: float) -> float:
    """H^r norm from normalized coefficients, sqrt(sum (1+l^2)^r |c_l|^2).

    Accepts any field object carrying grid/values/space; a two-component
    field of shape (2, N) yields the root-sum-square of its components.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    coeffs = field_.values if field_.space == SPECTRAL else to_spectral(field_.values)
    w = sobolev_weights(field_.grid, r)
    return float(np.sqrt(np.sum(w * (coeffs.real**2 + coeffs.imag**2))))


def sobolev_norm_coeffs(coeffs: np.ndarray, grid: SpectralGrid, r: float) -> float:
    """H^r norm straight from coefficients of shape (N,) or (2, N)."""
    w = sobolev_weights(grid, r)
    return float(np.sqrt(np.sum(w * (coeffs.real**2 + coeffs.imag**2))))


def poisson_potential_values(density: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    """Zero-mean V with -d_xx V = density - mean(density); returns real samples."""
    rho_hat = to_spectral(density)
    l = grid.modes.astype(float)
    v_hat = np.zeros(grid.n_modes, dtype=complex)
    nz = l != 0
    v_hat[nz] = rho_hat[nz] / l[nz] ** 2
    return to_physical(v_hat).real


def poisson_potential(density: ComplexField) -> ComplexField:
    """Solve the zero-mean Poisson problem for a (numerically) real density."""
    d = density.in_physical()
    imag_max = float(np.max(np.abs(d.values.imag))) if np.iscomplexobj(d.values) else 0.0
    if imag_max > 1e-10:
        raise ValueError(f"density must be real valued, max |imag| = {imag_max:.3e}")
    v = poisson_potential_values(d.values.real, d.grid)
    return ComplexField(d.grid, v.astype(complex), PHYSICAL)


def dealias_mask(grid: SpectralGrid) -> np.ndarray:
    """Two-thirds rule mask: keep modes |l| <= N/3."""
    return (np.abs(grid.modes) <= grid.n_modes // 3).astype(float)
