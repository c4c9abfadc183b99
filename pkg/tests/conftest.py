import os

import numpy as np
import pytest

from nlde.model import SpinorField
from nlde.spectral import PHYSICAL, SpectralGrid, to_physical

# Reference solutions are cached across test sessions; first run pays the
# full cost, later runs load from disk after a bit-exact metadata check.
REF_CACHE = os.path.join(os.path.dirname(__file__), "_refcache")


@pytest.fixture(scope="session")
def ref_cache_dir():
    os.makedirs(REF_CACHE, exist_ok=True)
    return REF_CACHE


def random_spinor(grid: SpectralGrid, seed: int, scale: float = 1.0) -> SpinorField:
    rng = np.random.default_rng(seed)
    vals = scale * (
        rng.normal(size=(2, grid.n_modes)) + 1j * rng.normal(size=(2, grid.n_modes))
    )
    return SpinorField(grid, vals, PHYSICAL)


def band_limited_spinor(grid: SpectralGrid, seed: int, band: int | None = None) -> SpinorField:
    """Spinor supported on modes |l| <= band (default N/6), so pointwise
    products of up to three factors stay alias-free on the grid."""
    band = grid.n_modes // 6 if band is None else band
    rng = np.random.default_rng(seed)
    coeffs = np.zeros((2, grid.n_modes), dtype=complex)
    for c in range(2):
        for l in range(-band, band + 1):
            coeffs[c, l % grid.n_modes] = rng.normal() + 1j * rng.normal()
    return SpinorField(grid, to_physical(coeffs), PHYSICAL)


def random_complex_values(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.normal(size=n) + 1j * rng.normal(size=n)
