"""Spectral solvers for the 1D nonlinear Dirac equation on the torus.

Subpackages: :mod:`nlde.spectral` (grids, transforms, multipliers, norms),
:mod:`nlde.model` (spinor algebra and model terms), :mod:`nlde.classical`
(six baseline time steppers), :mod:`nlde.uli` (low-regularity integrators),
:mod:`nlde.roughdata` (seeded rough initial data), :mod:`nlde.harness`
(trajectories, reference cache, convergence studies) and :mod:`nlde.cli`.
"""

from .classical import BlowUpError, SchemeId, SchemeState
from .harness import StudyConfig, evolve, fit_order, run_convergence_study
from .model import ModelConfig, SpinorField
from .roughdata import RoughDataSpec, generate_rough_spinor
from .spectral import ComplexField, SpectralGrid, sobolev_norm

__version__ = "0.1.0"

__all__ = [
    "BlowUpError",
    "ComplexField",
    "ModelConfig",
    "RoughDataSpec",
    "SchemeId",
    "SchemeState",
    "SpectralGrid",
    "SpinorField",
    "StudyConfig",
    "evolve",
    "fit_order",
    "generate_rough_spinor",
    "run_convergence_study",
    "sobolev_norm",
    "__version__",
]
