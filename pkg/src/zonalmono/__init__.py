"""Zonal harmonic and near-zonal monogenic bases on the 2-sphere."""
from __future__ import annotations

from .clifford3 import EvenElement, Multivector3, Quaternion
from .estimators import NearZonalMonogenicEstimator, ZonalHarmonicEstimator
from .harmonics import ZonalHarmonicBasis, zonal_harmonic_basis
from .monogenics import MonogenicBasis, kernel_K
from .near_zonal import NearZonalBasis, build, zonality_deviation
from .qlinalg import SingularGramError
from .sphere_opt import Ensemble, OptimizerConfig, optimize

__version__ = "0.1.0"

__all__ = [
    "Ensemble",
    "EvenElement",
    "MonogenicBasis",
    "Multivector3",
    "NearZonalBasis",
    "NearZonalMonogenicEstimator",
    "OptimizerConfig",
    "Quaternion",
    "SingularGramError",
    "ZonalHarmonicBasis",
    "ZonalHarmonicEstimator",
    "build",
    "kernel_K",
    "optimize",
    "zonal_harmonic_basis",
    "zonality_deviation",
]
