"""Exact and numeric checks of discrete Hardy and Rellich type inequalities on Z."""

from .exact import ComplexPiValue, GaussianRational, PiValue
from .inequalities import InequalityId, check, random_suite, sharpness_sweep
from .lattice import FinSeq, form
from .spectral import assemble, min_eig, sweep
from .trigpoly import HalfFreqPoly

__version__ = "0.1.0"

__all__ = [
    "ComplexPiValue",
    "FinSeq",
    "GaussianRational",
    "HalfFreqPoly",
    "InequalityId",
    "PiValue",
    "assemble",
    "check",
    "form",
    "min_eig",
    "random_suite",
    "sharpness_sweep",
    "sweep",
]
