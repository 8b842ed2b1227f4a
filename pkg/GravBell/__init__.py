from .arrays import (
    ArrayGeometry,
    ArrayKind,
    PathDelaySet,
    balance_geometry,
    classify_post_selection,
    path_proper_times,
    rotated_balanced_geometry,
)
from .chsh import CANONICAL, ChshResult, PhaseSettings, critical_area
from .config import GravBellConfig
from .quantum import DetectionProbabilities, PhasePair
from .spacetime import GravityModel
from .spectra import DeltaSpectrum, GaussianSpectrum, ProductSpectrum, TabulatedSpectrum

__all__ = [
    "GravityModel",
    "ArrayKind",
    "ArrayGeometry",
    "PathDelaySet",
    "path_proper_times",
    "balance_geometry",
    "rotated_balanced_geometry",
    "classify_post_selection",
    "GaussianSpectrum",
    "ProductSpectrum",
    "DeltaSpectrum",
    "TabulatedSpectrum",
    "PhasePair",
    "DetectionProbabilities",
    "PhaseSettings",
    "CANONICAL",
    "ChshResult",
    "critical_area",
    "GravBellConfig",
]
