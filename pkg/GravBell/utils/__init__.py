from .exception import (
    BandwidthExceedsCarrier,
    GravBellError,
    GridTooCoarse,
    IndistinguishabilityViolated,
    InvalidSpectrum,
    NegativeExtent,
    NonpositiveWavelength,
    NumericalFailure,
    QuadratureNotConverged,
    UnknownFigure,
    UnsupportedKind,
    WeakFieldViolation,
    ZeroGravity,
)
from .testing import disable_logging_library

__all__ = [
    "GravBellError",
    "NumericalFailure",
    "WeakFieldViolation",
    "NegativeExtent",
    "UnsupportedKind",
    "BandwidthExceedsCarrier",
    "NonpositiveWavelength",
    "InvalidSpectrum",
    "QuadratureNotConverged",
    "IndistinguishabilityViolated",
    "GridTooCoarse",
    "ZeroGravity",
    "UnknownFigure",
    "disable_logging_library",
]
