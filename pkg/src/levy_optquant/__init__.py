"""Conditional mean and median estimation of the supremum, local time and
occupation time of Levy processes from equidistant observations."""

__version__ = "0.1.0"

from .errors import (
    DegenerateEstimate,
    DegeneratePath,
    GridMismatch,
    IllegalTriplet,
    LevyOptquantError,
    MeanUndefined,
    TooFewSamples,
    UnsupportedModel,
)
from .models import BrownianMotion, StableModel, expected_V, model_from_dict
from .stable_law import StableParams, params_from_skew, params_from_triplet

__all__ = [
    "__version__",
    "BrownianMotion",
    "StableModel",
    "StableParams",
    "expected_V",
    "model_from_dict",
    "params_from_skew",
    "params_from_triplet",
    "DegenerateEstimate",
    "DegeneratePath",
    "GridMismatch",
    "IllegalTriplet",
    "LevyOptquantError",
    "MeanUndefined",
    "TooFewSamples",
    "UnsupportedModel",
]
