"""Exception hierarchy shared by all modules."""


class LevyOptquantError(Exception):
    """Base class for errors raised by this package."""


class IllegalTriplet(LevyOptquantError, ValueError):
    """Stable parameters outside the strictly stable, non-monotone family."""


class UnsupportedModel(LevyOptquantError):
    """The requested computation is not available for this model."""


class GridMismatch(LevyOptquantError, ValueError):
    """Resolutions or horizons that do not line up with the observation grid."""


class MeanUndefined(LevyOptquantError):
    """An untruncated conditional mean was requested where it is not finite."""


class DegeneratePath(LevyOptquantError, ValueError):
    """A path carries no information (for example all increments are zero)."""


class DegenerateEstimate(LevyOptquantError):
    """A moment-ratio estimator fell outside its domain of definition."""


class TooFewSamples(LevyOptquantError, ValueError):
    """Not enough samples for a summary statistic."""
