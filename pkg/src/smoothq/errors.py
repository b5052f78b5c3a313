"""Exception hierarchy shared by every module of the package."""


class SmoothQError(ValueError):
    """Base class for data and numerical errors raised by smoothq."""


class UnsupportedOperation(SmoothQError):
    """The operation is not defined for this kind of distribution model."""


class OutOfRangeError(SmoothQError):
    """A parameter or derived quantity left its admissible range."""


class NoRootError(SmoothQError):
    """Bracket expansion failed to find a sign change."""


class EmptySampleError(SmoothQError):
    pass


class DegenerateSampleError(SmoothQError):
    pass


class DataError(SmoothQError):
    """Malformed or unusable input data (CSV ingestion, configs)."""


class InsufficientDataError(DataError):
    pass
