"""Exception hierarchy. Every error is also a ``ValueError`` so callers can catch broadly."""


class LamarckError(ValueError):
    pass


class BoundsError(LamarckError):
    pass


class ShapeError(LamarckError):
    pass


class EncodingError(LamarckError):
    pass


class PreconditionError(LamarckError):
    pass


class DataError(LamarckError):
    pass


class FormatError(DataError):
    pass


class SplitError(DataError):
    pass


class SelectionError(LamarckError):
    pass


class ConfigError(LamarckError):
    pass


class ComparisonError(LamarckError):
    pass
