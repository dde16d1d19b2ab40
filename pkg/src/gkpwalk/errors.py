"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class GkpWalkError(ValueError):
    """Base class for all validation-type failures raised by the package."""


class InvalidParameterError(GkpWalkError):
    pass


class IncompatibleWidthError(GkpWalkError):
    """Two states with different vacuum variances were combined."""


class ZeroNormError(GkpWalkError):
    pass


class AsymmetricVacuumError(GkpWalkError):
    """Phase-space rotation requested on a state whose vacuum variance is not 1/2."""


class InvalidCoinError(GkpWalkError):
    pass


class InsufficientDataError(GkpWalkError):
    pass


class SchemaError(GkpWalkError):
    """A state or trace document does not match the expected file schema."""
