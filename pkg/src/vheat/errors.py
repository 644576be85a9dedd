"""Exception types raised by the solver."""


class VheatError(Exception):
    """Base class for all package errors."""


class ParameterError(VheatError, ValueError):
    """A physical or numerical parameter is outside its valid domain."""


class RegimeError(VheatError):
    """An operation was called for a damping regime it does not support."""


class ZeroModeError(RegimeError):
    """The k = 0 mode has omega = 0 and needs its dedicated closed form."""


class DegenerateRatesError(VheatError):
    """The four exponential rates are too close for the 4x4 solve."""


class StepError(VheatError):
    """Finite-difference step too large for the solution's rates."""


class StabilityError(VheatError):
    """Explicit time step violates the CFL stability bound."""


class SymmetryError(VheatError):
    """Reconstructed field has a non-negligible imaginary part."""


class GridMismatchError(VheatError):
    """Two snapshots do not share the same spatial grid."""


class FrontDetectionError(VheatError):
    """No wavefront crossing found in a snapshot."""


class ConfigError(VheatError, ValueError):
    """Run configuration is malformed or inconsistent."""
