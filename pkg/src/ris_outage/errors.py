"""Exception taxonomy shared by all modules."""


class RisOutageError(Exception):
    """Base class for every error raised by this package."""


class DomainError(RisOutageError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class PoleError(DomainError):
    """The gamma function was evaluated at a non-positive integer."""


class NoConvergence(RisOutageError, RuntimeError):
    """A series or quadrature failed to reach its accuracy target."""


class OverflowGuard(RisOutageError, OverflowError):
    """A parameter would push factorial/gamma growth past float range."""


class MomentMatchFailure(RisOutageError):
    """The matched moments admit no valid generalized-K surrogate."""


class FloorUndefined(RisOutageError):
    """The closed-form outage floor is invalid (gamma argument <= 0)."""


class DegenerateJitter(RisOutageError):
    """Position/orientation jitter is zero; the misalignment shape
    exponent is undefined and the aligned analysis path must be used."""


class DegenerateParameters(RisOutageError):
    """The high-SNR expansion is undefined for these shape parameters."""


class ConfigError(RisOutageError, ValueError):
    """Invalid simulation or scenario configuration."""
