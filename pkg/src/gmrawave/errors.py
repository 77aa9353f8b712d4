"""Exception types raised by the library.

All of them derive from :class:`GmraError`.  The CLI maps
:class:`ConfigError` and its subclasses to exit code 2.
"""


class GmraError(Exception):
    """Base class for every library error."""


class ConfigError(GmraError):
    """Malformed or inconsistent input description."""


class InvalidInterval(ConfigError):
    """An interval with ``lo >= hi`` or endpoints outside the allowed range."""


class OverlappingPieces(ConfigError):
    """Two pieces of a piecewise function overlap."""


class NonExpansive(ConfigError):
    """The dilation matrix has an eigenvalue of modulus at most one."""


class SingularMatrix(ConfigError):
    """The dilation matrix has zero determinant."""


class EpsilonTooLarge(ConfigError):
    """The margin of the smooth low-pass filter is too large."""


class IndexOutOfRange(GmraError):
    """Index outside ``1..c``."""


class DepthOverflow(GmraError):
    """Iterated preimage enumeration would exceed the configured cap."""


class ConsistencyViolated(GmraError):
    """``m(w) > sum_l m(w_l)`` at some point; ``witness`` holds the point."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SupportViolation(GmraError):
    """A filter entry is nonzero off the set where it must vanish."""


class LowPassViolation(GmraError):
    """The low-pass matrix does not equal ``sqrt(N) E11`` at the origin."""


class LipschitzSuspect(GmraError):
    """Difference quotients at the origin grow beyond the threshold."""


class DimensionMismatch(GmraError):
    """Matrix or vector sizes disagree with the multiplicity data."""


class CompletionFailed(GmraError):
    """Gram-Schmidt could not produce the required number of rows."""


class NonConvergent(GmraError):
    """The cascade increment is still above tolerance at the final depth."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BoxTooSmall(GmraError):
    """A sampled function was queried outside its sampling box."""


class InitialConditionViolated(GmraError):
    """Filter values at the points ``zeta_l`` differ from the canonical ones."""
