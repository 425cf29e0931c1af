"""Exception types raised by the framelet construction routines."""


class FrameletError(ValueError):
    """Base class for all construction and verification errors."""


class InadmissibleLowpassError(FrameletError):
    """Low-pass mask is not positive, does not sum to one, or fails H0(q) = delta."""


class NotParsevalError(FrameletError):
    """A stacked coefficient matrix does not have orthonormal columns."""


class InfeasibleDesignError(FrameletError):
    """Designed rows violate the spectral constraint or orthogonality to c."""


class RankDeficientError(FrameletError):
    """The truncated family is not a frame (smallest singular value is zero)."""


class DirectionError(FrameletError):
    """Direction vector produces tied dot products on the offset grid.

    ``pair`` holds the first clashing pair of offsets, when known.
    """

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class DesignError(FrameletError):
    """Malformed design request (bad filter sums, support outside the grid, ...)."""
