"""Exception hierarchy shared across the package.

Three failure categories matter to callers (the CLI maps each to its own
exit code): bad input data or parameters (:class:`InputError`), the
numeric guard on non-positive map maxima (:class:`NonPositiveMaxError`),
and plain I/O failures, which are left as ``OSError``.
"""


class DivcamError(Exception):
    """Base class for all errors raised by this package."""


class InputError(DivcamError):
    """Invalid input data or parameters (malformed files, bad shapes,
    out-of-range options)."""


class NpyFormatError(InputError):
    """Tensor file does not conform to the interchange format."""


class UnsupportedDtypeError(NpyFormatError):
    """Tensor file declares a dtype other than little-endian float32."""


class NonFiniteValueError(InputError):
    """A tensor contains NaN or infinite values."""


class ShapeError(InputError):
    """Array rank or extents violate an operation's contract."""


class ParameterError(InputError):
    """A scalar parameter (alpha, opacity, level, ...) is out of range."""


class ImageFormatError(InputError):
    """Image file exists but cannot be decoded."""


class NonPositiveMaxError(DivcamError):
    """A map that must be max-normalized has maximum <= 0.

    Carries the offending maximum and a label for the map's source so the
    CLI can point at the expert that produced no positive activation.
    """

    def __init__(self, maximum: float, source: str = ""):
        self.maximum = float(maximum)
        self.source = source
        where = f" ({source})" if source else ""
        super().__init__(
            f"map maximum is {self.maximum!r}{where}; max-normalization requires a positive maximum"
        )


class PipelineError(DivcamError):
    """Wraps an error from one pipeline stage with the stage's name."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {cause}")
