"""Amplified directed divergence kernel for pairs of activation maps.

Given two equally shaped maps ``x`` (class of interest) and ``x'`` (the
competing class), the kernel amplifies the cells where ``x`` is more
confident than ``x'`` after each map is scaled by its own maximum:

    K(x, x')[i, j] = exp(alpha * (x[i,j]/max(x) - x'[i,j]/max(x')))

The measure is directed: K(x, x') != K(x', x). Cells where the competing
map dominates come out exponentially close to zero rather than negative,
which is what makes the result directly displayable as a heat map. The
amplification ``alpha`` trades off sharpness against coverage; raising it
concentrates the surviving region around the largest directed
differences.

Evaluation is overflow-safe: the exponent ``alpha * (x/max(x) -
x'/max(x'))`` is always computed and kept (``log_values``), and the
display map is derived as ``exp(log - max(log))``, which equals
``K / max(K)`` in exact arithmetic but never leaves the representable
range. The plain kernel values are computed in float64 and reported only
when every cell is finite and positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cam import Cam
from .errors import NonPositiveMaxError, ParameterError, ShapeError

DEFAULT_ALPHA = 5.0


@dataclass(frozen=True)
class AddkResult:
    """Outcome of one kernel evaluation.

    ``log_values``
        float64 map of ``alpha * (x/max(x) - x'/max(x'))``.
    ``normalized``
        float64 map ``exp(log_values - max(log_values))``; values lie in
        [0, 1] with maximum exactly 1.0. This is the display surface.
    ``alpha``
        the amplification used.
    ``raw``
        float64 map of ``exp(log_values)``, or ``None`` when any cell
        would overflow or underflow out of the positive float64 range.
    """

    log_values: np.ndarray
    normalized: np.ndarray
    alpha: float
    raw: np.ndarray | None = None


def _as_map64(operand, label: str) -> tuple[np.ndarray, str]:
    if isinstance(operand, Cam):
        return operand.map.astype(np.float64), operand.model_id or label
    data = np.asarray(operand, dtype=np.float64)
    if data.ndim != 2:
        raise ShapeError(f"{label}: expected a rank-2 map, got shape {data.shape}")
    return data, label


def addk(x, x_prime, alpha: float = DEFAULT_ALPHA) -> AddkResult:
    """Evaluate the kernel on maps ``x`` and ``x_prime``.

    Both operands may be :class:`Cam` instances or bare 2-d arrays of
    identical shape, each with a positive maximum. ``x`` is the class of
    interest: the result highlights where ``x`` exceeds ``x_prime``, not
    the other way around.
    """
    if alpha is None or not alpha > 0:
        raise ParameterError(f"alpha must be > 0, got {alpha!r}")
    left, left_label = _as_map64(x, "left operand")
    right, right_label = _as_map64(x_prime, "right operand")
    if left.shape != right.shape:
        raise ShapeError(f"map shapes differ: {left.shape} vs {right.shape}")

    peak_left = left.max()
    if peak_left <= 0.0:
        raise NonPositiveMaxError(peak_left, source=left_label)
    peak_right = right.max()
    if peak_right <= 0.0:
        raise NonPositiveMaxError(peak_right, source=right_label)

    log_values = float(alpha) * (left / peak_left - right / peak_right)
    with np.errstate(over="ignore"):
        raw = np.exp(log_values)
    representable = bool(np.isfinite(raw).all() and (raw > 0.0).all())
    normalized = np.exp(log_values - log_values.max())
    return AddkResult(
        log_values=log_values,
        normalized=normalized,
        alpha=float(alpha),
        raw=raw if representable else None,
    )


def concentration(result: AddkResult, level: float) -> int:
    """Number of cells whose normalized kernel value reaches ``level``.

    ``level`` must lie in (0, 1). For fixed operands the count is
    non-increasing in alpha, which is the measurable form of "larger
    amplification concentrates the heat map".
    """
    if not 0.0 < level < 1.0:
        raise ParameterError(f"level must lie in (0, 1), got {level!r}")
    return int(np.count_nonzero(result.normalized >= level))
