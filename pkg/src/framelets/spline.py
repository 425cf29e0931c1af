"""Cardinal B-spline refinement masks and their square-root vectors."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import comb

import numpy as np

from .errors import InadmissibleLowpassError
from .mask import FilterMask, evaluate, half_shifts, mask_1d, tensor_product


@dataclass(frozen=True)
class SplineSpec:
    order: int
    dim: int = 2

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("spline order must be >= 1")
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")


def bspline_lowpass(spec: SplineSpec | int, dim: int | None = None) -> FilterMask:
    """Refinement mask of the order-m cardinal B-spline, tensored ``dim`` times.

    1D coefficients are ``C(m, k) / 2^m`` on offsets
    ``-ceil(m/2), ..., floor(m/2)`` (centered for even m).

    >>> bspline_lowpass(SplineSpec(2, 1)).coeffs * 4
    array([1., 2., 1.])
    """
    if not isinstance(spec, SplineSpec):
        spec = SplineSpec(int(spec), 1 if dim is None else dim)
    m = spec.order
    one = mask_1d([comb(m, k) / 2.0**m for k in range(m + 1)], first=-((m + 1) // 2))
    return reduce(tensor_product, [one] * spec.dim)


def admissibility_defects(lp: FilterMask) -> dict[str, float]:
    """Deviations from the admissible low-pass conditions.

    Keys: ``min_coeff`` (smallest coefficient), ``sum_dev`` (|sum - 1|) and
    ``half_shift_dev`` (max over q in {0,1/2}^s of |H0(q) - delta_{0,q}|).
    """
    q = half_shifts(lp.dim)
    vals = evaluate(lp, q)
    target = np.zeros(len(q))
    target[0] = 1.0
    return {
        "min_coeff": float(lp.coeffs.min()),
        "sum_dev": float(abs(lp.coeffs.sum() - 1.0)),
        "half_shift_dev": float(np.max(np.abs(vals - target))),
    }


def check_admissible(lp: FilterMask, tol: float = 1e-10) -> None:
    """Raise :class:`InadmissibleLowpassError` unless ``lp`` is admissible."""
    d = admissibility_defects(lp)
    if d["min_coeff"] <= 0:
        raise InadmissibleLowpassError(
            f"low-pass coefficients must be strictly positive (min = {d['min_coeff']:.3g})"
        )
    if d["sum_dev"] > tol:
        raise InadmissibleLowpassError(f"low-pass coefficients sum to {lp.coeffs.sum():.17g}, not 1")
    if d["half_shift_dev"] > tol:
        raise InadmissibleLowpassError(
            f"H0(q) deviates from delta_(0,q) by {d['half_shift_dev']:.3g} on {{0,1/2}}^s"
        )


def sqrt_vector(lp: FilterMask, tol: float = 1e-10) -> np.ndarray:
    """Unit vector ``c = (sqrt(a_k))_k``; rejects inadmissible masks."""
    check_admissible(lp, tol)
    return np.sqrt(lp.coeffs)
