"""End-to-end design: designed high-pass filters in, Parseval bank out.

1. divide each vectorized filter by ``c`` to get the rows ``d_i``;
2. choose weights ``lam`` (optimizer, closed form, or user supplied);
3. complete ``(c; diag(lam) D1)`` to a Parseval frame by SVD;
4. multiply through by ``diag(c)`` to get the high-pass masks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import catalog
from .completion import PRUNE_THRESHOLD, FrameDesign, complete, projection_bank
from .dvm import Direction, dvm_order
from .errors import DesignError, RankDeficientError
from .mask import FilterMask, OffsetGrid, vectorize
from .optimize import _row_groups, error_constant, optimize_lambda
from .spline import SplineSpec, bspline_lowpass, sqrt_vector
from .uep import FilterBank, assemble_bank

DEMOS = ("ex1", "ex2", "ex3", "ex3-ref", "ex4", "cor26", "d4", "fig1")


@dataclass
class DesignRequest:
    """Inputs of :func:`run_pipeline`.

    ``designed_filters`` holds ``(matrix, anchor)`` pairs (``anchor=None``
    means the center cell) or ready-made :class:`FilterMask` objects.
    ``lam`` fixes the weights and bypasses the optimizer.
    ``sigma_tol`` is how far above 1 the largest singular value of the
    weighted stack may sit before completion refuses it.
    """

    lowpass: FilterMask | SplineSpec
    designed_filters: Sequence = ()
    optimize: bool = True
    lam: Sequence[float] | None = None
    prune: float = PRUNE_THRESHOLD
    tol: float = 1e-10
    sigma_tol: float = 1e-10
    max_iter: int = 10_000
    annotations: dict = field(default_factory=dict)


def _lowpass(req: DesignRequest) -> FilterMask:
    lp = req.lowpass
    return bspline_lowpass(lp) if isinstance(lp, SplineSpec) else lp


def designed_masks(req: DesignRequest, grid: OffsetGrid) -> list[FilterMask]:
    """Designed filters re-expressed on ``grid``; checks zero sum and support."""
    out = []
    for i, item in enumerate(req.designed_filters):
        if isinstance(item, FilterMask):
            m = item
        else:
            h, anchor = item if isinstance(item, tuple) else (item, None)
            m = vectorize(h, None if anchor is None else tuple(anchor))
        try:
            m = m.on_grid(grid)
        except DesignError as exc:
            raise DesignError(f"designed filter {i + 1}: {exc}") from None
        if not np.any(m.coeffs):
            raise DesignError(f"designed filter {i + 1} is identically zero")
        total = float(m.coeffs.sum())
        if abs(total) > req.tol * max(1.0, float(np.abs(m.coeffs).sum())):
            raise DesignError(f"designed filter {i + 1} sums to {total:.6g}; high-pass filters must sum to 0")
        out.append(m)
    return out


def run_pipeline(req: DesignRequest) -> FilterBank:
    """Build a Parseval bank containing the designed filters up to scale.

    Metadata keys: ``lambda``, ``objective``, ``singular_values``,
    ``error_constant`` and ``frame_bounds`` (``None`` when the designed
    rows do not span), ``n_designed``, ``n_pruned``, ``options``.
    """
    lp = _lowpass(req)
    N = len(lp)
    if N < 2:
        raise DesignError(f"no admissible high-pass dimension: the low-pass grid has N = {N}")
    c = sqrt_vector(lp, req.tol)
    masks = designed_masks(req, lp.grid)
    L = len(masks)
    D1 = np.array([m.coeffs / c for m in masks]).reshape(L, N)

    opt = None
    if req.lam is not None:
        lam = np.asarray(req.lam, dtype=float).ravel()
        if lam.size != L:
            raise DesignError(f"expected {L} weights, got {lam.size}")
    elif req.optimize and L:
        opt = optimize_lambda(c, D1, tol=req.tol, max_iter=req.max_iter)
        lam = opt.lambda_star
    else:
        lam = np.ones(L)

    design = complete(FrameDesign(c, D1, lam), tol=req.sigma_tol, prune=req.prune)
    try:
        sigma, bounds = error_constant(design)
    except RankDeficientError:
        sigma, bounds = None, None
    prov = ("designed",) * L + ("completion",) * design.D2.shape[0]
    meta = {
        "lambda": design.lam.tolist(),
        "objective": float(1.0 + np.sum((design.lam**2) * np.sum(D1**2, axis=1))),
        "singular_values": design.singular_values.tolist(),
        "error_constant": sigma,
        "frame_bounds": None if bounds is None else list(bounds),
        "n_designed": L,
        "n_pruned": design.n_pruned,
        "options": {
            "optimize": bool(req.optimize and req.lam is None),
            "prune": req.prune,
            "tol": req.tol,
            "sigma_tol": req.sigma_tol,
        },
    }
    if opt is not None:
        meta["optimizer"] = {"converged": opt.converged, "iterations": opt.iterations, "groups": opt.groups}
    meta.update(req.annotations)
    return assemble_bank(c, design.D, lp, prov, tol=max(req.tol, 1e-10), metadata=meta)


def central_differences(lowpass: FilterMask) -> list[FilterMask]:
    """``(N-1)/2`` symmetric central differences, one per offset pair ``+-n``.

    Each divided row is ``(-e_i + e_{N+1-i}) / sqrt(2)``, so the rows are
    unit, pairwise orthogonal and orthogonal to a symmetric ``c``.
    """
    c = sqrt_vector(lowpass)
    N = c.size
    if N % 2 == 0 or not np.array_equal(lowpass.offsets[::-1], -lowpass.offsets):
        raise DesignError("central differences need a grid symmetric about the origin")
    out = []
    for i in range(N // 2):
        d = np.zeros(N)
        d[i], d[N - 1 - i] = -np.sqrt(0.5), np.sqrt(0.5)
        out.append(FilterMask(lowpass.grid, d * c))
    return out


def _reference_weights() -> np.ndarray:
    # weights read off the designed rows of the printed 12-filter bank
    B = catalog.DIFF3_BANK_B
    lp = bspline_lowpass(SplineSpec(2, 2))
    lam = []
    rows = [0, 1, 2, 3, 7, 6, 5, 4]
    for h, r in zip(catalog.DIFF3, rows):
        v = vectorize(h).coeffs
        k = int(np.argmax(np.abs(v)))
        lam.append(abs(B[r, k] / v[k]))
    lam = np.array(lam)
    # rounded weights overshoot the spectral bound slightly; pull each
    # mutually orthogonal group of rows back onto it
    c = sqrt_vector(lp)
    D1 = np.array([vectorize(h).coeffs / c for h in catalog.DIFF3])
    for g in _row_groups(D1):
        s = np.linalg.svd(lam[g, None] * D1[g], compute_uv=False)[0]
        lam[g] /= max(1.0, s)
    return lam


def demo(name: str) -> FilterBank:
    """Bundled designs.

    ``ex1``
        order-2 tensor spline, SVD completion only (8 filters).
    ``ex2``
        order-2 tensor spline with 4 central differences, then completion.
    ``ex3``
        order-2 tensor spline with 8 first/second differences, optimized weights.
    ``ex3-ref``
        as ``ex3`` but with the reference weights (read off the tabulated bank) instead of the optimizer's.
    ``ex4``
        order-4 tensor spline with 24 oriented differences (48 filters expected).
    ``cor26``
        projection bank of the order-2 tensor spline (36 filters).
    ``d4``
        Daubechies D4 pair (non-diagonal Gram matrix, verification only).
    ``fig1``
        the 3x3 four-DVM filter on the order-2 tensor spline (not a frame).
    """
    if name == "ex1":
        bank = run_pipeline(DesignRequest(SplineSpec(2, 2)))
    elif name == "ex2":
        lp = bspline_lowpass(SplineSpec(2, 2))
        bank = run_pipeline(DesignRequest(lp, central_differences(lp)))
    elif name == "ex3":
        bank = run_pipeline(DesignRequest(SplineSpec(2, 2), list(catalog.DIFF3)))
    elif name == "ex3-ref":
        bank = run_pipeline(
            DesignRequest(SplineSpec(2, 2), list(catalog.DIFF3), optimize=False, lam=_reference_weights())
        )
    elif name == "ex4":
        bank = run_pipeline(DesignRequest(SplineSpec(4, 2), catalog.oriented_differences()))
    elif name == "cor26":
        bank = projection_bank(bspline_lowpass(SplineSpec(2, 2)))
    elif name == "d4":
        grid = OffsetGrid(np.arange(4)[:, None])
        bank = FilterBank(
            FilterMask(grid, catalog.D4_A),
            (FilterMask(grid, catalog.D4_B),),
            ("designed",),
            {"route": "non-diagonal", "note": "orthonormal wavelet pair; M is not diagonal"},
        )
    elif name == "fig1":
        lp = bspline_lowpass(SplineSpec(2, 2))
        h = vectorize(catalog.FOUR_DVM_FILTER)
        beta = Direction([0.0, 1.0])
        order = dvm_order(h, beta, tol=1e-2)
        bank = FilterBank(
            lp,
            (h,),
            ("designed",),
            {
                "note": "single high-pass fixture for moment checks; not a frame",
                "dvm": [{"filter": 0, "direction": [0.0, 1.0], "order": order, "tol": 1e-2}],
            },
        )
    else:
        raise ValueError(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}")
    bank.metadata.setdefault("demo", name)
    return bank
