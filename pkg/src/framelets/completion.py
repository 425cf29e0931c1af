"""Completing designed rows to a Parseval frame of R^N, and the projection-method bank."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleDesignError
from .mask import FilterMask
from .spline import sqrt_vector
from .uep import FilterBank

PRUNE_THRESHOLD = 1e-8
# 1 - sigma^2 below this is rounding noise, not a filter.
_NOISE_FLOOR = 64 * np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class FrameDesign:
    """Matrix stack ``(c; diag(lam) D1; D2)``.

    ``D2`` and ``singular_values`` are filled in by :func:`complete`.
    ``n_pruned`` counts the completion rows dropped as numerically zero.
    """

    c: np.ndarray
    D1: np.ndarray
    lam: np.ndarray | None = None
    D2: np.ndarray | None = None
    singular_values: np.ndarray | None = None
    n_pruned: int = 0

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).ravel()
        D1 = np.asarray(self.D1, dtype=float)
        D1 = D1.reshape(-1, c.size) if D1.size else np.zeros((0, c.size))
        lam = np.ones(D1.shape[0]) if self.lam is None else np.asarray(self.lam, dtype=float).ravel()
        if lam.size != D1.shape[0]:
            raise ValueError("one weight per designed row is required")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "D1", D1)
        object.__setattr__(self, "lam", lam)

    @property
    def N(self) -> int:
        return self.c.size

    @property
    def L(self) -> int:
        return self.D1.shape[0]

    @property
    def weighted(self) -> np.ndarray:
        """``diag(lam) D1``."""
        return self.lam[:, None] * self.D1

    @property
    def Q(self) -> np.ndarray:
        return np.vstack([self.c, self.weighted])

    @property
    def D(self) -> np.ndarray:
        """All high-pass rows ``(diag(lam) D1; D2)``."""
        if self.D2 is None:
            raise ValueError("design has not been completed")
        return np.vstack([self.weighted, self.D2])

    @property
    def stack(self) -> np.ndarray:
        return np.vstack([self.c, self.D])


def _complement_basis(c: np.ndarray) -> np.ndarray:
    # rows 1.. of V^T from the SVD of the single row c span c-perp
    _, _, Vt = np.linalg.svd(c[None, :], full_matrices=True)
    return Vt[1:].T


def complete(design: FrameDesign, tol: float = 1e-10, prune: float = PRUNE_THRESHOLD) -> FrameDesign:
    """Fill ``D2 = Sigma_2 V^T`` from the SVD ``Q = U Sigma_1 V^T``.

    ``Sigma_2 = diag(sqrt(1 - sigma_i^2), ..., 1, ..., 1)`` so that
    ``Q^T Q + D2^T D2 = I``.  Rows of ``D2`` with 2-norm ``<= prune`` are
    dropped.  Singular values above 1 by at most ``tol`` are treated as 1.

    Since the designed rows are orthogonal to ``c``, ``c`` is a right
    singular vector of ``Q`` with singular value 1 and its row of ``D2``
    is zero.  The remaining factors come from the SVD of the weighted rows
    restricted to the complement of ``c``, which keeps every completion
    row orthogonal to ``c`` even when other singular values approach 1.
    """
    c, W = design.c, design.weighted
    if W.shape[0] and np.max(np.abs(W @ c)) > 1e-10 * max(1.0, np.abs(W).max()):
        raise InfeasibleDesignError("designed rows must be orthogonal to c")
    N = design.N
    basis = _complement_basis(c)
    if W.shape[0]:
        _, s, Vt = np.linalg.svd(W @ basis, full_matrices=True)
    else:
        s, Vt = np.zeros(0), np.eye(N - 1)
    if s.size and s[0] > 1.0 + tol:
        raise InfeasibleDesignError(
            f"largest singular value of Q is {s[0]:.12g} > 1; rescale the designed rows first"
        )
    gap = np.ones(N - 1)
    gap[: s.size] = 1.0 - s[: N - 1] ** 2
    gap[gap < _NOISE_FLOOR] = 0.0
    D2 = (np.sqrt(gap)[:, None] * Vt) @ basis.T
    keep = np.linalg.norm(D2, axis=1) > prune
    # singular values of Q: the unit one carried by c, then those of W
    sv = np.sort(np.concatenate([[1.0], s]))[::-1][: min(W.shape[0] + 1, N)]
    return dataclasses.replace(
        design, D2=D2[keep], singular_values=sv, n_pruned=1 + int(np.count_nonzero(~keep))
    )


def projection_bank(lowpass: FilterMask, tol: float = 1e-10) -> FilterBank:
    """Two-tap difference filters ``sqrt(a_k a_t) (-e_k + e_t)`` for every pair ``k < t``."""
    c = sqrt_vector(lowpass, tol)
    N = c.size
    hp = []
    for k in range(N):
        for t in range(k + 1, N):
            row = np.zeros(N)
            w = c[k] * c[t]
            row[k], row[t] = -w, w
            hp.append(FilterMask(lowpass.grid, row))
    return FilterBank(lowpass, tuple(hp), ("projection",) * len(hp), {"method": "projection"})
