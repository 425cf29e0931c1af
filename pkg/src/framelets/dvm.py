"""Directional vanishing moments of high-pass masks.

A mask ``b`` on offsets ``n_k`` has ``n`` vanishing moments in the
direction ``beta`` when ``sum_k b_k (beta . n_k)^r = 0`` for ``r < n``.
With ``b = c * d`` this is the condition ``c Z^r d^T = 0`` where
``Z = diag(beta . n_k)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import DirectionError
from .mask import FilterMask, OffsetGrid
from .spline import sqrt_vector

DEFAULT_TOL = 1e-8
MIN_GAP = 1e-8
MAX_COND = 1e14


@dataclass(frozen=True, eq=False)
class Direction:
    """Unit vector ``beta``; ``z(grid)`` gives the nodes ``beta . n_k``."""

    beta: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.beta, dtype=float).ravel()
        nrm = np.linalg.norm(b)
        if b.size == 0 or not np.isfinite(nrm) or nrm == 0:
            raise DirectionError("direction must be a nonzero finite vector")
        b = b / nrm
        b.setflags(write=False)
        object.__setattr__(self, "beta", b)

    def __eq__(self, other) -> bool:
        return isinstance(other, Direction) and np.array_equal(self.beta, other.beta)

    def __hash__(self) -> int:
        return hash(self.beta.tobytes())

    @property
    def dim(self) -> int:
        return self.beta.size

    def z(self, grid: OffsetGrid) -> np.ndarray:
        if grid.dim != self.dim:
            raise DirectionError(f"direction is {self.dim}-D but the grid is {grid.dim}-D")
        return grid.offsets.astype(float) @ self.beta

    def Z(self, grid: OffsetGrid) -> np.ndarray:
        return np.diag(self.z(grid))


def _as_direction(d) -> Direction:
    return d if isinstance(d, Direction) else Direction(d)


def moments(mask: FilterMask, direction, r_max: int | None = None) -> np.ndarray:
    """``m_r = sum_k b_k (beta . n_k)^r`` for ``r = 0..r_max``."""
    direction = _as_direction(direction)
    z = direction.z(mask.grid)
    r_max = len(mask) if r_max is None else r_max
    V = z[None, :] ** np.arange(r_max + 1)[:, None]
    return V @ mask.coeffs


def design_moments(c, d, z, r_max: int) -> np.ndarray:
    """``c Z^r d^T`` for ``r = 0..r_max``, the same sum written on the frame side."""
    c = np.asarray(c, dtype=float)
    d = np.asarray(d, dtype=float)
    z = np.asarray(z, dtype=float)
    return np.array([c @ np.diag(z**r) @ d for r in range(r_max + 1)])


def dvm_order(mask: FilterMask, direction, tol: float = DEFAULT_TOL, r_max: int | None = None) -> int:
    """Largest ``n <= r_max`` with moments ``0..n-1`` vanishing.

    Moment ``r`` counts as zero when
    ``|m_r| <= tol * sum_k |b_k| max(1, |beta . n_k|)^r``.
    ``r_max`` defaults to the grid size ``N``.

    >>> from framelets.mask import mask_1d
    >>> dvm_order(mask_1d([-0.5, 0.0, 0.5], first=-1), [1.0])
    1
    """
    direction = _as_direction(direction)
    z = direction.z(mask.grid)
    r_max = len(mask) if r_max is None else int(r_max)
    absb = np.abs(mask.coeffs)
    base = np.maximum(1.0, np.abs(z))
    for r in range(r_max):
        m = float(np.sum(mask.coeffs * z**r))
        scale = float(np.sum(absb * base**r))
        if abs(m) > tol * scale:
            return r
    return r_max


def node_clash(grid: OffsetGrid, direction, min_gap: float = MIN_GAP):
    """Closest pair of offsets under projection onto ``beta``.

    Returns ``(gap, (n_i, n_j))``; the direction is admissible iff
    ``gap >= min_gap``.
    """
    direction = _as_direction(direction)
    z = direction.z(grid)
    if z.size < 2:
        return np.inf, None
    order = np.argsort(z, kind="stable")
    diffs = np.diff(z[order])
    i = int(np.argmin(diffs))
    pair = (
        tuple(int(v) for v in grid.offsets[order[i]]),
        tuple(int(v) for v in grid.offsets[order[i + 1]]),
    )
    return float(diffs[i]), pair


def check_direction(grid: OffsetGrid, direction, min_gap: float = MIN_GAP) -> Direction:
    """Return ``direction`` if all nodes are distinct, else raise :class:`DirectionError`."""
    direction = _as_direction(direction)
    gap, pair = node_clash(grid, direction, min_gap)
    if gap < min_gap:
        raise DirectionError(
            f"offsets {pair[0]} and {pair[1]} project to the same node along "
            f"beta = ({', '.join(f'{v:.6g}' for v in direction.beta)}) (gap {gap:.3g})",
            pair=pair,
        )
    return direction


def admissible_direction(
    grid: OffsetGrid,
    candidate_count: int = 64,
    rng_seed: int = 0,
    start=None,
    min_gap: float = MIN_GAP,
) -> Direction:
    """Unit ``beta`` whose nodes ``beta . n_k`` are pairwise distinct.

    Candidates are seeded Gaussian directions (perturbations of ``start``
    when one is given); ``start`` itself is returned if already
    admissible.  Among admissible candidates the one with the widest
    node spacing wins.
    """
    if len(grid) < 2:
        raise DirectionError("a direction test needs at least two offsets")
    if start is not None:
        start = _as_direction(start)
        if node_clash(grid, start)[0] >= min_gap:
            return start
    rng = np.random.default_rng(rng_seed)
    best, best_gap, worst_pair = None, -np.inf, None
    for _ in range(candidate_count):
        v = rng.standard_normal(grid.dim)
        if start is not None:
            v = start.beta + 0.25 * v
        if np.linalg.norm(v) < 1e-12:
            continue
        cand = Direction(v)
        gap, pair = node_clash(grid, cand)
        if gap > best_gap:
            best, best_gap, worst_pair = cand, gap, pair
    if best is None or best_gap < min_gap:
        raise DirectionError(
            f"no admissible direction among {candidate_count} candidates; increase the count",
            pair=worst_pair,
        )
    return best


def max_dvm_row(lowpass: FilterMask, direction) -> tuple[np.ndarray, float]:
    """Unit row ``d`` with ``c Z^r d^T = 0`` for ``r < N-1`` and the factor removed.

    Solves ``R x = e_N`` with ``R = V diag(c)`` (``V`` the Vandermonde
    matrix on the nodes) by LU with partial pivoting.  Returns
    ``(x / |x|, |x|)``.
    """
    c = sqrt_vector(lowpass)
    direction = check_direction(lowpass.grid, direction)
    z = direction.z(lowpass.grid)
    N = c.size
    V = z[None, :] ** np.arange(N)[:, None]
    R = V * c[None, :]
    cond = np.linalg.cond(R)
    if not np.isfinite(cond) or cond > MAX_COND:
        raise DirectionError(
            f"Vandermonde system is numerically singular (cond = {cond:.3g}); "
            "choose a direction with better separated nodes"
        )
    e = np.zeros(N)
    e[-1] = 1.0
    x = lu_solve(lu_factor(R), e)
    scale = float(np.linalg.norm(x))
    return x / scale, scale


def max_dvm_filter(lowpass: FilterMask, direction) -> FilterMask:
    """High-pass mask with ``N-1`` vanishing moments along ``direction``.

    Coefficients are ``sqrt(a_k) d_k`` with ``d`` from :func:`max_dvm_row`,
    so ``d`` is orthogonal to ``c`` and may be used as a designed row.
    """
    d, _ = max_dvm_row(lowpass, direction)
    return FilterMask(lowpass.grid, np.sqrt(lowpass.coeffs) * d)
