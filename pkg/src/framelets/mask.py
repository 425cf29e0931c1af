"""Integer-offset filter masks.

A mask is a finite set of real coefficients indexed by integer offsets
``n_k`` in Z^s.  Offsets are kept in one canonical order so that the map
between a 2D filter matrix and a coefficient vector is a bijection: the
last coordinate is the major key.  In 2D an offset is ``(x, y)`` with ``x``
growing to the right (matrix columns) and ``y`` growing upwards (matrix rows
read bottom to top), so the coefficient vector lists the bottom matrix row
first, left to right, then proceeds upward.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DesignError


def _canonical_order(offsets: np.ndarray) -> np.ndarray:
    # np.lexsort treats the last key as primary, so pass coordinates as-is.
    return np.lexsort(offsets.T)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class OffsetGrid:
    """Ordered set of distinct integer offsets in Z^s."""

    offsets: np.ndarray

    def __post_init__(self):
        off = np.asarray(self.offsets)
        if off.ndim == 1:
            off = off[:, None]
        if off.ndim != 2 or off.shape[0] < 1 or off.shape[1] < 1:
            raise ValueError("offsets must be a non-empty (N, s) array")
        if not np.all(np.equal(np.mod(off, 1), 0)):
            raise ValueError("offsets must be integers")
        off = off.astype(np.int64)
        if len({tuple(o) for o in off}) != off.shape[0]:
            raise ValueError("offsets must be pairwise distinct")
        order = _canonical_order(off)
        if not np.array_equal(order, np.arange(off.shape[0])):
            raise ValueError("offsets are not in canonical order; use OffsetGrid.from_offsets")
        object.__setattr__(self, "offsets", _frozen(off))

    @classmethod
    def from_offsets(cls, offsets: Iterable[Sequence[int]]) -> "OffsetGrid":
        off = np.asarray(list(offsets), dtype=np.int64)
        if off.ndim == 1:
            off = off[:, None]
        return cls(off[_canonical_order(off)])

    @classmethod
    def box(cls, lo: Sequence[int], hi: Sequence[int]) -> "OffsetGrid":
        """Rectangular grid ``lo[i] <= n_i <= hi[i]`` (inclusive)."""
        axes = [np.arange(a, b + 1) for a, b in zip(lo, hi)]
        mesh = np.meshgrid(*axes, indexing="ij")
        off = np.stack([m.ravel() for m in mesh], axis=1)
        return cls.from_offsets(off)

    @property
    def dim(self) -> int:
        return self.offsets.shape[1]

    def __len__(self) -> int:
        return self.offsets.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, OffsetGrid):
            return NotImplemented
        return self.offsets.shape == other.offsets.shape and bool(
            np.array_equal(self.offsets, other.offsets)
        )

    def __hash__(self) -> int:
        return hash(self.offsets.tobytes())

    def index(self, offset: Sequence[int]) -> int:
        hits = np.flatnonzero(np.all(self.offsets == np.asarray(offset), axis=1))
        if hits.size == 0:
            raise KeyError(tuple(offset))
        return int(hits[0])

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return self.offsets.min(axis=0), self.offsets.max(axis=0)

    def is_box(self) -> bool:
        lo, hi = self.bounds()
        return len(self) == int(np.prod(hi - lo + 1))

    def half_shifts(self) -> np.ndarray:
        """All points of {0, 1/2}^s, the origin first."""
        return half_shifts(self.dim)


def half_shifts(dim: int) -> np.ndarray:
    """All points of {0, 1/2}^dim as a (2^dim, dim) array, the origin first."""
    return OffsetGrid.box([0] * dim, [1] * dim).offsets / 2.0


@dataclass(frozen=True, eq=False)
class FilterMask:
    """Real coefficients aligned with an :class:`OffsetGrid`."""

    grid: OffsetGrid
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float).ravel()
        if coeffs.shape[0] != len(self.grid):
            raise ValueError(f"expected {len(self.grid)} coefficients, got {coeffs.shape[0]}")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", _frozen(coeffs))

    @classmethod
    def from_pairs(cls, offsets, coeffs) -> "FilterMask":
        """Build from unordered offsets; they are sorted into canonical order."""
        off = np.asarray(offsets, dtype=np.int64)
        if off.ndim == 1:
            off = off[:, None]
        order = _canonical_order(off)
        return cls(OffsetGrid(off[order]), np.asarray(coeffs, dtype=float)[order])

    @property
    def dim(self) -> int:
        return self.grid.dim

    @property
    def offsets(self) -> np.ndarray:
        return self.grid.offsets

    def __len__(self) -> int:
        return len(self.grid)

    def scaled(self, factor: float) -> "FilterMask":
        return FilterMask(self.grid, factor * self.coeffs)

    def on_grid(self, grid: OffsetGrid, atol: float = 0.0) -> "FilterMask":
        """Re-express this mask on a larger grid, padding with zeros.

        Raises :class:`DesignError` if a coefficient with ``|b| > atol``
        sits on an offset missing from ``grid``.
        """
        if grid.dim != self.dim:
            raise DesignError(f"dimension mismatch: mask is {self.dim}-D, grid is {grid.dim}-D")
        out = np.zeros(len(grid))
        lookup = {tuple(o): i for i, o in enumerate(grid.offsets)}
        for off, b in zip(self.offsets, self.coeffs):
            i = lookup.get(tuple(off))
            if i is None:
                if abs(b) > atol:
                    raise DesignError(f"coefficient at offset {tuple(int(v) for v in off)} lies outside the grid")
                continue
            out[i] = b
        return FilterMask(grid, out)

    def evaluate(self, gamma) -> np.ndarray:
        return evaluate(self, gamma)

    def to_matrix(self) -> tuple[np.ndarray, tuple[int, ...]]:
        return devectorize(self)


def delta(dim: int = 1) -> FilterMask:
    """Unit coefficient at the origin."""
    return FilterMask(OffsetGrid(np.zeros((1, dim), dtype=np.int64)), [1.0])


def mask_1d(coeffs: Sequence[float], first: int = 0) -> FilterMask:
    """1D mask with consecutive offsets ``first, first + 1, ...``."""
    coeffs = np.asarray(coeffs, dtype=float)
    offs = np.arange(first, first + coeffs.size)[:, None]
    return FilterMask(OffsetGrid(offs), coeffs)


def _matrix_offsets(shape: tuple[int, int], anchor: tuple[int, int]) -> np.ndarray:
    rows, cols = np.meshgrid(np.arange(shape[0]), np.arange(shape[1]), indexing="ij")
    x = cols - anchor[1]
    y = anchor[0] - rows
    return np.stack([x.ravel(), y.ravel()], axis=1)


def vectorize(h, anchor: tuple[int, int] | None = None, grid: OffsetGrid | None = None) -> FilterMask:
    """Turn a 2D filter matrix into a mask.

    Parameters
    ----------
    h : array_like, shape (N1, N2)
        Filter matrix as printed: row 0 is the top.
    anchor : (row, col), optional
        Matrix cell that maps to offset (0, 0).  Defaults to the center cell
        ``(N1 // 2, N2 // 2)``.
    grid : OffsetGrid, optional
        Target grid.  Must contain exactly the matrix's offsets.

    Examples
    --------
    >>> m = vectorize([[0, 1, 0], [0, 0, 0], [0, -1, 0]])
    >>> [tuple(o.tolist()) for o, b in zip(m.offsets, m.coeffs) if b]
    [(0, -1), (0, 1)]
    """
    h = np.asarray(h, dtype=float)
    if h.ndim != 2:
        raise ValueError("filter matrix must be 2D")
    if anchor is None:
        anchor = (h.shape[0] // 2, h.shape[1] // 2)
    off = _matrix_offsets(h.shape, anchor)
    mask = FilterMask.from_pairs(off, h.ravel())
    if grid is not None:
        if len(grid) != len(mask) or grid != mask.grid:
            raise DesignError(
                f"dimension mismatch: matrix of shape {h.shape} with anchor {tuple(anchor)} "
                f"does not cover the target grid of {len(grid)} offsets"
            )
    return mask


def devectorize(mask: FilterMask) -> tuple[np.ndarray, tuple[int, ...]]:
    """Inverse of :func:`vectorize` for masks on a rectangular grid.

    Returns the matrix and the anchor cell of offset 0 (which may lie
    outside the matrix for off-center grids).  1D masks come back as a
    single-row matrix.
    """
    lo, hi = mask.grid.bounds()
    if mask.dim == 1:
        out = np.zeros((1, int(hi[0] - lo[0] + 1)))
        out[0, mask.offsets[:, 0] - lo[0]] = mask.coeffs
        return out, (0, int(-lo[0]))
    if mask.dim != 2:
        raise ValueError("only 1D and 2D masks have a matrix form")
    shape = (int(hi[1] - lo[1] + 1), int(hi[0] - lo[0] + 1))
    out = np.zeros(shape)
    rows = hi[1] - mask.offsets[:, 1]
    cols = mask.offsets[:, 0] - lo[0]
    out[rows, cols] = mask.coeffs
    return out, (int(hi[1]), int(-lo[0]))


def evaluate(mask: FilterMask, gamma) -> np.ndarray:
    """Trigonometric polynomial ``sum_k b_k exp(2 pi i n_k . gamma)``.

    ``gamma`` has shape ``(..., s)`` (a scalar is accepted for s = 1);
    the result has shape ``gamma.shape[:-1]``.
    """
    g = np.asarray(gamma, dtype=float)
    if mask.dim == 1 and (g.ndim == 0 or g.shape[-1] != 1):
        g = g[..., None]
    if g.shape[-1] != mask.dim:
        raise ValueError(f"gamma must have trailing dimension {mask.dim}")
    phase = g @ mask.offsets.T.astype(float)
    return np.exp(2j * np.pi * phase) @ mask.coeffs


def tensor_product(m1: FilterMask, m2: FilterMask) -> FilterMask:
    """Mask on the Cartesian product grid with coefficients ``b1(n) b2(m)``."""
    n1, n2 = len(m1), len(m2)
    off = np.concatenate(
        [np.repeat(m1.offsets, n2, axis=0), np.tile(m2.offsets, (n1, 1))], axis=1
    )
    coeffs = np.outer(m1.coeffs, m2.coeffs).ravel()
    return FilterMask.from_pairs(off, coeffs)
