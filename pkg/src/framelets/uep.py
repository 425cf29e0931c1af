"""Coefficient-space form of the unitary extension principle.

With ``H0 = a w`` and ``H1 = B w`` the UEP identities reduce to statements
about the Gram matrix ``M = a^T a + B^T B``.  When ``M`` is diagonal they
hold for every gamma iff ``sum_k m_kk exp(-2 pi i n_k . q) = delta_{0,q}``,
which is checked exactly here; a sampled check of the modulation identity
covers banks with non-diagonal ``M``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NotParsevalError
from .mask import FilterMask, OffsetGrid, half_shifts

PROVENANCES = ("designed", "completion", "projection")


@dataclass(frozen=True, eq=False)
class FilterBank:
    """A low-pass mask plus ``v`` high-pass masks on one offset grid."""

    lowpass: FilterMask
    highpass: tuple[FilterMask, ...]
    provenance: tuple[str, ...] = ()
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        hp = tuple(self.highpass)
        prov = tuple(self.provenance) or ("designed",) * len(hp)
        if len(prov) != len(hp):
            raise ValueError("one provenance tag per high-pass mask is required")
        for tag in prov:
            if tag not in PROVENANCES:
                raise ValueError(f"unknown provenance {tag!r}")
        for m in hp:
            if m.grid != self.lowpass.grid:
                raise ValueError("all masks of a bank must share the low-pass grid")
        object.__setattr__(self, "highpass", hp)
        object.__setattr__(self, "provenance", prov)

    @property
    def grid(self) -> OffsetGrid:
        return self.lowpass.grid

    @property
    def dim(self) -> int:
        return self.grid.dim

    @property
    def a(self) -> np.ndarray:
        return self.lowpass.coeffs

    @property
    def B(self) -> np.ndarray:
        if not self.highpass:
            return np.zeros((0, len(self.grid)))
        return np.stack([m.coeffs for m in self.highpass])

    def __len__(self) -> int:
        return len(self.highpass)

    def channels(self, tag: str) -> list[int]:
        return [i for i, p in enumerate(self.provenance) if p == tag]


def gram(a, B) -> np.ndarray:
    """``M = a^T a + B^T B``."""
    a = np.asarray(a, dtype=float).ravel()
    B = np.asarray(B, dtype=float)
    if B.size == 0:
        B = B.reshape(0, a.size)
    if B.ndim != 2 or B.shape[1] != a.size:
        raise ValueError(f"B must have {a.size} columns, got shape {B.shape}")
    return np.outer(a, a) + B.T @ B


@dataclass
class DiagonalUEPReport:
    offdiag: float
    offdiag_at: tuple[int, int] | None
    diag_dev: float
    diag_dev_at: int | None
    modulation_dev: float
    tol: float

    @property
    def passed(self) -> bool:
        return max(self.offdiag, self.diag_dev, self.modulation_dev) <= self.tol

    @property
    def deviation(self) -> float:
        return max(self.offdiag, self.diag_dev, self.modulation_dev)


def check_diagonal_uep(bank: FilterBank, tol: float = 1e-10) -> DiagonalUEPReport:
    """Exact certificate that ``M`` is diag(a) and satisfies the half-shift identity."""
    M = gram(bank.a, bank.B)
    N = M.shape[0]
    off = M - np.diag(np.diag(M))
    if N > 1:
        k, t = np.unravel_index(np.argmax(np.abs(off)), off.shape)
        offdiag, offdiag_at = float(abs(off[k, t])), (int(min(k, t)), int(max(k, t)))
    else:
        offdiag, offdiag_at = 0.0, None
    dd = np.abs(np.diag(M) - bank.a)
    q = half_shifts(bank.dim)
    phases = np.exp(-2j * np.pi * (q @ bank.grid.offsets.T.astype(float)))
    target = np.zeros(len(q))
    target[0] = 1.0
    mod = np.abs(phases @ np.diag(M) - target)
    return DiagonalUEPReport(
        offdiag=offdiag,
        offdiag_at=offdiag_at,
        diag_dev=float(dd.max()),
        diag_dev_at=int(np.argmax(dd)),
        modulation_dev=float(mod.max()),
        tol=tol,
    )


@dataclass
class GeneralUEPReport:
    per_shift: dict[tuple[float, ...], float]
    grid_size: int
    tol: float

    @property
    def deviation(self) -> float:
        return max(self.per_shift.values())

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tol


def _sample_grid(dim: int, n: int) -> np.ndarray:
    axes = np.meshgrid(*[np.arange(n) / n] * dim, indexing="ij")
    return np.stack([ax.ravel() for ax in axes], axis=1)


def check_general_uep(
    H0: FilterMask, H1: Sequence[FilterMask], grid_size: int = 64, tol: float = 1e-10
) -> GeneralUEPReport:
    """Sample ``conj(H0(g+q)) H0(g) + H1(g+q)^* H1(g) - delta_{0,q}`` on a uniform grid."""
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    A = np.vstack([H0.coeffs] + [m.coeffs for m in H1])
    for m in H1:
        if m.grid != H0.grid:
            raise ValueError("all masks must share one grid")
    off = H0.grid.offsets.T.astype(float)
    g = _sample_grid(H0.dim, grid_size)
    # filters evaluated at g: (P, v+1)
    W = np.exp(2j * np.pi * (g @ off))
    F = W @ A.T
    out = {}
    for q in half_shifts(H0.dim):
        Fq = np.exp(2j * np.pi * ((g + q) @ off)) @ A.T
        val = np.sum(np.conj(Fq) * F, axis=1)
        target = 1.0 if not np.any(q) else 0.0
        out[tuple(float(v) for v in q)] = float(np.max(np.abs(val - target)))
    return GeneralUEPReport(out, grid_size, tol)


def parseval_defect(rows: np.ndarray) -> float:
    """``max |R^T R - I|`` for a stack of row vectors ``R``."""
    R = np.atleast_2d(np.asarray(rows, dtype=float))
    return float(np.max(np.abs(R.T @ R - np.eye(R.shape[1]))))


def assemble_bank(
    c,
    D,
    lowpass: FilterMask,
    provenance: Sequence[str] | None = None,
    tol: float = 1e-10,
    metadata: dict | None = None,
) -> FilterBank:
    """High-pass masks ``B = D diag(sqrt(a))`` from a Parseval stack ``(c; D)``.

    Raises :class:`NotParsevalError` when ``c^T c + D^T D`` is not the
    identity within ``tol`` or ``c`` is not ``sqrt(a)``.
    """
    c = np.asarray(c, dtype=float).ravel()
    N = len(lowpass)
    D = np.asarray(D, dtype=float).reshape(-1, N) if np.size(D) else np.zeros((0, N))
    if c.size != N:
        raise ValueError(f"c must have length {N}")
    if abs(np.linalg.norm(c) - 1.0) > tol:
        raise NotParsevalError(f"c must be a unit vector (|c| = {np.linalg.norm(c):.17g})")
    if np.any(lowpass.coeffs < 0) or np.max(np.abs(c - np.sqrt(np.abs(lowpass.coeffs)))) > tol:
        raise NotParsevalError("c is not the square-root vector of the low-pass coefficients")
    defect = parseval_defect(np.vstack([c, D]))
    if defect > tol:
        raise NotParsevalError(
            f"rows of (c; D) are not a Parseval frame: max |c^T c + D^T D - I| = {defect:.3g}"
        )
    if D.shape[0] + 1 < N:
        raise NotParsevalError(f"a diagonal-M bank needs v + 1 >= N, got v = {D.shape[0]}, N = {N}")
    B = D * c[None, :]
    hp = tuple(FilterMask(lowpass.grid, row) for row in B)
    return FilterBank(lowpass, hp, tuple(provenance) if provenance else (), dict(metadata or {}))
