"""Decimated multi-level analysis and synthesis with a filter bank.

Analysis at one level correlates the signal with every mask (periodic
boundary, no flip) and keeps the even samples:

    C_i[p] = 2^(s/2) sum_k A_ik f(2p + n_k)

with ``A = (a; B)``.  In 2D the offset ``(x, y)`` moves ``x`` columns to
the right and ``y`` rows up.  The factor ``2^(s/2)`` makes the operator an
isometry for a Parseval bank.  Synthesis is the exact adjoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .mask import FilterMask
from .uep import FilterBank


@dataclass
class Decomposition:
    """Coefficients of a ``levels``-deep decomposition.

    ``details[j]`` is an array of shape ``(v, ...)`` for level ``j + 1``
    (finest first); ``residual`` is the coarsest low-pass channel.
    ``shape`` is the input shape before periodic padding.
    """

    levels: int
    details: list[np.ndarray]
    residual: np.ndarray
    shape: tuple[int, ...]
    padded_shape: tuple[int, ...]
    boundary_mode: str = "periodic"
    phase: int = 0
    provenance: tuple[str, ...] = field(default_factory=tuple)

    @property
    def n_channels(self) -> int:
        return self.details[0].shape[0] if self.details else 0

    def energy(self) -> float:
        return float(sum(np.sum(d**2) for d in self.details) + np.sum(self.residual**2))

    def channel_energy(self) -> np.ndarray:
        """Energy per high-pass channel, summed over levels."""
        return np.sum([np.sum(d**2, axis=tuple(range(1, d.ndim))) for d in self.details], axis=0)

    def zeros_like(self) -> "Decomposition":
        return Decomposition(
            self.levels,
            [np.zeros_like(d) for d in self.details],
            np.zeros_like(self.residual),
            self.shape,
            self.padded_shape,
            self.boundary_mode,
            self.phase,
            self.provenance,
        )


def _displacements(offsets: np.ndarray) -> np.ndarray:
    # array-axis shift for each offset: 2D (x, y) -> (row -y, col +x)
    off = np.asarray(offsets, dtype=np.int64)
    if off.shape[1] == 2:
        return np.stack([-off[:, 1], off[:, 0]], axis=1)
    return off


def _stack(bank: FilterBank) -> np.ndarray:
    return np.vstack([bank.a[None, :], bank.B])


def _check_image(bank: FilterBank, img) -> np.ndarray:
    f = np.asarray(img, dtype=float)
    if f.ndim != bank.dim:
        raise ValueError(f"a {bank.dim}-D bank needs a {bank.dim}-D array, got {f.ndim}-D")
    if f.size == 0 or not np.all(np.isfinite(f)):
        raise ValueError("image must be non-empty and finite")
    return f


def padded_shape(shape: Sequence[int], levels: int) -> tuple[int, ...]:
    m = 2**levels
    return tuple(int(-(-n // m) * m) for n in shape)


def periodic_pad(f: np.ndarray, levels: int) -> np.ndarray:
    """Extend ``f`` periodically so every axis is a multiple of ``2^levels``."""
    target = padded_shape(f.shape, levels)
    pad = [(0, t - n) for n, t in zip(f.shape, target)]
    return np.pad(f, pad, mode="wrap") if any(p[1] for p in pad) else f


def analysis_step(A: np.ndarray, disp: np.ndarray, f: np.ndarray) -> np.ndarray:
    """One level: returns ``(v + 1, ...)`` with the low-pass channel first."""
    s = f.ndim
    sl = (slice(None, None, 2),) * s
    axes = tuple(range(s))
    Y = np.stack([np.roll(f, tuple(-disp[k]), axis=axes)[sl] for k in range(disp.shape[0])])
    return 2.0 ** (s / 2) * np.tensordot(A, Y, axes=(1, 0))


def synthesis_step(A: np.ndarray, disp: np.ndarray, C: np.ndarray) -> np.ndarray:
    s = C.ndim - 1
    Y = 2.0 ** (s / 2) * np.tensordot(A.T, C, axes=(1, 0))
    out_shape = tuple(2 * n for n in C.shape[1:])
    sl = (slice(None, None, 2),) * s
    axes = tuple(range(s))
    f = np.zeros(out_shape)
    up = np.zeros(out_shape)
    for k in range(disp.shape[0]):
        up[sl] = Y[k]
        f += np.roll(up, tuple(disp[k]), axis=axes)
    return f


def analyze(bank: FilterBank, img, levels: int) -> Decomposition:
    """Periodic decimated decomposition.

    The input is padded periodically to a multiple of ``2^levels``
    along every axis; the original shape is kept in the result.
    """
    if len(bank) == 0:
        raise ValueError("bank has no high-pass filters")
    f = _check_image(bank, img)
    levels = int(levels)
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if 2**levels > min(f.shape):
        raise ValueError(f"{levels} levels need every side >= {2**levels}, got shape {f.shape}")
    shape = f.shape
    f = periodic_pad(f, levels)
    A = _stack(bank)
    disp = _displacements(bank.grid.offsets)
    details = []
    low = f
    for _ in range(levels):
        C = analysis_step(A, disp, low)
        details.append(C[1:])
        low = C[0]
    return Decomposition(levels, details, low, tuple(shape), tuple(f.shape), provenance=bank.provenance)


def synthesize(bank: FilterBank, dec: Decomposition, crop: bool = True) -> np.ndarray:
    """Adjoint of :func:`analyze`; the inverse when the bank is Parseval."""
    A = _stack(bank)
    disp = _displacements(bank.grid.offsets)
    low = np.asarray(dec.residual, dtype=float)
    if len(dec.details) != dec.levels:
        raise ValueError("decomposition has an inconsistent number of levels")
    for d in reversed(dec.details):
        if d.shape[0] != len(bank) or d.shape[1:] != low.shape:
            raise ValueError(
                f"shape mismatch: level coefficients {d.shape} vs low-pass {low.shape} "
                f"for a bank of {len(bank)} filters"
            )
        low = synthesis_step(A, disp, np.concatenate([low[None], d], axis=0))
    if tuple(low.shape) != tuple(dec.padded_shape):
        raise ValueError(f"reconstructed shape {low.shape} does not match {dec.padded_shape}")
    if crop:
        low = low[tuple(slice(0, n) for n in dec.shape)]
    return low


def _keep_mask(n: int, keep: Iterable[int]) -> np.ndarray:
    sel = np.zeros(n, dtype=bool)
    for i in keep:
        i = int(i)
        if not 0 <= i < n:
            raise IndexError(f"channel {i} out of range for a bank of {n} filters")
        sel[i] = True
    return sel


def energy_split(dec: Decomposition, keep: Iterable[int]) -> tuple[float, float, float]:
    """``(kept, dropped, residual)`` energies; ``keep`` indexes high-pass channels."""
    sel = _keep_mask(dec.n_channels, keep)
    per = dec.channel_energy()
    res = float(np.sum(dec.residual**2))
    return float(per[sel].sum()), float(per[~sel].sum()), res


def truncation_error(bank: FilterBank, keep: Iterable[int], img, levels: int) -> float:
    """Relative energy lost when only the ``keep`` channels and the residual survive.

    ``E(f) / |f|^2`` with ``E(f) = |f|^2 - kept - residual``; the energy
    reference is the periodically padded image.
    """
    keep = list(keep)
    _keep_mask(len(bank), keep)
    dec = analyze(bank, img, levels)
    f = periodic_pad(_check_image(bank, img), levels)
    total = float(np.sum(f**2))
    if total == 0:
        return 0.0
    kept, _, res = energy_split(dec, keep)
    return (total - kept - res) / total


def convolve_demo(mask: FilterMask, img) -> np.ndarray:
    """Full-resolution periodic correlation ``g(p) = sum_k b_k f(p + n_k)``."""
    f = np.asarray(img, dtype=float)
    if f.ndim != mask.dim:
        raise ValueError(f"a {mask.dim}-D mask needs a {mask.dim}-D array")
    disp = _displacements(mask.offsets)
    axes = tuple(range(f.ndim))
    out = np.zeros_like(f)
    for b, dk in zip(mask.coeffs, disp):
        if b:
            out += b * np.roll(f, tuple(-dk), axis=axes)
    return out
