"""Weights for designed rows: maximize trace(Q^T Q) subject to ||Q^T Q|| <= 1.

With ``t_i = lam_i^2`` the problem is linear in ``t`` over a convex set:

    maximize   sum_i t_i |d_i|^2
    subject to sum_i t_i d_i^T d_i <= I - c^T c   (Loewner order),  t >= 0.

The rows are first split into groups that are mutually orthogonal; the
constraint decouples across groups.  A single row gets the closed form
``t = 1 / |d|^2``.  Larger groups are solved with a log-barrier interior
point method (damped Newton steps on the barrier function restricted to
the orthogonal complement of ``c``).  Every accepted iterate is strictly
feasible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import InfeasibleDesignError, RankDeficientError

_ORTH_TOL = 1e-10


@dataclass
class OptimizationResult:
    lambda_star: np.ndarray
    objective: float
    converged: bool
    iterations: int
    sigma_N: float | None = None
    error_constant: float | None = None
    history: list[float] = field(default_factory=list)
    groups: list[list[int]] = field(default_factory=list)


def _complement_basis(c: np.ndarray) -> np.ndarray:
    # rows 1.. of V^T from the SVD of the single row c span c-perp
    _, _, Vt = np.linalg.svd(c[None, :], full_matrices=True)
    return Vt[1:].T


def _row_groups(D1: np.ndarray) -> list[list[int]]:
    norms = np.linalg.norm(D1, axis=1)
    G = np.abs(D1 @ D1.T) > 1e-12 * np.outer(norms, norms)
    n, labels = connected_components(G, directed=False)
    return [list(np.flatnonzero(labels == g)) for g in range(n)]


def _logdet_pd(S: np.ndarray) -> float | None:
    try:
        L = np.linalg.cholesky(S)
    except np.linalg.LinAlgError:
        return None
    return 2.0 * float(np.sum(np.log(np.diag(L))))


def _barrier_solve(G: np.ndarray, w: np.ndarray, tol: float, max_iter: int):
    """Maximize ``w . t`` s.t. ``I - sum t_i g_i g_i^T > 0``, ``t > 0``.

    ``G`` holds the projected rows ``g_i`` as columns.  Returns
    ``(t, newton_steps, outer_objectives, converged)``.
    """
    n, L = G.shape
    m = n + L  # barrier parameter count; duality gap of a centered point is m * mu
    t = 0.5 / (L * np.sum(G**2, axis=0))

    def phi(t, mu):
        if np.any(t <= 0):
            return None
        S = np.eye(n) - (G * t) @ G.T
        ld = _logdet_pd(S)
        if ld is None:
            return None
        return float(w @ t + mu * (ld + np.sum(np.log(t))))

    mu = float(w @ t) / m
    steps = 0
    history = []
    converged = False
    while steps < max_iter:
        # centering by damped Newton
        for _ in range(100):
            S = np.eye(n) - (G * t) @ G.T
            Sinv_G = np.linalg.solve(S, G)
            K = G.T @ Sinv_G  # K_ij = g_i^T S^-1 g_j
            grad = w - mu * np.diag(K) + mu / t
            # Newton step on the concave barrier; Hn = -Hessian / mu is PSD
            # and may lose rank numerically when L exceeds n
            Hn = K**2 + np.diag(1.0 / t**2)
            try:
                step = np.linalg.solve(Hn, grad / mu)
            except np.linalg.LinAlgError:
                step = np.linalg.lstsq(Hn, grad / mu, rcond=None)[0]
            decrement = float(grad @ step)
            if decrement / 2.0 <= 1e-12 * max(1.0, abs(w @ t)):
                break
            f0 = phi(t, mu)
            s = 1.0
            while True:
                cand = t + s * step
                f1 = phi(cand, mu)
                if f1 is not None and f1 >= f0 + 0.25 * s * float(grad @ step):
                    break
                s *= 0.5
                if s < 1e-14:
                    break
            if s < 1e-14:
                break
            t = cand
            steps += 1
            if steps >= max_iter:
                break
        obj = float(w @ t)
        history.append(obj)
        if m * mu <= tol * max(1.0, obj):
            converged = True
            break
        mu /= 8.0
    return t, steps, history, converged


def optimize_lambda(c, D1, tol: float = 1e-10, max_iter: int = 10_000) -> OptimizationResult:
    """Maximizing weights ``lam_i = sqrt(t_i)`` for the designed rows ``D1``.

    Parameters
    ----------
    c : array_like, shape (N,)
        Unit vector of square-root low-pass coefficients.
    D1 : array_like, shape (L, N)
        Designed rows, each orthogonal to ``c`` and nonzero.
    tol : float
        Relative duality-gap target of the interior point solve.
    max_iter : int
        Budget of Newton steps per group.

    Returns
    -------
    OptimizationResult
        ``objective`` is ``trace(Q^T Q) = 1 + sum t_i |d_i|^2``; ``history``
        lists the objective after each barrier stage.
    """
    c = np.asarray(c, dtype=float).ravel()
    D1 = np.asarray(D1, dtype=float)
    D1 = D1.reshape(-1, c.size) if D1.size else np.zeros((0, c.size))
    L = D1.shape[0]
    if abs(np.linalg.norm(c) - 1.0) > 1e-10:
        raise InfeasibleDesignError("c must be a unit vector")
    if L == 0:
        return OptimizationResult(np.zeros(0), 1.0, True, 0, history=[1.0])
    norms = np.linalg.norm(D1, axis=1)
    if np.any(norms == 0):
        raise InfeasibleDesignError(f"designed rows {list(np.flatnonzero(norms == 0))} are zero")
    bad = np.flatnonzero(np.abs(D1 @ c) > _ORTH_TOL * np.maximum(1.0, norms))
    if bad.size:
        raise InfeasibleDesignError(f"designed rows {list(bad)} are not orthogonal to c")

    basis = _complement_basis(c)
    t = np.zeros(L)
    steps = 0
    converged = True
    groups = _row_groups(D1)
    stage_hist: list[np.ndarray] = []
    for idx in groups:
        if len(idx) == 1:
            t[idx[0]] = 1.0 / norms[idx[0]] ** 2
            continue
        G = basis.T @ D1[idx].T
        tg, k, hist, ok = _barrier_solve(G, norms[idx] ** 2, tol, max_iter)
        t[idx] = tg
        steps += k
        converged &= ok
        stage_hist.append(np.asarray(hist))

    w = norms**2
    closed = sum(w[i] * t[i] for g in groups if len(g) == 1 for i in g)
    # groups are independent, so report the running total stage by stage
    history = [1.0 + closed]
    if stage_hist:
        depth = max(len(h) for h in stage_hist)
        padded = [np.concatenate([h, np.full(depth - len(h), h[-1])]) for h in stage_hist]
        history = [1.0 + closed + float(v) for v in np.sum(padded, axis=0)]
    lam = np.sqrt(t)
    Q = np.vstack([c, lam[:, None] * D1])
    s = np.linalg.svd(Q, compute_uv=False)
    res = OptimizationResult(
        lambda_star=lam,
        objective=float(1.0 + w @ t),
        converged=bool(converged),
        iterations=steps,
        history=history,
        groups=[[int(i) for i in g] for g in groups],
    )
    if Q.shape[0] >= c.size and s[-1] > 1e-10:
        res.sigma_N = float(s[-1])
        res.error_constant = float(1.0 - s[-1] ** 2)
    return res


def spectral_norm_gram(Q) -> float:
    """``||Q^T Q||_2`` by a symmetric eigensolve."""
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    return float(np.linalg.eigvalsh(Q.T @ Q)[-1])


def error_constant(design) -> tuple[float, tuple[float, float]]:
    """Truncation constant ``sigma = 1 - sigma_N^2`` and frame bounds ``(sigma_N^2, 1)``.

    ``design`` is a completed :class:`~framelets.completion.FrameDesign`
    (or anything with a ``Q`` matrix).  Raises :class:`RankDeficientError`
    when ``rank(Q) < N``.
    """
    Q = design.Q
    N = Q.shape[1]
    s = np.linalg.svd(Q, compute_uv=False)
    sN = float(s[N - 1]) if s.size >= N else 0.0
    if sN <= 1e-10:
        raise RankDeficientError(
            f"rank(Q) < N = {N}: the designed rows do not span R^N, so dropping the "
            "completion channels does not leave a frame"
        )
    return 1.0 - sN**2, (sN**2, 1.0)
