"""Brute-force eigenpairs of ``A x^{m-1} = lambda x^{[m-1]}``.

Matrices (``m = 2``) go through :func:`numpy.linalg.eig`. Higher orders use
multi-start Newton on the square system in ``(x, lambda)`` with the affine
normalization ``x_k = 1``; the pivot ``k`` is cycled over all components
across starts. All starts run as one batch.

Completeness for ``m >= 3`` is probabilistic. The spectrum has
``n (m-1)^(n-1)`` eigenvalues counted with multiplicity, so desk scale means
roughly ``n <= 5`` and ``m <= 4``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .tensor import Tensor, UsageError, apply, jacobian

__all__ = ["EigenPair", "OracleConfig", "eigen_solve", "residual", "normalize"]

logger = logging.getLogger(__name__)

_BLOWUP = 1e8


@dataclass(frozen=True)
class EigenPair:
    lam: complex
    x: np.ndarray
    residual: float


@dataclass(frozen=True)
class OracleConfig:
    """Multi-start Newton settings; ``starts=None`` means ``200 n (m-1)``."""

    starts: int | None = None
    newton_tol: float = 1e-12
    max_iter: int = 200
    dedup_tol: float = 1e-6
    seed: int = 42

    def __post_init__(self):
        if self.starts is not None and self.starts < 1:
            raise UsageError(f"starts must be >= 1, got {self.starts}")
        if not (self.newton_tol > 0 and self.dedup_tol > 0):
            raise UsageError("tolerances must be positive")
        if self.max_iter < 1:
            raise UsageError(f"max_iter must be >= 1, got {self.max_iter}")

    def n_starts(self, A: Tensor) -> int:
        return self.starts if self.starts is not None else 200 * A.dim * (A.order - 1)


def normalize(x) -> np.ndarray:
    """Scale ``x`` so its first max-modulus component equals 1."""
    x = np.asarray(x, dtype=complex)
    mags = np.abs(x)
    top = mags.max(axis=-1, keepdims=True)
    if np.any(top == 0):
        raise UsageError("eigenvector must be nonzero")
    pivot = np.argmax(mags, axis=-1)
    return x / np.take_along_axis(x, pivot[..., None], axis=-1)


def residual(A: Tensor, lam, x) -> float | np.ndarray:
    """Infinity norm of ``A x^{m-1} - lam x^{[m-1]}`` after max-modulus normalization.

    Accepts a batch: ``lam`` of shape ``(s,)`` with ``x`` of shape ``(s, n)``.
    """
    x = np.asarray(x, dtype=complex)
    if x.shape[-1] != A.dim:
        raise UsageError(f"vector length {x.shape[-1]} does not match dim {A.dim}")
    x = normalize(x)
    lam = np.asarray(lam, dtype=complex)
    F = apply(A, x) - lam[..., None] * x ** (A.order - 1)
    out = np.abs(F).max(axis=-1)
    return float(out) if out.ndim == 0 else out


def _scale(A: Tensor) -> float:
    return max(1.0, float(np.abs(A._values).max())) if A.nnz else 1.0


def _solve_batch(M, rhs):
    try:
        return np.linalg.solve(M, rhs[..., None])[..., 0], np.ones(len(M), dtype=bool)
    except np.linalg.LinAlgError:
        out = np.zeros_like(rhs)
        ok = np.ones(len(M), dtype=bool)
        for s in range(len(M)):
            try:
                out[s] = np.linalg.solve(M[s], rhs[s])
            except np.linalg.LinAlgError:
                ok[s] = False
        return out, ok


def _newton(A: Tensor, X, lam, pivot, cfg: OracleConfig, threshold: float, scale: float):
    """Batched Newton. Returns ``(X, lam, converged_mask)``."""
    m = A.order
    S = len(lam)
    rows = np.arange(S)
    converged = np.zeros(S, dtype=bool)
    alive = np.ones(S, dtype=bool)
    for _ in range(cfg.max_iter):
        act = np.flatnonzero(alive & ~converged)
        if act.size == 0:
            break
        x, lm, k = X[act], lam[act], pivot[act]
        P = x ** (m - 1)
        F = apply(A, x) - lm[:, None] * P
        with np.errstate(all="ignore"):
            res = np.abs(F).max(axis=1) / np.maximum(np.abs(x).max(axis=1), 1.0) ** (m - 1)
        bad = ~np.isfinite(res) | (np.abs(x).max(axis=1) > _BLOWUP) | (np.abs(lm) > _BLOWUP * scale)
        done = res <= threshold
        converged[act[done & ~bad]] = True
        alive[act[bad]] = False
        step = ~done & ~bad
        act, x, lm, k, P, F = act[step], x[step], lm[step], k[step], P[step], F[step]
        if act.size == 0:
            continue
        J = jacobian(A, x)
        idx = np.arange(A.dim)
        J[:, idx, idx] -= (m - 1) * lm[:, None] * x ** (m - 2)
        # the pivot column carries d/dlambda since x_k is frozen at 1
        J[np.arange(act.size), :, k] = -P
        with np.errstate(all="ignore"):
            delta, ok = _solve_batch(J, -F)
        alive[act[~ok]] = False
        sel = rows[: act.size]
        lam_step = delta[sel, k]
        delta[sel, k] = 0.0
        X[act[ok]] += delta[ok]
        lam[act[ok]] += lam_step[ok]
    return X, lam, converged & alive


def _projective_gap(x, Y):
    """``1 - |<x, y>| / (|x||y|)`` for each row ``y`` of ``Y``."""
    num = np.abs(Y.conj() @ x)
    den = np.linalg.norm(Y, axis=1) * np.linalg.norm(x)
    return 1.0 - num / den


def _dedup(cands, tol):
    cands = sorted(cands, key=lambda c: (c.lam.real, c.lam.imag))
    kept: list[EigenPair] = []
    lams = np.zeros(0, dtype=complex)
    vecs = None
    for c in cands:
        if kept:
            close = np.flatnonzero(np.abs(lams - c.lam) <= tol)
            if close.size and np.any(_projective_gap(c.x, vecs[close]) <= tol):
                continue
        kept.append(c)
        lams = np.append(lams, c.lam)
        vecs = c.x[None, :] if vecs is None else np.vstack([vecs, c.x])
    return kept


def _exact_matrix(A: Tensor) -> list[EigenPair]:
    M = A.to_dense()
    w, V = np.linalg.eig(M)
    out = []
    for k in range(A.dim):
        x = normalize(V[:, k])
        out.append(EigenPair(complex(w[k]), x, residual(A, w[k], x)))
    out.sort(key=lambda p: (p.lam.real, p.lam.imag))
    return out


def eigen_solve(A: Tensor, cfg: OracleConfig | None = None, method: str = "auto") -> list[EigenPair]:
    """Find eigenpairs of ``A``.

    ``method`` is ``"auto"`` (exact for matrices, Newton otherwise),
    ``"exact"`` (matrices only) or ``"newton"``. Newton results are
    deduplicated by eigenvalue distance together with projective eigenvector
    distance, both at ``cfg.dedup_tol``. The exact path returns all ``n``
    eigenvalues with multiplicity.
    """
    cfg = cfg or OracleConfig()
    if method not in ("auto", "exact", "newton"):
        raise UsageError(f"unknown method {method!r}")
    if method == "exact" and A.order != 2:
        raise UsageError("the exact path is only available for m = 2")
    if method == "exact" or (method == "auto" and A.order == 2):
        return _exact_matrix(A)

    n, m = A.dim, A.order
    S = cfg.n_starts(A)
    rng = np.random.default_rng(cfg.seed)
    radius = np.sqrt(rng.uniform(size=(S, n)))
    phase = rng.uniform(0, 2 * np.pi, size=(S, n))
    X = radius * np.exp(1j * phase)
    pivot = np.arange(S) % n
    X[np.arange(S), pivot] = 1.0
    lam = apply(A, X)[np.arange(S), pivot]

    scale = _scale(A)
    threshold = cfg.newton_tol * scale
    X, lam, ok = _newton(A, X, lam, pivot, cfg, threshold, scale)
    if not ok.any():
        logger.warning("eigen_solve: none of %d starts converged", S)
        return []
    Xn = normalize(X[ok])
    res = residual(A, lam[ok], Xn)
    keep = res <= threshold
    cands = [EigenPair(complex(l), x, float(r)) for l, x, r in zip(lam[ok][keep], Xn[keep], res[keep])]
    logger.info("eigen_solve: %d/%d starts converged", len(cands), S)
    return _dedup(cands, cfg.dedup_tol)
