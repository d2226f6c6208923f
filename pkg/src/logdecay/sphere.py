"""Minimization of quartic forms over the complex unit sphere.

The objective is ``q(x) = x*Sx - 2 (x*Hx)^2`` with S, H Hermitian; the
log-convexity criterion gap has this form on |x| = 1. The search is
multi-start Riemannian gradient descent with Armijo backtracking, seeded from
dense random sampling and from eigenvectors of H and S.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SphereConfig:
    starts: int = 32
    samples: int = 10_000
    max_iter: int = 500
    gtol: float = 1e-8
    armijo: float = 1e-4
    seed: int = 0


@dataclass(frozen=True)
class SphereResult:
    x: np.ndarray
    value: float
    grad_norm: float
    iterations: int
    starts_used: int


def quartic_value(S: np.ndarray, H: np.ndarray, x: np.ndarray) -> float:
    qs = np.vdot(x, S @ x).real
    qh = np.vdot(x, H @ x).real
    return float(qs - 2.0 * qh * qh)


def _batch_values(S: np.ndarray, H: np.ndarray, X: np.ndarray) -> np.ndarray:
    # X holds unit vectors as columns
    qs = np.einsum("ij,ij->j", X.conj(), S @ X).real
    qh = np.einsum("ij,ij->j", X.conj(), H @ X).real
    return qs - 2.0 * qh * qh


def _riemannian_grad(S, H, x):
    Hx = H @ x
    qh = np.vdot(x, Hx).real
    g = 2.0 * (S @ x) - 8.0 * qh * Hx
    return g - np.vdot(x, g).real * x


def _random_unit(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    X = rng.standard_normal((n, count)) + 1j * rng.standard_normal((n, count))
    return X / np.linalg.norm(X, axis=0)


def _descend(S, H, x, cfg: SphereConfig, scale: float):
    f = quartic_value(S, H, x)
    step = 1.0 / scale
    it = 0
    g = _riemannian_grad(S, H, x)
    gn = float(np.linalg.norm(g))
    while it < cfg.max_iter and gn > cfg.gtol * scale:
        it += 1
        while True:
            y = x - step * g
            y = y / np.linalg.norm(y)
            fy = quartic_value(S, H, y)
            if fy <= f - cfg.armijo * step * gn * gn or step < 1e-16 / scale:
                break
            step *= 0.5
        if fy > f:
            break
        stalled = f - fy <= 1e-15 * scale
        x, f = y, fy
        if stalled:
            break
        g = _riemannian_grad(S, H, x)
        gn = float(np.linalg.norm(g))
        step *= 2.0
    return x, f, gn, it


def minimize_quartic(S, H, cfg: SphereConfig = SphereConfig()) -> SphereResult:
    """Smallest value of ``x*Sx - 2(x*Hx)^2`` found on the complex unit sphere.

    Deterministic for a given ``cfg.seed``. The returned value is an upper
    bound on the true minimum.
    """
    S = np.asarray(S, dtype=complex)
    H = np.asarray(H, dtype=complex)
    n = S.shape[0]
    scale = 2.0 * np.linalg.norm(S, 2) + 8.0 * np.linalg.norm(H, 2) ** 2 + 1e-300

    streams = np.random.SeedSequence(cfg.seed).spawn(cfg.starts + 1)
    candidates = []
    if cfg.samples > 0:
        rng = np.random.default_rng(streams[-1])
        best_cols = np.empty((n, 0), dtype=complex)
        done = 0
        while done < cfg.samples:
            chunk = min(2048, cfg.samples - done)
            X = _random_unit(rng, n, chunk)
            vals = _batch_values(S, H, X)
            order = np.argsort(vals, kind="stable")[:4]
            best_cols = np.concatenate([best_cols, X[:, order]], axis=1)
            done += chunk
        keep = np.argsort(_batch_values(S, H, best_cols), kind="stable")[:4]
        candidates.extend(best_cols[:, k] for k in keep)

    _, VH = np.linalg.eigh(H)
    _, VS = np.linalg.eigh(S)
    candidates.extend([VH[:, 0], VH[:, -1], VS[:, 0]])
    # mixtures of extreme eigenvectors of H are where the quartic term bites
    if n > 1:
        for w in (np.sqrt(0.75), np.sqrt(0.25)):
            v = w * VH[:, 0] + np.sqrt(1 - w * w) * VH[:, -1]
            candidates.append(v / np.linalg.norm(v))
    for k in range(cfg.starts):
        candidates.append(_random_unit(np.random.default_rng(streams[k]), n, 1)[:, 0])

    best = None
    for x0 in candidates:
        x, f, gn, it = _descend(S, H, x0.astype(complex), cfg, scale)
        if best is None or f < best.value:
            best = SphereResult(x=x, value=f, grad_norm=gn, iterations=it,
                                starts_used=len(candidates))
    return best
