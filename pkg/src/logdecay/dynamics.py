"""Solutions of u' + Au = 0 and their height function h(t) = |e^{-tA} u0|.

h, h' and h'' are evaluated in closed form from u(t):

    h'  = -Re<Au, u> / |u|
    h'' = (<A^2u, u> + 2<Au, Au> + <u, A^2u>) / (2|u|) - (Re<Au, u>)^2 / |u|^3

Log-convexity of h is checked both pointwise (h h'' - h'^2 >= 0) and through
the three-point inequality h(s) <= h(r)^{(t-s)/(t-r)} h(t)^{(s-r)/(t-r)}.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import linalg
from .analysis import criterion_gap, numerical_abscissa, spectral_abscissa
from .linalg import as_matrix, as_vector
from .tolerances import DEFAULT, Tolerances

CSV_HEADER = ("t", "h", "h_prime", "h_second", "logconvexity_gap")


class Height(NamedTuple):
    h: float
    h_prime: float
    h_second: float


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    u: np.ndarray
    h: float
    h_prime: float
    h_second: float
    logconvexity_gap: float


@dataclass(frozen=True)
class Trajectory:
    u0: np.ndarray
    grid: np.ndarray
    samples: list[TrajectorySample]
    strictly_decreasing: bool
    pointwise_logconvex: bool
    three_point_logconvex: bool
    derivative_nondecreasing: bool
    min_logconvexity_gap: float
    min_three_point_residual: float
    gap_tol: float
    truncated: bool = False
    operator_id: str = ""

    def flags(self) -> dict[str, bool]:
        return {
            "strictly_decreasing": self.strictly_decreasing,
            "pointwise_logconvex": self.pointwise_logconvex,
            "three_point_logconvex": self.three_point_logconvex,
            "derivative_nondecreasing": self.derivative_nondecreasing,
            "truncated": self.truncated,
        }

    def rows(self) -> list[tuple[float, float, float, float, float]]:
        return [(s.t, s.h, s.h_prime, s.h_second, s.logconvexity_gap) for s in self.samples]


@dataclass(frozen=True)
class DecayEnvelope:
    eta: float
    M_eta: float
    t_max_ratio: float
    at_right_endpoint: bool
    holds: bool


@dataclass(frozen=True)
class ShortTimeRecord:
    h_prime_closed: float
    h_prime_fd: float
    minus_m: float
    minus_re: float
    fd_matches: bool
    bound_holds: bool


@dataclass(frozen=True)
class ScalarLogConvexity:
    pointwise: bool
    three_point: bool
    convex: bool
    strictly_convex: bool
    min_second_difference: float
    min_three_point_residual: float
    flat_segments: list[tuple[float, float]] = field(default_factory=list)


def _operator_and_state(A, u0):
    A = as_matrix(A)
    u0 = as_vector(u0, A.shape[0])
    if not np.any(u0):
        raise ValueError("initial value u0 must be non-zero")
    return A, u0


def propagate(A, u0, t: float) -> np.ndarray:
    """u(t) = e^{-tA} u0; u(0) is returned as an exact copy of u0."""
    A, u0 = _operator_and_state(A, u0)
    if t < 0:
        raise ValueError("propagation is only defined for t >= 0")
    if t == 0:
        return u0.copy()
    return linalg.matexp(-t * A) @ u0


def _height_at(A: np.ndarray, u: np.ndarray) -> Height:
    h = float(np.linalg.norm(u))
    # same formulas on v = u/h; keeps h^3 from underflowing at small heights
    v = u / h
    Av = A @ v
    re_av = np.vdot(v, Av).real
    h1 = -h * re_av
    h2 = h * (np.vdot(v, A @ Av).real + np.vdot(Av, Av).real - re_av**2)
    return Height(h, float(h1), float(h2))


def height_derivatives(A, u0, t: float) -> Height:
    A, u0 = _operator_and_state(A, u0)
    return _height_at(A, propagate(A, u0, t))


def logconvexity_gap(A, u0, t: float) -> float:
    """h h'' - (h')^2 at time t; negative values mean log h is locally concave."""
    h, h1, h2 = height_derivatives(A, u0, t)
    return h * h2 - h1 * h1


def three_point_check(A, u0, r: float, s: float, t: float) -> float:
    """h(r)^{(t-s)/(t-r)} h(t)^{(s-r)/(t-r)} - h(s); >= 0 where log-convexity holds."""
    if not 0 <= r < s < t:
        raise ValueError(f"need 0 <= r < s < t, got ({r}, {s}, {t})")
    A, u0 = _operator_and_state(A, u0)
    hr, hs, ht = (float(np.linalg.norm(propagate(A, u0, x))) for x in (r, s, t))
    return _three_point(hr, hs, ht, r, s, t)


def _three_point(hr, hs, ht, r, s, t) -> float:
    theta = (s - r) / (t - r)
    return float(hr ** (1.0 - theta) * ht**theta - hs)


def default_grid(t_max: float, points: int = 201, first_step: float = 1e-4,
                 refinement: str = "geometric") -> np.ndarray:
    """Time grid starting at 0.

    The geometric grid puts its first step at ``first_step`` and spaces the
    rest logarithmically up to ``t_max`` so the short-time regime is resolved.
    """
    if t_max < 0:
        raise ValueError("t_max must be >= 0")
    if t_max == 0 or points < 2:
        return np.zeros(1)
    if refinement == "uniform" or t_max <= first_step:
        return np.linspace(0.0, t_max, points)
    if refinement != "geometric":
        raise ValueError(f"unknown grid refinement {refinement!r}")
    return np.concatenate([[0.0], np.geomspace(first_step, t_max, points - 1)])


def _check_grid(grid) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or grid[0] != 0.0:
        raise ValueError("grid must be a 1-d array starting at t = 0")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    return grid


def _subgrid(n: int, k: int = 12) -> np.ndarray:
    return np.unique(np.round(np.linspace(0, n - 1, min(k, n))).astype(int))


def trajectory_scan(A, u0, grid=None, *, tol: Tolerances = DEFAULT,
                    operator_id: str = "") -> Trajectory:
    """Sample u, h, h', h'' and the log-convexity gap along ``grid``.

    Samples whose height underflows ``tol.underflow`` end the scan early.
    Three-point residuals are taken over all triples of a 12-point subgrid.
    """
    A, u0 = _operator_and_state(A, u0)
    grid = _check_grid(default_grid(5.0) if grid is None else grid)
    norm = float(np.linalg.norm(A, 2))
    n0 = float(np.linalg.norm(u0))
    gap_tol = tol.gap_rel * (1.0 + norm**2) * n0**2

    samples: list[TrajectorySample] = []
    truncated = False
    for t in grid:
        u = propagate(A, u0, float(t))
        if np.linalg.norm(u) < tol.underflow:
            truncated = True
            break
        ht = _height_at(A, u)
        samples.append(TrajectorySample(
            t=float(t), u=u, h=ht.h, h_prime=ht.h_prime, h_second=ht.h_second,
            logconvexity_gap=ht.h * ht.h_second - ht.h_prime**2,
        ))
    grid = grid[: len(samples)]

    hp = np.array([s.h_prime for s in samples])
    gaps = np.array([s.logconvexity_gap for s in samples])
    hs = np.array([s.h for s in samples])
    slope_tol = tol.gap_rel * (1.0 + norm) * n0

    residuals = [
        _three_point(hs[i], hs[j], hs[k], grid[i], grid[j], grid[k])
        for i, j, k in itertools.combinations(_subgrid(len(samples)), 3)
    ]
    min_res = float(min(residuals)) if residuals else 0.0

    return Trajectory(
        u0=u0,
        grid=grid,
        samples=samples,
        strictly_decreasing=bool(np.all(hp < 0)),
        pointwise_logconvex=bool(np.all(gaps >= -gap_tol)),
        three_point_logconvex=bool(min_res >= -tol.three_point_abs * n0),
        derivative_nondecreasing=bool(np.all(np.diff(hp) >= -slope_tol)),
        min_logconvexity_gap=float(gaps.min()) if gaps.size else 0.0,
        min_three_point_residual=min_res,
        gap_tol=gap_tol,
        truncated=truncated,
        operator_id=operator_id,
    )


def find_violating_triple(A, u0, *, eps_min: float = 1e-4, eps_max: float = 1.0,
                          count: int = 40) -> tuple[tuple[float, float, float], float] | None:
    """Look for r < s < t near 0 with a negative three-point residual.

    Scans equally spaced triples (k eps, (k+1) eps, (k+2) eps), k = 0, 1, for
    eps on a log grid. Returns the most negative one, or None.
    """
    A, u0 = _operator_and_state(A, u0)
    best = None
    for eps in np.geomspace(eps_min, eps_max, count):
        for k in (0, 1):
            r, s, t = k * eps, (k + 1) * eps, (k + 2) * eps
            res = three_point_check(A, u0, r, s, t)
            if res < 0 and (best is None or res < best[1]):
                best = ((float(r), float(s), float(t)), res)
    return best


def decay_envelope(A, u0, eta: float, grid=None) -> DecayEnvelope:
    """Smallest M with h(t) <= M e^{-t eta} |u0| on the grid.

    ``eta`` must satisfy 0 <= eta < spectral abscissa. The result records
    whether the maximum sits at the last grid point, in which case the grid
    horizon is too short to trust M.
    """
    A, u0 = _operator_and_state(A, u0)
    sig = spectral_abscissa(A)
    if not 0.0 <= eta < sig:
        raise ValueError(f"eta must satisfy 0 <= eta < spectral abscissa = {sig:.6g}, got {eta}")
    if grid is None:
        grid = default_grid(30.0 / max(sig - eta, 1e-3), points=401, refinement="uniform")
    grid = _check_grid(grid)
    n0 = float(np.linalg.norm(u0))
    heights = np.array([np.linalg.norm(propagate(A, u0, float(t))) for t in grid])
    # log space: on long horizons h underflows while e^{t eta} overflows
    with np.errstate(divide="ignore"):
        log_ratio = np.log(heights / n0) + grid * eta
    ratios = np.exp(log_ratio)
    k = int(np.argmax(log_ratio))
    M = float(ratios[k])
    bound = np.exp(np.log(M) - grid * eta) * n0
    return DecayEnvelope(
        eta=float(eta),
        M_eta=M,
        t_max_ratio=float(grid[k]),
        at_right_endpoint=bool(k == len(grid) - 1 and len(grid) > 1),
        holds=bool(np.all(heights <= bound * (1 + 1e-15))),
    )


def short_time_check(A, u0, *, steps: tuple[float, float] = (1e-3, 5e-4),
                     tol: Tolerances = DEFAULT) -> ShortTimeRecord:
    """Compare the right derivative h'(0) with -Re<Au0, u0> and -m(A).

    u0 is normalized first. The finite-difference slope uses two one-sided
    quotients combined by Richardson extrapolation (steps must halve).
    """
    A, u0 = _operator_and_state(A, u0)
    u0 = u0 / np.linalg.norm(u0)
    e1, e2 = steps
    h0 = 1.0

    def quotient(e):
        return (float(np.linalg.norm(propagate(A, u0, e))) - h0) / e

    d1, d2 = quotient(e1), quotient(e2)
    ratio = e1 / e2
    fd = (ratio * d2 - d1) / (ratio - 1.0)
    closed = _height_at(A, u0).h_prime
    minus_re = -float(np.vdot(u0, A @ u0).real)
    minus_m = -numerical_abscissa(A, tol=tol)
    return ShortTimeRecord(
        h_prime_closed=closed,
        h_prime_fd=float(fd),
        minus_m=minus_m,
        minus_re=minus_re,
        fd_matches=bool(abs(fd - minus_re) <= tol.short_time_abs),
        bound_holds=bool(closed <= minus_m + tol.slope_abs),
    )


# -- scalar functions -----------------------------------------------------------

def stretched(f: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> Callable[[np.ndarray], np.ndarray]:
    """f on t < a, the constant f(a) on [a, b), and f shifted right by b - a after.

    The shift by b - a keeps the result continuous at t = b.
    """
    if not a < b:
        raise ValueError("need a < b")

    def g(t):
        t = np.asarray(t, dtype=float)
        return np.where(t < a, f(np.minimum(t, a)),
                        np.where(t < b, f(a), f(np.maximum(t - (b - a), a))))
    return g


def logconvex_scan(samples: Sequence[tuple[float, float]], *, tol: float = 1e-10,
                   subgrid: int = 24) -> ScalarLogConvexity:
    """Log-convexity verdicts for a sampled positive function.

    Pointwise: divided second differences of log f >= -tol. Three-point: the
    interpolation inequality over all triples of a ``subgrid``-point subset.
    Flat segments are maximal runs of at least two intervals on which f is
    constant to within ``tol`` relative.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 3:
        raise ValueError("need at least three (t, f) samples")
    t, f = arr[:, 0], arr[:, 1]
    if np.any(np.diff(t) <= 0):
        raise ValueError("sample times must be strictly increasing")
    if np.any(f <= 0):
        raise ValueError("log-convexity needs f > 0")

    def second_diff(y):
        slopes = np.diff(y) / np.diff(t)
        return 2.0 * np.diff(slopes) / (t[2:] - t[:-2])

    g = np.log(f)
    d2_log = second_diff(g)
    d2_f = second_diff(f)
    scale = max(1.0, float(np.max(np.abs(d2_log))))
    fscale = max(1.0, float(np.max(np.abs(d2_f))))

    idx = _subgrid(len(t), subgrid)
    residuals = [_three_point(f[i], f[j], f[k], t[i], t[j], t[k]) / max(f[j], 1e-300)
                 for i, j, k in itertools.combinations(idx, 3)]
    min_res = float(min(residuals))

    flat = np.abs(np.diff(f)) <= tol * np.maximum(np.abs(f[:-1]), 1e-300)
    segments = []
    k = 0
    while k < len(flat):
        if flat[k]:
            j = k
            while j + 1 < len(flat) and flat[j + 1]:
                j += 1
            if j > k:
                segments.append((float(t[k]), float(t[j + 1])))
            k = j + 1
        else:
            k += 1

    return ScalarLogConvexity(
        pointwise=bool(np.all(d2_log >= -tol * scale)),
        three_point=bool(min_res >= -tol),
        convex=bool(np.all(d2_f >= -tol * fscale)),
        strictly_convex=bool(np.all(d2_f > tol * fscale)),
        min_second_difference=float(d2_log.min()),
        min_three_point_residual=min_res,
        flat_segments=segments,
    )
