"""Classification of matrix generators.

Covers the numerical abscissa m(A) = min Re <Ax, x> over unit x, the
spectral abscissa, accretivity, (restricted) hyponormality, and the
log-convexity criterion

    gap(A, x) = Re<A^2 x, x>|x|^2 + |Ax|^2 |x|^2 - 2 (Re<Ax, x>)^2  >= 0.

Inner products are linear in the first slot: <y, x> = x^H y.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import linalg
from .linalg import as_matrix, as_vector
from .sphere import SphereConfig, minimize_quartic
from .tolerances import DEFAULT, Tolerances

NOT_ACCRETIVE = "not-accretive"
ACCRETIVE = "accretive"
POSITIVELY_ACCRETIVE = "positively-accretive"


@dataclass(frozen=True)
class CriterionWitness:
    x: np.ndarray
    gap: float
    grad_norm: float = 0.0
    starts: int = 0


@dataclass(frozen=True)
class ClassificationReport:
    dim: int
    numerical_abscissa: float
    spectral_abscissa: float
    abscissa_equal: bool
    abscissa_tol: float
    criterion_min_gap: float
    criterion_witness: np.ndarray
    hyponormality_defect: float
    normality_defect: float
    accretivity_class: str
    restricted_hyponormality_defect: float | None = None
    # m(A) > 0 means both "positively" and "strictly" accretive for matrices
    note: str = "positively and strictly accretive coincide in finite dimension"


@dataclass(frozen=True)
class SectorProbeResult:
    delta: float
    samples: list[tuple[complex, float]]
    C_estimate: float
    skipped: list[complex] = field(default_factory=list)
    invertible_at_zero: bool = True


@dataclass(frozen=True)
class ClassifyConfig:
    sphere: SphereConfig = SphereConfig()
    tol: Tolerances = DEFAULT
    mask: Sequence[int] | None = None


def _inner(y: np.ndarray, x: np.ndarray) -> complex:
    # <y, x>, linear in y
    return complex(np.vdot(x, y))


def numerical_abscissa(A, *, tol: Tolerances = DEFAULT) -> float:
    return float(linalg.eig_hermitian(linalg.hermitian_part(A), tol=tol)[0])


def spectral_abscissa(A) -> float:
    return float(np.min(linalg.eig_general(A).real))


def criterion_gap(A, x) -> float:
    """Signed gap of the log-convexity criterion at ``x`` (degree 4 in x)."""
    A = as_matrix(A)
    x = as_vector(x, A.shape[0])
    nx2 = np.vdot(x, x).real
    if nx2 == 0.0:
        raise ValueError("criterion_gap is undefined at x = 0")
    Ax = A @ x
    re_ax = _inner(Ax, x).real
    re_a2x = _inner(A @ Ax, x).real
    return float(re_a2x * nx2 + np.vdot(Ax, Ax).real * nx2 - 2.0 * re_ax * re_ax)


def _criterion_forms(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # on |x| = 1 the gap is x*Sx - 2(x*Hx)^2
    A = A.astype(complex)
    A2 = A @ A
    S = 0.5 * (A2 + A2.conj().T) + A.conj().T @ A
    H = 0.5 * (A + A.conj().T)
    return S, H


def criterion_minimize(A, cfg: SphereConfig = SphereConfig()) -> CriterionWitness:
    """Smallest criterion gap found over the unit sphere, with its witness.

    This is numerical evidence: the value is an upper bound for the infimum.
    """
    A = as_matrix(A)
    S, H = _criterion_forms(A)
    res = minimize_quartic(S, H, cfg)
    x = res.x / np.linalg.norm(res.x)
    return CriterionWitness(x=x, gap=criterion_gap(A, x), grad_norm=res.grad_norm,
                            starts=res.starts_used)


def hyponormality_defect(A, *, tol: Tolerances = DEFAULT) -> float:
    """lambda_min(A*A - AA*); nonnegative exactly when |Ax| >= |A*x| for all x."""
    return float(linalg.eig_hermitian(linalg.self_commutator(A), tol=tol)[0])


def normality_defect(A) -> float:
    return float(np.linalg.norm(linalg.self_commutator(A), 2))


def restricted_hyponormality_defect(A, mask: Iterable[int], *, tol: Tolerances = DEFAULT) -> float:
    """min over unit x supported on ``mask`` of |Ax|^2 - |A*x|^2.

    ``mask`` holds 0-based indices.
    """
    A = as_matrix(A)
    idx = np.unique(np.asarray(list(mask), dtype=int))
    if idx.size == 0:
        raise ValueError("mask must be non-empty")
    if idx[0] < 0 or idx[-1] >= A.shape[0]:
        raise IndexError(f"mask indices out of range for dimension {A.shape[0]}")
    P = A + A.conj().T
    Q = A - A.conj().T
    C = 0.25 * (P[idx, :] @ Q[:, idx] - Q[idx, :] @ P[:, idx])
    C = C + C.conj().T
    return float(linalg.eig_hermitian(C, tol=tol)[0])


def interior_mask(dim: int, margin: int = 2) -> np.ndarray:
    """Indices at distance >= margin from both ends of a 1-d grid."""
    if dim - 2 * margin < 1:
        raise ValueError(f"dimension {dim} has no indices {margin} away from the boundary")
    return np.arange(margin, dim - margin)


def accretivity_class(m: float, band: float) -> str:
    if m < -band:
        return NOT_ACCRETIVE
    if m <= band:
        return ACCRETIVE
    return POSITIVELY_ACCRETIVE


def classify(A, cfg: ClassifyConfig = ClassifyConfig()) -> ClassificationReport:
    A = as_matrix(A)
    tol = cfg.tol
    norm = float(np.linalg.norm(A, 2))
    m = numerical_abscissa(A, tol=tol)
    sig = spectral_abscissa(A)
    abs_tol = tol.abscissa_rel * (1.0 + norm)
    witness = criterion_minimize(A, cfg.sphere)
    restricted = None
    if cfg.mask is not None:
        restricted = restricted_hyponormality_defect(A, cfg.mask, tol=tol)
    return ClassificationReport(
        dim=A.shape[0],
        numerical_abscissa=m,
        spectral_abscissa=sig,
        abscissa_equal=bool(abs(m - sig) <= abs_tol),
        abscissa_tol=abs_tol,
        criterion_min_gap=witness.gap,
        criterion_witness=witness.x,
        hyponormality_defect=hyponormality_defect(A, tol=tol),
        normality_defect=normality_defect(A),
        accretivity_class=accretivity_class(m, tol.accretive_rel * (1.0 + norm)),
        restricted_hyponormality_defect=restricted,
    )


def variational_criterion_gap(form, gram, A, u) -> float:
    """Form version of the criterion for a variational operator.

    ``form`` is the matrix F of a(u, v) = v^H F u and ``gram`` the matrix G of
    the ambient inner product <u, v> = v^H G u (None means identity); ``A``
    must satisfy G A = F. With a_Re(w, v) = (a(w, v) + conj(a(v, w)))/2 the
    result is

        Re a_Re(Au, u) <u, u> - (Re a(u, u))^2,

    which equals half of ``criterion_gap`` in the G-inner product.
    """
    F = as_matrix(form)
    A = as_matrix(A)
    u = as_vector(u, A.shape[0])
    G = np.eye(A.shape[0]) if gram is None else as_matrix(gram)
    uu = np.vdot(u, G @ u).real
    if uu == 0.0:
        raise ValueError("variational_criterion_gap is undefined at u = 0")
    F_sym = 0.5 * (F + F.conj().T)
    a_re = np.vdot(u, F_sym @ (A @ u)).real
    a_uu = np.vdot(u, F @ u).real
    return float(a_re * uu - a_uu * a_uu)


def sectoriality_probe(
    A,
    delta: float,
    sample_count: int = 61,
    *,
    rays: int = 9,
    margin: float = 1e-6,
    tol: Tolerances = DEFAULT,
) -> SectorProbeResult:
    """Sample |lam| |(A + lam I)^{-1}| over the sector |arg lam| < delta + pi/2.

    Rays are spread symmetrically over [-(delta + pi/2 - margin), +(...)]
    (``rays`` per side plus the positive axis, and always the imaginary
    axis), moduli log-spaced in [1e-3, 1e3]. Numerically singular shifts are
    skipped and listed.
    """
    if not 0.0 < delta < np.pi / 2:
        raise ValueError("delta must lie in (0, pi/2)")
    A = as_matrix(A)
    n = A.shape[0]
    edge = delta + np.pi / 2 - margin
    half = np.union1d(np.linspace(0.0, edge, rays + 1), [np.pi / 2])
    angles = np.concatenate([-half[:0:-1], half])
    moduli = np.logspace(-3, 3, sample_count)
    samples: list[tuple[complex, float]] = []
    skipped: list[complex] = []
    for phi in angles:
        for r in moduli:
            lam = complex(r * np.cos(phi), r * np.sin(phi))
            sv = np.linalg.svd(A + lam * np.eye(n), compute_uv=False)
            if sv[-1] <= tol.singular_rel * max(1.0, sv[0]):
                skipped.append(lam)
                continue
            samples.append((lam, float(abs(lam) / sv[-1])))
    sv0 = np.linalg.svd(A, compute_uv=False)
    values = [v for _, v in samples]
    return SectorProbeResult(
        delta=float(delta),
        samples=samples,
        C_estimate=float(max(values)) if values else float("inf"),
        skipped=skipped,
        invertible_at_zero=bool(sv0[-1] > tol.singular_rel * max(1.0, sv0[0])),
    )


# -- counterexample search ------------------------------------------------------

def _family_jordan(rng: np.random.Generator) -> np.ndarray:
    a = rng.uniform(0.1, 2.0)
    b = rng.uniform(0.0, 2.0)
    return np.array([[a, b], [0.0, a]])


def _family_normal_accretive(rng: np.random.Generator) -> np.ndarray:
    n = int(rng.integers(2, 5))
    lam = rng.uniform(0.1, 3.0, n) + 1j * rng.uniform(-3.0, 3.0, n)
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, _ = np.linalg.qr(Z)
    return (Q * lam) @ Q.conj().T


def _family_complex_symmetric(rng: np.random.Generator) -> np.ndarray:
    # A = B + iC with B, C real symmetric; accretive iff B is positive semidefinite
    X = rng.standard_normal((2, 2))
    B = X @ X.T + 0.05 * np.eye(2)
    C = rng.standard_normal((2, 2))
    C = 2.0 * (C + C.T)
    return B + 1j * C


FAMILIES: dict[str, Callable[[np.random.Generator], np.ndarray]] = {
    "jordan": _family_jordan,
    "normal_accretive": _family_normal_accretive,
    "complex_symmetric": _family_complex_symmetric,
}


@dataclass(frozen=True)
class SearchConfig:
    budget: int = 100
    seed: int = 0
    sphere: SphereConfig = SphereConfig(starts=4, samples=512, max_iter=300)
    tol: Tolerances = DEFAULT


def counterexample_search(family, cfg: SearchConfig = SearchConfig()) -> list[tuple[np.ndarray, CriterionWitness]]:
    """Draw ``cfg.budget`` members of a matrix family and keep criterion violations.

    ``family`` is a name from FAMILIES or a callable ``rng -> matrix``. Each
    reported witness has been re-evaluated with ``criterion_gap``.
    """
    if isinstance(family, str):
        try:
            make = FAMILIES[family]
        except KeyError:
            raise KeyError(f"unknown family {family!r}; available: {sorted(FAMILIES)}") from None
    else:
        make = family
    found = []
    streams = np.random.SeedSequence(cfg.seed).spawn(max(cfg.budget, 0))
    for k, ss in enumerate(streams):
        A = as_matrix(make(np.random.default_rng(ss)))
        sphere = dataclasses.replace(cfg.sphere, seed=cfg.seed * 1_000_003 + k)
        w = criterion_minimize(A, sphere)
        if w.gap < -cfg.tol.violation_threshold:
            recheck = criterion_gap(A, w.x)
            if abs(recheck - w.gap) <= 1e-12 * max(1.0, abs(w.gap)):
                found.append((A, w))
    return found
