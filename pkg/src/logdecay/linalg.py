"""Dense complex linear algebra used by the rest of the package.

Matrices and vectors are plain numpy arrays. Functions never modify their
inputs. The matrix exponential is a scaling-and-squaring Pade implementation
(Higham 2005); eigenvalues, singular values and solves go through LAPACK via
numpy.
"""
from __future__ import annotations

import math

import numpy as np

from .tolerances import DEFAULT, Tolerances

__all__ = [
    "EigenSolverError",
    "MatexpOverflowError",
    "NotHermitianError",
    "SingularShiftError",
    "adjoint",
    "as_matrix",
    "as_vector",
    "eig_general",
    "eig_hermitian",
    "hermitian_part",
    "matexp",
    "resolvent_apply",
    "self_commutator",
    "smallest_singular_value",
]


class NotHermitianError(ValueError):
    pass


class EigenSolverError(np.linalg.LinAlgError):
    pass


class MatexpOverflowError(OverflowError):
    pass


class SingularShiftError(np.linalg.LinAlgError):
    """Raised when ``M + shift*I`` is numerically singular.

    The offending shift is kept on the exception; it lies (numerically) in
    ``-spectrum(M)``.
    """

    def __init__(self, shift: complex, sigma_min: float):
        self.shift = complex(shift)
        self.sigma_min = float(sigma_min)
        super().__init__(
            f"M + ({self.shift:.6g}) I is singular (sigma_min={self.sigma_min:.3e}); "
            f"{-self.shift:.6g} is numerically an eigenvalue of M"
        )


def as_matrix(M) -> np.ndarray:
    """Validate a square, finite, non-empty matrix and return it as an array."""
    M = np.asarray(M)
    if M.dtype.kind not in "fc":
        M = M.astype(float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def as_vector(x, dim: int | None = None) -> np.ndarray:
    x = np.asarray(x)
    if x.dtype.kind not in "fc":
        x = x.astype(float)
    if x.ndim != 1 or x.size < 1:
        raise ValueError(f"expected a non-empty 1-d vector, got shape {x.shape}")
    if dim is not None and x.size != dim:
        raise ValueError(f"vector has length {x.size}, operator has dimension {dim}")
    if not np.all(np.isfinite(x)):
        raise ValueError("vector has non-finite entries")
    return x


def adjoint(M) -> np.ndarray:
    return as_matrix(M).conj().T.copy()


def hermitian_part(M) -> np.ndarray:
    M = as_matrix(M)
    return 0.5 * (M + M.conj().T)


def self_commutator(M) -> np.ndarray:
    """A*A - AA*, evaluated as [P, Q]/2 with P = A + A*, Q = A - A*.

    The commutator form avoids subtracting two large Gram matrices, so
    structurally zero entries stay exactly zero.
    """
    M = as_matrix(M)
    P = M + M.conj().T
    Q = M - M.conj().T
    C = 0.5 * (P @ Q - Q @ P)
    return 0.5 * (C + C.conj().T)


# -- matrix exponential -------------------------------------------------------

# Backward-error bounds for the [m/m] Pade approximant in double precision.
_THETA = {
    3: 1.495585217958292e-2,
    5: 2.539398330063230e-1,
    7: 9.504178996162932e-1,
    9: 2.097847961257068e0,
    13: 5.371920351148152e0,
}

_PADE = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
        2162160.0, 110880.0, 3960.0, 90.0, 1.0),
    13: (64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
         1187353796428800.0, 129060195264000.0, 10559470521600.0,
         670442572800.0, 33522128640.0, 1323241920.0, 40840800.0, 960960.0,
         16380.0, 182.0, 1.0),
}


def _pade_low(M: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    b = _PADE[m]
    ident = np.eye(M.shape[0], dtype=M.dtype)
    M2 = M @ M
    powers = [ident, M2]
    for _ in range(2, m // 2 + 1):
        powers.append(powers[-1] @ M2)
    odd = sum(b[2 * k + 1] * powers[k] for k in range(m // 2 + 1))
    even = sum(b[2 * k] * powers[k] for k in range(m // 2 + 1))
    return M @ odd, even


def _pade13(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    b = _PADE[13]
    ident = np.eye(M.shape[0], dtype=M.dtype)
    M2 = M @ M
    M4 = M2 @ M2
    M6 = M4 @ M2
    U = M @ (M6 @ (b[13] * M6 + b[11] * M4 + b[9] * M2)
             + b[7] * M6 + b[5] * M4 + b[3] * M2 + b[1] * ident)
    V = (M6 @ (b[12] * M6 + b[10] * M4 + b[8] * M2)
         + b[6] * M6 + b[4] * M4 + b[2] * M2 + b[0] * ident)
    return U, V


def matexp(M) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a Pade core.

    The lowest Pade degree whose backward-error bound covers the 1-norm is
    used; otherwise degree 13 with ``s = ceil(log2(|M|_1 / theta_13))``
    squarings.

    Raises
    ------
    MatexpOverflowError
        if the result is not representable in double precision.
    """
    M = as_matrix(M)
    if not np.iscomplexobj(M):
        M = M.astype(float)
    n = M.shape[0]
    norm1 = float(np.linalg.norm(M, 1))
    if norm1 == 0.0:
        return np.eye(n, dtype=M.dtype)

    s = 0
    for m in (3, 5, 7, 9):
        if norm1 <= _THETA[m]:
            U, V = _pade_low(M, m)
            break
    else:
        s = max(0, int(math.ceil(math.log2(norm1 / _THETA[13]))))
        if s > 1000:
            raise MatexpOverflowError(f"|M|_1 = {norm1:.3e} is out of range for matexp")
        U, V = _pade13(M / 2.0**s)

    with np.errstate(over="ignore", invalid="ignore"):
        try:
            R = np.linalg.solve(V - U, V + U)
        except np.linalg.LinAlgError as exc:
            raise MatexpOverflowError("Pade denominator is singular") from exc
        for _ in range(s):
            R = R @ R
    if not np.all(np.isfinite(R)):
        raise MatexpOverflowError(
            f"exponential overflows double precision (|M|_1 = {norm1:.3e})"
        )
    return R


# -- spectra ------------------------------------------------------------------

def eig_hermitian(H, *, vectors: bool = False, tol: Tolerances = DEFAULT):
    """Ascending eigenvalues of a Hermitian matrix.

    The input is accepted when ``|H - H*|_F <= tol.hermitian_rel * |H|_F`` and
    symmetrized before the solve. With ``vectors=True`` the orthonormal
    eigenvectors are returned as columns alongside the eigenvalues.
    """
    H = as_matrix(H)
    scale = np.linalg.norm(H)
    asym = np.linalg.norm(H - H.conj().T)
    if asym > tol.hermitian_rel * scale:
        raise NotHermitianError(
            f"matrix is not Hermitian: |H - H*| = {asym:.3e} > {tol.hermitian_rel:.1e} * {scale:.3e}"
        )
    Hs = 0.5 * (H + H.conj().T)
    if vectors:
        w, V = np.linalg.eigh(Hs)
        return w, V
    return np.linalg.eigvalsh(Hs)


def eig_general(M) -> np.ndarray:
    """All eigenvalues (with multiplicity) of a square matrix, as complex numbers.

    Ordered by ascending real part, then imaginary part, so results are
    reproducible.
    """
    M = as_matrix(M)
    try:
        w = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"eigenvalue iteration did not converge for {M.shape} input: {exc}") from exc
    w = np.asarray(w, dtype=complex)
    return w[np.lexsort((w.imag, w.real))]


def smallest_singular_value(M) -> float:
    M = as_matrix(M)
    return float(np.linalg.svd(M, compute_uv=False)[-1])


def resolvent_apply(M, shift: complex, *, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Return ``(M + shift*I)^{-1}``.

    Raises SingularShiftError when the shifted matrix is numerically singular.
    """
    M = as_matrix(M)
    S = M + shift * np.eye(M.shape[0])
    sv = np.linalg.svd(S, compute_uv=False)
    if sv[-1] <= tol.singular_rel * max(1.0, sv[0]):
        raise SingularShiftError(shift, sv[-1])
    return np.linalg.solve(S, np.eye(M.shape[0], dtype=S.dtype))
