"""Concrete generators: advection-diffusion discretizations and test matrices.

Grid conventions on (alpha, beta) with h = (beta - alpha)/(n + 1):

* DD: interior nodes x_1..x_n, both endpoints eliminated.
* DN, DR: nodes x_1..x_{n+1} with x_{n+1} = beta kept; alpha eliminated.

Interior rows use -u'' ~ (-u_{i-1} + 2u_i - u_{i+1})/h^2 and
u' ~ (u_{i+1} - u_{i-1})/(2h). At beta a ghost node u_{n+2} closes the
boundary condition to second order:

* Neumann u'(beta) = 0:            u_{n+2} = u_n
* Robin u'(beta) + c u(beta) = 0:  u_{n+2} = u_n - 2hc u_{n+1}

so the last row is (-2/h^2, 2/h^2) for DN and (-2/h^2, 2/h^2 + 2c/h - sign*c)
for DR. The nodal matrix is self-adjoint-compatible only in the trapezoid
inner product h * sum w_i u_i conj(v_i) with w = (1, ..., 1, 1/2), so by default
the operator is returned in an orthonormal basis of that inner product,
W^{1/2} A W^{-1/2}. For DD the weights are all one and both bases agree.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, optimize

from .linalg import as_vector

BOUNDARY_CONDITIONS = ("DD", "DN", "DR")


@dataclass(frozen=True)
class DiscretizationSpec:
    alpha: float = 0.0
    beta: float = 1.0
    n: int = 64
    sign: int = 1
    bc: str = "DD"
    robin: float = 1.0

    def __post_init__(self):
        if not self.alpha < self.beta:
            raise ValueError(f"need alpha < beta, got ({self.alpha}, {self.beta})")
        if int(self.n) != self.n or self.n < 3:
            raise ValueError(f"need n >= 3 interior nodes, got {self.n}")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign!r}")
        if self.bc not in BOUNDARY_CONDITIONS:
            raise ValueError(f"bc must be one of {BOUNDARY_CONDITIONS}, got {self.bc!r}")

    @property
    def h(self) -> float:
        return (self.beta - self.alpha) / (self.n + 1)

    @property
    def dim(self) -> int:
        return self.n if self.bc == "DD" else self.n + 1

    def nodes(self) -> np.ndarray:
        return self.alpha + self.h * np.arange(1, self.dim + 1)

    def weights(self) -> np.ndarray:
        w = np.ones(self.dim)
        if self.bc != "DD":
            w[-1] = 0.5
        return w

    def to_dict(self) -> dict:
        d = {"alpha": float(self.alpha), "beta": float(self.beta), "n": int(self.n),
             "sign": "+" if self.sign > 0 else "-", "bc": self.bc}
        if self.bc == "DR":
            d["robin"] = float(self.robin)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "DiscretizationSpec":
        sign = d.get("sign", "+")
        if isinstance(sign, str):
            if sign not in ("+", "-"):
                raise ValueError(f"sign must be '+' or '-', got {sign!r}")
            sign = 1 if sign == "+" else -1
        return cls(alpha=float(d.get("alpha", 0.0)), beta=float(d.get("beta", 1.0)),
                   n=int(d["n"]), sign=int(sign), bc=str(d.get("bc", "DD")),
                   robin=float(d.get("robin", 1.0)))


def assemble_advection_diffusion(spec: DiscretizationSpec, basis: str = "orthonormal") -> np.ndarray:
    """Finite-difference matrix of -u'' + sign*u' (see module docstring).

    ``basis="nodal"`` returns the raw ghost-node matrix acting on nodal
    values; ``"orthonormal"`` (default) the same operator in an orthonormal
    basis of the trapezoid inner product.
    """
    h, s, d = spec.h, spec.sign, spec.dim
    A = np.zeros((d, d))
    i = np.arange(d)
    A[i, i] = 2.0 / h**2
    A[i[1:], i[:-1]] = -1.0 / h**2 - s / (2.0 * h)
    A[i[:-1], i[1:]] = -1.0 / h**2 + s / (2.0 * h)
    if spec.bc != "DD":
        A[-1, -2] = -2.0 / h**2
        if spec.bc == "DR":
            c = spec.robin
            A[-1, -1] = 2.0 / h**2 + 2.0 * c / h - s * c
    if basis == "nodal":
        return A
    if basis != "orthonormal":
        raise ValueError(f"unknown basis {basis!r}")
    r = np.sqrt(spec.weights())
    return r[:, None] * A / r[None, :]


def _central_difference(spec: DiscretizationSpec) -> np.ndarray:
    d, h = spec.n, spec.h
    D1 = np.zeros((d, d))
    i = np.arange(d)
    D1[i[:-1], i[1:]] = 1.0 / (2.0 * h)
    D1[i[1:], i[:-1]] = -1.0 / (2.0 * h)
    return D1


# -- variational form -------------------------------------------------------------

@dataclass(frozen=True)
class FormMatrices:
    """Matrices of a(u, v) = int u' conj(v)' + u' conj(v) dx on the DN grid.

    Convention: a(u, v) = v^H (stiffness + advection) u. ``mass`` is the
    trapezoid L2 Gram matrix and ``sobolev_gram`` = mass + stiffness the
    squared H1 norm.
    """
    stiffness: np.ndarray
    advection: np.ndarray
    mass: np.ndarray
    sobolev_gram: np.ndarray
    C0: float
    spec: DiscretizationSpec

    @property
    def form(self) -> np.ndarray:
        return self.stiffness + self.advection

    def operator(self) -> np.ndarray:
        """Nodal matrix A with <Au, v> = a(u, v) in the trapezoid inner product."""
        return self.form / np.diag(self.mass)[:, None]

    def a(self, u, v) -> complex:
        return complex(np.vdot(v, self.form @ u))


def ellipticity_constant(alpha: float, beta: float) -> float:
    return min(0.5, (beta - alpha) ** -2)


def assemble_form(spec: DiscretizationSpec) -> FormMatrices:
    """P1 stiffness/advection matrices with alpha eliminated and beta kept.

    Piecewise-linear functions make the trapezoid rule exact for both
    integrands, so Re a(u, u) = |u_h'|^2 + |u(beta)|^2 / 2 holds exactly for
    the interpolant u_h.
    """
    s = DiscretizationSpec(spec.alpha, spec.beta, spec.n, spec.sign, "DN", spec.robin)
    d, h = s.dim, s.h
    i = np.arange(d)
    K = np.zeros((d, d))
    K[i, i] = 2.0 / h
    K[-1, -1] = 1.0 / h
    K[i[1:], i[:-1]] = -1.0 / h
    K[i[:-1], i[1:]] = -1.0 / h
    B = np.zeros((d, d))
    B[i[:-1], i[1:]] = 0.5
    B[i[1:], i[:-1]] = -0.5
    B[-1, -1] = 0.5
    M = np.diag(h * s.weights())
    return FormMatrices(stiffness=K, advection=B, mass=M, sobolev_gram=M + K,
                        C0=ellipticity_constant(spec.alpha, spec.beta), spec=s)


@dataclass(frozen=True)
class EllipticityRecord:
    measured_min_ratio: float
    random_min_ratio: float
    C0: float
    fraction: float
    passes: bool


def ellipticity_check(form: FormMatrices, trials: int = 200, *, seed: int = 0,
                      fraction: float = 0.9, refine: bool = True) -> EllipticityRecord:
    """Smallest Re a(u, u) / |u|_1^2 found over random trials plus refinement.

    Random vectors give an upper bound; the best one seeds an L-BFGS descent of
    the Rayleigh quotient, which can only lower it.
    """
    Ks = np.real(0.5 * (form.form + form.form.conj().T))
    G = np.real(form.sobolev_gram)
    rng = np.random.default_rng(seed)
    d = Ks.shape[0]

    def ratio(u):
        return float(u @ Ks @ u / (u @ G @ u))

    # smooth and rough trial vectors: random walks plus white noise
    X = np.concatenate([np.cumsum(rng.standard_normal((d, trials // 2)), axis=0),
                        rng.standard_normal((d, trials - trials // 2))], axis=1)
    vals = np.einsum("ij,ij->j", X, Ks @ X) / np.einsum("ij,ij->j", X, G @ X)
    k = int(np.argmin(vals))
    random_min = float(vals[k])
    best = random_min
    if refine:
        def fun(u):
            num = u @ Ks @ u
            den = u @ G @ u
            r = num / den
            return r, 2.0 * (Ks @ u - r * (G @ u)) / den

        res = optimize.minimize(fun, X[:, k], jac=True, method="L-BFGS-B",
                                options={"maxiter": 5000, "gtol": 1e-12, "ftol": 1e-15})
        best = min(best, ratio(res.x))
    return EllipticityRecord(measured_min_ratio=best, random_min_ratio=random_min,
                             C0=form.C0, fraction=fraction,
                             passes=bool(best >= fraction * form.C0))


# -- partial-integration identity --------------------------------------------------

@dataclass(frozen=True)
class Profile:
    """A test function with its first two derivatives."""
    u: Callable[[np.ndarray], np.ndarray]
    du: Callable[[np.ndarray], np.ndarray]
    d2u: Callable[[np.ndarray], np.ndarray]
    support: tuple[float, float]


def sin2_bump(left: float, right: float) -> Profile:
    """sin^2(pi (x - left)/(right - left)) on [left, right], zero elsewhere.

    C^1 with u = u' = 0 at the ends; u'' jumps there.
    """
    L = right - left
    k = np.pi / L

    def inside(x):
        x = np.asarray(x, dtype=float)
        return (x > left) & (x < right), x

    def u(x):
        m, x = inside(x)
        return np.where(m, np.sin(k * (x - left)) ** 2, 0.0)

    def du(x):
        m, x = inside(x)
        return np.where(m, k * np.sin(2 * k * (x - left)), 0.0)

    def d2u(x):
        m, x = inside(x)
        return np.where(m, 2 * k * k * np.cos(2 * k * (x - left)), 0.0)

    return Profile(u, du, d2u, (left, right))


def zero_profile() -> Profile:
    z = lambda x: np.zeros_like(np.asarray(x, dtype=float))  # noqa: E731
    return Profile(z, z, z, (0.0, 0.0))


@dataclass(frozen=True)
class NormIdentityResult:
    residual: float
    discrete_residual: float
    h: float


def norm_identity_check(spec: DiscretizationSpec, u) -> NormIdentityResult:
    """Residual of |A u|^2 = |u''|^2 + |u'|^2 for u vanishing near both ends.

    ``u`` is a Profile or a vector of nodal values on the DD grid; it must be
    zero on the two nodes next to each boundary. Norms are the h-weighted
    discrete L2 norms.

    ``discrete_residual`` compares |Au|^2 with the discrete |D2 u|^2 + |D1 u|^2
    (summation by parts, zero up to rounding). ``residual`` compares with the
    exact integrals of a Profile, or equals ``discrete_residual`` for a plain
    vector; it decays at first order because u'' of a sin^2 bump jumps.
    """
    if spec.bc != "DD":
        raise ValueError("the partial-integration identity is checked on the DD grid")
    x = spec.nodes()
    vals = u.u(x) if isinstance(u, Profile) else as_vector(u, spec.dim)
    edge = np.r_[0, 1, spec.dim - 2, spec.dim - 1]
    if np.any(vals[edge] != 0):
        raise ValueError("u must vanish on the two nodes adjacent to each boundary")
    h = spec.h
    A = assemble_advection_diffusion(spec, "nodal")
    D1 = _central_difference(spec)
    D2 = -(A - spec.sign * D1)

    def sq(v):
        return float(h * np.vdot(v, v).real)

    lhs = sq(A @ vals)
    discrete = lhs - sq(D2 @ vals) - sq(D1 @ vals)
    if not isinstance(u, Profile):
        return NormIdentityResult(residual=discrete, discrete_residual=discrete, h=h)
    a, b = u.support
    if a < b:
        exact = (integrate.quad(lambda s: float(u.d2u(s)) ** 2, a, b, limit=200)[0]
                 + integrate.quad(lambda s: float(u.du(s)) ** 2, a, b, limit=200)[0])
    else:
        exact = 0.0
    return NormIdentityResult(residual=lhs - exact, discrete_residual=discrete, h=h)


# -- named presets ----------------------------------------------------------------

def _identity(dim: int = 2):
    return np.eye(int(dim))


def _diag(values=(1.0, 2.0)):
    return np.diag(np.asarray(values))


def _jordan(a: float = 1.0, b: float = 1.0):
    return np.array([[a, b], [0.0, a]], dtype=float)


def _rotation_shift(omega: float = 1.0, sigma: float = 1.0):
    return np.array([[sigma, -omega], [omega, sigma]], dtype=float)


def _normal_random(dim: int = 4, seed: int = 0, re_min: float = 0.1, re_max: float = 3.0,
                   im_max: float = 3.0):
    rng = np.random.default_rng(seed)
    dim = int(dim)
    lam = rng.uniform(re_min, re_max, dim) + 1j * rng.uniform(-im_max, im_max, dim)
    Q, _ = np.linalg.qr(rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    return (Q * lam) @ Q.conj().T


def _complex_symmetric_random(dim: int = 2, seed: int = 0, shift: float = 0.05):
    rng = np.random.default_rng(seed)
    dim = int(dim)
    X = rng.standard_normal((dim, dim))
    C = rng.standard_normal((dim, dim))
    return X @ X.T + shift * np.eye(dim) + 1j * (C + C.T)


def _adv_diff(spec: DiscretizationSpec | dict | None = None, basis: str = "orthonormal", **fields):
    if spec is None:
        spec = DiscretizationSpec.from_dict(fields) if fields else DiscretizationSpec()
    elif isinstance(spec, dict):
        spec = DiscretizationSpec.from_dict(spec)
    return assemble_advection_diffusion(spec, basis)


PRESETS: dict[str, Callable[..., np.ndarray]] = {
    "identity": _identity,
    "diag": _diag,
    "jordan": _jordan,
    "rotation_shift": _rotation_shift,
    "normal_random": _normal_random,
    "adv_diff": _adv_diff,
    "complex_symmetric_random": _complex_symmetric_random,
}


def gallery(name: str, **params) -> np.ndarray:
    """Deterministic named test matrix; see PRESETS for the available names."""
    try:
        make = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown gallery matrix {name!r}; available: {', '.join(PRESETS)}") from None
    return make(**params)
