"""Acceptance suite: one verdict line per criterion, shown in the pytest summary.

Run alone with ``pytest tests/test_acceptance.py -v`` or
``python3 tests/test_acceptance.py``.
"""
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from logdecay import gallery
from logdecay.analysis import (
    criterion_gap,
    criterion_minimize,
    hyponormality_defect,
    interior_mask,
    numerical_abscissa,
    restricted_hyponormality_defect,
    spectral_abscissa,
)
from logdecay.dynamics import (
    decay_envelope,
    default_grid,
    find_violating_triple,
    height_derivatives,
    logconvex_scan,
    logconvexity_gap,
    propagate,
    short_time_check,
    stretched,
    trajectory_scan,
)
from logdecay.linalg import eig_hermitian, hermitian_part
from logdecay.operators import (
    DiscretizationSpec,
    assemble_advection_diffusion,
    assemble_form,
    ellipticity_check,
    ellipticity_constant,
    norm_identity_check,
    sin2_bump,
)

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"
JORDAN = np.array([[1.0, 1.0], [0.0, 1.0]])
WITNESS = np.array([np.sqrt(3) / 2, 0.5])


def random_matrix(rng, dim):
    return (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(dim)


def random_unit(rng, dim):
    x = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return x / np.linalg.norm(x)


def test_01_criterion_trajectory_identity(record):
    start = time.perf_counter()
    worst = 0.0
    for k in range(50):
        rng = np.random.default_rng(k)
        # scalars have gap identically 0, where a relative error is undefined
        dim = int(rng.integers(2, 17))
        A, u0 = random_matrix(rng, dim), random_unit(rng, dim)
        for t in np.linspace(0.0, 3.0, 10):
            u = propagate(A, u0, t)
            expected = criterion_gap(A, u) / np.vdot(u, u).real
            got = logconvexity_gap(A, u0, t)
            worst = max(worst, abs(got - expected) / max(abs(expected), 1e-300))
    record(1, f"gap(t) = criterion_gap(u(t))/|u(t)|^2 on 50x10 samples, worst rel err {worst:.1e}",
           {"rel err <= 1e-9": worst <= 1e-9}, time.perf_counter() - start, 10)


def test_02_criterion_implies_logconvex_decay(record):
    start = time.perf_counter()
    min_gap, min_res, decreasing = np.inf, np.inf, True
    grid = default_grid(5.0, points=201)
    for k in range(25):
        rng = np.random.default_rng(100 + k)
        dim = int(rng.integers(2, 9))
        A = gallery("normal_random", dim=dim, seed=100 + k)
        min_gap = min(min_gap, criterion_minimize(A).gap)
        tr = trajectory_scan(A, random_unit(rng, dim), grid)
        min_res = min(min_res, tr.min_three_point_residual)
        decreasing &= tr.strictly_decreasing and len(tr.samples) == 201
    record(2, f"25 normal accretive: min gap {min_gap:.1e}, min three-point residual {min_res:.1e}",
           {"criterion gap >= -1e-9": min_gap >= -1e-9,
            "three-point residuals >= -1e-8": min_res >= -1e-8,
            "h strictly decreasing on 201 points": decreasing},
           time.perf_counter() - start, 60)


def test_03_violation_gives_local_failure(record):
    start = time.perf_counter()
    gap = criterion_gap(JORDAN, WITNESS)
    lgap = logconvexity_gap(JORDAN, WITNESS, 0.0)
    triple = find_violating_triple(JORDAN, WITNESS)
    record(3, f"Jordan block: gap {gap:.15f}, log-convexity gap {lgap:.15f}, triple {triple}",
           {"criterion gap = -0.125 +- 1e-10": abs(gap + 0.125) <= 1e-10,
            "log-convexity gap at 0 = -0.125 +- 1e-9": abs(lgap + 0.125) <= 1e-9,
            "violating triple near 0": triple is not None and triple[0][2] <= 2.0 and triple[1] < 0},
           time.perf_counter() - start, 5)


def test_04_abscissa_equality(record):
    start = time.perf_counter()
    worst = 0.0
    for k in range(25):
        A = gallery("normal_random", dim=2 + k % 15, seed=200 + k, re_min=0.1)
        worst = max(worst, abs(numerical_abscissa(A) - spectral_abscissa(A)))
    m, s = numerical_abscissa(JORDAN), spectral_abscissa(JORDAN)
    rng = np.random.default_rng(4)
    ordered = all(numerical_abscissa(B) <= spectral_abscissa(B) + 1e-8
                  for B in (random_matrix(rng, int(rng.integers(1, 65))) for _ in range(100)))
    record(4, f"normal |m - s| max {worst:.1e}; Jordan m={m!r}, s={s!r}",
           {"normal |m - s| <= 1e-8": worst <= 1e-8,
            "Jordan m = 0.5 +- 1e-10": abs(m - 0.5) <= 1e-10,
            "Jordan s = 1.0 +- 1e-10": abs(s - 1.0) <= 1e-10,
            "m <= s on 100 random matrices": ordered},
           time.perf_counter() - start, 30)


def test_05_derivative_formulas(record):
    start = time.perf_counter()
    eps = 1e-4
    e1 = e2 = 0.0
    for k in range(20):
        rng = np.random.default_rng(500 + k)
        dim = int(rng.integers(1, 17))
        A = random_matrix(rng, dim) + np.eye(dim)
        u0 = random_unit(rng, dim)

        def h(s):
            return np.linalg.norm(propagate(A, u0, s))

        for t in (0.1, 0.5, 1.0, 2.0, 3.0):
            _, h1, h2 = height_derivatives(A, u0, t)
            fd1 = (h(t + eps) - h(t - eps)) / (2 * eps)
            fd2 = (h(t + eps) - 2 * h(t) + h(t - eps)) / eps**2
            e1 = max(e1, abs(fd1 - h1) / abs(h1))
            e2 = max(e2, abs(fd2 - h2) / abs(h2))
    record(5, f"closed-form h', h'' vs central differences: rel err {e1:.1e}, {e2:.1e}",
           {"h' within 1e-6": e1 <= 1e-6, "h'' within 1e-4": e2 <= 1e-4},
           time.perf_counter() - start, 30)


def test_06_short_time_behaviour(record):
    start = time.perf_counter()
    fd_err = 0.0
    for k in range(20):
        rng = np.random.default_rng(600 + k)
        dim = int(rng.integers(1, 9))
        A = random_matrix(rng, dim)
        A /= np.linalg.norm(A, 2)  # unit operator norm keeps the Richardson remainder small
        r = short_time_check(A, random_unit(rng, dim))
        fd_err = max(fd_err, abs(r.h_prime_fd - r.minus_re))
    bound_ok, equality = True, 0.0
    for k in range(10):
        rng = np.random.default_rng(650 + k)
        A = gallery("normal_random", dim=4, seed=650 + k)
        bound_ok &= short_time_check(A, random_unit(rng, 4)).h_prime_closed <= -numerical_abscissa(A) + 1e-8
        _, V = eig_hermitian(hermitian_part(A), vectors=True)
        r = short_time_check(A, V[:, 0])
        equality = max(equality, abs(r.h_prime_closed - r.minus_m))
    record(6, f"h'(0): FD vs -Re<Au0,u0> max err {fd_err:.1e}; eigenvector equality err {equality:.1e}",
           {"FD within 1e-6": fd_err <= 1e-6, "h'(0) <= -m(A) + 1e-8": bound_ok,
            "equality at minimal eigenvector": equality <= 1e-8},
           time.perf_counter() - start, 10)


def test_07_hyponormal_chain(record):
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    candidates = [gallery("normal_random", dim=int(rng.integers(1, 17)), seed=700 + k) for k in range(30)]
    # generic matrices are not hyponormal and must be filtered out
    candidates += [random_matrix(rng, int(rng.integers(2, 17))) for _ in range(10)]
    candidates += [np.eye(3), np.diag([1.0, 2.0]), gallery("rotation_shift")]
    tested, worst = 0, np.inf
    for A in candidates:
        if hyponormality_defect(A) < -1e-12:
            continue
        tested += 1
        n = A.shape[0]
        X = rng.standard_normal((n, 10_000)) + 1j * rng.standard_normal((n, 10_000))
        X /= np.linalg.norm(X, axis=0)
        AX = A @ X
        re_ax = np.einsum("ij,ij->j", X.conj(), AX).real
        gaps = (np.einsum("ij,ij->j", X.conj(), A @ AX).real
                + np.einsum("ij,ij->j", AX.conj(), AX).real - 2 * re_ax**2)
        worst = min(worst, gaps.min())
    record(7, f"{tested} hyponormal matrices x 1e4 unit vectors: min gap {worst:.1e}",
           {"gap >= -1e-9": worst >= -1e-9, "some matrices tested": tested > 0},
           time.perf_counter() - start, 60)


def test_08_variational_example_facts(record):
    start = time.perf_counter()
    c0 = ellipticity_constant(0.0, 1.0)
    rec = ellipticity_check(assemble_form(DiscretizationSpec(0.0, 1.0, n=128)))
    A = assemble_advection_diffusion(DiscretizationSpec(0.0, 1.0, n=128, sign=1, bc="DN"))
    d, d_adj = hyponormality_defect(A), hyponormality_defect(A.conj().T)
    record(8, f"C0={c0}, measured ratio {rec.measured_min_ratio:.5f}, defects {d:.3g} / {d_adj:.3g}",
           {"C0 = 0.5": c0 == 0.5, "ratio >= 0.45": rec.measured_min_ratio >= 0.45,
            "DN defect < 0": d < 0, "adjoint defect < 0": d_adj < 0},
           time.perf_counter() - start, 60)


def test_09_interior_hyponormality_proxy(record):
    start = time.perf_counter()
    # the restricted defect is checked against eps(N) = 1e-6 h_N, which halves with the mesh
    eps, defects, ok = {}, {}, True
    for n in (64, 128):
        s = DiscretizationSpec(0.0, 1.0, n=n)
        eps[n] = 1e-6 * s.h
        for sign in (1, -1):
            A = assemble_advection_diffusion(DiscretizationSpec(0.0, 1.0, n=n, sign=sign))
            defects[n, sign] = restricted_hyponormality_defect(A, interior_mask(n, 2))
            ok &= defects[n, sign] >= -eps[n]
    bump = sin2_bump(0.25, 0.75)
    res = {n: norm_identity_check(DiscretizationSpec(0.0, 1.0, n=n), bump).residual for n in (64, 128)}
    eps_ratio = eps[128] / eps[64]
    res_ratio = abs(res[128] / res[64])
    record(9, f"restricted defects {min(defects.values()):.1e}, eps ratio {eps_ratio:.3f}, "
              f"norm-identity residuals {res[64]:.3g} -> {res[128]:.3g} (ratio {res_ratio:.3f})",
           {"defect >= -eps(N)": ok, "eps halves +-25%": abs(eps_ratio - 0.5) <= 0.125,
            "residual halves +-25%": abs(res_ratio - 0.5) <= 0.125},
           time.perf_counter() - start, 60)


def test_10_decay_envelope(record):
    start = time.perf_counter()
    operators = {
        "identity": (np.eye(2), np.ones(2) / np.sqrt(2)),
        "diag": (np.diag([1.0, 2.0]), np.ones(2) / np.sqrt(2)),
        "rotation_shift": (gallery("rotation_shift"), np.array([1.0, 0.0])),
        "normal_random": (gallery("normal_random", dim=4, seed=1), np.ones(4) / 2),
        "jordan": (JORDAN, WITNESS),
    }
    finite_and_holds, jordan_M = True, []
    for name, (A, u0) in operators.items():
        sig = spectral_abscissa(A)
        for frac in (0.25, 0.5):
            env = decay_envelope(A, u0, frac * sig)
            finite_and_holds &= bool(np.isfinite(env.M_eta) and env.holds)
            if name == "jordan":
                jordan_M.append(env.M_eta)
    record(10, f"envelopes finite and valid; Jordan M_eta = {jordan_M}",
           {"M_eta finite and envelope holds": finite_and_holds,
            "Jordan M_eta > 1": all(M > 1 for M in jordan_M)},
           time.perf_counter() - start, 20)


def test_11_scalar_logconvexity(record):
    start = time.perf_counter()
    t = np.linspace(0.0, 3.0, 121)
    exp = logconvex_scan(list(zip(t, np.exp(t))))
    t2 = np.linspace(0.5, 3.0, 121)
    expm1 = logconvex_scan(list(zip(t2, np.exp(t2) - 1)))
    g = stretched(np.cosh, 0.0, 1.0)
    st = logconvex_scan(list(zip(t, g(t))))
    record(11, f"e^t, e^t - 1, stretched cosh (flat segments {st.flat_segments})",
           {"e^t log-convex": exp.pointwise and exp.three_point,
            "e^t - 1 not log-convex": not expm1.pointwise and not expm1.three_point,
            "stretched log-convex": st.pointwise and st.three_point,
            "flat segment detected": bool(st.flat_segments) and not st.strictly_convex},
           time.perf_counter() - start, 1)


def _run_suite(out: Path):
    out.mkdir()
    for cfg in sorted(SCENARIOS.glob("*.json")):
        for command in ("classify", "evolve"):
            argv = [sys.executable, "-m", "logdecay", command, "--config", str(cfg),
                    "--out", str(out / f"{cfg.stem}.{command}.json")]
            if command == "evolve":
                argv += ["--csv", str(out / f"{cfg.stem}.csv")]
            subprocess.run(argv, check=False, capture_output=True)
    for family in ("jordan", "normal_accretive", "complex_symmetric"):
        subprocess.run([sys.executable, "-m", "logdecay", "search", "--family", family,
                        "--budget", "20", "--seed", "1", "--out", str(out / f"search.{family}.json")],
                       check=True, capture_output=True)
    return {p.name: p.read_bytes() for p in sorted(out.iterdir())}


def test_12_determinism(record, tmp_path):
    start = time.perf_counter()
    first = _run_suite(tmp_path / "a")
    second = _run_suite(tmp_path / "b")
    expected = 3 * len(list(SCENARIOS.glob("*.json"))) + 3
    record(12, f"scenario suite run twice: {len(first)} files compared",
           {"all outputs written": len(first) == expected,
            "byte-identical": first == second},
           time.perf_counter() - start)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
