import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from logdecay import gallery
from logdecay.analysis import (
    ACCRETIVE,
    NOT_ACCRETIVE,
    POSITIVELY_ACCRETIVE,
    ClassifyConfig,
    SearchConfig,
    classify,
    counterexample_search,
    criterion_gap,
    criterion_minimize,
    hyponormality_defect,
    interior_mask,
    numerical_abscissa,
    restricted_hyponormality_defect,
    sectoriality_probe,
    spectral_abscissa,
    variational_criterion_gap,
)
from logdecay.sphere import SphereConfig

JORDAN = np.array([[1.0, 1.0], [0.0, 1.0]])
ROTATION = np.array([[0.0, -1.0], [1.0, 0.0]])
WITNESS = np.array([np.sqrt(3) / 2, 0.5])


def unit(rng, n):
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return x / np.linalg.norm(x)


@pytest.mark.parametrize("A, m", [(np.eye(3), 1.0), (JORDAN, 0.5), (np.diag([1 + 2j, 3]), 1.0)])
def test_numerical_abscissa(A, m):
    assert numerical_abscissa(A) == pytest.approx(m, abs=1e-14)


@pytest.mark.parametrize("A, s", [(np.diag([1 + 2j, 3]), 1.0), (JORDAN, 1.0), (ROTATION, 0.0)])
def test_spectral_abscissa(A, s):
    assert spectral_abscissa(A) == pytest.approx(s, abs=1e-14)


def test_criterion_gap_examples():
    x = np.array([1.0, 0.0, 0.0])
    assert criterion_gap(np.eye(3), x) == 0.0
    assert criterion_gap(JORDAN, WITNESS) == pytest.approx(-0.125, abs=1e-15)
    assert criterion_gap(np.diag([1.0, 2.0]), np.ones(2) / np.sqrt(2)) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(ValueError):
        criterion_gap(JORDAN, np.zeros(2))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(1, 8),
       r=st.floats(0.1, 10), phi=st.floats(0, 2 * np.pi))
def test_criterion_gap_is_homogeneous_of_degree_four(seed, dim, r, phi):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    x = unit(rng, dim)
    c = r * np.exp(1j * phi)
    g = criterion_gap(A, x)
    scale = 1 + np.linalg.norm(A, 2) ** 2
    assert criterion_gap(A, c * x) == pytest.approx(abs(c) ** 4 * g, rel=1e-10, abs=1e-10 * abs(c) ** 4 * scale)


def test_criterion_minimize_identity_and_jordan():
    w = criterion_minimize(np.eye(3))
    assert abs(w.gap) < 1e-14
    assert np.linalg.norm(w.x) == pytest.approx(1.0, abs=1e-12)
    w = criterion_minimize(JORDAN)
    assert w.gap <= -0.125 + 1e-12
    assert w.gap == pytest.approx(criterion_gap(JORDAN, w.x), abs=1e-12)


@pytest.mark.parametrize("b", [0.3, 1.0, 2.5])
def test_jordan_minimum_is_minus_b_squared_over_eight(b):
    # for [[a, b], [0, a]] the exact infimum over the unit sphere is -b^2/8
    A = np.array([[0.7, b], [0.0, 0.7]])
    assert criterion_minimize(A).gap == pytest.approx(-b * b / 8, abs=1e-10)


def test_criterion_minimize_is_deterministic():
    A = gallery("complex_symmetric_random", dim=3, seed=2)
    w1 = criterion_minimize(A, SphereConfig(seed=5))
    w2 = criterion_minimize(A, SphereConfig(seed=5))
    assert w1.gap == w2.gap
    np.testing.assert_array_equal(w1.x, w2.x)


def test_normal_accretive_matrix_has_no_violation_under_dense_sampling():
    A = gallery("normal_random", dim=5, seed=11)
    w = criterion_minimize(A)
    assert w.gap >= -1e-9
    rng = np.random.default_rng(0)
    X = rng.standard_normal((5, 100_000)) + 1j * rng.standard_normal((5, 100_000))
    X /= np.linalg.norm(X, axis=0)
    AX = A @ X
    re_ax = np.einsum("ij,ij->j", X.conj(), AX).real
    re_a2x = np.einsum("ij,ij->j", X.conj(), A @ AX).real
    gaps = re_a2x + np.einsum("ij,ij->j", AX.conj(), AX).real - 2 * re_ax**2
    assert gaps.min() >= -1e-9
    assert w.gap <= gaps.min() + 1e-9


@pytest.mark.parametrize("A, d", [(np.diag([1 + 1j, 2]), 0.0), (JORDAN, -1.0),
                                  (np.array([[0.0, 1.0], [0.0, 0.0]]), -1.0)])
def test_hyponormality_defect(A, d):
    assert hyponormality_defect(A) == pytest.approx(d, abs=1e-14)


def test_self_commutator_trace_vanishes_so_defect_is_never_positive():
    rng = np.random.default_rng(8)
    for _ in range(20):
        A = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        assert hyponormality_defect(A) <= 1e-10 * np.linalg.norm(A, 2) ** 2


def test_restricted_defect_on_jordan_single_indices():
    # |A e_k|^2 - |A* e_k|^2: column norm minus row norm
    assert restricted_hyponormality_defect(JORDAN, [0]) == pytest.approx(-1.0)
    assert restricted_hyponormality_defect(JORDAN, [1]) == pytest.approx(1.0)
    assert restricted_hyponormality_defect(JORDAN, [0, 1]) == pytest.approx(hyponormality_defect(JORDAN))


def test_restricted_defect_normal_and_errors():
    A = gallery("normal_random", dim=4, seed=1)
    assert abs(restricted_hyponormality_defect(A, [1, 2])) < 1e-12
    with pytest.raises(ValueError):
        restricted_hyponormality_defect(A, [])


def test_interior_mask():
    np.testing.assert_array_equal(interior_mask(8, 2), [2, 3, 4, 5])
    with pytest.raises(ValueError):
        interior_mask(4, 2)


def test_classify_examples():
    r = classify(np.diag([1.0, 2.0]))
    assert (r.numerical_abscissa, r.spectral_abscissa, r.abscissa_equal) == (1.0, 1.0, True)
    assert r.criterion_min_gap >= -1e-9
    assert r.normality_defect == 0.0
    r = classify(JORDAN)
    assert r.numerical_abscissa == pytest.approx(0.5, abs=1e-15)
    assert r.spectral_abscissa == 1.0
    assert not r.abscissa_equal
    assert r.criterion_min_gap <= -0.125 + 1e-12
    assert r.accretivity_class == POSITIVELY_ACCRETIVE
    r = classify(ROTATION)
    assert r.numerical_abscissa == 0.0 and abs(r.spectral_abscissa) < 1e-15
    assert r.accretivity_class == ACCRETIVE
    assert classify(-np.eye(2)).accretivity_class == NOT_ACCRETIVE


def test_numerical_abscissa_never_exceeds_spectral():
    rng = np.random.default_rng(9)
    for dim in (2, 5, 16, 64):
        A = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        assert numerical_abscissa(A) <= spectral_abscissa(A) + 1e-8


def test_abscissa_gap_implies_criterion_violation():
    rng = np.random.default_rng(10)
    hits = 0
    for _ in range(15):
        A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) + 3 * np.eye(3)
        r = classify(A, ClassifyConfig(sphere=SphereConfig(starts=8, samples=1000)))
        if r.numerical_abscissa < r.spectral_abscissa - 1e-6:
            hits += 1
            assert r.criterion_min_gap < 0
    assert hits > 0


def test_variational_gap_examples():
    u = np.array([1.0, 0.0])
    assert variational_criterion_gap(np.eye(2), None, np.eye(2), u) == 0.0
    D = np.diag([1.0, 2.0])
    assert variational_criterion_gap(D, None, D, np.ones(2) / np.sqrt(2)) == pytest.approx(0.25)


def test_variational_gap_is_half_the_criterion_gap():
    rng = np.random.default_rng(12)
    for _ in range(10):
        A = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        u = unit(rng, 5)
        assert variational_criterion_gap(A, None, A, u) == pytest.approx(0.5 * criterion_gap(A, u), abs=1e-10)


def test_variational_gap_with_gram_matrix():
    # A = G^{-1} F; the criterion in the G-inner product is the plain one for G^{1/2} A G^{-1/2}
    rng = np.random.default_rng(13)
    L = rng.standard_normal((4, 4))
    G = L @ L.T + 4 * np.eye(4)
    F = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    A = np.linalg.solve(G, F)
    w, V = np.linalg.eigh(G)
    R = (V * np.sqrt(w)) @ V.T
    u = unit(rng, 4)
    B = R @ A @ np.linalg.inv(R)
    assert variational_criterion_gap(F, G, A, u) == pytest.approx(0.5 * criterion_gap(B, R @ u), rel=1e-10)


def test_sectoriality_probe():
    r = sectoriality_probe(np.eye(2), np.pi / 4)
    assert r.C_estimate <= 2.0
    assert all(v >= 0 for _, v in r.samples)
    assert all(abs(np.angle(lam)) < np.pi / 4 + np.pi / 2 for lam, _ in r.samples)
    r = sectoriality_probe(np.diag([1.0, 2.0]), np.pi / 4)
    assert np.isfinite(r.C_estimate) and not r.skipped
    r = sectoriality_probe(ROTATION, np.pi / 4)
    assert r.skipped or r.C_estimate > 1e4
    with pytest.raises(ValueError):
        sectoriality_probe(np.eye(2), np.pi / 2)


def test_counterexample_search_families():
    found = counterexample_search("jordan", SearchConfig(budget=30))
    assert found
    for A, w in found:
        assert w.gap == pytest.approx(criterion_gap(A, w.x), abs=1e-12)
        assert w.gap < -1e-8
    assert counterexample_search("normal_accretive", SearchConfig(budget=30)) == []
    assert counterexample_search("jordan", SearchConfig(budget=0)) == []
    with pytest.raises(KeyError):
        counterexample_search("bogus")


def test_complex_symmetric_search_reports_verified_violations():
    found = counterexample_search("complex_symmetric", SearchConfig(budget=20, seed=1))
    for A, w in found:
        np.testing.assert_allclose(A, A.T)
        assert numerical_abscissa(A) >= 0
        assert criterion_gap(A, w.x) < -1e-8
