import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pcmrecon.errors import SolverError
from pcmrecon.proxops import CgSettings, cg_least_squares, conjugate_gradient, prox_l1, prox_quadratic, shrink


def test_prox_l1_examples():
    np.testing.assert_array_equal(prox_l1(np.array([3.0]), 1.0), [2.0])
    np.testing.assert_array_equal(prox_l1(np.array([-0.5]), 1.0), [0.0])
    np.testing.assert_array_equal(prox_l1(np.array([-4.0, 0.2, 1.5]), 1.0), [-3.0, 0.0, 0.5])


def test_shrink_examples():
    assert shrink(2.0, 0.5) == 1.5
    assert shrink(-2.0, 0.5) == -1.5
    assert shrink(0.3, 0.5) == 0.0
    assert isinstance(shrink(2.0, 0.5), float)


def _grid_search_prox(v, lam):
    # two-level grid search of lam |x| + (x - v)^2 / 2
    lo, hi = -abs(v) - 1, abs(v) + 1
    x = np.linspace(lo, hi, 20001)
    best = x[np.argmin(lam * np.abs(x) + 0.5 * (x - v) ** 2)]
    step = (hi - lo) / 20000
    x = np.linspace(best - step, best + step, 20001)
    return x[np.argmin(lam * np.abs(x) + 0.5 * (x - v) ** 2)]


def test_prox_l1_matches_grid_search(rng):
    v = 3 * rng.standard_normal(25)
    for lam in (0.1, 0.7, 2.0):
        got = prox_l1(v, lam)
        want = np.array([_grid_search_prox(vi, lam) for vi in v])
        np.testing.assert_allclose(got, want, rtol=0, atol=1e-6)


finite = st.floats(-100, 100, allow_nan=False)


@given(arrays(np.float64, 10, elements=finite), st.floats(0.0, 10.0))
def test_prox_l1_variational_characterization(v, lam):
    p = prox_l1(v, lam)
    nz = p != 0
    np.testing.assert_allclose(v[nz] - p[nz], lam * np.sign(p[nz]), atol=1e-12)
    assert np.all(np.abs(v[~nz]) <= lam + 1e-12)


@given(arrays(np.float64, 8, elements=finite), arrays(np.float64, 8, elements=finite), st.floats(0.0, 5.0))
def test_prox_l1_firmly_nonexpansive(v1, v2, lam):
    p1, p2 = prox_l1(v1, lam), prox_l1(v2, lam)
    assert np.linalg.norm(p1 - p2) <= np.linalg.norm(v1 - v2) + 1e-12
    assert np.sum((p1 - p2) ** 2) <= (p1 - p2) @ (v1 - v2) + 1e-9


def test_prox_quadratic_examples(rng):
    v = rng.standard_normal(6)
    np.testing.assert_allclose(prox_quadratic(v, np.zeros((6, 6)), 0.7), v, atol=1e-12)
    np.testing.assert_allclose(prox_quadratic(v, np.eye(6), 1.0), v / 2, atol=1e-12)


def test_prox_quadratic_matches_dense_solve(rng):
    B = rng.standard_normal((8, 8))
    A = B @ B.T
    v = rng.standard_normal(8)
    for lam in (0.05, 1.0, 20.0):
        want = np.linalg.solve(A + np.eye(8) / lam, v / lam)
        got = prox_quadratic(v, A, lam)
        np.testing.assert_allclose(got, want, rtol=0, atol=1e-8)
        # first-order condition
        np.testing.assert_allclose(A @ got + (got - v) / lam, 0, atol=1e-8)
    with pytest.raises(ValueError):
        prox_quadratic(v, A, 0.0)


def test_cg_least_squares_identity():
    b = np.array([1.0, -2.0, 0.5])
    np.testing.assert_allclose(cg_least_squares(np.eye(3), b), b)


def test_cg_least_squares_matches_pinv(rng):
    for _ in range(5):
        A = rng.standard_normal((12, 4)) + 1j * rng.standard_normal((12, 4))
        b = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        # real-coefficient least squares: stack real and imaginary parts
        stacked = np.vstack([A.real, A.imag])
        want = np.linalg.pinv(stacked) @ np.concatenate([b.real, b.imag])
        np.testing.assert_allclose(cg_least_squares(A, b), want, rtol=0, atol=1e-8)


def test_cg_least_squares_rank_deficient(rng):
    A = rng.standard_normal((12, 4))
    A[:, 3] = A[:, 1]
    b = rng.standard_normal(12)
    c = cg_least_squares(A, b)
    best = np.linalg.norm(A @ (np.linalg.pinv(A) @ b) - b)
    assert abs(np.linalg.norm(A @ c - b) - best) < 1e-8


def test_cg_least_squares_residual_monotone(rng):
    A = rng.standard_normal((40, 20)) + 1j * rng.standard_normal((40, 20))
    b = rng.standard_normal(40) + 1j * rng.standard_normal(40)
    history = []
    cg_least_squares(A, b, callback=lambda c: history.append(np.linalg.norm(A @ c - b)))
    assert len(history) > 3
    assert np.all(np.diff(history) <= 1e-10 * history[0])


def test_cg_raises_with_residual_on_nonconvergence(rng):
    B = rng.standard_normal((30, 30))
    M = B @ B.T + 1e-6 * np.eye(30)
    with pytest.raises(SolverError) as info:
        conjugate_gradient(lambda x: M @ x, rng.standard_normal(30), settings=CgSettings(1e-12, 2))
    assert info.value.iterations == 2 and info.value.residual > 1e-12


def test_cg_settings_validation():
    with pytest.raises(ValueError):
        CgSettings(0.0, 10)
    with pytest.raises(ValueError):
        CgSettings(1e-8, 0)
