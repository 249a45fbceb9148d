import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pcmrecon.errors import ShapeError
from pcmrecon.metrics import MetricReport, evaluate, psnr, rela_err, snr, ssim


def test_psnr_examples(rng):
    u = np.ones((2, 2))
    uh = np.array([[1.0, 1.0], [1.0, 0.0]])
    assert psnr(u, uh) == pytest.approx(10 * math.log10(4), abs=1e-12)
    assert psnr(u, u) == math.inf
    v = rng.random((8, 8)) + 0.5
    e = rng.standard_normal((8, 8))
    assert psnr(v, v + e) - psnr(v, v + 2 * e) == pytest.approx(10 * math.log10(4), abs=1e-10)


def test_snr_hand_arithmetic():
    u = np.array([[1.0, -1.0], [-2.0, 2.0]])
    c = 0.5
    uh = u + c
    # numerator sum((c - u)^2), denominator 4 c^2
    num = (0.5 - 1) ** 2 + (0.5 + 1) ** 2 + (0.5 + 2) ** 2 + (0.5 - 2) ** 2
    assert snr(u, uh) == pytest.approx(10 * math.log10(num / (4 * c * c)), abs=1e-12)
    assert snr(u, uh, use_truth_mean=True) == pytest.approx(10 * math.log10(10 / 1.0), abs=1e-12)
    assert snr(u, u) == math.inf


def test_rela_err_examples(rng):
    u = rng.standard_normal((5, 5))
    assert rela_err(u, u) == 0.0
    assert rela_err(u, np.zeros_like(u)) == pytest.approx(1.0)
    assert rela_err(u, 2 * u) == pytest.approx(1.0)


def test_shape_mismatch():
    with pytest.raises(ShapeError):
        psnr(np.ones(3), np.ones(4))


def ssim_reference(u, uh, window=8, k1=0.01, k2=0.03):
    # explicit loop over every window position, standard formula with unbiased variances
    L = u.max() - u.min()
    c1, c2 = (k1 * L) ** 2, (k2 * L) ** 2
    vals = []
    for i in range(u.shape[0] - window + 1):
        for j in range(u.shape[1] - window + 1):
            a = u[i:i + window, j:j + window].ravel()
            b = uh[i:i + window, j:j + window].ravel()
            ma, mb = a.mean(), b.mean()
            va, vb = a.var(ddof=1), b.var(ddof=1)
            cab = np.cov(a, b)[0, 1]
            vals.append((2 * ma * mb + c1) * (2 * cab + c2) / ((ma**2 + mb**2 + c1) * (va + vb + c2)))
    return float(np.mean(vals))


def test_ssim_matches_loop_reference(rng):
    u = rng.random((20, 17))
    uh = u + 0.1 * rng.standard_normal(u.shape)
    assert ssim(u, uh) == pytest.approx(ssim_reference(u, uh), abs=1e-6)
    assert ssim(u, uh, window=5) == pytest.approx(ssim_reference(u, uh, 5), abs=1e-6)


def test_ssim_examples(rng):
    u = rng.standard_normal((12, 12))
    assert ssim(u, u) == pytest.approx(1.0, abs=1e-12)
    # unit checkerboard: zero mean inside every 8x8 window
    ix, iy = np.indices((12, 12))
    board = np.where((ix + iy) % 2, 1.0, -1.0)
    assert ssim(board, -board) < 0
    with pytest.raises(ShapeError):
        ssim(np.ones((4, 4)), np.ones((4, 4)))


def test_ssim_1d_uses_sliding_windows(rng):
    u = rng.random(40)
    uh = u + 0.05 * rng.standard_normal(40)
    assert -1 <= ssim(u, uh) <= 1


pairs = arrays(np.float64, (6, 6), elements=st.floats(-10, 10, allow_nan=False))


@given(pairs, pairs, st.randoms(use_true_random=False))
def test_permutation_invariance(u, uh, rnd):
    perm = list(range(36))
    rnd.shuffle(perm)
    pu, puh = u.ravel()[perm], uh.ravel()[perm]
    if np.linalg.norm(u) > 0:
        assert rela_err(pu, puh) == pytest.approx(rela_err(u.ravel(), uh.ravel()), rel=1e-12)
        assert rela_err(u, uh) * np.linalg.norm(u) == pytest.approx(np.linalg.norm(u - uh), rel=1e-12, abs=1e-12)
    if not np.array_equal(u, uh):
        assert psnr(pu, puh) == pytest.approx(psnr(u.ravel(), uh.ravel()), rel=1e-12, abs=1e-12)


@given(pairs, pairs)
def test_snr_scale_invariance(u, uh):
    if not np.array_equal(u, uh) and np.sum((uh.mean() - u) ** 2) > 0:
        assert snr(2 * u, 2 * uh) == pytest.approx(snr(u, uh), rel=1e-9, abs=1e-9)


def test_evaluate_report(rng):
    u = rng.random((10, 10))
    uh = u + 0.01
    rep = evaluate(u, uh)
    assert isinstance(rep, MetricReport)
    assert rep.as_dict() == {"ssim": ssim(u, uh), "psnr": psnr(u, uh), "snr": snr(u, uh), "rela_err": rela_err(u, uh)}
    assert math.isnan(evaluate(np.ones(4), np.zeros(4)).ssim)
