import numpy as np
import pytest

from sbmdp.errors import NonFinite, NotSymmetric, ShapeMismatch
from sbmdp.spectral import (
    as_symmetric,
    is_psd,
    psd_project,
    smallest_eigenvalues,
    spectral_norm,
    top_eigenpair,
)


def sample_symmetric(n, seed):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((n, n))
    return (m + m.T) / 2


def test_spectral_norm_examples():
    assert spectral_norm(np.zeros((4, 4))) == 0.0
    assert spectral_norm(np.eye(5)) == pytest.approx(1.0, rel=1e-12)
    n = 6
    assert spectral_norm(np.ones((n, n))) == pytest.approx(n, rel=1e-9)


def test_spectral_norm_matches_operator_norm():
    for seed in range(10):
        m = sample_symmetric(12, seed)
        assert spectral_norm(m) == pytest.approx(
            np.linalg.norm(m, 2), rel=1e-9)
        w = np.linalg.eigvalsh(m)
        assert spectral_norm(m) == pytest.approx(
            max(abs(w[0]), abs(w[-1])), rel=1e-12)


def test_smallest_eigenvalues():
    assert smallest_eigenvalues(np.diag([1.0, 2.0, 3.0]), 2) == pytest.approx(
        [1.0, 2.0])
    evs = smallest_eigenvalues(np.ones((3, 3)), 2)
    assert evs == pytest.approx([0.0, 0.0], abs=1e-9)
    with pytest.raises(ShapeMismatch):
        smallest_eigenvalues(np.eye(3), 4)


def test_is_psd():
    assert is_psd(np.eye(3), 0.0)
    assert not is_psd(np.diag([1.0, -1.0]), 1e-9)
    sigma = np.array([1.0, -1.0, 1.0, -1.0])
    assert is_psd(np.outer(sigma, sigma), 1e-9)
    with pytest.raises(ShapeMismatch):
        is_psd(np.eye(2), -1.0)


def test_psd_project_fixed_point():
    m = np.outer([1.0, 2.0], [1.0, 2.0]) + np.eye(2)
    assert np.linalg.norm(psd_project(m) - m, "fro") < 1e-10


def test_psd_project_clips():
    assert psd_project(np.diag([1.0, -2.0])) == pytest.approx(
        np.diag([1.0, 0.0]))


def test_psd_project_is_the_cone_projection():
    # optimality of the projection: <m - P(m), X - P(m)> <= 0 for PSD X
    rng = np.random.default_rng(0)
    for seed in range(5):
        m = sample_symmetric(8, seed + 100)
        p = psd_project(m)
        assert is_psd(p, 1e-10)
        for _ in range(20):
            b = rng.standard_normal((8, 8))
            x = b @ b.T  # random PSD point
            assert ((m - p) * (x - p)).sum() <= 1e-8 * max(
                1.0, np.linalg.norm(x))


def test_psd_project_idempotent_nonexpansive():
    for seed in range(5):
        m1 = sample_symmetric(7, seed)
        m2 = sample_symmetric(7, seed + 50)
        p1, p2 = psd_project(m1), psd_project(m2)
        assert np.linalg.norm(psd_project(p1) - p1, "fro") < 1e-9
        assert (np.linalg.norm(p1 - p2, "fro")
                <= np.linalg.norm(m1 - m2, "fro") + 1e-9)


def test_quadratic_form_above_lambda_min():
    rng = np.random.default_rng(1)
    for seed in range(5):
        m = sample_symmetric(9, seed + 7)
        lam_min = smallest_eigenvalues(m, 1)[0]
        for _ in range(10):
            v = rng.standard_normal(9)
            assert v @ m @ v >= lam_min * (v @ v) - 1e-9


def test_input_validation():
    with pytest.raises(NotSymmetric):
        as_symmetric(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(NonFinite):
        as_symmetric(np.array([[np.nan, 0.0], [0.0, 0.0]]))
    with pytest.raises(ShapeMismatch):
        as_symmetric(np.zeros((2, 3)))
    # asymmetry below tolerance is symmetrized, not rejected
    m = np.array([[0.0, 1.0], [1.0 + 1e-14, 0.0]])
    out = as_symmetric(m)
    assert np.array_equal(out, out.T)


def test_top_eigenpair():
    sigma = np.array([1.0, 1.0, -1.0])
    lam, vec, gap = top_eigenpair(np.outer(sigma, sigma))
    assert lam == pytest.approx(3.0)
    assert gap == pytest.approx(3.0)
    assert np.abs(vec) == pytest.approx(np.full(3, 1 / np.sqrt(3)))
