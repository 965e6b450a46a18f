import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from holovolume.jacobi import jacobi_eigh, off_norm


@pytest.mark.parametrize("n", [1, 2, 3, 8, 31, 64])
def test_matches_numpy(n, rng):
    a = rng.normal(size=(n, n))
    a = a + a.T
    vals, vecs, _ = jacobi_eigh(a)
    assert np.allclose(np.sort(vals), np.linalg.eigvalsh(a), atol=1e-12 * max(1, np.abs(a).max()))
    assert np.allclose(vecs.T @ vecs, np.eye(n), atol=1e-13)
    assert np.max(np.abs(a @ vecs - vecs * vals)) < 1e-12 * np.abs(a).sum()


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (6, 6), elements=st.floats(-10, 10)))
def test_reconstruction_property(m):
    a = m + m.T
    vals, vecs, _ = jacobi_eigh(a)
    assert np.allclose(vecs @ np.diag(vals) @ vecs.T, a, atol=1e-10)


def test_diagonal_input_untouched():
    vals, vecs, sweeps = jacobi_eigh(np.diag([3.0, -1.0, 2.0]))
    assert list(vals) == [3.0, -1.0, 2.0]
    assert sweeps == 0 or np.allclose(vecs, np.eye(3))


def test_zero_matrix():
    vals, vecs, _ = jacobi_eigh(np.zeros((4, 4)))
    assert np.all(vals == 0) and np.array_equal(vecs, np.eye(4))


def test_off_norm():
    a = np.array([[1.0, 2.0], [2.0, 5.0]])
    assert off_norm(a) == pytest.approx(np.sqrt(8.0))


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        jacobi_eigh(np.ones((2, 3)))
    with pytest.raises(ValueError):
        jacobi_eigh(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_tiny_eigenvalue_vectors_accurate():
    # graded spectrum like the Nystrom matrices: residuals stay at rounding level
    rng = np.random.default_rng(3)
    q, _ = np.linalg.qr(rng.normal(size=(40, 40)))
    vals = 10.0 ** -np.arange(40) * np.where(np.arange(40) % 2, -1, 1)
    a = q @ np.diag(vals) @ q.T
    got, vecs, _ = jacobi_eigh(a)
    assert np.max(np.abs(a @ vecs - vecs * got)) < 1e-14
