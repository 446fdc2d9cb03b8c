import numpy as np
import pytest

from gwepi.linalg import jacobi_eigh


def _random_hermitian(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return a + a.conj().T


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 16, 27])
def test_matches_lapack(rng, n):
    a = _random_hermitian(rng, n)
    w, v = jacobi_eigh(a)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(a), atol=1e-11)
    np.testing.assert_allclose(a @ v, v * w, atol=1e-10)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(n), atol=1e-12)


def test_ascending_and_diagonal_passthrough():
    w, v = jacobi_eigh(np.diag([3.0, 1.0, 2.0]))
    assert list(w) == [1.0, 2.0, 3.0]
    np.testing.assert_allclose(np.abs(v), np.eye(3)[:, [1, 2, 0]])


def test_degenerate_spectrum(rng):
    q, _ = np.linalg.qr(rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6)))
    a = q @ np.diag([0.5, 0.5, 0, 0, 0, 0]) @ q.conj().T
    w, v = jacobi_eigh(a)
    np.testing.assert_allclose(w, [0, 0, 0, 0, 0.5, 0.5], atol=1e-13)
    np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, a, atol=1e-13)


def test_rejects_non_square():
    with pytest.raises(ValueError):
        jacobi_eigh(np.zeros((2, 3)))
