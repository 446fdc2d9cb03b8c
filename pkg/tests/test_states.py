import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import gw_states
from gwepi.states import (
    DensityMatrix,
    GWState,
    SparseState,
    StateError,
    build_gw_state,
    eigenvalues,
    format_gw_state,
    lambda_weights,
    parse_gw_state,
    read_gw_state,
    reduced_density,
    write_gw_state,
)

S3 = 1 / math.sqrt(3)


def test_w3_amplitudes(w3):
    s = build_gw_state(w3)
    assert s.dims == (2, 2, 2)
    assert set(s.amplitudes) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    for amp in s.amplitudes.values():
        assert amp == pytest.approx(S3, abs=1e-15)


def test_qutrit_pair_levels():
    a = np.array([[1 / math.sqrt(2), 0], [0, 1 / math.sqrt(2)]])
    s = build_gw_state(GWState(2, 3, a))
    assert set(s.amplitudes) == {(1, 0), (0, 2)}
    assert s.amplitudes[(0, 2)] == pytest.approx(1 / math.sqrt(2))


def test_unnormalized_rejected():
    a = np.full((3, 1), math.sqrt(0.3))
    with pytest.raises(StateError):
        GWState(3, 2, a)


@pytest.mark.parametrize("n,d,shape", [(1, 2, (1, 1)), (3, 1, (3, 0)), (3, 2, (3, 2))])
def test_bad_dimensions(n, d, shape):
    a = np.zeros(shape)
    if a.size:
        a.flat[0] = 1
    with pytest.raises(StateError):
        GWState(n, d, a)


def test_sparse_state_validation():
    with pytest.raises(StateError):
        SparseState((2, 2), {(0, 2): 1.0})
    with pytest.raises(StateError):
        SparseState((2, 2), {(0, 0): 0.5})


def test_w3_single_party_reduction(w3):
    rho = reduced_density(build_gw_state(w3), [0])
    np.testing.assert_allclose(rho.entries, np.diag([2 / 3, 1 / 3]), atol=1e-15)


def test_product_reduction():
    s = SparseState((2, 2), {(0, 0): 1.0})
    np.testing.assert_allclose(reduced_density(s, [0]).entries, [[1, 0], [0, 0]])


def test_keep_everything_is_projector(w3):
    s = build_gw_state(w3)
    rho = reduced_density(s, [0, 1, 2])
    v = s.to_dense()
    np.testing.assert_allclose(rho.entries, np.outer(v, v.conj()), atol=1e-15)


def test_reduction_errors(w3):
    s = build_gw_state(w3)
    with pytest.raises(StateError):
        reduced_density(s, [])
    with pytest.raises(StateError):
        reduced_density(s, [3])


def test_matches_dense_partial_trace(rng):
    from gwepi.harness import random_gw

    g = random_gw(4, 3, 11)
    psi = build_gw_state(g).to_dense().reshape((3,) * 4)
    rho = reduced_density(build_gw_state(g), [1, 3]).entries
    dense = np.einsum("aibj,akbl->ijkl", psi, psi.conj()).reshape(9, 9)
    np.testing.assert_allclose(rho, dense, atol=1e-15)


def test_lambda_weights():
    np.testing.assert_allclose(lambda_weights(GWState.uniform(3)), [1 / 3] * 3, atol=1e-15)
    np.testing.assert_allclose(lambda_weights(GWState.from_weights([0.7, 0.2, 0.1])), [0.7, 0.2, 0.1], atol=1e-15)


def test_eigenvalue_examples():
    np.testing.assert_allclose(eigenvalues(DensityMatrix((2,), np.diag([1 / 3, 2 / 3]))), [2 / 3, 1 / 3])
    np.testing.assert_allclose(eigenvalues(DensityMatrix((2,), np.eye(2) / 2)), [0.5, 0.5])
    v = np.array([1, 1j, 0, 1]) / math.sqrt(3)
    np.testing.assert_allclose(eigenvalues(DensityMatrix((2, 2), np.outer(v, v.conj()))), [1, 0, 0, 0], atol=1e-15)


def test_density_matrix_validation():
    with pytest.raises(StateError):
        DensityMatrix((2,), [[0.5, 0.1], [0.2, 0.5]])
    with pytest.raises(StateError):
        DensityMatrix((2,), np.eye(2))
    with pytest.raises(StateError):
        eigenvalues(DensityMatrix((2,), np.diag([1.1, -0.1])))
    # tiny negative noise is clamped
    w = eigenvalues(DensityMatrix((2,), np.diag([1 + 1e-11, -1e-11])))
    assert w.min() == 0.0 and w.sum() == pytest.approx(1, abs=1e-15)


@settings(max_examples=40, deadline=None)
@given(gw_states())
def test_single_party_spectrum_is_one_minus_lambda(g):
    s = build_gw_state(g)
    lam = lambda_weights(g)
    for i in range(g.n):
        w = eigenvalues(reduced_density(s, [i]))
        np.testing.assert_allclose(w[:2], sorted([lam[i], 1 - lam[i]], reverse=True), atol=1e-10)
        np.testing.assert_allclose(w[2:], 0, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(gw_states(n=st.integers(3, 5)), st.data())
def test_two_stage_trace(g, data):
    s = build_gw_state(g)
    keep = sorted(data.draw(st.sets(st.integers(0, g.n - 1), min_size=1, max_size=g.n - 1)))
    once = reduced_density(s, keep).entries
    # trace the first dropped party, then the rest, through the full dense state
    drop = [k for k in range(g.n) if k not in keep]
    psi = s.to_dense().reshape((g.d,) * g.n)
    rho = np.tensordot(psi, psi.conj(), axes=([drop[0]], [drop[0]]))
    rest = [k - (k > drop[0]) for k in drop[1:]]
    m = g.n - 1
    for k in sorted(rest, reverse=True):
        rho = np.trace(rho, axis1=k, axis2=k + m)
        m -= 1
    side = g.d ** len(keep)
    np.testing.assert_allclose(once, rho.reshape(side, side), atol=1e-12)
    assert np.trace(once).real == pytest.approx(1, abs=1e-10)


def test_state_file_roundtrip(tmp_path):
    from gwepi.harness import random_gw

    g = random_gw(5, 3, 4)
    path = tmp_path / "g.txt"
    write_gw_state(g, path)
    back = read_gw_state(path)
    np.testing.assert_array_equal(back.coeffs, g.coeffs)


def test_state_file_parsing():
    text = "# W state on three qubits\n3 2\n0.5773502691896258 0\n0.5773502691896258 0\n0.5773502691896258 0\n"
    g = parse_gw_state(text)
    assert (g.n, g.d) == (3, 2)
    assert format_gw_state(g).splitlines()[0] == "3 2"
    for bad in ("", "3\n1 0", "2 2\n1 0", "2 2\n1 0\nx 0", "2 2\n1 0 0\n0 0"):
        with pytest.raises(StateError):
            parse_gw_state(bad)
