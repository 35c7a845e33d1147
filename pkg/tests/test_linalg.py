import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import partial_trace_loops
from privcorr.linalg import (PAULI_X, PAULI_Y, PAULI_Z, haar_unitary, is_hermitian, is_isometry,
                             matrix_unit, max_entangled, operator_norm, partial_trace, polar_unitary,
                             psd_deficit, random_isometry, tensor, trace_norm)

dims_st = st.lists(st.integers(1, 3), min_size=1, max_size=3)


def random_matrix(rng, n, m=None):
    m = n if m is None else m
    return rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))


@given(dims=dims_st, seed=st.integers(0, 2**31), data=st.data())
def test_partial_trace_matches_loops(dims, seed, data):
    traced = data.draw(st.lists(st.integers(0, len(dims) - 1), unique=True))
    rng = np.random.default_rng(seed)
    side = int(np.prod(dims))
    m = random_matrix(rng, side)
    np.testing.assert_allclose(partial_trace(m, dims, traced), partial_trace_loops(m, dims, traced), atol=1e-12)


def test_partial_trace_of_product():
    rng = np.random.default_rng(0)
    a, b, c = random_matrix(rng, 2), random_matrix(rng, 3), random_matrix(rng, 2)
    abc = tensor(a, b, c)
    np.testing.assert_allclose(partial_trace(abc, [2, 3, 2], [1]), np.trace(b) * np.kron(a, c), atol=1e-12)
    np.testing.assert_allclose(partial_trace(abc, [2, 3, 2], [0, 2]), np.trace(a) * np.trace(c) * b, atol=1e-12)
    assert partial_trace(abc, [2, 3, 2], [0, 1, 2]).shape == (1, 1)


def test_partial_trace_rejects_bad_dims():
    with pytest.raises(ValueError):
        partial_trace(np.eye(4), [2, 3], [0])
    with pytest.raises(ValueError):
        partial_trace(np.eye(4), [2, 2], [2])


def test_max_entangled_reduces_to_maximally_mixed():
    rho = max_entangled(3)
    np.testing.assert_allclose(partial_trace(rho, [3, 3], [0]), np.eye(3) / 3, atol=1e-14)
    assert np.isclose(np.trace(rho), 1)
    assert np.isclose(np.trace(max_entangled(3, normalized=False)), 3)


def test_norms_on_paulis():
    for p in (PAULI_X, PAULI_Y, PAULI_Z):
        assert np.isclose(trace_norm(p), 2)
        assert np.isclose(operator_norm(p), 1)
    # non-Hermitian path
    assert np.isclose(trace_norm(matrix_unit(0, 1, 2)), 1)


@given(seed=st.integers(0, 2**31), n=st.integers(1, 5))
def test_trace_norm_duality(seed, n):
    # ‖M‖₁ = max over unitaries of |tr(UM)|, attained by the polar factor
    rng = np.random.default_rng(seed)
    m = random_matrix(rng, n)
    u = polar_unitary(m)
    assert np.isclose(np.trace(u.conj().T @ m).real, trace_norm(m), rtol=1e-10)
    assert trace_norm(m) <= n * operator_norm(m) + 1e-10


@given(seed=st.integers(0, 2**31), rows=st.integers(1, 6), data=st.data())
def test_random_isometry(seed, rows, data):
    cols = data.draw(st.integers(1, rows))
    v = random_isometry(rows, cols, np.random.default_rng(seed))
    assert is_isometry(v)
    assert is_isometry(haar_unitary(rows, np.random.default_rng(seed)))


def test_psd_deficit_and_hermitian():
    assert psd_deficit(np.diag([1.0, 0.0])) == 0
    assert np.isclose(psd_deficit(np.diag([1.0, -0.25])), 0.25)
    assert is_hermitian(PAULI_Y)
    assert not is_hermitian(matrix_unit(0, 1, 2))
