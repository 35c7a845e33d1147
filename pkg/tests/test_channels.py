import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import apply_kraus, choi_loops, unit
from privcorr.channels import (ChoiMatrix, DeletionChannel, DimensionError, KrausChannel,
                               SubsystemDecomposition, action_deviation, apply, apply_choi, channels_equal,
                               choi_to_kraus, compose, compress_output, deletion_channel, depolarizing_channel,
                               identity_channel, kraus_to_choi, link_choi, mix, partial_trace_channel,
                               random_channel, random_unitary_channel, reduced_output, restrict,
                               state_channel, tensor_channels, trace_channel, unitary_channel, validate_cptp)
from privcorr.linalg import PAULI_X, PAULI_Z, partial_trace, psd_deficit


@st.composite
def channels(draw, max_dim=3):
    din = draw(st.integers(1, max_dim))
    dout = draw(st.integers(1, max_dim))
    env = draw(st.integers(max(1, -(-din // dout)), 3))
    return random_channel(din, dout, env, draw(st.integers(0, 2**31)))


def random_state(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


@given(channels())
def test_random_channel_is_cptp(c):
    rep = validate_cptp(c)
    assert rep.valid, rep


@given(channels())
def test_choi_matches_loop_oracle(c):
    np.testing.assert_allclose(kraus_to_choi(c).matrix, choi_loops(list(c.kraus), c.dim_in), atol=1e-12)


@given(channels())
def test_choi_kraus_round_trip(c):
    back = choi_to_kraus(kraus_to_choi(c))
    assert channels_equal(back, c)
    assert back.num_kraus <= c.dim_in * c.dim_out


@given(channels(), st.integers(0, 2**31))
def test_choi_action_matches_kraus_action(c, seed):
    rng = np.random.default_rng(seed)
    sigma = rng.normal(size=(c.dim_in,) * 2) + 1j * rng.normal(size=(c.dim_in,) * 2)
    np.testing.assert_allclose(apply_choi(kraus_to_choi(c).matrix, sigma, c.dim_in, c.dim_out),
                               apply_kraus(list(c.kraus), sigma), atol=1e-12)
    np.testing.assert_allclose(c(sigma), apply(c, sigma), atol=1e-14)


@given(channels(), st.integers(0, 2**31))
def test_outputs_are_states(c, seed):
    rho = random_state(np.random.default_rng(seed), c.dim_in)
    out = apply(c, rho)
    assert abs(np.trace(out) - 1) < 1e-12
    assert psd_deficit(out) < 1e-12


@given(st.data())
def test_link_choi_matches_compose(data):
    d_in, d_mid, d_out = (data.draw(st.integers(1, 3)) for _ in range(3))
    inner = random_channel(d_in, d_mid, max(1, -(-d_in // d_mid)) + 1, data.draw(st.integers(0, 2**31)))
    outer = random_channel(d_mid, d_out, max(1, -(-d_mid // d_out)) + 1, data.draw(st.integers(0, 2**31)))
    linked = link_choi(kraus_to_choi(outer).matrix, kraus_to_choi(inner).matrix, (d_in, d_mid, d_out))
    np.testing.assert_allclose(linked, kraus_to_choi(compose(outer, inner)).matrix, atol=1e-12)


def test_link_choi_carries_batch_axis():
    a = random_channel(2, 3, 2, 1)
    b = random_channel(3, 2, 2, 2)
    c = random_channel(3, 2, 2, 3)
    batch = np.stack([kraus_to_choi(b).matrix, kraus_to_choi(c).matrix])
    out = link_choi(batch, kraus_to_choi(a).matrix, (2, 3, 2))
    np.testing.assert_allclose(out[1], kraus_to_choi(compose(c, a)).matrix, atol=1e-12)


def test_tensor_channels_acts_on_products():
    a, b = random_channel(2, 2, 2, 5), random_channel(3, 2, 2, 6)
    rng = np.random.default_rng(0)
    r1, r2 = random_state(rng, 2), random_state(rng, 3)
    np.testing.assert_allclose(apply(tensor_channels(a, b), np.kron(r1, r2)),
                               np.kron(apply(a, r1), apply(b, r2)), atol=1e-12)


def test_identity_trace_and_unitary():
    rho = random_state(np.random.default_rng(3), 3)
    np.testing.assert_allclose(apply(identity_channel(3), rho), rho)
    np.testing.assert_allclose(apply(trace_channel(3), rho), [[1.0]])
    np.testing.assert_allclose(apply(unitary_channel(PAULI_X), np.diag([1.0, 0])), np.diag([0, 1.0]))


def test_partial_trace_channel_matches_partial_trace():
    rng = np.random.default_rng(4)
    rho = random_state(rng, 12)
    for traced in ([0], [1], [2], [0, 2], [0, 1, 2]):
        ch = partial_trace_channel([2, 3, 2], traced)
        assert validate_cptp(ch).valid
        np.testing.assert_allclose(apply(ch, rho), partial_trace(rho, [2, 3, 2], traced), atol=1e-12)


def test_reduced_output():
    c = random_channel(2, 4, 2, 9)
    rho = random_state(np.random.default_rng(1), 2)
    np.testing.assert_allclose(apply(reduced_output(c, [2, 2], [1]), rho),
                               partial_trace(apply(c, rho), [2, 2], [0]), atol=1e-12)
    with pytest.raises(DimensionError):
        reduced_output(c, [3, 2], [0])


def test_deletion_channel():
    omega = np.diag([0.25, 0.75])
    d = DeletionChannel(3, omega)
    assert not d.pure
    assert DeletionChannel(3, np.diag([1.0, 0])).pure
    k = d.to_kraus()
    assert validate_cptp(k).valid
    rho = random_state(np.random.default_rng(0), 3)
    np.testing.assert_allclose(apply(k, rho), omega, atol=1e-12)
    np.testing.assert_allclose(d.choi().matrix, kraus_to_choi(k).matrix, atol=1e-12)
    with pytest.raises(ValueError):
        DeletionChannel(2, np.diag([1.0, 1.0]))


def test_depolarizing_and_state_channel():
    rho = random_state(np.random.default_rng(2), 2)
    np.testing.assert_allclose(apply(depolarizing_channel(2), rho), np.eye(2) / 2, atol=1e-12)
    prep = state_channel(rho)
    assert prep.dim_in == 1
    np.testing.assert_allclose(apply(prep, np.ones((1, 1))), rho, atol=1e-12)


def test_validate_flags_non_channels():
    k = KrausChannel(np.stack([np.eye(2), np.eye(2)]))
    rep = validate_cptp(k)
    assert not rep.valid and np.isclose(rep.tp_deviation, 1.0)


def test_choi_to_kraus_rejects_non_psd():
    j = ChoiMatrix(1, 2, np.diag([1.0, -0.5]))
    with pytest.raises(ValueError):
        choi_to_kraus(j)


def test_random_unitary_channel_validation():
    with pytest.raises(ValueError):
        random_unitary_channel([np.eye(2)], [0.5])
    with pytest.raises(DimensionError):
        random_unitary_channel([np.eye(2), np.eye(3)], [0.5, 0.5])
    c = random_unitary_channel([np.eye(2), PAULI_Z], [0.5, 0.5])
    np.testing.assert_allclose(apply(c, unit(0, 1, 2)), 0, atol=1e-15)


def test_mix_is_convex_in_choi():
    a, b = random_channel(2, 2, 2, 1), random_channel(2, 2, 1, 2)
    m = mix([a, b], [0.3, 0.7])
    np.testing.assert_allclose(kraus_to_choi(m).matrix,
                               0.3 * kraus_to_choi(a).matrix + 0.7 * kraus_to_choi(b).matrix, atol=1e-12)


def test_subsystem_decomposition():
    d = SubsystemDecomposition.subspace([0, 3], 4)
    assert (d.dim_A, d.dim_B, d.dim_S) == (1, 2, 4)
    np.testing.assert_allclose(d.projector, np.diag([1, 0, 0, 1]))
    v = SubsystemDecomposition.subspace([np.array([1, 1, 0]), np.array([0, 1, 0])], 3)
    np.testing.assert_allclose(v.embed.conj().T @ v.embed, np.eye(2), atol=1e-12)
    with pytest.raises(ValueError):
        SubsystemDecomposition.subspace([np.array([1, 0]), np.array([2, 0])], 2)
    with pytest.raises(DimensionError):
        SubsystemDecomposition(2, 2, np.eye(3))


def test_restrict_checks_dims():
    with pytest.raises(DimensionError):
        restrict(identity_channel(3), SubsystemDecomposition.full(2, 2))
    r = restrict(identity_channel(4), SubsystemDecomposition.subspace([1, 2], 4))
    assert (r.dim_in, r.dim_out) == (2, 4)


def test_compress_output_reconstructs():
    c = compose(unitary_channel(np.eye(5)[:, :2]), random_channel(2, 2, 2, 7))
    cc, w = compress_output(c)
    assert cc.dim_out == 2 and w.shape == (5, 2)
    rho = random_state(np.random.default_rng(0), 2)
    np.testing.assert_allclose(w @ apply(cc, rho) @ w.conj().T, apply(c, rho), atol=1e-12)


def test_action_deviation_dims():
    assert action_deviation(identity_channel(2), identity_channel(3)) == np.inf
    assert not channels_equal(identity_channel(2), trace_channel(2))
    assert deletion_channel(2, np.eye(2) / 2).num_kraus == 4
