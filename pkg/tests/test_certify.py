import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import deletion_grid_distance
from privcorr.certify import (certify_correctable, certify_private, duality_check, exact_correctable_test,
                              exact_private_test, tensor_identity_choi, tensor_trace_choi, witness_distance)
from privcorr.channels import (ChoiMatrix, KrausChannel, SubsystemDecomposition, apply, channels_equal, compose,
                               deletion_channel, depolarizing_channel, identity_channel, kraus_to_choi, random_channel,
                               restrict, state_channel, tensor_channels, trace_channel, unitary_channel,
                               validate_cptp)
from privcorr.complement import complement
from privcorr.diamond import diamond_distance
from privcorr.instances import perturbed, phase_flip_channel, phase_flip_code, planted_correctable
from privcorr.linalg import haar_unitary

QUBIT = SubsystemDecomposition.full(1, 2)


def erase_b(dim_A=2, dim_B=2):
    """``id_A ⊗ (reset B to |0⟩)``: B is exactly private, A is untouched."""
    reset = compose(state_channel(np.diag([1.0, 0.0])), trace_channel(dim_B))
    return tensor_channels(identity_channel(dim_A), reset)


def test_tensor_choi_helpers_match_channels():
    n = random_channel(2, 2, 2, 0)
    got = tensor_identity_choi(kraus_to_choi(n), 2).matrix
    np.testing.assert_allclose(got, kraus_to_choi(tensor_channels(n, identity_channel(2))).matrix, atol=1e-12)
    m = random_channel(2, 3, 2, 1)
    got = tensor_trace_choi(kraus_to_choi(m), 2).matrix
    np.testing.assert_allclose(got, kraus_to_choi(tensor_channels(m, trace_channel(2))).matrix, atol=1e-12)


class TestPhaseFlip:
    e, code = phase_flip_channel(), phase_flip_code()

    def test_exact_tests(self):
        assert exact_correctable_test(self.e, self.code).passed
        assert exact_private_test(complement(self.e), self.code).passed
        assert not exact_private_test(self.e, self.code).passed

    def test_certified_epsilons(self):
        assert certify_correctable(self.e, self.code).epsilon <= 1e-6
        assert certify_private(complement(self.e), self.code).epsilon <= 1e-6

    def test_witnesses_reproduce_epsilon(self):
        r = certify_correctable(self.e, self.code)
        assert validate_cptp_choi(r.witness["R"]) and validate_cptp_choi(r.witness["N"])
        assert witness_distance(r, self.e, self.code) <= 1e-5


def validate_cptp_choi(j: ChoiMatrix, tol=1e-6) -> bool:
    t = np.einsum("aiaj->ij", j.matrix.reshape(j.dim_out, j.dim_in, j.dim_out, j.dim_in))
    return np.allclose(t, np.eye(j.dim_in), atol=tol) and np.linalg.eigvalsh(j.matrix)[0] > -tol


def test_identity_qubit_private_epsilon():
    # best deletion channel for id is tr(·)I/2 at distance 3/2
    r = certify_private(identity_channel(2), QUBIT)
    assert abs(r.epsilon - 1.5) < 1e-6
    grid = deletion_grid_distance([np.eye(2)], 2, 2)
    assert abs(grid - 1.5) < 1e-9
    np.testing.assert_allclose(r.witness["M"].matrix, np.eye(2) / 2, atol=1e-4)
    assert abs(witness_distance(r, identity_channel(2), QUBIT) - 1.5) < 1e-5


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_private_epsilon_between_grid_and_fixed_deletion(seed):
    e = random_channel(2, 2, 2, seed)
    eps = certify_private(e, QUBIT).epsilon
    # entangled-input distance is 1-Lipschitz in ω; grid spacing 0.1 in Bloch coordinates
    assert eps >= deletion_grid_distance(list(e.kraus), 2, 2, grid=21) - 0.15
    # any fixed deletion channel bounds epsilon from above
    omega = apply(e, np.eye(2) / 2)
    assert eps <= diamond_distance(e, deletion_channel(2, omega)) + 1e-6


def test_depolarizing_is_private_not_correctable():
    dep = depolarizing_channel(2)
    assert exact_private_test(dep, QUBIT).passed
    assert certify_private(dep, QUBIT).epsilon <= 1e-6
    assert abs(certify_correctable(dep, QUBIT).epsilon - 1.5) < 1e-6
    assert not exact_correctable_test(dep, QUBIT).passed


def test_unitary_is_correctable_not_private():
    u = unitary_channel(haar_unitary(2, np.random.default_rng(0)))
    r = certify_correctable(u, QUBIT)
    assert r.epsilon <= 1e-6
    assert exact_correctable_test(u, QUBIT).passed
    assert abs(certify_private(u, QUBIT).epsilon - 1.5) < 1e-6


def test_erased_subsystem_exact_factor():
    e = erase_b()
    d = SubsystemDecomposition.full(2, 2)
    res = exact_private_test(e, d)
    assert res.passed
    # M(|a><a'|) = |a><a'| ⊗ |0><0|
    expect = tensor_channels(identity_channel(2), state_channel(np.diag([1.0, 0.0])))
    assert channels_equal(res.factor, expect)
    assert certify_private(e, d).epsilon <= 1e-6
    assert not exact_correctable_test(e, d).passed


def test_degenerate_b_is_trivially_both():
    e = random_channel(2, 3, 2, 4)
    d = SubsystemDecomposition.full(2, 1)
    for r in (certify_private(e, d), certify_correctable(e, d)):
        assert r.degenerate and r.epsilon == 0.0
        assert witness_distance(r, e, d) <= 1e-8


@pytest.mark.parametrize("seed", range(4))
def test_planted_instances_are_correctable(seed):
    e = planted_correctable(1, 2, 4, seed)
    d = SubsystemDecomposition.full(1, 2)
    assert exact_correctable_test(e, d).passed
    r = certify_correctable(e, d)
    assert r.epsilon <= 1e-6
    assert witness_distance(r, e, d) <= 1e-5


def test_planted_subsystem_with_nontrivial_a():
    e = planted_correctable(2, 2, 4, 7)
    d = SubsystemDecomposition.full(2, 2)
    assert exact_correctable_test(e, d).passed
    assert certify_correctable(e, d).epsilon <= 1e-6
    assert certify_private(complement(e), d).epsilon <= 1e-6


@given(seed=st.integers(0, 2**31), t=st.sampled_from([0.02, 0.1, 0.3]))
@settings(max_examples=6)
def test_duality_bounds_random(seed, t):
    e = perturbed(planted_correctable(1, 2, 4, seed), t, seed + 1, env_dim=2)
    rep = duality_check(e, SubsystemDecomposition.full(1, 2))
    assert rep.ok, rep


@given(seed=st.integers(0, 2**31))
@settings(max_examples=6)
def test_epsilon_invariant_under_output_unitary(seed):
    rng = np.random.default_rng(seed)
    e = random_channel(2, 2, 2, rng.integers(2**31))
    u = unitary_channel(haar_unitary(2, rng))
    for f in (certify_private, certify_correctable):
        a, b = f(e, QUBIT).epsilon, f(compose(u, e), QUBIT).epsilon
        assert abs(a - b) < 1e-5
        assert -1e-9 <= a <= 2 + 1e-6


def test_correctable_epsilon_monotone_under_postprocessing():
    # more noise after the channel cannot help recovery
    e = random_channel(2, 3, 2, 3)
    noise = random_channel(3, 3, 2, 4)
    assert certify_correctable(compose(noise, e), QUBIT).epsilon >= certify_correctable(e, QUBIT).epsilon - 1e-6


def test_subspace_code_in_larger_space():
    # the code span{|0>,|2>} of a qutrit under a channel that only damages |1>
    k0 = np.diag([1.0, 0.0, 1.0]).astype(complex)
    k1 = np.zeros((3, 3), dtype=complex)
    k1[0, 1] = 1.0
    e = KrausChannel(np.stack([k0, k1]))
    assert validate_cptp(e).valid
    code = SubsystemDecomposition.subspace([0, 2], 3)
    assert channels_equal(restrict(e, code), restrict(identity_channel(3), code))
    assert certify_correctable(e, code).epsilon <= 1e-6


@pytest.mark.parametrize("d", [2, 3])
def test_identity_and_depolarizing_extremes(d):
    # both sit at distance 2(1 - 1/d²) from the opposite class
    whole = SubsystemDecomposition.full(1, d)
    expected = 2 * (1 - 1 / d**2)
    assert abs(certify_private(identity_channel(d), whole).epsilon - expected) < 1e-6
    assert abs(certify_correctable(depolarizing_channel(d), whole).epsilon - expected) < 1e-6
