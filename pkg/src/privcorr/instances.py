"""Named channels and seeded instance generators used by tests, scripts and the CLI demo."""
from __future__ import annotations

import json
from importlib import resources

import numpy as np

from .channels import (KrausChannel, SubsystemDecomposition, compose, identity_channel, mix,
                       random_channel, random_unitary_channel, tensor_channels, unitary_channel)
from .linalg import PAULI_X, PAULI_Z, random_isometry

Z1 = np.kron(PAULI_Z, np.eye(2))
RHO1 = np.eye(2, dtype=complex) / 2
RHO2 = PAULI_X.astype(complex) / 2


def phase_flip_channel() -> KrausChannel:
    """Two-qubit channel applying ``Z`` to the first qubit with probability 1/2."""
    return random_unitary_channel([np.eye(4), Z1], [0.5, 0.5])


def phase_flip_code() -> SubsystemDecomposition:
    """Code subspace span{|00⟩, |01⟩}."""
    return SubsystemDecomposition.subspace([0, 1], 4)


def phase_flip_complement_action(sigma: np.ndarray) -> np.ndarray:
    """``tr(σ) ρ1 + tr(σ Z1) ρ2`` in the Kraus-index environment basis of ``{I, Z1}/√2``."""
    return np.trace(sigma) * RHO1 + np.trace(sigma @ Z1) * RHO2


def planted_correctable(dim_A: int, dim_B: int, dim_out: int, seed, noise_kraus: int = 2) -> KrausChannel:
    """``u ∘ (N_A ⊗ id_B)`` with random ``N_A`` and random isometry ``u`` into ``dim_out``.

    ``B`` is exactly correctable for the result.
    """
    rng = np.random.default_rng(seed)
    n_a = random_channel(dim_A, dim_A, noise_kraus, rng.integers(2**63))
    u = unitary_channel(random_isometry(dim_out, dim_A * dim_B, rng))
    return compose(u, tensor_channels(n_a, identity_channel(dim_B)))


def perturbed(e: KrausChannel, t: float, seed, env_dim: int = 1) -> KrausChannel:
    """``(1−t)·e + t·g`` for a seeded random channel ``g``; diamond distance to ``e`` is at most ``2t``."""
    if t == 0:
        return e
    g = random_channel(e.dim_in, e.dim_out, env_dim, seed)
    return mix([e, g], [1 - t, t])


def load_fixture(name: str):
    """Load a shipped JSON fixture (``phase_flip``, ``phase_flip_code``, ``cgl23`` ...)."""
    text = resources.files("privcorr").joinpath("fixtures", f"{name}.json").read_text()
    return json.loads(text)


def fixture_path(name: str) -> str:
    return str(resources.files("privcorr").joinpath("fixtures", f"{name}.json"))
