"""Stinespring dilations and complementary channels.

A dilation ``V: S → S' ⊗ S''`` is stored as a ``(dim_out·dim_env) × dim_in``
matrix with the output factor first.  The channel is ``tr_{S''}(V·V†)`` and
its complement is ``tr_{S'}(V·V†)``.  For a Kraus set ``{K_e}`` the dilation
is ``V|ψ⟩ = Σ_e K_e|ψ⟩ ⊗ |e⟩``, so the environment basis is the Kraus index
and the complement's Kraus operators are the reslices
``(K♯_j)[e, i] = (K_e)[j, i]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import (DimensionError, KrausChannel, choi_to_kraus, kraus_to_choi,
                       validate_cptp)
from .linalg import TOL_ISO, is_isometry

MINIMAL_CUTOFF = 1e-10


@dataclass(frozen=True, eq=False)
class StinespringIsometry:
    dim_in: int
    dim_out: int
    dim_env: int
    V: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.V, dtype=complex)
        if v.shape != (self.dim_out * self.dim_env, self.dim_in):
            raise DimensionError(f"isometry of shape {v.shape} for dims "
                                 f"in={self.dim_in}, out={self.dim_out}, env={self.dim_env}")
        object.__setattr__(self, "V", v)

    @property
    def is_isometric(self) -> bool:
        return is_isometry(self.V, TOL_ISO)

    def blocks(self) -> np.ndarray:
        """``V`` as a tensor indexed ``[out, env, in]``."""
        return self.V.reshape(self.dim_out, self.dim_env, self.dim_in)

    def channel(self) -> KrausChannel:
        """``tr_env ∘ V``."""
        return KrausChannel(np.ascontiguousarray(self.blocks().transpose(1, 0, 2)))

    def complement_channel(self) -> KrausChannel:
        """``tr_out ∘ V``."""
        return KrausChannel(self.blocks().copy())

    def isometric_channel(self) -> KrausChannel:
        return KrausChannel(self.V[None])


def dilate(c: KrausChannel) -> StinespringIsometry:
    """Dilation whose environment is indexed by the given Kraus operators."""
    rep = validate_cptp(c)
    if not rep.valid:
        raise ValueError(f"not a channel (trace deviation {rep.tp_deviation:.3g}, "
                         f"CP deficit {rep.cp_deficit:.3g})")
    k = c.num_kraus
    v = c.kraus.transpose(1, 0, 2).reshape(c.dim_out * k, c.dim_in)
    return StinespringIsometry(c.dim_in, c.dim_out, k, v)


def minimal_dilation(c: KrausChannel, tol: float = MINIMAL_CUTOFF) -> StinespringIsometry:
    """Dilation with ``dim_env`` equal to the Choi rank (eigenvalues above ``tol``)."""
    return dilate(choi_to_kraus(kraus_to_choi(c), tol=tol))


def kraus_rank(c: KrausChannel, tol: float = MINIMAL_CUTOFF) -> int:
    w = np.linalg.eigvalsh(kraus_to_choi(c).matrix)
    return int(np.sum(w > tol))


def complement(c: KrausChannel, tol: float = MINIMAL_CUTOFF) -> KrausChannel:
    """Complementary channel of a minimal dilation.

    A Kraus set that is already linearly independent is minimal and is used
    as given, which keeps the environment basis the caller chose; otherwise
    the Choi eigenbasis is used.
    """
    if c.num_kraus == kraus_rank(c, tol):
        return dilate(c).complement_channel()
    return minimal_dilation(c, tol).complement_channel()


def pad_dilation(v: StinespringIsometry, target_env: int) -> StinespringIsometry:
    """Embed the environment into ``target_env`` dims; new coordinates are appended as zeros."""
    if target_env < v.dim_env:
        raise ValueError(f"target env {target_env} smaller than current {v.dim_env}")
    blocks = np.zeros((v.dim_out, target_env, v.dim_in), dtype=complex)
    blocks[:, : v.dim_env, :] = v.blocks()
    return StinespringIsometry(v.dim_in, v.dim_out, target_env, blocks.reshape(-1, v.dim_in))
