"""Channel representations, conversions and the standard channel zoo.

Choi convention: ``J(E) = Σ_ij E(|i⟩⟨j|) ⊗ |i⟩⟨j|`` with the output factor
first, so ``J[(o, i), (o', j)] = E(|i⟩⟨j|)[o, o']``.  Two channels are equal
when their Choi matrices agree, i.e. when they act identically on every
matrix unit; Kraus sets are never compared directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import TOL_ISO, dagger, hermitian_part, is_isometry, psd_deficit, random_isometry

TOL_CPTP = 1e-9
TOL_PSD = 1e-9
TOL_RT = 1e-9


class DimensionError(ValueError):
    """Raised when operator or channel dimensions do not fit together."""


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A CP map ``σ ↦ Σ_k K_k σ K_k†`` stored as an array of shape ``(k, dim_out, dim_in)``."""

    kraus: np.ndarray

    def __post_init__(self):
        k = np.asarray(self.kraus, dtype=complex)
        if k.ndim == 2:
            k = k[None]
        if k.ndim != 3 or k.shape[0] == 0:
            raise DimensionError("need a nonempty stack of equally shaped Kraus operators")
        object.__setattr__(self, "kraus", k)

    @classmethod
    def from_list(cls, ops: Sequence[np.ndarray]) -> "KrausChannel":
        ops = [np.atleast_2d(np.asarray(o, dtype=complex)) for o in ops]
        if len({o.shape for o in ops}) != 1:
            raise DimensionError("Kraus operators have different shapes")
        return cls(np.stack(ops))

    @property
    def dim_in(self) -> int:
        return self.kraus.shape[2]

    @property
    def dim_out(self) -> int:
        return self.kraus.shape[1]

    @property
    def num_kraus(self) -> int:
        return self.kraus.shape[0]

    def __call__(self, sigma: np.ndarray) -> np.ndarray:
        return apply(self, sigma)

    def __repr__(self) -> str:
        return f"KrausChannel(dim_in={self.dim_in}, dim_out={self.dim_out}, num_kraus={self.num_kraus})"


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    dim_in: int
    dim_out: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        side = self.dim_in * self.dim_out
        if m.shape != (side, side):
            raise DimensionError(f"Choi matrix of shape {m.shape} does not match {self.dim_out}x{self.dim_in}")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True, eq=False)
class SubsystemDecomposition:
    """``A ⊗ B`` sitting inside ``S`` through an isometry ``embed: A⊗B → S``.

    A subspace code is the case ``dim_A == 1``.
    """

    dim_A: int
    dim_B: int
    embed: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.embed, dtype=complex)
        if v.ndim != 2 or v.shape[1] != self.dim_A * self.dim_B:
            raise DimensionError(f"embed has shape {v.shape}, expected (dim_S, {self.dim_A * self.dim_B})")
        if not is_isometry(v, TOL_ISO):
            raise ValueError("embed is not an isometry")
        object.__setattr__(self, "embed", v)

    @property
    def dim_S(self) -> int:
        return self.embed.shape[0]

    @property
    def dim_code(self) -> int:
        return self.dim_A * self.dim_B

    @property
    def projector(self) -> np.ndarray:
        return self.embed @ dagger(self.embed)

    @classmethod
    def full(cls, dim_A: int, dim_B: int) -> "SubsystemDecomposition":
        """``S = A ⊗ B`` exactly."""
        return cls(dim_A, dim_B, np.eye(dim_A * dim_B, dtype=complex))

    @classmethod
    def subspace(cls, basis: Sequence[np.ndarray | int], dim_S: int) -> "SubsystemDecomposition":
        """Code subspace spanned by ``basis`` (vectors or computational indices), ``dim_A = 1``.

        Vectors are orthonormalized in the order given.
        """
        cols = []
        for b in basis:
            if isinstance(b, (int, np.integer)):
                v = np.zeros(dim_S, dtype=complex)
                v[int(b)] = 1.0
            else:
                v = np.asarray(b, dtype=complex).ravel()
                if v.size != dim_S:
                    raise DimensionError(f"basis vector of length {v.size} in dim {dim_S}")
            cols.append(v)
        m = np.stack(cols, axis=1)
        q, r = np.linalg.qr(m)
        if np.min(np.abs(np.diag(r))) < 1e-12:
            raise ValueError("basis vectors are linearly dependent")
        q = q * (np.diag(r) / np.abs(np.diag(r)))
        return cls(1, m.shape[1], q)


@dataclass(frozen=True, eq=False)
class DeletionChannel:
    """``σ ↦ tr(σ) ω`` for a fixed state ``ω``."""

    dim_in: int
    omega: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=complex)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise DimensionError("omega must be square")
        if abs(np.trace(w) - 1) > TOL_CPTP or psd_deficit(w) > TOL_PSD:
            raise ValueError("omega must be a density matrix")
        object.__setattr__(self, "omega", w)

    @property
    def dim_out(self) -> int:
        return self.omega.shape[0]

    @property
    def pure(self) -> bool:
        return int(np.sum(np.linalg.eigvalsh(hermitian_part(self.omega)) > 1e-10)) == 1

    def to_kraus(self) -> KrausChannel:
        w, v = np.linalg.eigh(hermitian_part(self.omega))
        ops = []
        for lam, vec in zip(w, v.T):
            if lam > 1e-14:
                for i in range(self.dim_in):
                    k = np.zeros((self.dim_out, self.dim_in), dtype=complex)
                    k[:, i] = np.sqrt(lam) * vec
                    ops.append(k)
        return KrausChannel.from_list(ops)

    def choi(self) -> ChoiMatrix:
        return ChoiMatrix(self.dim_in, self.dim_out, np.kron(self.omega, np.eye(self.dim_in)))


@dataclass(frozen=True)
class CptpReport:
    valid: bool
    tp_deviation: float
    cp_deficit: float
    tol: float


def validate_cptp(c: KrausChannel, tol: float = TOL_CPTP) -> CptpReport:
    """Deviation of ``Σ K†K`` from identity (max entry) and negativity of the Choi matrix."""
    s = np.einsum("koi,koj->ij", c.kraus.conj(), c.kraus)
    tp = float(np.max(np.abs(s - np.eye(c.dim_in))))
    cp = psd_deficit(kraus_to_choi(c).matrix)
    return CptpReport(valid=tp <= tol and cp <= tol, tp_deviation=tp, cp_deficit=cp, tol=tol)


def kraus_to_choi(c: KrausChannel) -> ChoiMatrix:
    vecs = c.kraus.reshape(c.num_kraus, -1)
    return ChoiMatrix(c.dim_in, c.dim_out, vecs.T @ vecs.conj())


def choi_to_kraus(j: ChoiMatrix, tol: float = 1e-10) -> KrausChannel:
    """Kraus operators from the eigenvectors of ``J`` with eigenvalue above ``tol``.

    Raises:
        ValueError: if ``J`` has an eigenvalue below ``-TOL_PSD`` (not CP).
    """
    w, v = np.linalg.eigh(hermitian_part(j.matrix))
    if w[0] < -max(TOL_PSD, tol):
        raise ValueError(f"Choi matrix is not positive semidefinite (min eigenvalue {w[0]:.3g})")
    keep = w > tol
    if not np.any(keep):
        raise ValueError("Choi matrix is numerically zero")
    ops = (v[:, keep] * np.sqrt(w[keep])).T.reshape(-1, j.dim_out, j.dim_in)
    # largest weight first, deterministic ordering
    return KrausChannel(ops[::-1].copy())


def choi_of(c: KrausChannel | ChoiMatrix | DeletionChannel) -> np.ndarray:
    if isinstance(c, ChoiMatrix):
        return c.matrix
    if isinstance(c, DeletionChannel):
        return c.choi().matrix
    return kraus_to_choi(c).matrix


def apply(c: KrausChannel, sigma: np.ndarray) -> np.ndarray:
    sigma = np.asarray(sigma)
    if sigma.shape != (c.dim_in, c.dim_in):
        raise DimensionError(f"input of shape {sigma.shape} for channel with dim_in={c.dim_in}")
    return np.einsum("koi,ij,kpj->op", c.kraus, sigma, c.kraus.conj())


def apply_choi(j: np.ndarray, sigma: np.ndarray, dim_in: int, dim_out: int) -> np.ndarray:
    """Action of the map with Choi matrix ``j``: ``E(σ)[o,o'] = Σ J[(o,i),(o',j)] σ[i,j]``."""
    t = np.asarray(j).reshape(dim_out, dim_in, dim_out, dim_in)
    return np.einsum("aibj,ij->ab", t, sigma)


def compose(outer: KrausChannel, inner: KrausChannel) -> KrausChannel:
    """``outer ∘ inner`` with Kraus set ``{K_i L_j}``."""
    if inner.dim_out != outer.dim_in:
        raise DimensionError(f"cannot compose: inner dim_out={inner.dim_out}, outer dim_in={outer.dim_in}")
    ops = np.einsum("aop,bpi->aboi", outer.kraus, inner.kraus)
    return KrausChannel(ops.reshape(-1, outer.dim_out, inner.dim_in))


def tensor_channels(*chs: KrausChannel) -> KrausChannel:
    ops = [np.ones((1, 1), dtype=complex)]
    for c in chs:
        ops = [np.kron(a, b) for a in ops for b in c.kraus]
    return KrausChannel(np.stack(ops))


def restrict(c: KrausChannel, d: SubsystemDecomposition) -> KrausChannel:
    """``σ ↦ c(embed σ embed†)`` as a channel on ``A ⊗ B``."""
    if d.dim_S != c.dim_in:
        raise DimensionError(f"decomposition lives in dim {d.dim_S}, channel input is {c.dim_in}")
    return KrausChannel(c.kraus @ d.embed)


def link_choi(outer: np.ndarray, inner: np.ndarray, dims: tuple[int, int, int]) -> np.ndarray:
    """Choi matrix of ``outer ∘ inner`` from the two Choi matrices.

    ``dims = (d_in, d_mid, d_out)``.  Linear in each argument; a leading batch
    axis on ``outer`` is carried through, which the certifiers use to push SDP
    variables through a composition.
    """
    d_in, d_mid, d_out = dims
    lead = outer.shape[:-2]
    r = outer.reshape(lead + (d_out, d_mid, d_out, d_mid))
    e = np.asarray(inner).reshape(d_mid, d_in, d_mid, d_in)
    out = np.einsum("...asbt,sitj->...aibj", r, e)
    return out.reshape(lead + (d_out * d_in, d_out * d_in))


def identity_channel(dim: int) -> KrausChannel:
    return KrausChannel(np.eye(dim, dtype=complex)[None])


def trace_channel(dim: int) -> KrausChannel:
    """The trace as a channel onto a 1-dimensional output."""
    return KrausChannel(np.eye(dim, dtype=complex).reshape(dim, 1, dim))


def unitary_channel(u: np.ndarray) -> KrausChannel:
    """Channel ``σ ↦ UσU†``; also accepts a (non-square) isometry."""
    return KrausChannel(np.asarray(u, dtype=complex)[None])


def partial_trace_channel(dims: Sequence[int], traced: Sequence[int]) -> KrausChannel:
    """Channel that discards the listed tensor factors."""
    dims = list(dims)
    traced = sorted(set(traced))
    kept = [i for i in range(len(dims)) if i not in traced]
    d_traced = int(np.prod([dims[i] for i in traced])) if traced else 1
    d_kept = int(np.prod([dims[i] for i in kept])) if kept else 1
    ops = []
    for t in range(d_traced):
        tidx = np.unravel_index(t, [dims[i] for i in traced]) if traced else ()
        k = np.zeros((d_kept, int(np.prod(dims))), dtype=complex)
        for r in range(d_kept):
            kidx = np.unravel_index(r, [dims[i] for i in kept]) if kept else ()
            full = [0] * len(dims)
            for pos, i in enumerate(kept):
                full[i] = kidx[pos]
            for pos, i in enumerate(traced):
                full[i] = tidx[pos]
            k[r, np.ravel_multi_index(full, dims)] = 1.0
        ops.append(k)
    return KrausChannel(np.stack(ops))


def deletion_channel(dim_in: int, omega: np.ndarray) -> KrausChannel:
    return DeletionChannel(dim_in, omega).to_kraus()


def depolarizing_channel(dim: int) -> KrausChannel:
    """Completely depolarizing channel ``σ ↦ tr(σ) I/d``."""
    return deletion_channel(dim, np.eye(dim) / dim)


def random_unitary_channel(unitaries: Sequence[np.ndarray], probs: Sequence[float]) -> KrausChannel:
    """``ρ ↦ Σ_x p(x) U_x ρ U_x†``."""
    probs = np.asarray(probs, dtype=float)
    if len(unitaries) != probs.size or probs.size == 0:
        raise ValueError("need one probability per unitary")
    if np.any(probs < 0) or abs(probs.sum() - 1) > 1e-12:
        raise ValueError("probabilities must be nonnegative and sum to 1")
    us = [np.asarray(u, dtype=complex) for u in unitaries]
    if len({u.shape for u in us}) != 1 or us[0].shape[0] != us[0].shape[1]:
        raise DimensionError("unitaries must be square and of equal size")
    return KrausChannel(np.stack([np.sqrt(p) * u for p, u in zip(probs, us)]))


def random_channel(dim_in: int, dim_out: int, env_dim: int, seed) -> KrausChannel:
    """Channel whose Stinespring isometry is a seeded Gaussian matrix orthonormalized by QR."""
    if env_dim < 1:
        raise ValueError("env_dim must be at least 1")
    if dim_out * env_dim < dim_in:
        raise DimensionError(f"no isometry from dim {dim_in} into {dim_out}x{env_dim}")
    rng = np.random.default_rng(seed)
    v = random_isometry(dim_out * env_dim, dim_in, rng)
    return KrausChannel(np.ascontiguousarray(v.reshape(dim_out, env_dim, dim_in).transpose(1, 0, 2)))


def mix(channels: Sequence[KrausChannel], weights: Sequence[float]) -> KrausChannel:
    """Convex combination ``Σ w_i E_i``."""
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0) or abs(weights.sum() - 1) > 1e-12:
        raise ValueError("weights must form a probability distribution")
    ops = [np.sqrt(w) * c.kraus for w, c in zip(weights, channels) if w > 0]
    return KrausChannel(np.concatenate(ops))


def action_deviation(a: KrausChannel | ChoiMatrix, b: KrausChannel | ChoiMatrix) -> float:
    """Largest entrywise difference of the two maps' outputs over all matrix units."""
    ja, jb = choi_of(a), choi_of(b)
    if ja.shape != jb.shape:
        return np.inf
    return float(np.max(np.abs(ja - jb)))


def channels_equal(a, b, tol: float = TOL_RT) -> bool:
    if (a.dim_in, a.dim_out) != (b.dim_in, b.dim_out):
        return False
    return action_deviation(a, b) <= tol


def output_support(c: KrausChannel, tol: float = 1e-12) -> np.ndarray:
    """Isometry onto the span of all possible outputs (range of ``c(I)``)."""
    w, v = np.linalg.eigh(hermitian_part(apply(c, np.eye(c.dim_in))))
    keep = w > tol * max(1.0, w[-1])
    return v[:, keep][:, ::-1]


def compress_output(c: KrausChannel, tol: float = 1e-12) -> tuple[KrausChannel, np.ndarray]:
    """Restrict the output space to the support of ``c``.

    Returns ``(c', W)`` with ``c = W c'(·) W†``.  Diamond distances to maps
    whose outputs can be chosen inside the same support are unchanged, which
    the certifiers rely on to keep their SDPs small.
    """
    w = output_support(c, tol)
    return KrausChannel(dagger(w)[None] @ c.kraus), w


def reduced_output(c: KrausChannel, dims: Sequence[int], keep: Sequence[int]) -> KrausChannel:
    """``tr_{others} ∘ c`` for an output split into ``dims`` factors."""
    if int(np.prod(dims)) != c.dim_out:
        raise DimensionError(f"output dim {c.dim_out} does not split as {list(dims)}")
    traced = [i for i in range(len(dims)) if i not in set(keep)]
    return compose(partial_trace_channel(dims, traced), c)


def state_channel(rho: np.ndarray) -> KrausChannel:
    """Preparation of ``rho`` from the trivial 1-dimensional input."""
    return deletion_channel(1, rho)


__all__ = [
    "KrausChannel", "ChoiMatrix", "SubsystemDecomposition", "DeletionChannel", "CptpReport",
    "DimensionError", "validate_cptp", "kraus_to_choi", "choi_to_kraus", "choi_of", "apply",
    "apply_choi", "compose", "tensor_channels", "restrict", "link_choi", "identity_channel",
    "trace_channel", "unitary_channel", "partial_trace_channel", "deletion_channel",
    "depolarizing_channel", "random_unitary_channel", "random_channel", "mix", "action_deviation",
    "channels_equal", "output_support", "compress_output", "reduced_output", "state_channel",
]
