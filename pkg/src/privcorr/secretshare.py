"""Threshold quantum secret sharing audited with the certifiers.

Parties are indexed from 0 in the API; reports label them ``P1..Pn``.
The secret is the whole input space, i.e. the decomposition ``dim_A = 1``,
``B = secret``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .certify import certify_correctable, certify_private
from .channels import (KrausChannel, SubsystemDecomposition, action_deviation, kraus_to_choi,
                       reduced_output, trace_channel, validate_cptp)
from .complement import StinespringIsometry, complement
from .linalg import TOL_ISO, is_isometry, random_isometry


@dataclass(frozen=True, eq=False)
class ThresholdScheme:
    """A ``((k, n))`` encoding of a ``secret_dim`` system into shares.

    ``encoder`` is a channel into ``⊗ share_dims``; it is usually a single
    isometry, which the duality audit requires.
    """

    k: int
    n: int
    secret_dim: int
    share_dims: tuple[int, ...]
    encoder: KrausChannel

    def __post_init__(self):
        object.__setattr__(self, "share_dims", tuple(int(s) for s in self.share_dims))
        if isinstance(self.encoder, np.ndarray):
            object.__setattr__(self, "encoder", KrausChannel(self.encoder[None]))
        if len(self.share_dims) != self.n:
            raise ValueError(f"{len(self.share_dims)} share dims for n={self.n} parties")
        if not 1 <= self.k <= self.n:
            raise ValueError(f"threshold k={self.k} outside 1..{self.n}")
        if self.encoder.dim_in != self.secret_dim:
            raise ValueError("encoder input does not match secret_dim")
        if self.encoder.dim_out != int(np.prod(self.share_dims)):
            raise ValueError("encoder output does not match the product of share dims")
        if not validate_cptp(self.encoder).valid:
            raise ValueError("encoder is not a channel")

    @classmethod
    def from_isometry(cls, k: int, n: int, share_dims: Sequence[int], v: np.ndarray) -> "ThresholdScheme":
        v = np.asarray(v, dtype=complex)
        return cls(k, n, v.shape[1], tuple(share_dims), KrausChannel(v[None]))

    @property
    def isometric(self) -> bool:
        return self.encoder.num_kraus == 1 and is_isometry(self.encoder.kraus[0], TOL_ISO)

    @property
    def isometry(self) -> np.ndarray:
        if not self.isometric:
            raise ValueError("encoder is not an isometry")
        return self.encoder.kraus[0]

    def decomposition(self) -> SubsystemDecomposition:
        return SubsystemDecomposition.full(1, self.secret_dim)

    def relabel(self, perm: Sequence[int]) -> "ThresholdScheme":
        """Scheme whose party ``i`` holds the share of old party ``perm[i]``."""
        perm = list(perm)
        dims = self.share_dims
        m = self.n
        ops = []
        for kop in self.encoder.kraus:
            t = kop.reshape(tuple(dims) + (self.secret_dim,))
            t = np.transpose(t, perm + [m])
            ops.append(t.reshape(-1, self.secret_dim))
        return ThresholdScheme(self.k, self.n, self.secret_dim, tuple(dims[p] for p in perm),
                               KrausChannel(np.stack(ops)))


def party_label(subset: Sequence[int]) -> str:
    return "{" + ",".join(f"P{i + 1}" for i in sorted(subset)) + "}"


def _check_subset(s: ThresholdScheme, subset) -> tuple[int, ...]:
    subset = tuple(sorted(set(int(i) for i in subset)))
    if not subset:
        raise ValueError("subset must be nonempty")
    if subset[0] < 0 or subset[-1] >= s.n:
        raise ValueError(f"party index out of range 0..{s.n - 1}: {subset}")
    return subset


def reduction(s: ThresholdScheme, subset: Sequence[int]) -> KrausChannel:
    """Encode, then discard every share outside ``subset``."""
    subset = _check_subset(s, subset)
    return reduced_output(s.encoder, s.share_dims, subset)


def cgl23_scheme() -> ThresholdScheme:
    """The qutrit ((2,3)) scheme ``|j⟩ ↦ Σ_a |a, a+j, a+2j⟩/√3`` (indices mod 3)."""
    v = np.zeros((27, 3), dtype=complex)
    for j in range(3):
        for a in range(3):
            v[9 * a + 3 * ((a + j) % 3) + (a + 2 * j) % 3, j] = 1 / np.sqrt(3)
    return ThresholdScheme.from_isometry(2, 3, (3, 3, 3), v)


def random_scheme(k: int, n: int, secret_dim: int, share_dim: int, seed) -> ThresholdScheme:
    rng = np.random.default_rng(seed)
    return ThresholdScheme.from_isometry(k, n, (share_dim,) * n, random_isometry(share_dim ** n, secret_dim, rng))


def all_subsets(n: int):
    for size in range(1, n + 1):
        yield from combinations(range(n), size)


@dataclass
class SubsetRow:
    subset: tuple[int, ...]
    kind: str  # "correctable" or "private"
    epsilon: float
    threshold: float

    @property
    def ok(self) -> bool:
        return self.epsilon <= self.threshold

    @property
    def label(self) -> str:
        return party_label(self.subset)


@dataclass
class ThresholdReport:
    k: int
    n: int
    rows: list[SubsetRow]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def violation(self) -> float:
        return max(r.epsilon for r in self.rows)


def _certify_subset(s: ThresholdScheme, subset, kind: str) -> float:
    ch = reduction(s, subset)
    d = s.decomposition()
    if kind == "correctable":
        return certify_correctable(ch, d).epsilon
    return certify_private(ch, d).epsilon


def verify_threshold(s: ThresholdScheme, eps_corr: float = 1e-6, eps_priv: float = 1e-6) -> ThresholdReport:
    """Certify every party subset: correctable at size ≥ k, private at size ≤ k−1."""
    rows = []
    for subset in all_subsets(s.n):
        if len(subset) >= s.k:
            rows.append(SubsetRow(subset, "correctable", _certify_subset(s, subset, "correctable"), eps_corr))
        else:
            rows.append(SubsetRow(subset, "private", _certify_subset(s, subset, "private"), eps_priv))
    return ThresholdReport(s.k, s.n, rows)


def _gram(choi: np.ndarray, dim_in: int, dim_out: int) -> np.ndarray:
    """Hilbert-Schmidt Gram matrix of the map's outputs on matrix units.

    Invariant under isometric post-processing of the output.
    """
    t = choi.reshape(dim_out, dim_in, dim_out, dim_in).transpose(1, 3, 0, 2).reshape(dim_in * dim_in, -1)
    return t.conj() @ t.T


@dataclass
class AuditReport:
    subset: tuple[int, ...]
    rest: tuple[int, ...]
    pair_deviation: float       # how far the encoder fails to be a dilation of (T, T̄)
    complement_deviation: float  # computed complement of T vs reduction to T̄, up to output isometry
    eps_correctable: float
    eps_private_rest: float
    eps_private: float
    eps_correctable_rest: float
    slack: float
    details: dict = field(default_factory=dict)

    @property
    def complementary(self) -> bool:
        return self.pair_deviation <= 1e-9 and self.complement_deviation <= 1e-9

    @property
    def bound_ok(self) -> bool:
        return (self.eps_private_rest <= 2 * np.sqrt(self.eps_correctable) + self.slack
                and self.eps_correctable_rest <= 2 * np.sqrt(self.eps_private) + self.slack)

    @property
    def ok(self) -> bool:
        return self.complementary and self.bound_ok


def _split_isometry(s: ThresholdScheme, subset: tuple[int, ...], rest: tuple[int, ...]) -> StinespringIsometry:
    """The encoder viewed as a dilation with output ``subset`` and environment ``rest``."""
    order = list(subset) + list(rest)
    v = s.isometry.reshape(s.share_dims + (s.secret_dim,))
    v = np.transpose(v, order + [s.n])
    d_out = int(np.prod([s.share_dims[i] for i in subset]))
    d_env = int(np.prod([s.share_dims[i] for i in rest])) if rest else 1
    return StinespringIsometry(s.secret_dim, d_out, d_env, v.reshape(d_out * d_env, s.secret_dim))


def complement_duality_audit(s: ThresholdScheme, subset: Sequence[int], slack: float = 1e-5) -> AuditReport:
    """Check that the reductions to ``subset`` and to the other parties form a
    complementary pair, then compare their certified epsilons against ``2√ε``."""
    if not s.isometric:
        raise ValueError("the duality audit needs an isometric encoder")
    subset = _check_subset(s, subset)
    rest = tuple(i for i in range(s.n) if i not in subset)
    red = reduction(s, subset)
    red_rest = reduction(s, rest) if rest else trace_channel(s.secret_dim)
    pair = _split_isometry(s, subset, rest)
    pair_dev = max(action_deviation(pair.channel(), red), action_deviation(pair.complement_channel(), red_rest))
    comp = complement(red)
    comp_dev = float(np.max(np.abs(_gram(kraus_to_choi(comp).matrix, s.secret_dim, comp.dim_out)
                                   - _gram(kraus_to_choi(red_rest).matrix, s.secret_dim, red_rest.dim_out))))
    d = s.decomposition()
    return AuditReport(
        subset=subset, rest=rest, pair_deviation=pair_dev, complement_deviation=comp_dev,
        eps_correctable=certify_correctable(red, d).epsilon,
        eps_private_rest=certify_private(red_rest, d).epsilon,
        eps_private=certify_private(red, d).epsilon,
        eps_correctable_rest=certify_correctable(red_rest, d).epsilon,
        slack=slack,
    )


@dataclass
class ProbeReport:
    n: int
    k: int
    violations: list[float]
    threshold: float = 0.1

    @property
    def min_violation(self) -> float:
        return min(self.violations)

    @property
    def ok(self) -> bool:
        """True when every trial stays above the threshold (the no-go is not contradicted)."""
        return all(v > self.threshold for v in self.violations)


def threshold_violation(s: ThresholdScheme) -> float:
    """Worst certified epsilon over the threshold requirements of ``s``."""
    return verify_threshold(s).violation


def infeasibility_probe(n: int, k: int, trials: int = 20, seed=0, secret_dim: int = 2,
                        share_dim: int = 2) -> ProbeReport:
    """Random isometric encoders in the regime ``n ≥ 2k``; reports each one's violation."""
    if n < 2 * k:
        raise ValueError("the probe targets n >= 2k")
    seeds = np.random.SeedSequence(seed).spawn(trials)
    viol = [threshold_violation(random_scheme(k, n, secret_dim, share_dim, ss)) for ss in seeds]
    return ProbeReport(n, k, viol)


__all__ = [
    "ThresholdScheme", "reduction", "cgl23_scheme", "random_scheme", "verify_threshold",
    "complement_duality_audit", "infeasibility_probe", "threshold_violation", "party_label",
    "ThresholdReport", "SubsetRow", "AuditReport", "ProbeReport", "all_subsets",
]
