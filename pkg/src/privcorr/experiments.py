"""Seeded instance suites shared by ``scripts/`` and the acceptance tests.

Each suite has a dataclass config; ``*_instances`` yields the inputs and
``run_*`` evaluates them into plain row dicts that serialize to JSON.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Iterator

import numpy as np

from .certify import (certify_correctable, certify_private, duality_check, exact_correctable_test,
                      exact_private_test)
from .channels import (KrausChannel, SubsystemDecomposition, apply, compose, deletion_channel, identity_channel,
                       random_channel, state_channel, tensor_channels, trace_channel, unitary_channel)
from .complement import complement
from .diamond import check_continuity
from .instances import perturbed, planted_correctable
from .linalg import haar_unitary


@dataclass(frozen=True)
class BoundSuiteConfig:
    """Planted correctable instances ``u∘(N_A⊗id_B)`` plus perturbations of size ``t``."""

    n_instances: int = 100
    seed: int = 2024
    ts: tuple[float, ...] = (0.0, 0.02, 0.1)
    shapes: tuple[tuple[int, int, int], ...] = ((1, 2, 2), (1, 2, 3), (1, 2, 4), (2, 2, 4))  # (dim_A, dim_B, out)
    slack: float = 1e-5


@dataclass
class BoundInstance:
    index: int
    dim_A: int
    dim_B: int
    dim_out: int
    t: float
    channel: KrausChannel = field(repr=False)

    @property
    def decomposition(self) -> SubsystemDecomposition:
        return SubsystemDecomposition.full(self.dim_A, self.dim_B)


def bound_instances(cfg: BoundSuiteConfig = BoundSuiteConfig()) -> Iterator[BoundInstance]:
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.n_instances)
    for i, ss in enumerate(seeds):
        rng = np.random.default_rng(ss)
        dim_A, dim_B, dim_out = cfg.shapes[i % len(cfg.shapes)]
        t = cfg.ts[(i // len(cfg.shapes)) % len(cfg.ts)]
        e = planted_correctable(dim_A, dim_B, dim_out, rng.integers(2**63))
        e = perturbed(e, t, rng.integers(2**63), env_dim=2)
        yield BoundInstance(i, dim_A, dim_B, dim_out, t, e)


def run_bound_suite(cfg: BoundSuiteConfig = BoundSuiteConfig(), **solver) -> list[dict]:
    rows = []
    for inst in bound_instances(cfg):
        start = time.perf_counter()
        rep = duality_check(inst.channel, inst.decomposition, slack=cfg.slack, **solver)
        rows.append({
            "index": inst.index, "dim_A": inst.dim_A, "dim_B": inst.dim_B, "dim_out": inst.dim_out, "t": inst.t,
            "eps_correctable": rep.eps_correctable, "eps_private_complement": rep.eps_private_complement,
            "eps_private": rep.eps_private, "eps_correctable_complement": rep.eps_correctable_complement,
            "c_to_p_ok": rep.c_to_p_ok, "p_to_c_ok": rep.p_to_c_ok, "seconds": time.perf_counter() - start,
        })
    return rows


@dataclass(frozen=True)
class OracleSuiteConfig:
    """Channels on ``A⊗B`` with ``dim_A, dim_B ≤ 2`` and output ``≤ 4``, mixing exact positives and generic maps."""

    n_channels: int = 50
    seed: int = 7
    eps: float = 1e-6


def _reset_b(dim_A: int, dim_B: int) -> KrausChannel:
    reset = compose(state_channel(np.diag([1.0] + [0.0] * (dim_B - 1))), trace_channel(dim_B))
    return tensor_channels(identity_channel(dim_A), reset)


def oracle_instances(cfg: OracleSuiteConfig = OracleSuiteConfig()) -> Iterator[tuple[str, KrausChannel,
                                                                                   SubsystemDecomposition]]:
    """Cycles through eight families; which are exactly private/correctable is known by construction."""
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.n_channels)
    for i, ss in enumerate(seeds):
        rng = np.random.default_rng(ss)
        dim_A, dim_B = ((1, 2), (2, 2))[(i // 8) % 2]
        dc = dim_A * dim_B
        fam = i % 8
        if fam == 0:
            name, e = "planted-correctable", planted_correctable(dim_A, dim_B, 4, rng.integers(2**63))
        elif fam == 1:
            name = "complement-of-planted"
            e = complement(planted_correctable(dim_A, dim_B, 4, rng.integers(2**63)))
        elif fam == 2:
            name, e = "unitary", unitary_channel(haar_unitary(dc, rng))
        elif fam == 3:
            omega = apply(random_channel(1, 2, 2, rng.integers(2**63)), np.ones((1, 1)))
            name, e = "deletion", deletion_channel(dc, omega)
        elif fam == 4:
            name, e = "reset-B", _reset_b(dim_A, dim_B)
        elif fam == 5:
            name, e = "random", random_channel(dc, int(rng.integers(2, 5)), 2, rng.integers(2**63))
        elif fam == 6:
            name = "perturbed-planted"
            e = perturbed(planted_correctable(dim_A, dim_B, 4, rng.integers(2**63)), 0.05, rng.integers(2**63), 2)
        else:
            name, e = "random-unitary-mix", random_channel(dc, dc, 3, rng.integers(2**63))
        yield name, e, SubsystemDecomposition.full(dim_A, dim_B)


def run_oracle_suite(cfg: OracleSuiteConfig = OracleSuiteConfig(), **solver) -> list[dict]:
    rows = []
    for i, (name, e, d) in enumerate(oracle_instances(cfg)):
        ep = certify_private(e, d, **solver).epsilon
        ec = certify_correctable(e, d, **solver).epsilon
        xp = exact_private_test(e, d).passed
        xc = exact_correctable_test(e, d).passed
        rows.append({"index": i, "family": name, "dim_A": d.dim_A, "dim_B": d.dim_B, "dim_out": e.dim_out,
                     "exact_private": xp, "eps_private": ep, "exact_correctable": xc, "eps_correctable": ec,
                     "private_agree": xp == (ep <= cfg.eps), "correctable_agree": xc == (ec <= cfg.eps)})
    return rows


@dataclass(frozen=True)
class ContinuitySuiteConfig:
    """Pairs ``(E, F)``: mostly ``F`` a perturbation of ``E`` of size ``t``, every fifth pair independent."""

    n_pairs: int = 100
    seed: int = 11
    shapes: tuple[tuple[int, int], ...] = ((2, 2), (2, 3), (3, 2), (2, 4))
    ts: tuple[float, ...] = (0.01, 0.05, 0.2, 0.5)
    restarts: int = 32
    tol: float = 1e-6


def continuity_pairs(cfg: ContinuitySuiteConfig = ContinuitySuiteConfig()):
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.n_pairs)
    for i, ss in enumerate(seeds):
        rng = np.random.default_rng(ss)
        din, dout = cfg.shapes[i % len(cfg.shapes)]
        env = max(int(rng.integers(1, 3)), -(-din // dout))
        e = random_channel(din, dout, env, rng.integers(2**63))
        if i % 5 == 4:
            t = None
            f = random_channel(din, dout, max(2, -(-din // dout)), rng.integers(2**63))
        else:
            t = cfg.ts[i % 5]
            f = perturbed(e, t, rng.integers(2**63), env_dim=2)
        yield i, t, e, f


def run_continuity_suite(cfg: ContinuitySuiteConfig = ContinuitySuiteConfig()) -> list[dict]:
    rows = []
    for i, t, e, f in continuity_pairs(cfg):
        rep = check_continuity(e, f, tol=cfg.tol, restarts=cfg.restarts, seed=i)
        rows.append({"index": i, "dim_in": e.dim_in, "dim_out": e.dim_out, "t": t, "dd": rep.dd,
                     "align": rep.align_value, "env_dim": rep.env_dim, "upper_ok": rep.upper_ok,
                     "lower_status": rep.lower_status, "lower_bound": rep.lower_bound})
    return rows


def config_dict(cfg) -> dict:
    return asdict(cfg)
