"""Private and correctable subsystem certification.

``B`` is ε-private for ``E`` when ``E∘P_AB`` is ε-close in diamond norm to
some ``M ⊗ tr_B``, and ε-correctable when some recovery ``R`` makes
``R∘E∘P_AB`` ε-close to some ``N_A ⊗ id_B``.  Both distances are affine in
the Choi matrices of the auxiliary channels, so each minimum is one SDP.

The exact (ε = 0) tests are linear-algebra checks; the correctability test
runs the privacy test on the complementary channel.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .channels import (ChoiMatrix, KrausChannel, SubsystemDecomposition, choi_to_kraus,
                       compress_output, kraus_to_choi, link_choi, restrict)
from .complement import complement
from .diamond import add_diamond_epigraph, diamond_distance, trace_out
from .sdp import FEAS_TOL, GAP_TOL, MAX_ITER, Affine, SdpProblem, SdpSolveError, solve

EXACT_TOL = 1e-8
BOUND_SLACK = 1e-5


class ExactResult(NamedTuple):
    passed: bool
    deviation: float
    factor: KrausChannel | None


@dataclass
class CertificationResult:
    kind: str  # "private" or "correctable"
    epsilon: float
    witness: dict[str, ChoiMatrix]
    diagnostics: dict = field(default_factory=dict)
    degenerate: bool = False

    def within(self, eps: float) -> bool:
        return self.epsilon <= eps


def _choi_tensor_trace(jm: np.ndarray, dim_B: int) -> np.ndarray:
    """Choi of ``M ⊗ tr_B`` from Choi of ``M``: ``J_M ⊗ I_B`` (input order A then B)."""
    lead = jm.shape[:-2]
    n = jm.shape[-1]
    out = jm[..., :, None, :, None] * np.eye(dim_B)[:, None, :]
    return out.reshape(lead + (n * dim_B, n * dim_B))


def _choi_tensor_identity(jn: np.ndarray, dim_A: int, dim_B: int) -> np.ndarray:
    """Choi of ``N ⊗ id_B`` (on ``A⊗B``) from Choi of ``N`` (on ``A``)."""
    lead = jn.shape[:-2]
    t = jn.reshape(lead + (dim_A,) * 4)
    eye = np.eye(dim_B)
    out = np.einsum("...pqrs,bc,de->...pbqcrdse", t, eye, eye)
    d = dim_A * dim_B
    return out.reshape(lead + (d * d, d * d))


def tensor_trace_choi(m: ChoiMatrix, dim_B: int) -> ChoiMatrix:
    return ChoiMatrix(m.dim_in * dim_B, m.dim_out, _choi_tensor_trace(m.matrix, dim_B))


def tensor_identity_choi(n: ChoiMatrix, dim_B: int) -> ChoiMatrix:
    d = n.dim_in * dim_B
    return ChoiMatrix(d, d, _choi_tensor_identity(n.matrix, n.dim_in, dim_B))


def _channel_variable(p: SdpProblem, dim_in: int, dim_out: int) -> Affine:
    j = p.hermitian(dim_in * dim_out, psd=True)
    p.add_equality(trace_out(j, dim_out, dim_in), np.eye(dim_in))
    return j


def _diagnostics(sol) -> dict:
    return {"status": sol.status, "primal": sol.primal, "dual": sol.dual, "gap": sol.gap,
            "iterations": sol.iterations, "eq_residual": sol.eq_residual, "psd_residual": sol.psd_residual}


def _sandwich_out(j: np.ndarray, w: np.ndarray, dim_in: int) -> np.ndarray:
    """Choi of ``W·(·)W†`` applied after the map with Choi ``j``."""
    big = np.kron(w, np.eye(dim_in))
    return big @ j @ big.conj().T


def exact_private_test(e: KrausChannel, d: SubsystemDecomposition, tol: float = EXACT_TOL) -> ExactResult:
    """Does ``e∘P_AB`` factor as ``M ⊗ tr_B``?

    Checks ``e(P(|a⟩⟨a'| ⊗ |b⟩⟨b'|)) = δ_bb' C_aa'`` on all matrix units; on
    success ``M`` is the channel with ``M(|a⟩⟨a'|) = C_aa'``.
    """
    er = restrict(e, d)
    da, db, do = d.dim_A, d.dim_B, er.dim_out
    j = kraus_to_choi(er).matrix.reshape(do, da, db, do, da, db)
    c = j[:, :, 0, :, :, 0]
    expected = np.einsum("oapr,bc->oabprc", c, np.eye(db))
    dev = float(np.max(np.abs(j - expected)))
    if dev > tol:
        return ExactResult(False, dev, None)
    m = ChoiMatrix(da, do, c.reshape(do * da, do * da))
    return ExactResult(True, dev, choi_to_kraus(m))


def exact_correctable_test(e: KrausChannel, d: SubsystemDecomposition, tol: float = EXACT_TOL) -> ExactResult:
    """Correctability decided as privacy of ``B`` for the complement of ``e∘P_AB``."""
    comp = complement(restrict(e, d))
    return exact_private_test(comp, SubsystemDecomposition.full(d.dim_A, d.dim_B), tol)


def certify_private(e: KrausChannel, d: SubsystemDecomposition, gap_tol: float = GAP_TOL,
                    feas_tol: float = FEAS_TOL, max_iter: int = MAX_ITER) -> CertificationResult:
    """Minimize ``‖e∘P_AB − M ⊗ tr_B‖◇`` over channels ``M: A → S'``.

    The output is first compressed to the support of ``e∘P_AB``; pinching
    onto that support is a channel fixing ``e``'s outputs, so an optimal
    ``M`` can be taken inside it.
    """
    er = restrict(e, d)
    if d.dim_B == 1:
        return CertificationResult("private", 0.0, {"M": kraus_to_choi(er)}, {"status": "trivial"},
                                   degenerate=True)
    ec, w = compress_output(er)
    q, da = ec.dim_out, d.dim_A
    p = SdpProblem()
    jm = _channel_variable(p, da, q)
    delta = Affine(kraus_to_choi(ec).matrix) - jm.map(lambda a: _choi_tensor_trace(a, d.dim_B))
    p.minimize(add_diamond_epigraph(p, delta, d.dim_code, q, compact=True))
    sol = solve(p, gap_tol=gap_tol, feas_tol=feas_tol, max_iter=max_iter)
    if not sol.ok:
        raise SdpSolveError(sol, "privacy SDP did not converge")
    m_full = ChoiMatrix(da, er.dim_out, _sandwich_out(sol.value(jm), w, da))
    eps = max(0.0, 0.5 * (sol.primal + sol.dual))
    return CertificationResult("private", eps, {"M": m_full}, _diagnostics(sol))


def certify_correctable(e: KrausChannel, d: SubsystemDecomposition, gap_tol: float = GAP_TOL,
                        feas_tol: float = FEAS_TOL, max_iter: int = MAX_ITER) -> CertificationResult:
    """Minimize ``‖R∘e∘P_AB − N_A ⊗ id_B‖◇`` jointly over channels ``R`` and ``N_A``."""
    er = restrict(e, d)
    if d.dim_B == 1:
        r, n = _trivial_recovery(er, d)
        return CertificationResult("correctable", 0.0, {"R": r, "N": n},
                                   {"status": "trivial"}, degenerate=True)
    ec, w = compress_output(er)
    q, dc, da = ec.dim_out, d.dim_code, d.dim_A
    p = SdpProblem()
    jr = _channel_variable(p, q, dc)
    jn = _channel_variable(p, da, da)
    je = kraus_to_choi(ec).matrix
    composed = jr.map(lambda a: link_choi(a, je, (dc, q, dc)))
    delta = composed - jn.map(lambda a: _choi_tensor_identity(a, da, d.dim_B))
    p.minimize(add_diamond_epigraph(p, delta, dc, dc, compact=True))
    sol = solve(p, gap_tol=gap_tol, feas_tol=feas_tol, max_iter=max_iter)
    if not sol.ok:
        raise SdpSolveError(sol, "correctability SDP did not converge")
    r_full = _extend_recovery(sol.value(jr), w, dc)
    eps = max(0.0, 0.5 * (sol.primal + sol.dual))
    return CertificationResult("correctable", eps,
                               {"R": r_full, "N": ChoiMatrix(da, da, sol.value(jn))}, _diagnostics(sol))


def _extend_recovery(jr: np.ndarray, w: np.ndarray, dim_code: int) -> ChoiMatrix:
    """Recovery on the full output space: ``R'(W†XW) + tr((I−WW†)X)·I/d``."""
    dim_full, q = w.shape
    # Choi of X ↦ W†XW is vec(W†) vec(W†)†
    jw = kraus_to_choi(KrausChannel(w.conj().T[None])).matrix
    j = link_choi(jr, jw, (dim_full, q, dim_code))
    perp = np.eye(dim_full) - w @ w.conj().T
    j = j + np.kron(np.eye(dim_code) / dim_code, perp.T)
    return ChoiMatrix(dim_full, dim_code, j)


def _trivial_recovery(er: KrausChannel, d: SubsystemDecomposition) -> tuple[ChoiMatrix, ChoiMatrix]:
    # dim_B = 1: reset to |0⟩ and let N_A absorb the same reset
    rho = np.zeros((d.dim_A, d.dim_A))
    rho[0, 0] = 1.0
    r = ChoiMatrix(er.dim_out, d.dim_A, np.kron(rho, np.eye(er.dim_out)))
    n = ChoiMatrix(d.dim_A, d.dim_A, np.kron(rho, np.eye(d.dim_A)))
    return r, n


def witness_distance(result: CertificationResult, e: KrausChannel, d: SubsystemDecomposition) -> float:
    """Recompute the defining diamond distance from the witnesses alone."""
    er = restrict(e, d)
    if result.kind == "private":
        target = tensor_trace_choi(result.witness["M"], d.dim_B)
        return diamond_distance(er, target)
    jr = result.witness["R"]
    composed = ChoiMatrix(d.dim_code, d.dim_code,
                          link_choi(jr.matrix, kraus_to_choi(er).matrix, (d.dim_code, er.dim_out, d.dim_code)))
    target = tensor_identity_choi(result.witness["N"], d.dim_B)
    return diamond_distance(composed, target)


@dataclass
class DualityReport:
    eps_correctable: float
    eps_private_complement: float
    eps_private: float
    eps_correctable_complement: float
    slack: float
    complement_dim: int

    @property
    def bound_c_to_p(self) -> float:
        return 2 * np.sqrt(self.eps_correctable)

    @property
    def bound_p_to_c(self) -> float:
        return 2 * np.sqrt(self.eps_private)

    @property
    def c_to_p_ok(self) -> bool:
        return self.eps_private_complement <= self.bound_c_to_p + self.slack

    @property
    def p_to_c_ok(self) -> bool:
        return self.eps_correctable_complement <= self.bound_p_to_c + self.slack

    @property
    def ok(self) -> bool:
        return self.c_to_p_ok and self.p_to_c_ok


def duality_check(e: KrausChannel, d: SubsystemDecomposition, slack: float = BOUND_SLACK,
                  **solver) -> DualityReport:
    """Certify ``e`` and its complement both ways and compare against ``2√ε``."""
    er = restrict(e, d)
    comp = complement(er)
    full = SubsystemDecomposition.full(d.dim_A, d.dim_B)
    return DualityReport(
        eps_correctable=certify_correctable(e, d, **solver).epsilon,
        eps_private_complement=certify_private(comp, full, **solver).epsilon,
        eps_private=certify_private(e, d, **solver).epsilon,
        eps_correctable_complement=certify_correctable(comp, full, **solver).epsilon,
        slack=slack,
        complement_dim=comp.dim_out,
    )

