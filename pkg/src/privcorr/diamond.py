"""Diamond norm, entangled-input lower bound and dilation alignment.

The norm is computed from the two-block semidefinite characterization

    ‖Φ‖◇ = min ½‖tr_out Y0‖∞ + ½‖tr_out Y1‖∞
           s.t. [[Y0, -J], [-J†, Y1]] ⪰ 0,

valid for any Hermiticity-preserving ``Φ`` with Choi matrix ``J``.  For
differences of two channels (trace-annihilating maps) the certifiers use the
smaller equivalent program ``2·min ‖tr_out Z‖∞ s.t. Z ⪰ J, Z ⪰ 0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channels import DimensionError, KrausChannel, choi_of
from .complement import StinespringIsometry, minimal_dilation, pad_dilation
from .linalg import TOL_HERM, dagger, haar_unitary, is_hermitian, operator_norm, polar_unitary, trace_norm
from .sdp import FEAS_TOL, GAP_TOL, MAX_ITER, Affine, SdpProblem, SdpSolution, SdpSolveError, solve


@dataclass(frozen=True, eq=False)
class HermitianPreservingMap:
    dim_in: int
    dim_out: int
    choi: np.ndarray

    def __post_init__(self):
        j = np.asarray(self.choi, dtype=complex)
        side = self.dim_in * self.dim_out
        if j.shape != (side, side):
            raise DimensionError(f"Choi of shape {j.shape} for dims in={self.dim_in}, out={self.dim_out}")
        if not is_hermitian(j, TOL_HERM * max(1.0, np.max(np.abs(j), initial=0.0))):
            raise ValueError("Choi matrix is not Hermitian")
        object.__setattr__(self, "choi", j)

    @classmethod
    def difference(cls, e, f) -> "HermitianPreservingMap":
        if (e.dim_in, e.dim_out) != (f.dim_in, f.dim_out):
            raise DimensionError(f"channel dims differ: {(e.dim_in, e.dim_out)} vs {(f.dim_in, f.dim_out)}")
        return cls(e.dim_in, e.dim_out, choi_of(e) - choi_of(f))

    @property
    def trace_annihilating(self) -> bool:
        t = np.einsum("aiaj->ij", self.choi.reshape(self.dim_out, self.dim_in, self.dim_out, self.dim_in))
        return float(np.max(np.abs(t))) <= 1e-9


def trace_out(expr: Affine, dim_out: int, dim_in: int) -> Affine:
    """``tr_out`` of an affine matrix on ``out ⊗ in``."""
    def f(a):
        lead = a.shape[:-2]
        t = a.reshape(lead + (dim_out, dim_in, dim_out, dim_in))
        return np.einsum("...aiaj->...ij", t)
    return expr.map(f)


def add_diamond_epigraph(p: SdpProblem, choi: Affine, dim_in: int, dim_out: int,
                         compact: bool = False) -> Affine:
    """Add variables/constraints bounding ``‖Φ‖◇`` for Choi ``choi``; returns the bound.

    Minimizing the returned scalar expression yields the diamond norm.  The
    compact program is only valid for trace-annihilating maps.
    """
    n = dim_in * dim_out
    if compact:
        z = p.hermitian(n, psd=True)
        p.add_psd(z - choi)
        t = p.scalar()
        p.add_psd(t.kron(np.eye(dim_in)) - trace_out(z, dim_out, dim_in))
        return 2.0 * t
    y0 = p.hermitian(n, psd=False)
    y1 = p.hermitian(n, psd=False)
    p.add_psd(Affine.block([[y0, -choi], [-choi.dagger(), y1]]))
    t0, t1 = p.scalar(), p.scalar()
    p.add_psd(t0.kron(np.eye(dim_in)) - trace_out(y0, dim_out, dim_in))
    p.add_psd(t1.kron(np.eye(dim_in)) - trace_out(y1, dim_out, dim_in))
    return 0.5 * (t0 + t1)


@dataclass
class DiamondResult:
    value: float
    solution: SdpSolution

    @property
    def gap(self) -> float:
        return self.solution.gap


def diamond_norm_sdp(m: HermitianPreservingMap, compact: bool = False, gap_tol: float = GAP_TOL,
                     feas_tol: float = FEAS_TOL, max_iter: int = MAX_ITER) -> DiamondResult:
    if compact and not m.trace_annihilating:
        raise ValueError("compact program needs a trace-annihilating map")
    p = SdpProblem()
    p.minimize(add_diamond_epigraph(p, Affine(m.choi), m.dim_in, m.dim_out, compact=compact))
    sol = solve(p, gap_tol=gap_tol, feas_tol=feas_tol, max_iter=max_iter)
    if not sol.ok:
        raise SdpSolveError(sol, "diamond norm SDP did not converge")
    return DiamondResult(max(0.0, 0.5 * (sol.primal + sol.dual)), sol)


def diamond_norm(m: HermitianPreservingMap, **kw) -> float:
    if not np.any(np.abs(m.choi) > 1e-14):
        return 0.0
    return diamond_norm_sdp(m, **kw).value


def diamond_distance(e, f, **kw) -> float:
    """``‖e − f‖◇`` for two channels (Kraus, Choi or deletion form)."""
    return diamond_norm(HermitianPreservingMap.difference(e, f), **kw)


def entangled_lower_bound(e, f) -> float:
    """Output trace distance for the maximally entangled input: ``‖J_e − J_f‖₁ / dim_in``."""
    m = HermitianPreservingMap.difference(e, f)
    return trace_norm(m.choi) / m.dim_in


def distinguishing_probability(diamond_value: float) -> float:
    """Optimal success probability ``½ + ¼‖E − F‖◇`` for telling the channels apart."""
    return 0.5 + 0.25 * diamond_value


@dataclass
class AlignmentResult:
    U: np.ndarray
    value: float
    restarts_used: int


def alignment_value(v: StinespringIsometry, w: StinespringIsometry, u: np.ndarray) -> float:
    """``‖(I_out ⊗ U) V − W‖∞``."""
    return operator_norm(np.kron(np.eye(v.dim_out), u) @ v.V - w.V)


def _check_same_dims(v: StinespringIsometry, w: StinespringIsometry) -> None:
    if (v.dim_in, v.dim_out, v.dim_env) != (w.dim_in, w.dim_out, w.dim_env):
        raise DimensionError("dilations must share input, output and environment dims (pad first)")


def align_dilations(v: StinespringIsometry, w: StinespringIsometry, restarts: int = 32, seed=0,
                    iters: int = 200, rtol: float = 1e-10) -> AlignmentResult:
    """Search for a unitary ``U`` on the environment minimizing ``‖(I⊗U)V − W‖∞``.

    Each run does weighted Procrustes (polar decomposition) steps whose input
    weight is a growing power of ``D†D`` for the current residual ``D``,
    i.e. a Schatten-p descent with ``p`` increasing.  Run 0 starts from the
    Frobenius-optimal unitary, the others from seeded Haar-random unitaries.
    The returned value is exact for the returned ``U`` and is an upper bound
    on the true minimum.
    """
    _check_same_dims(v, w)
    vb = v.blocks().transpose(1, 0, 2).reshape(v.dim_env, -1)   # env × (out·in), per-output blocks side by side
    wb = w.blocks().transpose(1, 0, 2).reshape(w.dim_env, -1)
    d_out, d_in = v.dim_out, v.dim_in
    rng = np.random.default_rng(seed)
    eye_out = np.eye(d_out)

    def procrustes(q: np.ndarray) -> np.ndarray:
        # maximize Re tr(U Σ_o V_o Q W_o†)
        big_q = np.kron(eye_out, q)
        x = vb @ big_q @ dagger(wb)
        return polar_unitary(dagger(x))

    def run(u: np.ndarray) -> tuple[np.ndarray, float]:
        best_u, best = u, alignment_value(v, w, u)
        p = 2.0
        prev = best
        for it in range(iters):
            dmat = np.kron(eye_out, u) @ v.V - w.V
            _, s, bh = np.linalg.svd(dmat, full_matrices=False)
            if s[0] <= 1e-15:
                return u, 0.0
            weights = (s / s[0]) ** (p - 2.0)
            q = (dagger(bh) * weights) @ bh
            u = procrustes(q)
            val = alignment_value(v, w, u)
            if val < best:
                best_u, best = u, val
            if abs(prev - val) < rtol and p >= 64:
                break
            prev = val
            p = min(2.0 + 2.0 * (it + 1), 256.0)
        return best_u, best

    best_u, best = None, np.inf
    used = 0
    for r in range(max(1, restarts)):
        start = procrustes(np.eye(d_in)) if r == 0 else haar_unitary(v.dim_env, rng)
        u, val = run(start)
        used += 1
        if val < best:
            best_u, best = u, val
        if best < 1e-12:
            break
    return AlignmentResult(U=best_u, value=float(best), restarts_used=used)


@dataclass
class ContinuityReport:
    dd: float
    align_value: float
    env_dim: int
    upper_ok: bool
    lower_status: str  # "pass" or "inconclusive"
    lower_bound: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def lower_ok(self) -> bool:
        return self.lower_status == "pass"


def check_continuity(e: KrausChannel, f: KrausChannel, tol: float = 1e-6, restarts: int = 32,
                     seed=0, env_dim: int | None = None) -> ContinuityReport:
    """Check ``‖e−f‖◇ ≤ 2·a`` and report whether ``a² ≤ ‖e−f‖◇`` for the aligned value ``a``.

    Both minimal dilations are padded to a common environment of dimension
    at least ``2·dim_in·dim_out``.  The first inequality holds for any
    unitary, so it is always decidable; the second concerns the true minimum
    over unitaries, which ``a`` only bounds from above, so a failure there is
    reported as inconclusive rather than as a violation.
    """
    if (e.dim_in, e.dim_out) != (f.dim_in, f.dim_out):
        raise DimensionError("channels must have matching dims")
    ve, vf = minimal_dilation(e), minimal_dilation(f)
    target = max(2 * e.dim_in * e.dim_out, ve.dim_env, vf.dim_env, env_dim or 0)
    ve, vf = pad_dilation(ve, target), pad_dilation(vf, target)
    dd = diamond_distance(e, f)
    al = align_dilations(ve, vf, restarts=restarts, seed=seed)
    return ContinuityReport(
        dd=dd, align_value=al.value, env_dim=target,
        upper_ok=dd <= 2 * al.value + tol,
        lower_status="pass" if al.value ** 2 <= dd + tol else "inconclusive",
        lower_bound=entangled_lower_bound(e, f),
        details={"restarts_used": al.restarts_used},
    )
