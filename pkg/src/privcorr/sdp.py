"""Small dense semidefinite programs over complex Hermitian matrices.

Problems are written in terms of real decision variables ``x`` and
Hermitian-matrix-valued affine expressions of ``x`` (:class:`Affine`).
A problem is

    minimize / maximize   c·x
    subject to            F_k(x) ⪰ 0          (every PSD constraint)
                          G_j(x) = H_j        (Hermitian equalities)

Complex blocks are passed to the interior-point cone solver of ``cvxopt``
through the real-symmetric embedding ``X + iY ↦ [[X, -Y], [Y, X]]``, which
is invisible at this interface.  The solver returns primal and dual
objective values, so every reported optimum carries its own certificate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg

from .linalg import psd_deficit

GAP_TOL = 1e-7
FEAS_TOL = 1e-8
MAX_ITER = 500


class Affine:
    """``const + Σ_i x_i coef[i]`` with square complex matrices.

    ``coef`` may be shorter than the problem's variable count; missing rows
    are zero.  Instances are immutable by convention.
    """

    __slots__ = ("const", "coef")
    __array_ufunc__ = None  # make numpy defer to the reflected operators

    def __init__(self, const: np.ndarray, coef: np.ndarray | None = None):
        const = np.asarray(const, dtype=complex)
        if const.ndim != 2:
            raise ValueError("affine expressions are matrix valued")
        self.const = const
        if coef is None:
            coef = np.zeros((0,) + const.shape, dtype=complex)
        self.coef = np.asarray(coef, dtype=complex)

    @property
    def shape(self) -> tuple[int, int]:
        return self.const.shape

    @property
    def nvars(self) -> int:
        return self.coef.shape[0]

    def padded(self, n: int) -> np.ndarray:
        if self.nvars == n:
            return self.coef
        out = np.zeros((n,) + self.shape, dtype=complex)
        out[: self.nvars] = self.coef
        return out

    def map(self, f: Callable[[np.ndarray], np.ndarray]) -> "Affine":
        """Apply a linear map that broadcasts over a leading batch axis."""
        const = f(self.const)
        coef = f(self.coef) if self.nvars else np.zeros((0,) + const.shape, dtype=complex)
        return Affine(const, coef)

    def __add__(self, other) -> "Affine":
        if not isinstance(other, Affine):
            other = Affine(np.asarray(other, dtype=complex))
        n = max(self.nvars, other.nvars)
        return Affine(self.const + other.const, self.padded(n) + other.padded(n))

    __radd__ = __add__

    def __neg__(self) -> "Affine":
        return Affine(-self.const, -self.coef)

    def __sub__(self, other) -> "Affine":
        return self + (-other if isinstance(other, Affine) else -np.asarray(other))

    def __rsub__(self, other) -> "Affine":
        return (-self) + other

    def __mul__(self, scalar) -> "Affine":
        return Affine(self.const * scalar, self.coef * scalar)

    __rmul__ = __mul__

    def kron(self, right: np.ndarray) -> "Affine":
        right = np.asarray(right)
        return self.map(lambda a: _batched_kron(a, right))

    def value(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.const + np.tensordot(x[: self.nvars], self.coef, axes=1)

    @staticmethod
    def block(rows: list[list["Affine | np.ndarray | None"]]) -> "Affine":
        """Assemble a block matrix; ``None`` entries are zero blocks."""
        heights = []
        for r in rows:
            h = next(e.shape[0] for e in r if e is not None)
            heights.append(h)
        widths = []
        for j in range(len(rows[0])):
            w = next(r[j].shape[1] for r in rows if r[j] is not None)
            widths.append(w)
        items = [[e if isinstance(e, Affine) or e is None else Affine(e) for e in r] for r in rows]
        n = max((e.nvars for r in items for e in r if e is not None), default=0)
        big = (sum(heights), sum(widths))
        const = np.zeros(big, dtype=complex)
        coef = np.zeros((n,) + big, dtype=complex)
        r0 = 0
        for i, r in enumerate(items):
            c0 = 0
            for j, e in enumerate(r):
                if e is not None:
                    const[r0:r0 + heights[i], c0:c0 + widths[j]] = e.const
                    coef[:, r0:r0 + heights[i], c0:c0 + widths[j]] = e.padded(n)
                c0 += widths[j]
            r0 += heights[i]
        return Affine(const, coef)

    def dagger(self) -> "Affine":
        return self.map(lambda a: np.conj(np.swapaxes(a, -1, -2)))


def _batched_kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    lead = a.shape[:-2]
    m, n = a.shape[-2:]
    p, q = b.shape
    out = a[..., :, None, :, None] * b[:, None, :]
    return out.reshape(lead + (m * p, n * q))


def hermitian_basis(dim: int) -> np.ndarray:
    """Real-coordinate basis of ``dim×dim`` Hermitian matrices, shape ``(dim², dim, dim)``.

    Order: diagonal entries, then for each ``i < j`` the real then imaginary
    off-diagonal directions (``E_ij + E_ji`` and ``i(E_ji - E_ij)``) scaled
    by ``1/√2`` so the basis is orthonormal in the trace inner product.
    """
    out = np.zeros((dim * dim, dim, dim), dtype=complex)
    k = 0
    for i in range(dim):
        out[k, i, i] = 1.0
        k += 1
    s = 1 / np.sqrt(2)
    for i in range(dim):
        for j in range(i + 1, dim):
            out[k, i, j] = out[k, j, i] = s
            k += 1
            out[k, i, j] = -1j * s
            out[k, j, i] = 1j * s
            k += 1
    return out


@dataclass
class SdpSolution:
    x: np.ndarray
    primal: float
    dual: float
    gap: float
    iterations: int
    status: str  # "optimal", "max-iter", "infeasible", "unbounded", "inaccurate"
    eq_residual: float = 0.0
    psd_residual: float = 0.0
    blocks: list[np.ndarray] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == "optimal"

    def value(self, expr: Affine) -> np.ndarray:
        return expr.value(self.x)


class SdpSolveError(RuntimeError):
    def __init__(self, solution: SdpSolution, what: str = "SDP solve failed"):
        super().__init__(f"{what}: status={solution.status}, gap={solution.gap:.3g}")
        self.solution = solution


class SdpProblem:
    """Builder for an SDP in the Hermitian-affine form described above."""

    def __init__(self):
        self.nvars = 0
        self.psd: list[Affine] = []
        self.equalities: list[tuple[Affine, np.ndarray]] = []
        self.objective = np.zeros(0)
        self.sense = "min"
        self.blocks: list[int] = []
        self._block_exprs: list[Affine] = []

    def _new_vars(self, k: int) -> int:
        start = self.nvars
        self.nvars += k
        return start

    def hermitian(self, dim: int, psd: bool = True) -> Affine:
        """Allocate a Hermitian matrix variable (PSD-constrained by default)."""
        start = self._new_vars(dim * dim)
        coef = np.zeros((self.nvars, dim, dim), dtype=complex)
        coef[start:] = hermitian_basis(dim)
        expr = Affine(np.zeros((dim, dim)), coef)
        if psd:
            self.psd.append(expr)
        self.blocks.append(dim)
        self._block_exprs.append(expr)
        return expr

    def scalar(self, nonneg: bool = True) -> Affine:
        start = self._new_vars(1)
        coef = np.zeros((self.nvars, 1, 1), dtype=complex)
        coef[start, 0, 0] = 1.0
        expr = Affine(np.zeros((1, 1)), coef)
        if nonneg:
            self.psd.append(expr)
        return expr

    def add_psd(self, expr: Affine) -> None:
        if expr.shape[0] != expr.shape[1]:
            raise ValueError("PSD constraint needs a square expression")
        self.psd.append(expr)

    def add_equality(self, expr: Affine, rhs) -> None:
        rhs = np.asarray(rhs, dtype=complex).reshape(expr.shape)
        self.equalities.append((expr, rhs))

    def _set_objective(self, expr: Affine, sense: str) -> None:
        if expr.shape != (1, 1):
            raise ValueError("objective must be scalar")
        self.objective = np.real(expr.padded(self.nvars)[:, 0, 0]).copy()
        self._objective_const = float(np.real(expr.const[0, 0]))
        self.sense = sense

    def minimize(self, expr: Affine) -> None:
        self._set_objective(expr, "min")

    def maximize(self, expr: Affine) -> None:
        self._set_objective(expr, "max")


def _embed_real(h: np.ndarray) -> np.ndarray:
    """Real-symmetric embedding over a leading batch axis."""
    re, im = h.real, h.imag
    top = np.concatenate([re, -im], axis=-1)
    bot = np.concatenate([im, re], axis=-1)
    return np.concatenate([top, bot], axis=-2)


def _hermitian_rows(expr_coef: np.ndarray, const: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Real equations expressing equality of Hermitian matrices entrywise."""
    m = const.shape[0]
    iu = np.triu_indices(m)
    iu_strict = np.triu_indices(m, 1)
    rows = np.concatenate([expr_coef[:, iu[0], iu[1]].real, expr_coef[:, iu_strict[0], iu_strict[1]].imag], axis=1)
    rhs = np.concatenate([const[iu].real, const[iu_strict].imag])
    return rows.T, rhs


def _independent_rows(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    if a.shape[0] == 0:
        return a, b
    q, r, piv = scipy.linalg.qr(a.T, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    rank = int(np.sum(diag > tol * max(1.0, diag[0])))
    keep = np.sort(piv[:rank])
    return a[keep], b[keep]


def solve(problem: SdpProblem, gap_tol: float = GAP_TOL, feas_tol: float = FEAS_TOL,
          max_iter: int = MAX_ITER) -> SdpSolution:
    """Solve with a primal-dual interior-point method.

    The returned status is ``"optimal"`` only when the solver converged and
    the duality gap and constraint residuals measured here are within
    ``gap_tol`` and ``feas_tol``.
    """
    import cvxopt
    from cvxopt import solvers

    n = problem.nvars
    sign = 1.0 if problem.sense == "min" else -1.0
    c = sign * np.concatenate([problem.objective, np.zeros(n - problem.objective.size)])

    g_parts, h_parts, sizes = [], [], []
    for expr in problem.psd:
        m = expr.shape[0]
        coef = expr.padded(n)
        coef = 0.5 * (coef + np.conj(np.swapaxes(coef, -1, -2)))
        const = 0.5 * (expr.const + expr.const.conj().T)
        g = -_embed_real(coef).reshape(n, 4 * m * m).T
        h = _embed_real(const).reshape(4 * m * m)
        g_parts.append(g)
        h_parts.append(h)
        sizes.append(2 * m)
    G = np.concatenate(g_parts, axis=0)
    h = np.concatenate(h_parts)

    a_rows, b_rows = [], []
    for expr, rhs in problem.equalities:
        coef = expr.padded(n)
        rows, r0 = _hermitian_rows(coef, expr.const)
        _, rr = _hermitian_rows(coef[:0], rhs)
        a_rows.append(rows)
        b_rows.append(rr - r0)
    if a_rows:
        A, b = _independent_rows(np.concatenate(a_rows), np.concatenate(b_rows))
    else:
        A, b = np.zeros((0, n)), np.zeros(0)

    def sp(mat):
        nz = np.nonzero(np.abs(mat) > 1e-15)
        return cvxopt.spmatrix(mat[nz].tolist(), nz[0].tolist(), nz[1].tolist(), mat.shape)

    kwargs = dict(dims={"l": 0, "q": [], "s": sizes})
    if A.shape[0]:
        kwargs.update(A=sp(A), b=cvxopt.matrix(b))
    options = {"show_progress": False, "maxiters": int(max_iter), "abstol": 0.1 * gap_tol,
               "reltol": 1e-14, "feastol": min(1e-9, 0.1 * feas_tol), "refinement": 2}
    # Cholesky-based KKT solves are about twice as fast; QR is the robust fallback.
    res = None
    for kkt in ("chol", "qr"):
        try:
            res = solvers.conelp(cvxopt.matrix(c), sp(G), cvxopt.matrix(h), options=options,
                                 kktsolver=kkt, **kwargs)
        except (ArithmeticError, ValueError):
            continue
        if res["status"] == "optimal":
            break
    if res is None:
        raise ArithmeticError("KKT system singular for every factorization")

    x = np.array(res["x"]).ravel() if res["x"] is not None else np.full(n, np.nan)
    const = getattr(problem, "_objective_const", 0.0)
    pobj = res["primal objective"]
    dobj = res["dual objective"]
    pobj = sign * pobj + const if pobj is not None else float("nan")
    dobj = sign * dobj + const if dobj is not None else float("nan")
    gap = abs(pobj - dobj)
    eq_res = float(np.max(np.abs(A @ x - b), initial=0.0)) if A.shape[0] else 0.0
    psd_res = max((psd_deficit(e.value(x)) for e in problem.psd), default=0.0) if np.all(np.isfinite(x)) else np.inf

    raw = res["status"]
    iters = int(res.get("iterations", 0))
    if raw == "primal infeasible":
        status = "infeasible"
    elif raw == "dual infeasible":
        status = "unbounded"
    elif gap <= gap_tol and eq_res <= feas_tol and psd_res <= feas_tol:
        status = "optimal"
    elif iters >= max_iter:
        status = "max-iter"
    else:
        status = "inaccurate"
    blocks = [e.value(x) for e in problem._block_exprs] if np.all(np.isfinite(x)) else []
    return SdpSolution(x=x, primal=pobj, dual=dobj, gap=gap, iterations=iters, status=status,
                       eq_residual=eq_res, psd_residual=psd_res, blocks=blocks)
