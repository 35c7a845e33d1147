"""Slow, loop-based reference computations used to cross-check the library.

Nothing here imports from ``privcorr``; each function works directly from
definitions so that agreement with the vectorized code is meaningful.
"""
from __future__ import annotations

import itertools

import numpy as np
from scipy.optimize import minimize


def unit(i, j, d):
    m = np.zeros((d, d), dtype=complex)
    m[i, j] = 1.0
    return m


def apply_kraus(ops, sigma):
    return sum(k @ sigma @ k.conj().T for k in ops)


def choi_loops(ops, d_in):
    """``Σ_ij E(|i⟩⟨j|) ⊗ |i⟩⟨j|`` assembled block by block."""
    d_out = ops[0].shape[0]
    j = np.zeros((d_out * d_in, d_out * d_in), dtype=complex)
    for a in range(d_in):
        for b in range(d_in):
            j += np.kron(apply_kraus(ops, unit(a, b, d_in)), unit(a, b, d_in))
    return j


def partial_trace_loops(m, dims, traced):
    """Partial trace by explicit summation over multi-indices."""
    kept = [i for i in range(len(dims)) if i not in traced]
    kd = [dims[i] for i in kept]
    td = [dims[i] for i in traced]
    size = int(np.prod(kd)) if kd else 1
    out = np.zeros((size, size), dtype=complex)
    for r in itertools.product(*[range(d) for d in kd]):
        for c in itertools.product(*[range(d) for d in kd]):
            s = 0j
            for t in itertools.product(*[range(d) for d in td]):
                ri, ci = [0] * len(dims), [0] * len(dims)
                for pos, i in enumerate(kept):
                    ri[i], ci[i] = r[pos], c[pos]
                for pos, i in enumerate(traced):
                    ri[i] = ci[i] = t[pos]
                s += m[np.ravel_multi_index(ri, dims), np.ravel_multi_index(ci, dims)]
            out[np.ravel_multi_index(r, kd) if kd else 0, np.ravel_multi_index(c, kd) if kd else 0] = s
    return out


def complement_action_loops(ops, sigma):
    """``tr_out(V σ V†)`` with ``V|ψ⟩ = Σ_e K_e|ψ⟩⊗|e⟩``: entry ``[e,f] = tr(K_e σ K_f†)``."""
    k = len(ops)
    out = np.zeros((k, k), dtype=complex)
    for e in range(k):
        for f in range(k):
            out[e, f] = np.trace(ops[e] @ sigma @ ops[f].conj().T)
    return out


def trace_norm_eig(h):
    return float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (h + h.conj().T)))))


def diamond_brute(ops_a, ops_b, d_in, starts=12, seed=0):
    """Maximize ``‖(Φ⊗id)(ψψ†)‖₁`` over pure inputs with a same-size ancilla.

    Nelder-Mead from several random starts; a lower bound on the diamond norm
    that is tight when the optimizer finds the maximizer.
    """
    rng = np.random.default_rng(seed)
    n = d_in * d_in

    def value(x):
        psi = x[:n] + 1j * x[n:]
        nrm = np.linalg.norm(psi)
        if nrm < 1e-12:
            return 0.0
        psi = (psi / nrm).reshape(d_in, d_in)  # system index first
        rho = np.einsum("ia,jb->iajb", psi, psi.conj()).reshape(n, n)
        out = 0
        for ops, sign in ((ops_a, 1), (ops_b, -1)):
            for k in ops:
                big = np.kron(k, np.eye(d_in))
                out = out + sign * big @ rho @ big.conj().T
        return -trace_norm_eig(out)

    best = 0.0
    for _ in range(starts):
        res = minimize(value, rng.normal(size=2 * n), method="Nelder-Mead",
                       options={"maxiter": 4000, "xatol": 1e-10, "fatol": 1e-12})
        best = max(best, -res.fun)
    return best


def deletion_grid_distance(ops, d_in, d_out, grid=41):
    """Entangled-input distance from ``E`` to the nearest deletion channel ``tr(·)ω``.

    ``ω`` ranges over a grid on the qubit Bloch ball, so this needs ``d_out = 2``.
    """
    assert d_out == 2
    j = choi_loops(ops, d_in) / d_in
    best = np.inf
    xs = np.linspace(-1, 1, grid)
    for x, y, z in itertools.product(xs, xs, xs):
        if x * x + y * y + z * z > 1:
            continue
        w = 0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]])
        best = min(best, trace_norm_eig(j - np.kron(w, np.eye(d_in) / d_in)))
    return best
