"""Dense complex matrix helpers shared by every other module.

Composite indices are row-major throughout: the pair ``(i_a, i_b)`` of a
factor ``A ⊗ B`` maps to ``i_a * dim_b + i_b``, which is what ``np.kron``
produces.
"""
from __future__ import annotations

from functools import reduce
from typing import Iterable, Sequence

import numpy as np

TOL_HERM = 1e-10
TOL_ISO = 1e-10


def tensor(*mats: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, left factor most significant."""
    if not mats:
        return np.ones((1, 1), dtype=complex)
    return reduce(np.kron, (np.asarray(m) for m in mats))


def partial_trace(m: np.ndarray, dims: Sequence[int], traced: Iterable[int]) -> np.ndarray:
    """Trace out the factors listed in ``traced`` from a square matrix on ``⊗ dims``.

    Raises:
        ValueError: if ``m`` is not square or its side is not ``prod(dims)``.
    """
    m = np.asarray(m)
    dims = [int(d) for d in dims]
    side = int(np.prod(dims))
    if m.ndim != 2 or m.shape != (side, side):
        raise ValueError(f"matrix of shape {m.shape} does not match factor dims {dims}")
    traced = sorted(set(traced))
    for t in traced:
        if not 0 <= t < len(dims):
            raise ValueError(f"factor index {t} out of range for dims {dims}")
    kept = [i for i in range(len(dims)) if i not in traced]
    n = len(dims)
    t = m.reshape(dims + dims)
    # einsum labels: row factors a.., column factors shared for traced ones
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    if 2 * n > len(letters):
        raise ValueError("too many tensor factors")
    row = list(letters[:n])
    col = [row[i] if i in traced else letters[n + i] for i in range(n)]
    out = [row[i] for i in kept] + [col[i] for i in kept]
    res = np.einsum("".join(row + col) + "->" + "".join(out), t)
    d_kept = int(np.prod([dims[i] for i in kept])) if kept else 1
    return res.reshape(d_kept, d_kept)


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + dagger(m))


def is_hermitian(m: np.ndarray, tol: float = TOL_HERM) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.max(np.abs(m - dagger(m)), initial=0.0) <= tol


def is_isometry(v: np.ndarray, tol: float = TOL_ISO) -> bool:
    v = np.asarray(v)
    return np.max(np.abs(dagger(v) @ v - np.eye(v.shape[1])), initial=0.0) <= tol


def trace_norm(m: np.ndarray) -> float:
    """Sum of singular values."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("trace norm needs a square matrix")
    if is_hermitian(m):
        return float(np.sum(np.abs(np.linalg.eigvalsh(hermitian_part(m)))))
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def operator_norm(m: np.ndarray) -> float:
    """Largest singular value (works for non-square matrices and vectors)."""
    m = np.atleast_2d(np.asarray(m))
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[0])


def psd_deficit(m: np.ndarray) -> float:
    """How far the smallest eigenvalue of the Hermitian part falls below zero."""
    w = np.linalg.eigvalsh(hermitian_part(np.asarray(m)))
    return float(max(0.0, -w[0])) if w.size else 0.0


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros((dim, 1), dtype=complex)
    v[index, 0] = 1.0
    return v


def matrix_unit(i: int, j: int, dim: int) -> np.ndarray:
    e = np.zeros((dim, dim), dtype=complex)
    e[i, j] = 1.0
    return e


def max_entangled(dim: int, normalized: bool = True) -> np.ndarray:
    """Projector onto ``Σ_i |i⟩|i⟩`` (divided by ``dim`` when normalized)."""
    omega = np.eye(dim, dtype=complex).reshape(dim * dim, 1)
    p = omega @ omega.conj().T
    return p / dim if normalized else p


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    if rows < cols:
        raise ValueError(f"no isometry from dim {cols} into dim {rows}")
    z = (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def polar_unitary(m: np.ndarray) -> np.ndarray:
    """Unitary factor of the polar decomposition, the closest unitary to ``m``."""
    u, _, vh = np.linalg.svd(m)
    return u @ vh


PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
