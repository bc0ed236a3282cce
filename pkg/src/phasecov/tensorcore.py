"""
Dense complex linear algebra for small multipartite systems.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` (row-major).
Parties are indexed from 0, leftmost tensor factor first, so a state on
``a (x) b (x) x`` has shape ``[da, db, dx]``.

Only what the cloning code needs lives here: Kronecker products, conjugate
transpose, partial trace, partial transpose, Hermitian eigenvalues (cyclic
Jacobi) and the squared Hilbert-Schmidt distance.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractError, ConvergenceError, DimensionError

ComplexMatrix = np.ndarray

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-13
_MAX_SWEEPS = 100
_NEGLIGIBLE = 1e-30


def as_matrix(a) -> ComplexMatrix:
    """Coerce ``a`` to a 2-D complex128 array; never reshapes or truncates."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    return m


def _check_shape(rho: ComplexMatrix, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise DimensionError(f"invalid subsystem dims {dims}")
    if rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"matrix is not square: {rho.shape}")
    if math.prod(dims) != rho.shape[0]:
        raise DimensionError(
            f"subsystem dims {dims} (product {math.prod(dims)}) "
            f"do not match matrix dimension {rho.shape[0]}"
        )
    return dims


def kron(a, b) -> ComplexMatrix:
    return np.kron(as_matrix(a), as_matrix(b))


def dagger(a) -> ComplexMatrix:
    return as_matrix(a).conj().T


def partial_trace(rho, dims: Sequence[int], keep: Iterable[int]) -> ComplexMatrix:
    """Reduce ``rho`` to the parties listed in ``keep``.

    Parameters
    ----------
    rho : (N, N) array
        Operator on the composite space.
    dims : sequence of int
        Local dimensions, ``prod(dims) == N``.
    keep : iterable of int
        Party indices to retain; their relative order is preserved.
    """
    rho = as_matrix(rho)
    dims = _check_shape(rho, dims)
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise DimensionError(f"party index out of range for {n} parties: {keep}")

    # einsum labels: row indices 0..n-1, column indices n..2n-1; traced
    # parties share the row label on both sides.
    row = list(range(n))
    col = [i + n if i in keep else i for i in range(n)]
    out = [i for i in keep] + [i + n for i in keep]
    reduced = np.einsum(rho.reshape(dims + dims), row + col, out)
    dk = math.prod(dims[i] for i in keep) if keep else 1
    return np.asarray(reduced).reshape(dk, dk)


def partial_transpose(rho, dims: Sequence[int], party: int) -> ComplexMatrix:
    """Transpose the indices of one party, leaving the others alone."""
    rho = as_matrix(rho)
    dims = _check_shape(rho, dims)
    n = len(dims)
    if not 0 <= party < n:
        raise DimensionError(f"party {party} out of range for {n} parties")
    axes = list(range(2 * n))
    axes[party], axes[party + n] = axes[party + n], axes[party]
    return rho.reshape(dims + dims).transpose(axes).reshape(rho.shape)


def hermitian_eigenvalues(a) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the classic real Jacobi rotation, so the iteration never leaves
    Hermitian form. Sweeps stop once the off-diagonal Frobenius norm drops
    below ``JACOBI_TOL`` (relative to the matrix norm when that exceeds 1).

    Raises
    ------
    ContractError
        If ``max|a - a^H| > HERMITIAN_TOL``.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"matrix is not square: {a.shape}")
    dev = np.max(np.abs(a - a.conj().T))
    if dev > HERMITIAN_TOL:
        raise ContractError(f"matrix is not Hermitian (max deviation {dev:.3e})")

    m = 0.5 * (a + a.conj().T)
    n = m.shape[0]
    tol = JACOBI_TOL * max(1.0, float(np.linalg.norm(m)))

    offdiag = ~np.eye(n, dtype=bool)

    def off_norm() -> float:
        return float(np.linalg.norm(m[offdiag]))

    for _ in range(_MAX_SWEEPS):
        if off_norm() < tol:
            return np.sort(np.diag(m).real)
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = m[p, q]
                r = abs(b)
                if r < _NEGLIGIBLE:
                    # far below tol; also avoids subnormal b / |b|
                    m[p, q] = m[q, p] = 0.0
                    continue
                phase = b / r  # e^{i alpha}
                app, aqq = m[p, p].real, m[q, q].real
                theta = (aqq - app) / (2.0 * r)
                if theta == 0.0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]] on the (p, q) plane
                g_qp = -s * phase.conjugate()
                g_qq = c * phase.conjugate()
                colp = m[:, p].copy()
                colq = m[:, q].copy()
                m[:, p] = c * colp + g_qp * colq
                m[:, q] = s * colp + g_qq * colq
                rowp = m[p, :].copy()
                rowq = m[q, :].copy()
                m[p, :] = c * rowp + g_qp.conjugate() * rowq
                m[q, :] = s * rowp + g_qq.conjugate() * rowq
                m[p, q] = m[q, p] = 0.0
                m[p, p] = app - t * r
                m[q, q] = aqq + t * r
    if off_norm() < tol:
        return np.sort(np.diag(m).real)
    raise ConvergenceError(f"Jacobi did not converge in {_MAX_SWEEPS} sweeps")


def hs_distance_sq(a, b) -> float:
    """Squared Hilbert-Schmidt distance ``Tr[(a - b)^2]`` of Hermitian matrices."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    # Tr[X^2] = sum |X_ij|^2 for Hermitian X; exact nonnegativity for free
    return float(np.sum(np.abs(diff) ** 2))
