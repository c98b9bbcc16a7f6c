"""Cyclic Jacobi eigensolver for small dense Hermitian matrices.

All spectral quantities in the package (frame bounds, excess, operator
gaps) come through this routine, so the only dense linear algebra needed
anywhere is a Hermitian eigendecomposition.  The complex rotation is the
real Jacobi rotation composed with a phase that makes the pivot entry
real.
"""

from __future__ import annotations

import math

import numpy as np


def _off_norm(a: np.ndarray) -> float:
    n = a.shape[0]
    s = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            s += 2.0 * abs(a[i, j]) ** 2
    return math.sqrt(s)


def jacobi_eigh(h: np.ndarray, rel_tol: float = 1e-14, max_sweeps: int = 60):
    """Eigenvalues and eigenvectors of a Hermitian matrix.

    Runs cyclic sweeps of two-sided unitary rotations until the
    off-diagonal Frobenius norm falls below rel_tol times the Frobenius
    norm of the input.  Returns (w, v) with w ascending and v's columns
    the matching orthonormal eigenvectors, as in numpy's convention.
    """
    a = np.array(h, dtype=np.complex128)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=np.complex128)
    if n == 1:
        return np.array([a[0, 0].real]), v

    fro = float(np.linalg.norm(a))
    if fro == 0.0:
        return np.zeros(n), v
    target = rel_tol * fro

    for _ in range(max_sweeps):
        if _off_norm(a) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                # phase that turns the pivot real, then a real rotation
                gamma = apq / abs(apq)
                tau = (aqq - app) / (2.0 * abs(apq))
                if tau >= 0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # columns of the 2x2 unitary in the (p, q) plane
                r = np.array(
                    [[c, s], [-gamma.conjugate() * s, gamma.conjugate() * c]],
                    dtype=np.complex128,
                )
                a[:, [p, q]] = a[:, [p, q]] @ r
                a[[p, q], :] = r.conj().T @ a[[p, q], :]
                v[:, [p, q]] = v[:, [p, q]] @ r
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    w = np.real(np.diag(a)).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def jacobi_eigvalsh(h: np.ndarray, rel_tol: float = 1e-14) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix (values only)."""
    return jacobi_eigh(h, rel_tol=rel_tol)[0]
