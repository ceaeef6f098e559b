"""Cyclic Jacobi eigensolver for small dense symmetric matrices.

Used by the p = 2 fast paths (symmetric-part spectra and Gram matrices); the
test suite cross-checks it against an independent LAPACK route.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["jacobi_eigh"]


def jacobi_eigh(A: np.ndarray, tol: float = 1e-12, max_sweeps: int = 60):
    """Eigenvalues and eigenvectors of a symmetric matrix by cyclic Jacobi.

    Sweeps rotate away off-diagonal entries until their total squared mass
    falls below ``tol`` (relative to the Frobenius norm).  Returns
    ``(w, V)`` with eigenvalues ``w`` ascending and orthonormal columns ``V``
    so that ``A V = V diag(w)``.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    if not np.allclose(A, A.T, atol=1e-10):
        raise ValueError("matrix must be symmetric")
    A = (A + A.T) / 2.0
    V = np.eye(n)
    if n == 1:
        return A.diagonal().copy(), V

    scale = max(np.linalg.norm(A), 1.0)
    for _ in range(max_sweeps):
        off = math.sqrt(max(np.sum(A * A) - np.sum(A.diagonal() ** 2), 0.0))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= tol * scale / (n * n):
                    continue
                phi = 0.5 * math.atan2(2.0 * apq, A[q, q] - A[p, p])
                c, s = math.cos(phi), math.sin(phi)
                rot_p = c * A[:, p] - s * A[:, q]
                rot_q = s * A[:, p] + c * A[:, q]
                A[:, p], A[:, q] = rot_p, rot_q
                rot_p = c * A[p, :] - s * A[q, :]
                rot_q = s * A[p, :] + c * A[q, :]
                A[p, :], A[q, :] = rot_p, rot_q
                A[p, q] = A[q, p] = 0.0
                rot_p = c * V[:, p] - s * V[:, q]
                rot_q = s * V[:, p] + c * V[:, q]
                V[:, p], V[:, q] = rot_p, rot_q

    w = A.diagonal().copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]
