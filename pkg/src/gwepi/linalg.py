"""Cyclic Jacobi eigen-solver for small dense Hermitian matrices."""

from __future__ import annotations

import numpy as np


def jacobi_eigh(a, tol: float = 1e-15, max_sweeps: int = 60):
    """Eigen-decompose a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns ``(w, v)`` with eigenvalues ``w`` in ascending order and the
    matching orthonormal eigenvectors as the columns of ``v``.
    """
    a = np.array(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=np.complex128)
    scale = max(np.abs(a).max(), 1e-300)
    offdiag = ~np.eye(n, dtype=bool)

    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a[offdiag]) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300 or mag < 1e-3 * tol * scale:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # J[p,p] = J[q,q] = c, J[p,q] = s*phase, J[q,p] = -s*conj(phase)
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * phase.conjugate() * col_q
                a[:, q] = s * phase * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * phase * row_q
                a[q, :] = s * phase.conjugate() * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * phase.conjugate() * vq
                v[:, q] = s * phase * vp + c * vq
    else:
        raise RuntimeError("Jacobi iteration did not converge")

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]
