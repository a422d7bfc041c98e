"""Jacobi rotation kernels backing the matrix instance.

Two solvers live here, sharing one 2x2 rotation routine:

* :func:`one_sided_svd` orthogonalizes the columns of a tall matrix by
  right-multiplying complex plane rotations, which yields the singular
  value decomposition without ever forming a Gram matrix.
* :func:`hermitian_jacobi` diagonalizes a Hermitian matrix with the
  classic two-sided cyclic sweep.

Both run until a full sweep triggers no rotation, where a rotation at
columns (p, q) is triggered only while the Gram entry exceeds machine
epsilon relative to the participating column norms.  The sweep budget is
fixed; exceeding it raises :class:`~daggermp.core.NumericError`.  All
paths are deterministic: identical input bytes give identical output
bytes.
"""

from __future__ import annotations

import math

import numpy as np

from .core import NumericError

_EPS = float(np.finfo(np.float64).eps)
MAX_SWEEPS = 30


def _rotation(app: float, aqq: float, g: complex):
    """Parameters (c, s, phase, t) of the unitary zeroing g.

    For the Hermitian 2x2 block [[app, g], [conj(g), aqq]] with g != 0,
    the returned values define J = [[c, s], [-s*phase, c*phase]] with
    J† B J diagonal; t is tan of the underlying real rotation angle.
    """
    mag = abs(g)
    phase = g.conjugate() / mag
    tau = (aqq - app) / (2.0 * mag)
    t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    return c, t * c, phase, t


def _complete_columns(u: np.ndarray, k: int) -> None:
    """Extend the orthonormal columns u[:, :k] to a full basis in place.

    Greedy pick: at each step take the standard basis vector with the
    largest residual against the columns so far (ties resolve to the
    lowest index), project, renormalize twice for orthogonality at
    machine precision.
    """
    n = u.shape[0]
    for j in range(k, n):
        cur = u[:, :j]
        proj = cur @ cur.conj().T
        resid = np.eye(n, dtype=np.complex128) - proj
        scores = resid.diagonal().real
        pick = int(np.argmax(scores))
        col = resid[:, pick]
        col = col / np.linalg.norm(col)
        col = col - cur @ (cur.conj().T @ col)
        u[:, j] = col / np.linalg.norm(col)


def one_sided_svd(a: np.ndarray, max_sweeps: int = MAX_SWEEPS):
    """Factor a tall matrix: returns (u, sigma, v) with a = u Σ v†.

    Requires rows >= cols >= 1.  u is rows x rows unitary, sigma the
    cols singular values sorted descending, v cols x cols unitary, and
    Σ the rows x cols diagonal extension of sigma.  Column phases are
    not normalized here; the caller owns that policy.
    """
    n, m = a.shape
    w = np.array(a, dtype=np.complex128, order="F")
    v = np.eye(m, dtype=np.complex128, order="F")
    if m > 1:
        for _ in range(max_sweeps):
            rotated = False
            norms = np.einsum("ij,ij->j", w.conj(), w).real
            for p in range(m - 1):
                for q in range(p + 1, m):
                    g = np.vdot(w[:, p], w[:, q])
                    mag = abs(g)
                    if mag <= _EPS * math.sqrt(norms[p] * norms[q]):
                        continue
                    rotated = True
                    c, s, phase, t = _rotation(norms[p], norms[q], g)
                    sp = s * phase
                    cp = c * phase
                    wp = w[:, p].copy()
                    w[:, p] = c * wp - sp * w[:, q]
                    w[:, q] = s * wp + cp * w[:, q]
                    vp = v[:, p].copy()
                    v[:, p] = c * vp - sp * v[:, q]
                    v[:, q] = s * vp + cp * v[:, q]
                    norms[p] = max(norms[p] - t * mag, 0.0)
                    norms[q] = max(norms[q] + t * mag, 0.0)
            if not rotated:
                break
        else:
            raise NumericError(
                f"one-sided Jacobi SVD did not converge in {max_sweeps} sweeps"
            )
    sigma = np.sqrt(np.einsum("ij,ij->j", w.conj(), w).real)
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    w = w[:, order]
    v = np.ascontiguousarray(v[:, order])
    zero_tol = max(n, m) * _EPS * (float(sigma[0]) if sigma.size else 0.0)
    u = np.zeros((n, n), dtype=np.complex128)
    good = 0
    for j in range(m):
        if sigma[j] > zero_tol:
            u[:, j] = w[:, j] / sigma[j]
            good = j + 1
    _complete_columns(u, good)
    return u, sigma, v


def hermitian_jacobi(p: np.ndarray, max_sweeps: int = MAX_SWEEPS):
    """Diagonalize an exactly Hermitian matrix: returns (q, lam).

    p = q diag(lam) q† with lam real and sorted descending.  The caller
    is responsible for symmetrizing near-Hermitian input and for any
    phase policy on the columns of q.
    """
    n = p.shape[0]
    m_ = np.array(p, dtype=np.complex128, order="F")
    q = np.eye(n, dtype=np.complex128, order="F")
    if n > 1:
        for _ in range(max_sweeps):
            rotated = False
            for i in range(n - 1):
                for j in range(i + 1, n):
                    g = m_[i, j]
                    aii = m_[i, i].real
                    ajj = m_[j, j].real
                    if abs(g) <= _EPS * math.sqrt(abs(aii * ajj)):
                        continue
                    rotated = True
                    c, s, phase, _t = _rotation(aii, ajj, g)
                    sp = s * phase
                    cp = c * phase
                    col_i = m_[:, i].copy()
                    m_[:, i] = c * col_i - sp * m_[:, j]
                    m_[:, j] = s * col_i + cp * m_[:, j]
                    row_i = m_[i, :].copy()
                    m_[i, :] = c * row_i - sp.conjugate() * m_[j, :]
                    m_[j, :] = s * row_i + cp.conjugate() * m_[j, :]
                    m_[i, j] = 0.0
                    m_[j, i] = 0.0
                    m_[i, i] = m_[i, i].real
                    m_[j, j] = m_[j, j].real
                    qi = q[:, i].copy()
                    q[:, i] = c * qi - sp * q[:, j]
                    q[:, j] = s * qi + cp * q[:, j]
            if not rotated:
                break
        else:
            raise NumericError(
                f"Jacobi eigensolver did not converge in {max_sweeps} sweeps"
            )
    lam = m_.diagonal().real.copy()
    order = np.argsort(-lam, kind="stable")
    return np.ascontiguousarray(q[:, order]), lam[order]
