"""Dense complex matrices as a dagger category instance.

A morphism ``n -> m`` is an n-by-m complex matrix, ``compose(f, g)`` is
the ordinary product ``f @ g`` (composition reads left to right), and
the dagger is the conjugate transpose.  Two consequences worth keeping
in mind:

* an isometry has orthonormal rows (``s @ s.dagger() == I`` on the source),
* a coisometry has orthonormal columns (``r.dagger() @ r == I`` on the target).

The SVD and the Hermitian eigendecomposition are computed in-repo with
Jacobi rotations (see ``_jacobi``); numpy supplies array storage and
elementwise arithmetic only.  Both factorizations are deterministic:
singular values sort descending and each left singular vector's phase
is fixed so its first component of modulus above the rank cutoff is
real and nonnegative, with the phase compensated in the right factor.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _jacobi
from .core import (
    EQ_TOL_DEFAULT,
    CapabilityError,
    ConsistencyError,
    DaggerInstance,
    InputError,
    PreconditionError,
    Tolerance,
)

_EPS = float(np.finfo(np.float64).eps)
CLUSTER_TOL_DEFAULT = 1e-6


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """Immutable dense complex matrix; the morphism type of this instance."""

    array: np.ndarray

    def __post_init__(self):
        arr = np.array(self.array, dtype=np.complex128)
        if arr.ndim != 2:
            raise InputError(f"matrix must be 2-dimensional, got shape {arr.shape}")
        if arr.size and not np.all(np.isfinite(arr)):
            raise InputError("matrix entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "array", arr)

    @property
    def rows(self) -> int:
        return self.array.shape[0]

    @property
    def cols(self) -> int:
        return self.array.shape[1]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[complex]]) -> "ComplexMatrix":
        return cls(np.array(rows, dtype=np.complex128).reshape(len(rows), -1))

    @classmethod
    def identity(cls, n: int) -> "ComplexMatrix":
        return cls(np.eye(n, dtype=np.complex128))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ComplexMatrix":
        return cls(np.zeros((rows, cols), dtype=np.complex128))

    def dagger(self) -> "ComplexMatrix":
        return ComplexMatrix(self.array.conj().T)

    def norm(self) -> float:
        return float(np.linalg.norm(self.array))

    def __matmul__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        if self.cols != other.rows:
            raise InputError(
                f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}"
            )
        return ComplexMatrix(self.array @ other.array)

    def __repr__(self):
        return f"ComplexMatrix({self.rows}x{self.cols})"


def frobenius(a: ComplexMatrix) -> float:
    return a.norm()


def _default_rank_tol(rows: int, cols: int, sigma_max: float) -> float:
    return max(rows, cols) * _EPS * sigma_max


@dataclass(frozen=True)
class SVDResult:
    """u Σ v† = a with u, v unitary and Σ the diagonal extension of sigma."""

    u: ComplexMatrix
    sigma: tuple[float, ...]
    v: ComplexMatrix
    rank: int

    def sigma_matrix(self) -> ComplexMatrix:
        n, m = self.u.rows, self.v.rows
        out = np.zeros((n, m), dtype=np.complex128)
        k = len(self.sigma)
        out[:k, :k] = np.diag(self.sigma)
        return ComplexMatrix(out)

    def reconstruct(self) -> ComplexMatrix:
        return ComplexMatrix(
            self.u.array @ self.sigma_matrix().array @ self.v.array.conj().T
        )


@dataclass(frozen=True)
class HermEigResult:
    """q diag(eigenvalues) q† = p with q unitary, eigenvalues descending."""

    q: ComplexMatrix
    eigenvalues: tuple[float, ...]

    def reconstruct(self) -> ComplexMatrix:
        qa = self.q.array
        return ComplexMatrix((qa * np.asarray(self.eigenvalues)) @ qa.conj().T)


def _phase_factor(col: np.ndarray, tol: float) -> complex:
    """Unit scalar making the first above-tol component real nonnegative."""
    mods = np.abs(col)
    above = np.nonzero(mods > tol)[0]
    i = int(above[0]) if above.size else int(np.argmax(mods))
    z = col[i]
    mag = abs(z)
    return z.conjugate() / mag if mag > 0.0 else 1.0


def svd(
    a: ComplexMatrix,
    rank_tol: Optional[float] = None,
    max_sweeps: int = _jacobi.MAX_SWEEPS,
) -> SVDResult:
    """One-sided Jacobi SVD, run on the taller orientation.

    ``rank_tol`` overrides the cutoff used for the rank count and the
    phase normalization threshold; the default is
    ``max(rows, cols) * machine_eps * sigma_max``.
    """
    n, m = a.rows, a.cols
    if min(n, m) == 0:
        return SVDResult(
            ComplexMatrix.identity(n), (), ComplexMatrix.identity(m), 0
        )
    if n >= m:
        u, s, v = _jacobi.one_sided_svd(a.array, max_sweeps)
    else:
        vb, s, ub = _jacobi.one_sided_svd(a.array.conj().T, max_sweeps)
        u, v = ub, vb
    u = np.array(u)
    v = np.array(v)
    k = len(s)
    smax = float(s[0]) if k else 0.0
    tol = rank_tol if rank_tol is not None else _default_rank_tol(n, m, smax)
    for j in range(k):
        ph = _phase_factor(u[:, j], tol)
        u[:, j] *= ph
        v[:, j] *= ph
    for j in range(k, n):
        u[:, j] *= _phase_factor(u[:, j], tol)
    for j in range(k, m):
        v[:, j] *= _phase_factor(v[:, j], tol)
    rank = int(np.count_nonzero(s > tol))
    return SVDResult(
        ComplexMatrix(u), tuple(float(x) for x in s), ComplexMatrix(v), rank
    )


def pinv(a: ComplexMatrix, rank_tol: Optional[float] = None) -> ComplexMatrix:
    """Moore-Penrose inverse via the SVD, singular values cut at rank_tol."""
    res = svd(a, rank_tol=rank_tol)
    k = res.rank
    if k == 0:
        return ComplexMatrix.zeros(a.cols, a.rows)
    vk = res.v.array[:, :k]
    uk = res.u.array[:, :k]
    return ComplexMatrix((vk / np.asarray(res.sigma[:k])) @ uk.conj().T)


def numeric_rank(a: ComplexMatrix, rank_tol: Optional[float] = None) -> int:
    """Count of singular values above the cutoff; 0 for the zero matrix."""
    return svd(a, rank_tol=rank_tol).rank


def has_mp_wrt_transpose(a: ComplexMatrix, rank_tol: Optional[float] = None) -> bool:
    """Existence test for the plain-transpose dagger.

    With the unconjugated transpose as dagger, a Moore-Penrose inverse
    exists iff rank(a aᵀ) = rank(a) = rank(aᵀ a).  Complex entries can
    collapse the products' rank ([i, 1] is the classic failure); real
    matrices always pass.
    """
    at = a.array.T
    r = numeric_rank(a, rank_tol)
    r_left = numeric_rank(ComplexMatrix(a.array @ at), rank_tol)
    r_right = numeric_rank(ComplexMatrix(at @ a.array), rank_tol)
    return r_left == r == r_right


def herm_eig(
    p: ComplexMatrix,
    eq_tol: float = EQ_TOL_DEFAULT,
    max_sweeps: int = _jacobi.MAX_SWEEPS,
) -> HermEigResult:
    """Eigendecomposition of a Hermitian matrix via cyclic Jacobi.

    Input must be Hermitian within eq_tol scale; it is symmetrized
    exactly before iterating, so the factorization reproduces the
    symmetrized matrix.
    """
    if p.rows != p.cols:
        raise InputError("eigendecomposition requires a square matrix")
    arr = p.array
    herm_dev = float(np.linalg.norm(arr - arr.conj().T))
    if herm_dev > eq_tol * max(1.0, p.norm() ** 2):
        raise InputError(f"matrix is not Hermitian (deviation {herm_dev:.3e})")
    if p.rows == 0:
        return HermEigResult(ComplexMatrix.identity(0), ())
    sym = (arr + arr.conj().T) / 2.0
    q, lam = _jacobi.hermitian_jacobi(sym, max_sweeps)
    q = np.array(q)
    lam_max = float(np.max(np.abs(lam))) if lam.size else 0.0
    tol = _default_rank_tol(p.rows, p.cols, lam_max)
    for j in range(q.shape[1]):
        q[:, j] *= _phase_factor(q[:, j], tol)
    return HermEigResult(ComplexMatrix(q), tuple(float(x) for x in lam))


def herm_mp(
    p: ComplexMatrix,
    rank_tol: Optional[float] = None,
    eq_tol: float = EQ_TOL_DEFAULT,
) -> ComplexMatrix:
    """Moore-Penrose inverse of a Hermitian matrix via its eigenvalues.

    This is the eigendecomposition route (invert eigenvalues above the
    cutoff, zero the rest); it is independent of the SVD-based
    :func:`pinv` and serves as the gram solver for matrices.
    """
    eig = herm_eig(p, eq_tol=eq_tol)
    lam = np.asarray(eig.eigenvalues)
    lam_max = float(np.max(np.abs(lam))) if lam.size else 0.0
    tol = rank_tol if rank_tol is not None else _default_rank_tol(
        p.rows, p.cols, lam_max
    )
    inv = np.where(np.abs(lam) > tol, 1.0 / np.where(lam == 0.0, 1.0, lam), 0.0)
    qa = eig.q.array
    return ComplexMatrix((qa * inv) @ qa.conj().T)


def split_dagger_idempotent(
    e: ComplexMatrix,
    cluster_tol: float = CLUSTER_TOL_DEFAULT,
    eq_tol: float = EQ_TOL_DEFAULT,
) -> ComplexMatrix:
    """Split a dagger idempotent: returns r (n x k) with r r† = e, r† r = I_k.

    The columns of r are the eigenvectors of e with eigenvalue near 1.
    Every eigenvalue must sit within ``cluster_tol`` of {0, 1}; anything
    else rejects the input as not an idempotent.
    """
    if e.rows != e.cols:
        raise InputError("only endomorphisms can be idempotents")
    eig = herm_eig(e, eq_tol=eq_tol)  # raises InputError when not Hermitian
    lam = np.asarray(eig.eigenvalues)
    dist = np.minimum(np.abs(lam), np.abs(lam - 1.0))
    if lam.size and float(np.max(dist)) > cluster_tol:
        raise PreconditionError(
            "not an idempotent: eigenvalues stray from {0, 1}",
            residual=float(np.max(dist)),
        )
    ones = np.abs(lam - 1.0) <= cluster_tol
    r = ComplexMatrix(eig.q.array[:, ones])
    k = r.cols
    check_tol = max(eq_tol, cluster_tol * max(1.0, e.norm() + 1.0))
    left = float(np.linalg.norm(r.array @ r.array.conj().T - e.array))
    right = float(
        np.linalg.norm(r.array.conj().T @ r.array - np.eye(k, dtype=np.complex128))
    )
    if left > check_tol * max(1.0, e.norm()) or right > check_tol:
        raise ConsistencyError(
            f"idempotent split failed verification (residuals {left:.3e}, {right:.3e})"
        )
    return r


def dagger_kernel(a: ComplexMatrix, rank_tol: Optional[float] = None) -> ComplexMatrix:
    """Kernel of a as an isometry: k is z x n with k a = 0 and k k† = I_z.

    The rows of k are an orthonormal basis of the left null space, taken
    from the final columns of the SVD's left factor; z = n - rank(a).
    """
    res = svd(a, rank_tol=rank_tol)
    return ComplexMatrix(res.u.array[:, res.rank:].conj().T)


def kernel_universality_holds(
    a: ComplexMatrix,
    k: ComplexMatrix,
    g: ComplexMatrix,
    eq_tol: float = EQ_TOL_DEFAULT,
) -> bool:
    """Check that g factors through the kernel: g = (g k†) k.

    ``g`` should satisfy g a = 0 within tolerance; the return value
    reports whether the mediating factorization holds.
    """
    if g.cols != a.rows or k.cols != a.rows:
        raise InputError("kernel universality arguments must map into source(a)")
    ga = float(np.linalg.norm(g.array @ a.array))
    if ga > eq_tol * max(1.0, g.norm() * a.norm()):
        raise InputError(f"g does not annihilate a (residual {ga:.3e})")
    mediated = (g.array @ k.array.conj().T) @ k.array
    dev = float(np.linalg.norm(mediated - g.array))
    return dev <= eq_tol * max(1.0, g.norm())


def hermitian_sqrt(
    p: ComplexMatrix,
    rank_tol: Optional[float] = None,
    eq_tol: float = EQ_TOL_DEFAULT,
) -> ComplexMatrix:
    """Positive square root of a positive matrix via the eigenvalue route.

    Eigenvalues below the cutoff truncate to zero, so the root of a
    singular positive matrix is again singular rather than polluted by
    noise-level negative eigenvalues.
    """
    h, _ = _sqrt_with_mp(p, rank_tol=rank_tol, eq_tol=eq_tol)
    return h


def _sqrt_with_mp(
    p: ComplexMatrix,
    rank_tol: Optional[float] = None,
    eq_tol: float = EQ_TOL_DEFAULT,
) -> tuple[ComplexMatrix, ComplexMatrix]:
    """Square root of a positive matrix plus the root's M-P inverse.

    Both come from one eigendecomposition, which keeps h and h_mp
    consistent to machine precision.
    """
    eig = herm_eig(p, eq_tol=eq_tol)  # InputError when not Hermitian
    lam = np.asarray(eig.eigenvalues)
    lam_max = float(np.max(np.abs(lam))) if lam.size else 0.0
    tol = rank_tol if rank_tol is not None else _default_rank_tol(
        p.rows, p.cols, lam_max
    )
    if lam.size and float(np.min(lam)) < -tol:
        raise InputError(
            f"matrix is not positive (eigenvalue {float(np.min(lam)):.3e})"
        )
    lam = np.where(lam < tol, 0.0, lam)
    roots = np.sqrt(lam)
    inv_roots = np.where(roots > 0.0, 1.0 / np.where(roots == 0.0, 1.0, roots), 0.0)
    qa = eig.q.array
    h = (qa * roots) @ qa.conj().T
    h_mp = (qa * inv_roots) @ qa.conj().T
    h = (h + h.conj().T) / 2.0
    h_mp = (h_mp + h_mp.conj().T) / 2.0
    return ComplexMatrix(h), ComplexMatrix(h_mp)


def direct_sum(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    out = np.zeros((a.rows + b.rows, a.cols + b.cols), dtype=np.complex128)
    out[: a.rows, : a.cols] = a.array
    out[a.rows :, a.cols :] = b.array
    return ComplexMatrix(out)


def _block_offsets(dims: Sequence[int], j: int) -> tuple[int, int, int]:
    if not 0 <= j < len(dims):
        raise InputError(f"block index {j} out of range for {len(dims)} blocks")
    total = int(sum(dims))
    off = int(sum(dims[:j]))
    return total, off, int(dims[j])


def biproduct_injection(dims: Sequence[int], j: int) -> ComplexMatrix:
    """Injection of block j into the direct sum: a dims[j] x sum(dims) matrix."""
    total, off, d = _block_offsets(dims, j)
    out = np.zeros((d, total), dtype=np.complex128)
    out[:, off : off + d] = np.eye(d)
    return ComplexMatrix(out)


def biproduct_projection(dims: Sequence[int], j: int) -> ComplexMatrix:
    """Projection of the direct sum onto block j; the dagger of the injection."""
    total, off, d = _block_offsets(dims, j)
    out = np.zeros((total, d), dtype=np.complex128)
    out[off : off + d, :] = np.eye(d)
    return ComplexMatrix(out)


class MatrixInstance(DaggerInstance):
    """The dagger category of finite-dimensional complex matrices.

    Objects are nonnegative integers (dimensions); morphisms are
    :class:`ComplexMatrix`.  Equality is Frobenius deviation at most
    ``eq_tol * max(1, |f| |g|)``.  All optional capabilities are
    provided: positivity, idempotent splitting, kernels, square roots,
    and biproducts.
    """

    name = "matrix"

    def __init__(self, tolerance: Optional[Tolerance] = None):
        super().__init__(tolerance if tolerance is not None else Tolerance())

    def compose2(self, f: ComplexMatrix, g: ComplexMatrix) -> ComplexMatrix:
        return f @ g

    def dagger(self, f: ComplexMatrix) -> ComplexMatrix:
        return f.dagger()

    def identity(self, obj: int) -> ComplexMatrix:
        return ComplexMatrix.identity(obj)

    def source(self, f: ComplexMatrix) -> int:
        return f.rows

    def target(self, f: ComplexMatrix) -> int:
        return f.cols

    def deviation(self, f: ComplexMatrix, g: ComplexMatrix) -> float:
        if (f.rows, f.cols) != (g.rows, g.cols):
            raise InputError(
                f"cannot compare {f.rows}x{f.cols} with {g.rows}x{g.cols}"
            )
        return float(np.linalg.norm(f.array - g.array))

    def scale(self, f: ComplexMatrix, g: ComplexMatrix) -> float:
        return max(1.0, f.norm() * g.norm())

    def positivity_witness(self, p: ComplexMatrix) -> bool:
        arr = p.array
        herm_dev = float(np.linalg.norm(arr - arr.conj().T))
        if herm_dev > self.tolerance.eq_tol * max(1.0, p.norm() ** 2):
            return False
        sym = ComplexMatrix((arr + arr.conj().T) / 2.0)
        eig = herm_eig(sym, eq_tol=self.tolerance.eq_tol)
        lam = np.asarray(eig.eigenvalues)
        if not lam.size:
            return True
        lam_max = float(np.max(np.abs(lam)))
        tol = self.tolerance.rank_tol
        if tol is None:
            tol = _default_rank_tol(p.rows, p.cols, lam_max)
        return float(np.min(lam)) >= -tol

    def split_idempotent(self, e: ComplexMatrix) -> ComplexMatrix:
        return split_dagger_idempotent(e, eq_tol=self.tolerance.eq_tol)

    def kernel(self, f: ComplexMatrix) -> ComplexMatrix:
        return dagger_kernel(f, rank_tol=self.tolerance.rank_tol)

    def sqrt_positive(self, p: ComplexMatrix) -> tuple[ComplexMatrix, ComplexMatrix]:
        return _sqrt_with_mp(
            p, rank_tol=self.tolerance.rank_tol, eq_tol=self.tolerance.eq_tol
        )

    def add(self, f: ComplexMatrix, g: ComplexMatrix) -> ComplexMatrix:
        if (f.rows, f.cols) != (g.rows, g.cols):
            raise InputError("can only add parallel morphisms")
        return ComplexMatrix(f.array + g.array)

    def direct_sum(self, f: ComplexMatrix, g: ComplexMatrix) -> ComplexMatrix:
        return direct_sum(f, g)

    def injection(self, dims: tuple, j: int) -> ComplexMatrix:
        return biproduct_injection(dims, j)

    def projection(self, dims: tuple, j: int) -> ComplexMatrix:
        return biproduct_projection(dims, j)

    def zero(self, src: int, tgt: int) -> ComplexMatrix:
        return ComplexMatrix.zeros(src, tgt)

    def mp(self, f: ComplexMatrix) -> ComplexMatrix:
        return pinv(f, rank_tol=self.tolerance.rank_tol)


def matrix_to_obj(a: ComplexMatrix) -> dict:
    data = []
    for z in a.array.reshape(-1):
        data.append([float(z.real), float(z.imag)])
    return {"rows": a.rows, "cols": a.cols, "data": data}


def matrix_from_obj(obj: dict) -> ComplexMatrix:
    if not isinstance(obj, dict):
        raise InputError("matrix JSON must be an object")
    extra = set(obj) - {"rows", "cols", "data"}
    if extra:
        raise InputError(f"unexpected matrix keys: {sorted(extra)}")
    try:
        rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    except KeyError as exc:
        raise InputError(f"matrix JSON missing key {exc}") from None
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 0 or cols < 0:
        raise InputError("rows and cols must be nonnegative integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise InputError("data must list rows*cols entries in row-major order")
    flat = np.zeros(rows * cols, dtype=np.complex128)
    for i, entry in enumerate(data):
        if (
            not isinstance(entry, (list, tuple))
            or len(entry) != 2
            or not all(isinstance(x, (int, float)) for x in entry)
        ):
            raise InputError(f"entry {i} must be a [re, im] pair")
        flat[i] = complex(entry[0], entry[1])
    return ComplexMatrix(flat.reshape(rows, cols))


def load_matrix(path: str) -> ComplexMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON ({exc})") from None
    return matrix_from_obj(obj)


def save_matrix(a: ComplexMatrix, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_obj(a), fh)
        fh.write("\n")
