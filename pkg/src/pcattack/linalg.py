"""Dense linear-algebra core: deterministic SVD, orthonormal bases, principal
angles, and the Asimov distance (largest principal angle) between subspaces.

All functions are pure and safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidDimension, InvalidMatrix, RankMismatch

RANK_TOL = 1e-10   # sigma_i counts toward rank iff sigma_i > RANK_TOL * sigma_1
TIE_TOL = 1e-9     # sigma_k ~ sigma_{k+1} within TIE_TOL * sigma_1 flags ambiguity
ORTHO_TOL = 1e-10


def as_matrix(x) -> np.ndarray:
    """Coerce to a finite 2-D float array (d x n, columns are samples)."""
    m = np.asarray(x, dtype=float)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise InvalidMatrix(f"expected a nonempty 2-D matrix, got shape {m.shape!r}")
    if not np.all(np.isfinite(m)):
        raise InvalidMatrix("matrix entries must be finite")
    return m


@dataclass(frozen=True)
class SvdTriple:
    """Full SVD factors with nonincreasing singular values.

    Signs are canonicalized: each left singular vector has its
    largest-magnitude entry positive, with the paired right vector flipped to
    preserve the product, so repeated factorizations are bit-identical.
    """

    u: np.ndarray           # d x d orthogonal
    sigma: np.ndarray       # min(d, n) nonnegative, nonincreasing
    v: np.ndarray           # n x n orthogonal
    rank_tol: float = RANK_TOL

    @property
    def rank(self) -> int:
        """Numerical rank: count of sigma_i > rank_tol * sigma_1."""
        if self.sigma.size == 0 or self.sigma[0] <= 0.0:
            return 0
        return int(np.count_nonzero(self.sigma > self.rank_tol * self.sigma[0]))

    def reconstruct(self) -> np.ndarray:
        d, n = self.u.shape[0], self.v.shape[0]
        s = np.zeros((d, n))
        s[: self.sigma.size, : self.sigma.size] = np.diag(self.sigma)
        return self.u @ s @ self.v.T


@dataclass(frozen=True)
class OrthonormalBasis:
    """Columns form an orthonormal basis of a subspace of R^d.

    ``ambiguous`` marks bases produced by a PCA truncation whose trailing
    singular value was tied with the first discarded one; the spanned
    subspace is then not well defined and downstream consumers must not
    rely on it.
    """

    columns: np.ndarray
    ambiguous: bool = False

    def __post_init__(self):
        cols = np.asarray(self.columns, dtype=float)
        if cols.ndim != 2:
            raise InvalidMatrix("basis must be a 2-D array of column vectors")
        d, k = cols.shape
        if not 1 <= k <= d:
            raise InvalidDimension(f"basis needs 1 <= k <= d, got k={k}, d={d}")
        gram = cols.T @ cols
        if np.max(np.abs(gram - np.eye(k))) > ORTHO_TOL:
            raise InvalidMatrix("basis columns are not orthonormal")
        object.__setattr__(self, "columns", cols)

    @property
    def ambient_dim(self) -> int:
        return self.columns.shape[0]

    @property
    def subspace_dim(self) -> int:
        return self.columns.shape[1]


def _as_basis(b) -> OrthonormalBasis:
    return b if isinstance(b, OrthonormalBasis) else OrthonormalBasis(np.asarray(b, dtype=float))


def full_svd(m, rank_tol: float = RANK_TOL) -> SvdTriple:
    """Full SVD of a finite matrix, with deterministic sign choices.

    Raises InvalidMatrix on non-finite input.
    """
    m = as_matrix(m)
    u, sigma, vt = np.linalg.svd(m, full_matrices=True)
    v = vt.T
    d, n = m.shape
    p = min(d, n)
    for i in range(d):
        j = int(np.argmax(np.abs(u[:, i])))
        if u[j, i] < 0.0:
            u[:, i] = -u[:, i]
            if i < p:
                v[:, i] = -v[:, i]
    for i in range(p, n):
        j = int(np.argmax(np.abs(v[:, i])))
        if v[j, i] < 0.0:
            v[:, i] = -v[:, i]
    return SvdTriple(u=u, sigma=sigma, v=v, rank_tol=rank_tol)


def leading_subspace(m, k: int, tie_tol: float = TIE_TOL) -> OrthonormalBasis:
    """First k left singular vectors of ``m`` as an orthonormal basis.

    The result carries ``ambiguous=True`` when sigma_k and sigma_{k+1} are
    tied within ``tie_tol`` relative to sigma_1 (the PCA truncation is then
    ill defined).  For d > n the implicit trailing singular values are zero.
    """
    svd = full_svd(m)
    return _leading_from_svd(svd, k, tie_tol)


def _leading_from_svd(svd: SvdTriple, k: int, tie_tol: float = TIE_TOL) -> OrthonormalBasis:
    d = svd.u.shape[0]
    n = svd.v.shape[0]
    p = min(d, n)
    if not 1 <= k <= p:
        raise InvalidDimension(f"k must satisfy 1 <= k <= min(d, n)={p}, got {k}")
    sigma = svd.sigma
    if k < p:
        next_sigma = sigma[k]
    elif k < d:
        next_sigma = 0.0        # d > n: trailing spectrum is implicitly zero
    else:
        next_sigma = None       # k = d: the subspace is all of R^d
    ambiguous = next_sigma is not None and (sigma[k - 1] - next_sigma) <= tie_tol * sigma[0]
    return OrthonormalBasis(svd.u[:, :k].copy(), ambiguous=bool(ambiguous))


def principal_angles(a, b) -> np.ndarray:
    """Principal angles (radians, nondecreasing) between two k-dim subspaces.

    The angles are the arccosines of the singular values of ``a^T b``,
    clamped to [0, 1] against roundoff.
    """
    a = _as_basis(a)
    b = _as_basis(b)
    if a.ambient_dim != b.ambient_dim:
        raise InvalidDimension(
            f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")
    if a.subspace_dim != b.subspace_dim:
        raise InvalidDimension(
            f"subspace dimensions differ: {a.subspace_dim} vs {b.subspace_dim}")
    s = np.linalg.svd(a.columns.T @ b.columns, compute_uv=False)
    return np.arccos(np.clip(s, 0.0, 1.0))


def asimov_distance(a, b) -> float:
    """Largest principal angle between two equal-dimensional subspaces."""
    return float(principal_angles(a, b)[-1])


def pca_distance(x, y, k: int) -> tuple[float, bool]:
    """Asimov distance between the k-dim PCA subspaces of two matrices.

    Returns ``(theta, ambiguous)`` where ``ambiguous`` is True if either
    truncation had a tied trailing singular value.
    """
    bx = leading_subspace(x, k)
    by = leading_subspace(y, k)
    return asimov_distance(bx, by), bx.ambiguous or by.ambiguous


def unitary_conjugate(x, p, t) -> np.ndarray:
    """Return ``p @ x @ t.T`` after checking p and t are orthogonal."""
    x = as_matrix(x)
    p = np.asarray(p, dtype=float)
    t = np.asarray(t, dtype=float)
    for name, q in (("p", p), ("t", t)):
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise InvalidMatrix(f"{name} must be square")
        if np.max(np.abs(q.T @ q - np.eye(q.shape[0]))) > ORTHO_TOL:
            raise InvalidMatrix(f"{name} is not orthogonal")
    if p.shape[0] != x.shape[0] or t.shape[0] != x.shape[1]:
        raise InvalidDimension("conjugation factors do not match matrix shape")
    return p @ x @ t.T


def compress_rank_one_problem(x, k: int, a, b) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reduce a rank-one attack on a rank-k matrix to k+1 dimensions.

    Rotates into the SVD coordinates of ``x`` and collapses the tail
    components of ``a`` and ``b`` to single coordinates carrying their
    signed norms (a Householder reflection fixes the head coordinates and
    maps each tail onto its first axis).  Returns ``(sigma_tilde, a_c, b_c)``
    where ``sigma_tilde`` is the (k+1) x (k+1) diagonal core; the Asimov
    distance of the compressed attack problem equals the original one.
    """
    x = as_matrix(x)
    d, n = x.shape
    if not 1 <= k < min(d, n):
        raise InvalidDimension(f"compression needs 1 <= k < min(d, n), got k={k}")
    a = np.asarray(a, dtype=float).reshape(-1)
    b = np.asarray(b, dtype=float).reshape(-1)
    if a.size != d or b.size != n:
        raise InvalidDimension("attack vectors must have lengths d and n")
    svd = full_svd(x)
    if svd.rank != k:
        raise RankMismatch(f"numerical rank is {svd.rank}, expected {k}")

    a_rot = svd.u.T @ a
    b_rot = svd.v.T @ b
    a_c = np.append(a_rot[:k], _signed_tail_norm(a_rot[k:]))
    b_c = np.append(b_rot[:k], _signed_tail_norm(b_rot[k:]))
    sigma_tilde = np.diag(np.append(svd.sigma[:k], 0.0))
    return sigma_tilde, a_c, b_c


def _signed_tail_norm(tail: np.ndarray) -> float:
    # Sign follows the leading tail entry so an already-compressed vector
    # maps to itself.
    if tail.size == 0:
        return 0.0
    s = 1.0 if tail[0] >= 0.0 else -1.0
    return s * float(np.linalg.norm(tail))
