"""Dense complex linear algebra on bipartite spaces.

Composite indices follow ``flat = a * dim_b + b`` (0-based), i.e. the pair
``(a, b)`` in 1-based notation sits at ``(a - 1) * dim_b + b``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "BipartiteShape",
    "Tolerance",
    "DEFAULT_TOL",
    "kron",
    "basis_vector",
    "product_vector",
    "partial_transpose",
    "partial_trace",
    "hermitian_eig",
    "numerical_rank",
    "orthonormal_span",
    "in_span",
]


@dataclass(frozen=True)
class BipartiteShape:
    dim_a: int
    dim_b: int

    def __post_init__(self):
        if int(self.dim_a) < 1 or int(self.dim_b) < 1:
            raise ValueError(f"subsystem dimensions must be positive, got {self.dim_a}x{self.dim_b}")

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    def flat(self, a: int, b: int) -> int:
        """0-based composite index of the 0-based pair ``(a, b)``."""
        if not (0 <= a < self.dim_a and 0 <= b < self.dim_b):
            raise IndexError(f"pair ({a}, {b}) outside {self.dim_a}x{self.dim_b}")
        return a * self.dim_b + b

    def pair(self, flat: int) -> tuple[int, int]:
        if not 0 <= flat < self.dim:
            raise IndexError(f"flat index {flat} outside dimension {self.dim}")
        return divmod(flat, self.dim_b)

    def __iter__(self):
        yield self.dim_a
        yield self.dim_b


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds shared by every check.

    eig_floor    -- eigenvalues above ``-eig_floor`` count as nonnegative
    rank_rel     -- singular values below ``rank_rel * s_max`` count as zero
    residual_min -- relative residual separating "in span" from "independent"
    """

    eig_floor: float = 1e-10
    rank_rel: float = 1e-9
    residual_min: float = 1e-3

    def __post_init__(self):
        if min(self.eig_floor, self.rank_rel, self.residual_min) <= 0:
            raise ValueError("tolerances must be strictly positive")
        if not self.eig_floor < self.residual_min:
            raise ValueError("eig_floor must be well below residual_min")


DEFAULT_TOL = Tolerance()


def _as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        m = m[:, None]
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {m.shape}")
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product. 1-d inputs give a 1-d product vector."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return np.kron(a, b)


def basis_vector(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def product_vector(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def _check_square(m: np.ndarray, shape: BipartiteShape) -> None:
    if m.shape != (shape.dim, shape.dim):
        raise ValueError(f"matrix of shape {m.shape} does not act on {shape.dim_a}x{shape.dim_b}")


def partial_transpose(m, shape: BipartiteShape, subsystem: str = "B") -> np.ndarray:
    """Transpose the indices of one tensor factor.

    For subsystem B the entry at ((a,b),(c,d)) moves to ((a,d),(c,b)).
    """
    m = np.asarray(m, dtype=complex)
    _check_square(m, shape)
    da, db = shape.dim_a, shape.dim_b
    t = m.reshape(da, db, da, db)
    if subsystem == "B":
        t = t.transpose(0, 3, 2, 1)
    elif subsystem == "A":
        t = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    return t.reshape(shape.dim, shape.dim)


def partial_trace(m, shape: BipartiteShape, traced: str = "B") -> np.ndarray:
    """Trace out one factor, returning the operator on the other."""
    m = np.asarray(m, dtype=complex)
    _check_square(m, shape)
    t = m.reshape(shape.dim_a, shape.dim_b, shape.dim_a, shape.dim_b)
    if traced == "B":
        return np.einsum("ibjb->ij", t)
    if traced == "A":
        return np.einsum("aiaj->ij", t)
    raise ValueError(f"traced must be 'A' or 'B', got {traced!r}")


def hermitian_eig(m, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues in ascending order and orthonormal eigenvectors as columns.

    Raises ValueError if ``m`` is not Hermitian to within ``rank_rel * ||m||``.
    """
    m = _as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"hermitian_eig needs a square matrix, got {m.shape}")
    scale = max(np.linalg.norm(m), 1.0)
    skew = np.linalg.norm(m - m.conj().T)
    if skew > tol.rank_rel * scale:
        raise ValueError(f"matrix is not Hermitian (||M - M^H|| = {skew:.3e})")
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    return w, v


def _stack(vectors) -> np.ndarray:
    vs = [np.asarray(v, dtype=complex).ravel() for v in vectors]
    if not vs:
        raise ValueError("empty vector list")
    n = vs[0].size
    if any(v.size != n for v in vs):
        raise ValueError("vectors have different dimensions")
    return np.column_stack(vs)


def numerical_rank(vectors, tol: Tolerance = DEFAULT_TOL) -> tuple[int, np.ndarray]:
    """Rank of the span of ``vectors`` and the singular values used to decide it."""
    s = np.linalg.svd(_stack(vectors), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0, s
    return int(np.sum(s > tol.rank_rel * s[0])), s


def orthonormal_span(vectors, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the span, rank decided as in numerical_rank."""
    vectors = list(vectors)
    if not vectors:
        return np.zeros((0, 0), dtype=complex)
    mat = _stack(vectors)
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((mat.shape[0], 0), dtype=complex)
    return u[:, s > tol.rank_rel * s[0]]


def in_span(v, basis, tol: Tolerance = DEFAULT_TOL) -> tuple[bool, float]:
    """Relative distance from ``v`` to span(basis) and whether it is below residual_min.

    ``basis`` may be a list of vectors or a matrix whose columns are orthonormal.
    """
    v = np.asarray(v, dtype=complex).ravel()
    nv = np.linalg.norm(v)
    if nv == 0:
        raise ValueError("in_span of the zero vector is undefined")
    if isinstance(basis, np.ndarray) and basis.ndim == 2:
        q = basis
    else:
        q = orthonormal_span(list(basis), tol)
    if q.size == 0:
        return False, 1.0
    if q.shape[0] != v.size:
        raise ValueError(f"dimension mismatch: vector {v.size}, basis {q.shape[0]}")
    resid = v - q @ (q.conj().T @ v)
    r = float(np.linalg.norm(resid) / nv)
    return r < tol.residual_min, r
