"""Bipartite states in spectral and dense form."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .linalg import DEFAULT_TOL, BipartiteShape, Tolerance, hermitian_eig

__all__ = [
    "SpectralState",
    "DensityMatrix",
    "ValidationReport",
    "TraceError",
    "assemble",
    "validate",
    "range_basis",
    "vector_to_json",
    "vector_from_json",
    "state_to_json",
    "state_from_json",
    "state_digest",
]

_TRACE_TOL = 1e-10


class TraceError(ValueError):
    """Spectral weights do not sum to a unit-trace state."""

    def __init__(self, trace: float):
        super().__init__(f"state trace is {trace!r}, expected 1")
        self.trace = trace


@dataclass(frozen=True)
class SpectralState:
    """rho = sum_i w_i |v_i><v_i| with the vectors kept exactly as given.

    ``normalized`` records whether every vector has unit norm. Unnormalized
    vectors are legitimate: local non-unitary operators produce them and the
    raw invariant tables are defined on them.
    """

    shape: BipartiteShape
    weights: tuple[float, ...]
    vectors: tuple[np.ndarray, ...]
    normalized: bool = True

    def __post_init__(self):
        if len(self.weights) != len(self.vectors):
            raise ValueError("weights and vectors differ in length")
        vecs = []
        for v in self.vectors:
            v = np.array(v, dtype=complex).ravel()
            if v.size != self.shape.dim:
                raise ValueError(f"vector of length {v.size} on a {self.shape.dim}-dim space")
            if not np.all(np.isfinite(v)):
                raise ValueError("vector has non-finite entries")
            v.setflags(write=False)
            vecs.append(v)
        object.__setattr__(self, "vectors", tuple(vecs))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if any(w < 0 for w in self.weights):
            raise ValueError("spectral weights must be nonnegative")
        if self.normalized:
            norms = [np.linalg.norm(v) for v in vecs]
            if any(abs(n - 1) > 1e-10 for n in norms):
                raise ValueError("normalized=True but some vector is not unit norm")

    @property
    def n(self) -> int:
        return len(self.weights)

    def trace(self) -> float:
        return float(sum(w * np.vdot(v, v).real for w, v in zip(self.weights, self.vectors)))

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.shape.dim, self.shape.dim), dtype=complex)
        for w, v in zip(self.weights, self.vectors):
            if w > 0:
                m += w * np.outer(v, v.conj())
        return m

    def normalized_copy(self) -> "SpectralState":
        """Unit-norm vectors with each weight absorbing the squared norm."""
        weights, vectors = [], []
        for w, v in zip(self.weights, self.vectors):
            nv = np.linalg.norm(v)
            weights.append(w * nv**2)
            vectors.append(v / nv)
        return SpectralState(self.shape, tuple(weights), tuple(vectors), normalized=True)


@dataclass(frozen=True)
class DensityMatrix:
    shape: BipartiteShape
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (self.shape.dim, self.shape.dim):
            raise ValueError(f"matrix {m.shape} does not match shape {self.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class ValidationReport:
    hermiticity_residual: float
    min_eigenvalue: float
    trace_deviation: float
    passed: bool


def assemble(s: SpectralState) -> DensityMatrix:
    """Dense matrix of a spectral state; zero-weight pairs are skipped."""
    tr = s.trace()
    if abs(tr - 1) > _TRACE_TOL:
        raise TraceError(tr)
    return DensityMatrix(s.shape, s.matrix())


def validate(d: DensityMatrix, tol: Tolerance = DEFAULT_TOL) -> ValidationReport:
    m = d.matrix
    herm = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    w = np.linalg.eigvalsh((m + m.conj().T) / 2)
    dev = float(abs(np.trace(m).real - 1))
    ok = herm <= 1e-12 and w[0] >= -tol.eig_floor and dev <= _TRACE_TOL
    return ValidationReport(herm, float(w[0]), dev, bool(ok))


def range_basis(d: DensityMatrix, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal eigenvectors (columns) spanning range(d)."""
    w, v = hermitian_eig(d.matrix, tol)
    keep = w > tol.rank_rel * max(w[-1], 0.0)
    return v[:, keep]


def vector_to_json(v) -> list[list[float]]:
    v = np.asarray(v, dtype=complex).ravel()
    return [[float(z.real), float(z.imag)] for z in v]


def vector_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("vectors are serialized as [[re, im], ...]")
    return arr[:, 0] + 1j * arr[:, 1]


def state_to_json(s: SpectralState) -> dict:
    return {
        "shape": [s.shape.dim_a, s.shape.dim_b],
        "pairs": [{"weight": w, "vector": vector_to_json(v)} for w, v in zip(s.weights, s.vectors)],
        "normalized": bool(s.normalized),
    }


def state_from_json(data: dict) -> SpectralState:
    try:
        shape = BipartiteShape(*map(int, data["shape"]))
        pairs = data["pairs"]
        weights = [float(p["weight"]) for p in pairs]
        vectors = [vector_from_json(p["vector"]) for p in pairs]
        normalized = bool(data.get("normalized", True))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed state JSON: {exc}") from exc
    return SpectralState(shape, tuple(weights), tuple(vectors), normalized)


def state_digest(s: SpectralState) -> str:
    blob = json.dumps(state_to_json(s), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()
