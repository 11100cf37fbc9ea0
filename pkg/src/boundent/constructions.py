"""New PPT entangled states from old ones.

``apply_theorem1`` conjugates by a real monomial operator acting on one
subsystem; ``apply_theorem2`` moves a single eigenvector with a composite
permutation that commutes with the partial transpose and fixes every other
eigenvector.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .linalg import DEFAULT_TOL, Tolerance
from .operators import (
    MonomialOperator,
    OperatorSpec,
    build,
    fixes_vector,
    is_t2_invariant,
    lift_operator,
    theorem1_admissible,
)
from .states import SpectralState, state_digest, vector_to_json

__all__ = ["ConstructionRecord", "congruence", "apply_theorem1", "apply_theorem2"]


@dataclass(frozen=True)
class ConstructionRecord:
    input_state_id: str
    operator: str
    theorem: str
    normalization_factor: float
    raw_weights: tuple[float, ...]
    raw_vectors: tuple[np.ndarray, ...]
    target: str = "B"
    moved_index: int | None = None
    congruence_distance: float | None = None

    def __post_init__(self):
        if not self.normalization_factor > 0:
            raise ValueError("normalization factor must be positive")

    def to_json(self) -> dict:
        out = {
            "input_state_id": self.input_state_id,
            "operator": self.operator,
            "theorem": self.theorem,
            "target": self.target,
            "normalization_factor": self.normalization_factor,
            "raw_pairs": [
                {"weight": w, "vector": vector_to_json(v)} for w, v in zip(self.raw_weights, self.raw_vectors)
            ],
        }
        if self.moved_index is not None:
            out["moved_index"] = self.moved_index + 1
        if self.congruence_distance is not None:
            out["congruence_distance"] = self.congruence_distance
        return out


def congruence(s: SpectralState, op: MonomialOperator) -> tuple[SpectralState, float]:
    """L rho L^H in spectral form, renormalized to unit trace.

    Vectors are kept unnormalized (as L v_i) and the weights divided by the
    trace factor ``sum_i w_i ||L v_i||^2``, which is also returned.
    """
    if op.dim != s.shape.dim:
        raise ValueError(f"operator dimension {op.dim} does not match state dimension {s.shape.dim}")
    vectors = [op.apply(v) for v in s.vectors]
    z = float(sum(w * np.vdot(v, v).real for w, v in zip(s.weights, vectors)))
    weights = [w / z for w in s.weights]
    normalized = all(abs(np.linalg.norm(v) - 1) <= 1e-10 for v in vectors)
    return SpectralState(s.shape, tuple(weights), tuple(vectors), normalized), z


def apply_theorem1(s: SpectralState, spec: OperatorSpec, c=None) -> tuple[SpectralState, ConstructionRecord]:
    """(I (x) Q) rho (I (x) Q)^H for Q = Q_i(c) times a product of swaps.

    ``c`` defaults to the factor stored in ``spec``; passing a different
    value is an error.
    """
    if spec.scale is not None and c is not None and complex(c) != complex(spec.scale[1]):
        raise ValueError(f"c={c} disagrees with the operator spec {spec}")
    if spec.scale is None:
        raise PreconditionError(f"{spec} has no scaled index; Theorem-1 operators are Q_i(c) P", "scaled index")
    c = spec.scale[1] if c is None else c
    if spec.target not in ("A", "B"):
        raise PreconditionError("the operator must act on a single subsystem", "single subsystem")
    if not theorem1_admissible(spec, c):
        i = spec.scale[0]
        if i in spec.indices:
            raise PreconditionError(f"scale index {i} coincides with a swap index in {spec}", "i not in {m, n}")
        raise PreconditionError(f"scale factor c={c} must be real and not 0 or 1", "c real, c != 0, 1")
    dim = s.shape.dim_b if spec.target == "B" else s.shape.dim_a
    q = build(spec, dim)
    big = lift_operator(q, s.shape, spec.target)
    out, z = congruence(s, big)
    raw_w = tuple(s.weights)
    record = ConstructionRecord(
        input_state_id=state_digest(s),
        operator=str(spec),
        theorem="T1",
        normalization_factor=z,
        raw_weights=raw_w,
        raw_vectors=tuple(out.vectors),
        target=spec.target,
    )
    return out, record


def apply_theorem2(s: SpectralState, p: MonomialOperator, i: int,
                   tol: Tolerance = DEFAULT_TOL, spec: OperatorSpec | None = None
                   ) -> tuple[SpectralState, ConstructionRecord]:
    """Replace eigenvector ``i`` (0-based) by ``P v_i``.

    Requires P to be a pure permutation equal to its own partial transpose and
    to fix every other eigenvector; the result then equals P rho P^H, which is
    checked and stored as ``congruence_distance``.
    """
    if p.dim != s.shape.dim:
        raise ValueError(f"operator dimension {p.dim} does not match state dimension {s.shape.dim}")
    if not 0 <= i < s.n:
        raise IndexError(f"eigenpair index {i} outside 0..{s.n - 1}")
    if not p.is_permutation:
        raise PreconditionError("Theorem-2 operators must be pure permutations", "pure permutation")
    if not is_t2_invariant(p, s.shape):
        raise PreconditionError("operator is not invariant under partial transpose", "P in P(1)")
    for j, v in enumerate(s.vectors):
        if j != i and s.weights[j] > 0 and not fixes_vector(p, v, tol):
            raise PreconditionError(f"operator does not fix eigenvector {j + 1}", f"fixes eigenvector {j + 1}")
    vectors = list(s.vectors)
    vectors[i] = p.apply(vectors[i])
    out = SpectralState(s.shape, s.weights, tuple(vectors), s.normalized)
    pm = p.matrix()
    dist = float(np.max(np.abs(out.matrix() - pm @ s.matrix() @ pm.conj().T)))
    record = ConstructionRecord(
        input_state_id=state_digest(s),
        operator=str(spec) if spec is not None else _perm_text(p),
        theorem="T2",
        normalization_factor=1.0,
        raw_weights=tuple(s.weights),
        raw_vectors=tuple(vectors),
        target="composite",
        moved_index=i,
        congruence_distance=dist,
    )
    return out, record


def _perm_text(p: MonomialOperator) -> str:
    # list the non-trivial cycles as products of swaps, 1-based
    seen, parts = set(), []
    for start in range(p.dim):
        if start in seen or p.perm[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = p.perm[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = p.perm[x]
        parts += [f"P({cyc[0] + 1},{y + 1})" for y in reversed(cyc[1:])]
    return "*".join(parts) or "I"
