"""Permutation and monomial operators.

A monomial operator is a permutation matrix whose nonzero entries carry
arbitrary nonzero factors. Swaps ``P(m,n)`` and scaled swaps ``Qi(c)*P(m,n)``
are written with 1-based indices, matching the usual matrix notation; the
Python objects store 0-based permutations.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import PreconditionError
from .linalg import DEFAULT_TOL, BipartiteShape, Tolerance, partial_transpose

__all__ = [
    "MonomialOperator",
    "OperatorSpec",
    "parse_spec",
    "build",
    "swap",
    "row_column_scaling_agree",
    "theorem1_admissible",
    "is_t2_invariant",
    "fixes_vector",
    "lift",
]

TARGETS = ("B", "A", "composite")


@dataclass(frozen=True)
class MonomialOperator:
    """``Q e_j = scales[perm[j]] * e_{perm[j]}``.

    Scales are indexed by output row, so a scale at ``i`` multiplies row ``i``.
    """

    dim: int
    perm: tuple[int, ...]
    scales: tuple[complex, ...] = ()

    def __post_init__(self):
        perm = tuple(int(p) for p in self.perm)
        if len(perm) != self.dim or sorted(perm) != list(range(self.dim)):
            raise ValueError(f"perm {perm} is not a bijection on {self.dim} indices")
        scales = tuple(complex(s) for s in self.scales) or (1.0 + 0j,) * self.dim
        if len(scales) != self.dim:
            raise ValueError("scales must have one entry per index")
        if any(s == 0 for s in scales):
            raise ValueError("monomial scales must be nonzero")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "scales", scales)

    @classmethod
    def identity(cls, dim: int) -> "MonomialOperator":
        return cls(dim, tuple(range(dim)))

    @classmethod
    def from_matrix(cls, m, atol: float = 0.0) -> "MonomialOperator":
        m = np.asarray(m, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("monomial operators are square")
        nz = np.abs(m) > atol
        if not (np.all(nz.sum(axis=0) == 1) and np.all(nz.sum(axis=1) == 1)):
            raise ValueError("matrix is not monomial")
        dim = m.shape[0]
        perm = tuple(int(np.flatnonzero(nz[:, j])[0]) for j in range(dim))
        scales = [0j] * dim
        for j, r in enumerate(perm):
            scales[r] = m[r, j]
        return cls(dim, perm, tuple(scales))

    @property
    def is_permutation(self) -> bool:
        return all(s == 1 for s in self.scales)

    @property
    def has_real_scales(self) -> bool:
        return all(s.imag == 0 for s in self.scales)

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.dim, self.dim), dtype=complex)
        for j, r in enumerate(self.perm):
            m[r, j] = self.scales[r]
        return m

    def apply(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        out = np.zeros_like(v)
        out[list(self.perm)] = v
        return out * np.asarray(self.scales)

    def __matmul__(self, other: "MonomialOperator") -> "MonomialOperator":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        perm = tuple(self.perm[other.perm[j]] for j in range(self.dim))
        # (A B) e_j = a_{pA(r)} b_r e_{pA(r)} with r = pB(j)
        scales = [0j] * self.dim
        for j in range(self.dim):
            r = other.perm[j]
            scales[self.perm[r]] = self.scales[self.perm[r]] * other.scales[r]
        return MonomialOperator(self.dim, perm, tuple(scales))

    def inverse(self) -> "MonomialOperator":
        inv = [0] * self.dim
        for j, r in enumerate(self.perm):
            inv[r] = j
        scales = [0j] * self.dim
        for r, j in enumerate(inv):
            scales[j] = 1 / self.scales[r]
        return MonomialOperator(self.dim, tuple(inv), tuple(scales))


def swap(dim: int, m: int, n: int) -> MonomialOperator:
    """P_mn on ``dim`` indices, ``m`` and ``n`` 1-based."""
    for x in (m, n):
        if not 1 <= x <= dim:
            raise ValueError(f"swap index {x} outside 1..{dim}")
    perm = list(range(dim))
    perm[m - 1], perm[n - 1] = perm[n - 1], perm[m - 1]
    return MonomialOperator(dim, tuple(perm))


@dataclass(frozen=True)
class OperatorSpec:
    """Textual operator description: optional row scale times a product of swaps."""

    swaps: tuple[tuple[int, int], ...] = ()
    scale: tuple[int, float] | None = None
    target: str = "B"

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ValueError(f"target must be one of {TARGETS}")
        object.__setattr__(self, "swaps", tuple((int(m), int(n)) for m, n in self.swaps))
        if self.scale is not None:
            i, c = self.scale
            object.__setattr__(self, "scale", (int(i), c))

    def __str__(self) -> str:
        parts = []
        if self.scale is not None:
            i, c = self.scale
            parts.append(f"Q{i}(c={_fmt_num(c)})")
        parts += [f"P({m},{n})" for m, n in self.swaps]
        return "*".join(parts) if parts else "I"

    @property
    def indices(self) -> set[int]:
        return {x for pair in self.swaps for x in pair}

    def inverse(self) -> "OperatorSpec":
        if self.scale is not None:
            raise ValueError("inverse spec is only defined for scale-free specs")
        return OperatorSpec(tuple(reversed(self.swaps)), None, self.target)


def _fmt_num(c) -> str:
    c = complex(c)
    if c.imag == 0:
        return repr(float(c.real))
    return repr(c)


_SCALE_RE = re.compile(r"^Q(\d+)\(c=([^)]+)\)$")
_SWAP_RE = re.compile(r"^P\((\d+),(\d+)\)$")


def parse_spec(text: str, target: str = "B") -> OperatorSpec:
    """Parse ``Q3(c=2)*P(1,2)*P(7,8)``, ``P(4,6)`` or ``I``."""
    compact = re.sub(r"\s+", "", text)
    if compact in ("", "I"):
        return OperatorSpec((), None, target)
    scale = None
    swaps = []
    for k, tok in enumerate(compact.split("*")):
        if (mt := _SCALE_RE.match(tok)) and k == 0:
            raw = mt.group(2)
            try:
                c = float(raw)
            except ValueError:
                try:
                    c = complex(raw.replace("i", "j"))
                except ValueError:
                    raise ValueError(f"bad scale factor {raw!r} in {text!r}") from None
            scale = (int(mt.group(1)), c)
        elif mt := _SWAP_RE.match(tok):
            swaps.append((int(mt.group(1)), int(mt.group(2))))
        else:
            raise ValueError(f"cannot parse operator token {tok!r} in {text!r}")
    return OperatorSpec(tuple(swaps), scale, target)


def build(spec: OperatorSpec, dim: int) -> MonomialOperator:
    """diag(scale at i) times the swaps multiplied left to right."""
    for m, n in spec.swaps:
        for x in (m, n):
            if not 1 <= x <= dim:
                raise ValueError(f"swap index {x} outside 1..{dim}")
    op = reduce(lambda acc, mn: acc @ swap(dim, *mn), spec.swaps, MonomialOperator.identity(dim))
    if spec.scale is not None:
        i, c = spec.scale
        if not 1 <= i <= dim:
            raise ValueError(f"scale index {i} outside 1..{dim}")
        if c == 0:
            raise ValueError("scale factor must be nonzero")
        scales = [1.0 + 0j] * dim
        scales[i - 1] = complex(c)
        op = MonomialOperator(dim, tuple(range(dim)), tuple(scales)) @ op
    return op


def row_column_scaling_agree(dim: int, i: int, c, m: int, n: int) -> bool:
    """Whether scaling row ``i`` of P_mn by ``c`` equals scaling column ``i``.

    Raises PreconditionError when ``i`` is one of the swapped indices; in that
    case the two readings give different matrices.
    """
    p = swap(dim, m, n).matrix()
    d = np.eye(dim, dtype=complex)
    d[i - 1, i - 1] = c
    row, col = d @ p, p @ d
    same = bool(np.array_equal(row, col))
    if i in (m, n):
        raise PreconditionError(
            f"scale index {i} is a swap index of P({m},{n}); row and column scaling "
            f"{'agree' if same else 'differ'}",
            hypothesis="i not in {m, n}",
        )
    return same


def theorem1_admissible(spec: OperatorSpec, c=None) -> bool:
    """Real scale ``c`` outside {0, 1} on an index untouched by every swap."""
    if spec.scale is None:
        return False
    i, c_spec = spec.scale
    c = c_spec if c is None else c
    if isinstance(c, complex):
        if c.imag != 0:
            return False
        c = c.real
    try:
        c = float(c)
    except (TypeError, ValueError):
        return False
    if c in (0.0, 1.0) or not np.isfinite(c):
        return False
    return i not in spec.indices and spec.target in ("A", "B")


def is_t2_invariant(p: MonomialOperator, shape: BipartiteShape) -> bool:
    if p.dim != shape.dim:
        raise ValueError(f"operator dimension {p.dim} does not match {shape.dim}")
    m = p.matrix()
    return bool(np.array_equal(partial_transpose(m, shape, "B"), m))


def fixes_vector(p: MonomialOperator, v, tol: Tolerance = DEFAULT_TOL) -> bool:
    v = np.asarray(v, dtype=complex)
    if v.size != p.dim:
        raise ValueError("dimension mismatch")
    return bool(np.linalg.norm(p.apply(v) - v) <= tol.residual_min * np.linalg.norm(v))


def lift(q: MonomialOperator, shape: BipartiteShape, target: str = "B") -> np.ndarray:
    """I (x) Q for target B, Q (x) I for target A."""
    if target == "B":
        if q.dim != shape.dim_b:
            raise ValueError(f"operator on {q.dim} indices cannot act on factor B of dim {shape.dim_b}")
        return np.kron(np.eye(shape.dim_a), q.matrix())
    if target == "A":
        if q.dim != shape.dim_a:
            raise ValueError(f"operator on {q.dim} indices cannot act on factor A of dim {shape.dim_a}")
        return np.kron(q.matrix(), np.eye(shape.dim_b))
    raise ValueError(f"lift target must be 'A' or 'B', got {target!r}")


def lift_operator(q: MonomialOperator, shape: BipartiteShape, target: str = "B") -> MonomialOperator:
    """Same as :func:`lift` but kept in monomial form."""
    return MonomialOperator.from_matrix(lift(q, shape, target))
