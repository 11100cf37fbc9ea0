"""The three PPT entangled families and their range-criterion certificates.

Each generator returns a :class:`SpectralState` together with a
:class:`RangeCertificate`: support patterns of product vectors that should
span the range, and a witness vector from the range of the partial transpose.
Supports are 0-based here and 1-based in JSON.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyFamily
from .linalg import DEFAULT_TOL, BipartiteShape, Tolerance, basis_vector
from .operators import MonomialOperator
from .states import SpectralState, vector_from_json, vector_to_json

__all__ = [
    "FamilyId",
    "ProductFamily",
    "RangeCertificate",
    "epsilon_bound",
    "example1",
    "example2",
    "example3",
    "generate",
    "example3_diagonal_positions",
    "sample_family",
    "transform_certificate",
    "certificate_to_json",
    "certificate_from_json",
]

KINDS = ("example1", "example2", "example3")


def epsilon_bound(kind: str, k: int = 1) -> float:
    if kind == "example1":
        return 2 / 5
    if kind == "example2":
        return 1 / 2
    if kind == "example3":
        return 2 / (7 * k - 2)
    raise ValueError(f"unknown family {kind!r}")


@dataclass(frozen=True)
class FamilyId:
    kind: str
    epsilon: float
    k: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family {self.kind!r}; expected one of {KINDS}")
        if self.kind == "example3":
            if self.k is None or int(self.k) < 1:
                raise ValueError("example3 needs an integer k >= 1")
            object.__setattr__(self, "k", int(self.k))
        elif self.k is not None:
            raise ValueError(f"{self.kind} takes no k parameter")
        bound = epsilon_bound(self.kind, self.k or 1)
        # a relative slack keeps 2/5 etc. admissible after decimal round trips
        if not 0 < self.epsilon <= bound * (1 + 1e-12):
            raise ValueError(f"{self.kind} requires 0 < epsilon <= {bound:.6g}, got {self.epsilon}")

    def to_json(self) -> dict:
        out = {"kind": self.kind, "epsilon": float(self.epsilon)}
        if self.k is not None:
            out["k"] = self.k
        return out

    @classmethod
    def from_json(cls, data: dict) -> "FamilyId":
        return cls(data["kind"], float(data["epsilon"]), data.get("k"))


@dataclass(frozen=True)
class ProductFamily:
    """Product vectors a (x) b with supp(a) in support_a and supp(b) in support_b."""

    support_a: tuple[int, ...]
    support_b: tuple[int, ...]
    label: str = ""

    def __post_init__(self):
        sa = tuple(sorted(set(int(x) for x in self.support_a)))
        sb = tuple(sorted(set(int(x) for x in self.support_b)))
        if not sa or not sb:
            raise ValueError("product family supports must be nonempty")
        object.__setattr__(self, "support_a", sa)
        object.__setattr__(self, "support_b", sb)
        if not self.label:
            object.__setattr__(self, "label", _default_label(sa, sb))


def _default_label(sa, sb) -> str:
    fmt = lambda s: "{" + ",".join(str(x + 1) for x in s) + "}"
    return f"{fmt(sa)}x{fmt(sb)}"


@dataclass(frozen=True)
class RangeCertificate:
    families: tuple[ProductFamily, ...]
    witness: np.ndarray = field(repr=False)
    dropped: tuple[str, ...] = ()

    def __post_init__(self):
        w = np.array(self.witness, dtype=complex).ravel()
        nw = np.linalg.norm(w)
        if nw == 0:
            raise ValueError("witness must be nonzero")
        w = w / nw
        w.setflags(write=False)
        object.__setattr__(self, "witness", w)
        object.__setattr__(self, "families", tuple(self.families))
        object.__setattr__(self, "dropped", tuple(self.dropped))


def _state(shape, weights, vectors) -> SpectralState:
    return SpectralState(shape, tuple(weights), tuple(vectors), normalized=True)


def example1(epsilon: float) -> tuple[SpectralState, RangeCertificate]:
    """3x3 state of rank 5."""
    FamilyId("example1", epsilon)
    shape = BipartiteShape(3, 3)
    e = lambda a, b: basis_vector(9, shape.flat(a - 1, b - 1))
    s2 = np.sqrt(2)
    vectors = [e(1, 1), e(2, 2), e(3, 3), (e(1, 2) - e(2, 1)) / s2, (e(1, 3) - e(3, 1)) / s2]
    weights = [(1 - epsilon) / 3] * 3 + [epsilon / 2] * 2
    fams = [
        ProductFamily((0,), (0,), "mu1"),
        ProductFamily((1,), (1,), "mu2"),
        ProductFamily((2,), (2,), "mu3"),
        ProductFamily((0, 2), (0, 2), "mu4"),
        ProductFamily((0, 1), (0, 1), "mu5"),
    ]
    return _state(shape, weights, vectors), RangeCertificate(tuple(fams), e(1, 2))


def example2(epsilon: float) -> tuple[SpectralState, RangeCertificate]:
    """2x8 state of rank 8."""
    FamilyId("example2", epsilon)
    shape = BipartiteShape(2, 8)

    def flat_vec(*entries):
        v = np.zeros(16, dtype=complex)
        for pos, val in entries:
            v[pos - 1] = val
        return v

    h = 1 / np.sqrt(2)
    vectors = [
        flat_vec((1, 1)),
        flat_vec((6, 1)),
        flat_vec((11, 1)),
        flat_vec((16, 1)),
        flat_vec((2, h), (5, -h)),
        flat_vec((3, h), (9, -h)),
        flat_vec((8, h), (14, -h)),
        flat_vec((12, h), (15, -h)),
    ]
    weights = [(1 - epsilon) / 4] * 4 + [epsilon / 4] * 4
    fams = [
        ProductFamily((0, 1), (0, 2, 5, 7), "mu1"),
        ProductFamily((0,), (0, 1, 4, 5), "mu2"),
        ProductFamily((1,), (2, 3, 6, 7), "mu3"),
    ]
    witness = np.kron(basis_vector(2, 0), basis_vector(8, 2))
    return _state(shape, weights, vectors), RangeCertificate(tuple(fams), witness)


def example3_diagonal_positions(k: int) -> list[tuple[int, int]]:
    """1-based pairs (a, b) carrying the uniform diagonal block of the 3k x 3k state.

    These are the pairs (m, m), plus for m != n: row 3m-2 against all of
    columns 3n-2, 3n-1, 3n; row 3m-1 against 3n-2, 3n-1; row 3m against
    3n-2, 3n. Sorted by flat index.
    """
    d = 3 * k
    pos = {(m, m) for m in range(1, d + 1)}
    # row offset l -> allowed column offsets l'
    pattern = {1: (0, 2), 2: (1, 2), 3: (0, 1, 2)}
    for m in range(1, k + 1):
        for n in range(1, k + 1):
            if m == n:
                continue
            for l, lps in pattern.items():
                for lp in lps:
                    # flat = (3m - l) * 3k + 3n - l'  =>  a = 3m - l + 1, b = 3n - l'
                    pos.add((3 * m - l + 1, 3 * n - lp))
    return sorted(pos, key=lambda ab: (ab[0] - 1) * d + ab[1])


def example3(k: int, epsilon: float) -> tuple[SpectralState, RangeCertificate]:
    """3k x 3k state of rank 7k^2 - 4k + 2; k = 1 reproduces example1."""
    FamilyId("example3", epsilon, k)
    d = 3 * k
    shape = BipartiteShape(d, d)
    b = 1 / np.sqrt(2 * k)
    phi1 = np.zeros(d * d, dtype=complex)
    phi2 = np.zeros(d * d, dtype=complex)
    for m in range(1, k + 1):
        phi1[shape.flat(3 * m - 3, 3 * m - 2)] = b
        phi1[shape.flat(3 * m - 2, 3 * m - 3)] = -b
        phi2[shape.flat(3 * m - 3, 3 * m - 1)] = b
        phi2[shape.flat(3 * m - 1, 3 * m - 3)] = -b
    diag = example3_diagonal_positions(k)
    count = 7 * k * k - 4 * k
    assert len(diag) == count
    vectors = [phi1, phi2] + [basis_vector(d * d, shape.flat(a - 1, c - 1)) for a, c in diag]
    weights = [epsilon / 2] * 2 + [(1 - epsilon) / count] * count
    return _state(shape, weights, vectors), RangeCertificate(
        tuple(_example3_families(k)), np.kron(basis_vector(d, 0), basis_vector(d, 1))
    )


def _example3_families(k: int) -> list[ProductFamily]:
    d = 3 * k
    fams = []
    for m in range(1, k + 1):
        r1, r2, r3 = 3 * m - 3, 3 * m - 2, 3 * m - 1  # rows 3m-2, 3m-1, 3m (0-based)
        fams.append(ProductFamily((r1,), (r1,), f"psi[{3*m-2},{3*m-2}]"))
        fams.append(ProductFamily((r2,), (r2,), f"psi[{3*m-1},{3*m-1}]"))
        fams.append(ProductFamily((r3,), (r3,), f"psi[{3*m},{3*m}]"))
        for n in range(1, k + 1):
            if n == m:
                continue
            c1, c2, c3 = 3 * n - 3, 3 * n - 2, 3 * n - 1
            for row, cols in ((r1, (c1, c2, c3)), (r2, (c1, c2)), (r3, (c1, c3))):
                for col in cols:
                    fams.append(ProductFamily((row,), (col,), f"psi[{row+1},{col+1}]"))
    no_mid = tuple(x for x in range(d) if x % 3 != 1)
    no_last = tuple(x for x in range(d) if x % 3 != 2)
    fams.append(ProductFamily(no_mid, no_mid, "psi_k"))
    fams.append(ProductFamily(no_last, no_last, "psi_kk"))
    return fams


def generate(fid: FamilyId) -> tuple[SpectralState, RangeCertificate]:
    if fid.kind == "example1":
        return example1(fid.epsilon)
    if fid.kind == "example2":
        return example2(fid.epsilon)
    return example3(fid.k, fid.epsilon)


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _complex_normal(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def solution_space(a, support_b, range_q: np.ndarray, shape: BipartiteShape,
                   tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Basis (columns, in C^dim_b) of {b : supp(b) in support_b, a (x) b in range}.

    ``range_q`` holds an orthonormal basis of the range as columns. For fixed
    ``a`` membership is linear in ``b``: (I - RR^H)(a (x) E) b = 0.
    """
    a = np.asarray(a, dtype=complex)
    sb = list(support_b)
    emb = np.zeros((shape.dim_b, len(sb)))
    emb[sb, range(len(sb))] = 1.0
    cols = np.kron(a[:, None], emb)
    resid = cols - range_q @ (range_q.conj().T @ cols)
    _, s, vh = np.linalg.svd(resid, full_matrices=True)
    ref = max(float(np.linalg.norm(cols, 2)), 1e-300)
    rank = int(np.sum(s > tol.rank_rel * ref))
    null = vh[rank:].conj().T
    return emb @ null


def sample_family(family: ProductFamily, range_q: np.ndarray, shape: BipartiteShape,
                  count: int, seed=None, tol: Tolerance = DEFAULT_TOL,
                  retries: int = 5) -> list[tuple[np.ndarray, np.ndarray]]:
    """Random product vectors of ``family`` lying in span(range_q).

    ``a`` is drawn generically on support_a; ``b`` is a random element of the
    linear solution space. Raises EmptyFamily if ``retries`` consecutive draws
    of ``a`` admit no ``b``.
    """
    rng = _as_rng(seed)
    if max(family.support_a) >= shape.dim_a or max(family.support_b) >= shape.dim_b:
        raise ValueError(f"family {family.label} does not fit shape {shape}")
    out = []
    misses = 0
    while len(out) < count:
        a = np.zeros(shape.dim_a, dtype=complex)
        a[list(family.support_a)] = _complex_normal(rng, len(family.support_a))
        sol = solution_space(a, family.support_b, range_q, shape, tol)
        if sol.shape[1] == 0:
            misses += 1
            if misses >= retries:
                if out:
                    break
                raise EmptyFamily(f"no product vector with supports {family.label} lies in the range")
            continue
        misses = 0
        b = sol @ _complex_normal(rng, sol.shape[1])
        b /= np.linalg.norm(b)
        out.append((a / np.linalg.norm(a), b))
    return out


def _index_map(op: MonomialOperator, shape: BipartiteShape, family: ProductFamily):
    """Image of the family under a composite monomial operator, or None.

    The image is a product family exactly when the operator acts on the support
    rectangle as (x, y) -> (sigma(x), tau(y)) with a rank-one scale pattern.
    """
    sa, sb = family.support_a, family.support_b
    sigma, tau = {}, {}
    scale = {}
    for x in sa:
        for y in sb:
            src = shape.flat(x, y)
            dst = op.perm[src]
            u, v = shape.pair(dst)
            if sigma.setdefault(x, u) != u or tau.setdefault(y, v) != v:
                return None
            scale[(x, y)] = op.scales[dst]
    if len(set(sigma.values())) != len(sa) or len(set(tau.values())) != len(sb):
        return None
    x0, y0 = sa[0], sb[0]
    for (x, y), s in scale.items():
        if not np.isclose(s * scale[(x0, y0)], scale[(x, y0)] * scale[(x0, y)], rtol=1e-12, atol=0):
            return None
    return ProductFamily(tuple(sigma.values()), tuple(tau.values()), family.label)


def transform_certificate(cert: RangeCertificate, op, shape: BipartiteShape) -> RangeCertificate:
    """Push a certificate through an invertible composite monomial operator.

    ``op`` is a MonomialOperator or a matrix on the composite space. Families
    whose image is no longer a product family are dropped and listed in
    ``dropped``; the witness is mapped and renormalized.
    """
    if not isinstance(op, MonomialOperator):
        try:
            op = MonomialOperator.from_matrix(op)
        except ValueError as exc:
            raise ValueError(f"certificate transport needs a monomial operator: {exc}") from None
    if op.dim != shape.dim:
        raise ValueError(f"operator dimension {op.dim} does not match {shape.dim}")
    fams, dropped = [], list(cert.dropped)
    for f in cert.families:
        g = _index_map(op, shape, f)
        if g is None:
            dropped.append(f.label)
        else:
            fams.append(g)
    return RangeCertificate(tuple(fams), op.apply(cert.witness), tuple(dropped))


def certificate_to_json(cert: RangeCertificate) -> dict:
    out = {
        "families": [
            {"supportA": [x + 1 for x in f.support_a], "supportB": [y + 1 for y in f.support_b],
             "label": f.label}
            for f in cert.families
        ],
        "witness": vector_to_json(cert.witness),
    }
    if cert.dropped:
        out["dropped"] = list(cert.dropped)
    return out


def certificate_from_json(data: dict) -> RangeCertificate:
    try:
        fams = tuple(
            ProductFamily(tuple(x - 1 for x in f["supportA"]), tuple(y - 1 for y in f["supportB"]),
                          f.get("label", ""))
            for f in data["families"]
        )
        witness = vector_from_json(data["witness"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed certificate JSON: {exc}") from exc
    return RangeCertificate(fams, witness, tuple(data.get("dropped", ())))
