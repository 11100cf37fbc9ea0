"""PPT and range-criterion certification.

A separable state has product vectors spanning its range whose partial
conjugates span the range of its partial transpose. Two ways of refuting that
are implemented:

* witness route -- product families from a certificate span the range, yet a
  witness vector in range(rho^T_B) lies outside the span of their conjugates;
* deficiency route -- an exact algebraic proof (Groebner basis over Q) that
  every product vector in the range has a vanishing coordinate, so product
  vectors cannot span the range at all.

The witness route is only as complete as the supplied families; the report
flags that with a caveat and never claims completeness.
"""
from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .errors import EmptyFamily
from .families import RangeCertificate, _as_rng, sample_family, solution_space
from .linalg import (
    DEFAULT_TOL,
    BipartiteShape,
    Tolerance,
    in_span,
    numerical_rank,
    orthonormal_span,
    partial_transpose,
)
from .states import DensityMatrix, SpectralState, range_basis

__all__ = [
    "PPTReport",
    "DeficiencyProof",
    "RangeViolationReport",
    "CertificationVerdict",
    "check_ppt",
    "check_range_violation",
    "prove_product_deficiency",
    "search_product_supports",
    "maximal_patterns",
    "certify",
    "report_to_json",
    "REPORT_VERSION",
]

REPORT_VERSION = 1
GENERIC_CAVEAT = "generic-sample: product families are explored by random sampling, not exhaustively"


@dataclass(frozen=True)
class PPTReport:
    min_eigenvalue: float
    tolerance: float
    verdict: str

    @property
    def is_ppt(self) -> bool:
        return self.verdict == "PPT"


@dataclass(frozen=True)
class DeficiencyProof:
    proven: bool
    coordinate: int | None = None
    minors: int = 0
    variables: int = 0
    detail: str = ""


@dataclass(frozen=True)
class RangeViolationReport:
    range_dim: int
    pt_range_dim: int
    family_span_dim: int
    conjugate_span_dim: int
    witness_residual: float
    witness_pt_residual: float
    witness_in_pt_range: bool
    empty_families: tuple[str, ...]
    verdict: str
    route: str | None = None
    deficiency: DeficiencyProof | None = None
    samples: int = 0
    caveats: tuple[str, ...] = field(default=(GENERIC_CAVEAT,))


@dataclass(frozen=True)
class CertificationVerdict:
    ppt: PPTReport
    range: RangeViolationReport
    conclusion: str


def check_ppt(d: DensityMatrix, tol: Tolerance = DEFAULT_TOL) -> PPTReport:
    pt = partial_transpose(d.matrix, d.shape, "B")
    w = np.linalg.eigvalsh((pt + pt.conj().T) / 2)
    m = float(w[0])
    return PPTReport(m, tol.eig_floor, "PPT" if m >= -tol.eig_floor else "NPT")


def _pt_range(d: DensityMatrix, tol: Tolerance) -> np.ndarray:
    pt = partial_transpose(d.matrix, d.shape, "B")
    w, v = np.linalg.eigh((pt + pt.conj().T) / 2)
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    return v[:, np.abs(w) > tol.rank_rel * scale]


def _saturate(family, range_q, shape, rng, tol, max_draws, patience=10):
    """Sample a family until its span stops growing."""
    bound = min(len(family.support_a) * len(family.support_b), range_q.shape[1])
    prods = []
    basis = np.zeros((shape.dim, 0), dtype=complex)
    stale = 0
    for _ in range(max_draws):
        (a, b), = sample_family(family, range_q, shape, 1, rng, tol)
        v = np.kron(a, b)
        prods.append((a, b))
        r = v - basis @ (basis.conj().T @ v)
        nr = np.linalg.norm(r)
        if nr > 1e-8:
            basis = np.column_stack([basis, r / nr])
            stale = 0
        else:
            stale += 1
        if basis.shape[1] >= bound or stale >= patience:
            break
    return prods


def check_range_violation(d: DensityMatrix, cert: RangeCertificate, tol: Tolerance = DEFAULT_TOL,
                          seed=0, samples_per_family: int = 200,
                          spanning: SpectralState | None = None,
                          deficiency_budget: int = 3) -> RangeViolationReport:
    """Run the witness route and, if it fails, try the deficiency route.

    ``spanning`` supplies exact vectors spanning the range (normally the
    spectral vectors of the state); without it only the witness route runs.
    """
    shape = d.shape
    if cert.witness.size != shape.dim:
        raise ValueError(f"witness of length {cert.witness.size} does not match dimension {shape.dim}")
    for f in cert.families:
        if max(f.support_a) >= shape.dim_a or max(f.support_b) >= shape.dim_b:
            raise ValueError(f"family {f.label} does not fit shape {shape.dim_a}x{shape.dim_b}")
    rng = _as_rng(seed)
    rq = range_basis(d, tol)
    r = rq.shape[1]
    prods, empty = [], []
    for fam in cert.families:
        try:
            prods += _saturate(fam, rq, shape, rng, tol, samples_per_family)
        except EmptyFamily:
            empty.append(fam.label)
    if prods:
        fam_dim, _ = numerical_rank([np.kron(a, b) for a, b in prods], tol)
        conj = orthonormal_span([np.kron(a, b.conj()) for a, b in prods], tol)
        conj_dim = conj.shape[1]
        _, w_res = in_span(cert.witness, conj, tol)
    else:
        fam_dim, conj_dim, w_res = 0, 0, 1.0
        conj = None
    ptq = _pt_range(d, tol)
    w_in_pt, w_pt_res = in_span(cert.witness, ptq, tol)
    caveats = [GENERIC_CAVEAT]
    if fam_dim == r and w_in_pt and w_res >= tol.residual_min:
        return RangeViolationReport(r, ptq.shape[1], fam_dim, conj_dim, w_res, w_pt_res, w_in_pt, tuple(empty),
                                    "Violated", "witness", None, len(prods), tuple(caveats))
    proof = None
    if fam_dim < r and spanning is not None and deficiency_budget > 0:
        fam_q = orthonormal_span([np.kron(a, b) for a, b in prods], tol) if prods else None
        proof = _try_deficiency(spanning, rq, fam_q, tol, deficiency_budget)
    if proof is not None and proof.proven:
        caveats.append("deficiency route: product vectors in the range provably miss one coordinate")
        return RangeViolationReport(r, ptq.shape[1], fam_dim, conj_dim, w_res, w_pt_res, w_in_pt, tuple(empty),
                                    "Violated", "deficiency", proof, len(prods), tuple(caveats))
    return RangeViolationReport(r, ptq.shape[1], fam_dim, conj_dim, w_res, w_pt_res, w_in_pt, tuple(empty),
                                "NotEstablished", None, proof, len(prods), tuple(caveats))


def _try_deficiency(s: SpectralState, rq, fam_q, tol, budget) -> DeficiencyProof:
    vecs = [v for w, v in zip(s.weights, s.vectors) if w > 0]
    if not vecs:
        return DeficiencyProof(False, detail="no spanning vectors")
    vmat = np.column_stack(vecs)
    rank, _ = numerical_rank(vecs, tol)
    if rank != len(vecs) or rank != rq.shape[1]:
        return DeficiencyProof(False, detail="spanning vectors are not a basis of the range")
    if np.linalg.norm(vmat - rq @ (rq.conj().T @ vmat)) > 1e-8 * np.linalg.norm(vmat):
        return DeficiencyProof(False, detail="spanning vectors leave the range")
    # directions of the range not reached by the sampled product vectors
    if fam_q is None:
        missing = rq
    else:
        missing = orthonormal_span(list((rq - fam_q @ (fam_q.conj().T @ rq)).T), tol)
        if missing.shape[1] == 0:
            return DeficiencyProof(False, detail="no missing direction")
    coeffs, *_ = np.linalg.lstsq(vmat, missing, rcond=None)
    weight = np.max(np.abs(coeffs), axis=1)
    order = [int(j) for j in np.argsort(-weight, kind="stable") if weight[j] > 1e-6][:budget]
    return prove_product_deficiency(vecs, s.shape, order)


def _rationalize(v) -> list[Fraction] | None:
    v = np.asarray(v, dtype=complex)
    piv = v[np.argmax(np.abs(v))]
    u = v / piv
    if np.max(np.abs(u.imag)) > 1e-12:
        return None
    out = []
    for x in u.real:
        # small denominators and a tight match keep generic floats out
        f = Fraction(float(x)).limit_denominator(10**4)
        if abs(float(f) - x) > 1e-13:
            return None
        out.append(f)
    return out


def prove_product_deficiency(vectors, shape: BipartiteShape, coordinates=None) -> DeficiencyProof:
    """Try to prove that product vectors in span(vectors) all have coordinate j = 0.

    With M(z) = sum_j z_j V_j (each vector reshaped to dim_a x dim_b), product
    vectors are the points where all 2x2 minors vanish. If 1 lies in the ideal
    generated by the minors that involve z_j together with 1 - y z_j, then z_j
    vanishes on every product vector in the span. Vectors must be real up to a
    per-vector phase and rational after rescaling; otherwise nothing is
    attempted.
    """
    import sympy as sp

    rats = [_rationalize(v) for v in vectors]
    if any(r is None for r in rats):
        return DeficiencyProof(False, detail="vectors are not rational up to scaling")
    n = len(rats)
    z = sp.symbols(f"z0:{n}")
    entries: dict[tuple[int, int], dict[int, Fraction]] = {}
    for j, vec in enumerate(rats):
        for flat, c in enumerate(vec):
            if c != 0:
                entries.setdefault(shape.pair(flat), {})[j] = c

    def entry(x, y):
        terms = entries.get((x, y))
        if not terms:
            return sp.Integer(0)
        return sp.Add(*[sp.Rational(c.numerator, c.denominator) * z[j] for j, c in terms.items()])

    ys = sp.Symbol("y_aux")
    coords = range(n) if coordinates is None else coordinates
    last = DeficiencyProof(False, detail="no coordinate tried")
    for j in coords:
        positions = [pos for pos, terms in entries.items() if j in terms]
        minors = set()
        for (x, y) in positions:
            for x2 in range(shape.dim_a):
                if x2 == x:
                    continue
                for y2 in range(shape.dim_b):
                    if y2 == y:
                        continue
                    m = sp.expand(entry(x, y) * entry(x2, y2) - entry(x, y2) * entry(x2, y))
                    if m != 0:
                        minors.add(m)
        if not minors:
            last = DeficiencyProof(False, j, 0, 0, "coordinate appears in no minor")
            continue
        gens = sorted(minors, key=sp.default_sort_key)
        variables = sorted(set().union(*(g.free_symbols for g in gens)) | {z[j]}, key=sp.default_sort_key)
        basis = sp.groebner(gens + [1 - ys * z[j]], *variables, ys, order="grevlex", domain="QQ")
        if list(basis.exprs) == [1]:
            return DeficiencyProof(True, j, len(gens), len(variables),
                                   f"coordinate {j + 1} vanishes on every product vector in the span")
        last = DeficiencyProof(False, j, len(gens), len(variables), "radical membership not established")
    return last


def _subsets(n):
    for r in range(1, n + 1):
        yield from itertools.combinations(range(n), r)


def search_product_supports(d: DensityMatrix, tol: Tolerance = DEFAULT_TOL, seed=0,
                            draws: int = 5, max_dim: int = 9) -> list[tuple[tuple[int, ...], tuple[int, ...], int]]:
    """Catalog of exact support patterns admitting product vectors in the range.

    For every pair (SA, SB) a generic ``a`` with support exactly SA is drawn
    ``draws`` times; the reported dimension is the median dimension of the
    space of ``b`` supported in SB with a (x) b in the range, counted only
    when a generic such ``b`` has support exactly SB. Patterns reachable only
    by non-generic ``a`` are missed.
    """
    shape = d.shape
    if shape.dim_a > max_dim or shape.dim_b > max_dim:
        raise ValueError(f"support search is limited to factors of dimension <= {max_dim}")
    rng = _as_rng(seed)
    rq = range_basis(d, tol)
    sbs = list(_subsets(shape.dim_b))
    out = []
    for sa in _subsets(shape.dim_a):
        dims = np.zeros((draws, len(sbs)), dtype=int)
        for t in range(draws):
            a = np.zeros(shape.dim_a, dtype=complex)
            a[list(sa)] = rng.standard_normal(len(sa)) + 1j * rng.standard_normal(len(sa))
            for k, sb in enumerate(sbs):
                sol = solution_space(a, sb, rq, shape, tol)
                if sol.shape[1] and np.all(np.linalg.norm(sol[list(sb)], axis=1) > 1e-8):
                    dims[t, k] = sol.shape[1]
        med = np.median(dims, axis=0)
        out += [(sa, sb, int(m)) for sb, m in zip(sbs, med) if m > 0]
    return out


def maximal_patterns(patterns) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Support pairs not contained componentwise in another pair of the list."""
    pairs = {(tuple(sa), tuple(sb)) for sa, sb, *_ in patterns}
    keep = set()
    for sa, sb in pairs:
        if not any((sa, sb) != (ta, tb) and set(sa) <= set(ta) and set(sb) <= set(tb) for ta, tb in pairs):
            keep.add((sa, sb))
    return keep


def certify(d: DensityMatrix, cert: RangeCertificate, tol: Tolerance = DEFAULT_TOL, seed=0,
            spanning: SpectralState | None = None, samples_per_family: int = 200) -> CertificationVerdict:
    ppt = check_ppt(d, tol)
    rng_report = check_range_violation(d, cert, tol, seed, samples_per_family, spanning)
    if not ppt.is_ppt:
        conclusion = "NotPPT"
    elif rng_report.verdict == "Violated":
        conclusion = "BoundEntangled"
    else:
        conclusion = "Inconclusive"
    return CertificationVerdict(ppt, rng_report, conclusion)


def report_to_json(v: CertificationVerdict, seed, tol: Tolerance) -> dict:
    rng = asdict(v.range)
    rng["empty_families"] = list(rng["empty_families"])
    caveats = list(rng.pop("caveats"))
    return {
        "report_version": REPORT_VERSION,
        "ppt": asdict(v.ppt),
        "range": rng,
        "conclusion": v.conclusion,
        "seed": seed,
        "tolerances": asdict(tol),
        "caveats": caveats,
    }
