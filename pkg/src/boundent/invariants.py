"""Local-unitary invariants of spectral states.

For eigenvectors v_i let rho_i = Tr_B |v_i><v_i| and theta_i = Tr_A |v_i><v_i|.
The tables are

    J[s-1]     = Tr rho^s
    Omega[i,j] = Tr(rho_i rho_j)           Theta[i,j] = Tr(theta_i theta_j)
    X[i,j,k]   = Tr(rho_i rho_j rho_k)     Y[i,j,k]   = Tr(theta_i theta_j theta_k)

Two states related by U (x) V with eigenvectors transported accordingly have
identical tables. Since eigenvector order is arbitrary, comparisons use
order-free fingerprints; unequal fingerprints prove inequivalence, equal ones
prove nothing.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import partial_trace
from .states import SpectralState

__all__ = [
    "InvariantTable",
    "Fingerprint",
    "LUComparison",
    "compute_invariants",
    "fingerprint",
    "compare_lu",
    "table_to_json",
]

CONVENTIONS = ("raw", "normalized")
_CMP_TOL = 1e-9


@dataclass(frozen=True)
class InvariantTable:
    J: np.ndarray
    Omega: np.ndarray
    Theta: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    convention: str
    n: int
    weights: tuple[float, ...]


@dataclass(frozen=True)
class Fingerprint:
    J: np.ndarray
    omega_spectrum: np.ndarray
    theta_spectrum: np.ndarray
    omega_entries: np.ndarray
    theta_entries: np.ndarray
    omega_diag: np.ndarray
    theta_diag: np.ndarray
    x_entries: np.ndarray
    y_entries: np.ndarray
    eigenvalue_blocks: tuple[tuple[int, ...], ...]
    block_weights: tuple[float, ...]


@dataclass(frozen=True)
class LUComparison:
    verdict: str  # "Inequivalent" or "Inconclusive"
    witness: str = ""


def compute_invariants(s: SpectralState, convention: str = "raw", S: int | None = None) -> InvariantTable:
    """Invariant tables of ``s``.

    ``raw`` uses the stored vectors as they are, so a vector scaled by c
    contributes c^2 to its reduced operators. ``normalized`` rescales vectors
    to unit norm (weights absorbing the norms). J is always taken from the
    unit-trace density matrix; ``S`` defaults to min(n, 8).
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    if convention == "normalized":
        s = s.normalized_copy()
    n = s.n
    S = min(n, 8) if S is None else S
    if S < 2:
        S = 2
    rho = s.matrix()
    tr = np.trace(rho).real
    rho = rho / tr
    J = np.empty(S)
    p = np.eye(rho.shape[0], dtype=complex)
    for k in range(S):
        p = p @ rho
        J[k] = np.trace(p).real
    red_a = np.array([partial_trace(np.outer(v, v.conj()), s.shape, "B") for v in s.vectors])
    red_b = np.array([partial_trace(np.outer(v, v.conj()), s.shape, "A") for v in s.vectors])
    omega = _symmetric(np.einsum("iab,jba->ij", red_a, red_a).real)
    theta = _symmetric(np.einsum("iab,jba->ij", red_b, red_b).real)
    x = _cyclic(np.einsum("iab,jbc,kca->ijk", red_a, red_a, red_a, optimize=True))
    y = _cyclic(np.einsum("iab,jbc,kca->ijk", red_b, red_b, red_b, optimize=True))
    weights = tuple(float(w) for w in s.weights)
    return InvariantTable(J, omega, theta, x, y, convention, n, weights)


def _symmetric(m):
    # float addition commutes, so this is symmetric bit for bit
    return (m + m.T) / 2


def _cyclic(x):
    """Copy each entry from its lexicographically smallest cyclic rotation."""
    n = x.shape[0]
    i, j, k = np.indices(x.shape)
    codes = np.stack([i * n * n + j * n + k, j * n * n + k * n + i, k * n * n + i * n + j])
    return x.ravel()[codes.min(axis=0)]


def _blocks(weights, tol=1e-10):
    order = sorted(range(len(weights)), key=lambda i: (weights[i], i))
    blocks, vals = [], []
    for i in order:
        if blocks and abs(weights[i] - vals[-1]) <= tol:
            blocks[-1].append(i)
        else:
            blocks.append([i])
            vals.append(weights[i])
    return tuple(tuple(b) for b in blocks), tuple(vals)


def fingerprint(t: InvariantTable, weights=None) -> Fingerprint:
    weights = t.weights if weights is None else tuple(weights)
    if len(weights) != t.n:
        raise ValueError("one weight per eigenpair is required")
    blocks, vals = _blocks(weights)
    return Fingerprint(
        J=t.J.copy(),
        omega_spectrum=np.sort(np.linalg.eigvalsh(t.Omega)),
        theta_spectrum=np.sort(np.linalg.eigvalsh(t.Theta)),
        omega_entries=np.sort(t.Omega.ravel()),
        theta_entries=np.sort(t.Theta.ravel()),
        omega_diag=np.sort(np.diag(t.Omega)),
        theta_diag=np.sort(np.diag(t.Theta)),
        x_entries=np.concatenate([np.sort(t.X.real.ravel()), np.sort(t.X.imag.ravel())]),
        y_entries=np.concatenate([np.sort(t.Y.real.ravel()), np.sort(t.Y.imag.ravel())]),
        eigenvalue_blocks=blocks,
        block_weights=vals,
    )


def _differs(a, b) -> bool:
    a, b = np.asarray(a), np.asarray(b)
    return a.shape != b.shape or bool(np.max(np.abs(a - b), initial=0.0) > _CMP_TOL)


_COMPONENTS = [
    ("J", "power traces J"),
    ("omega_spectrum", "Omega spectrum"),
    ("theta_spectrum", "Theta spectrum"),
    ("omega_entries", "Omega entry multiset"),
    ("theta_entries", "Theta entry multiset"),
    ("omega_diag", "Omega diagonal multiset"),
    ("theta_diag", "Theta diagonal multiset"),
    ("x_entries", "X entry multiset"),
    ("y_entries", "Y entry multiset"),
]


def compare_lu(a: tuple[InvariantTable, Fingerprint], b: tuple[InvariantTable, Fingerprint]) -> LUComparison:
    """One-sided test: Inequivalent with the first differing component, else Inconclusive."""
    (ta, fa), (tb, fb) = a, b
    if ta.convention != tb.convention:
        raise ValueError(f"cannot compare {ta.convention} tables with {tb.convention} tables")
    for attr, name in _COMPONENTS:
        if _differs(getattr(fa, attr), getattr(fb, attr)):
            return LUComparison("Inequivalent", name)
    sizes_a = [len(x) for x in fa.eigenvalue_blocks]
    sizes_b = [len(x) for x in fb.eigenvalue_blocks]
    if sizes_a == sizes_b and not _differs(fa.block_weights, fb.block_weights):
        for blk_a, blk_b in zip(fa.eigenvalue_blocks, fb.eigenvalue_blocks):
            for mat, name in (("Omega", "Omega"), ("Theta", "Theta")):
                da = np.sort(np.diag(getattr(ta, mat))[list(blk_a)])
                db = np.sort(np.diag(getattr(tb, mat))[list(blk_b)])
                if _differs(da, db):
                    return LUComparison("Inequivalent", f"{name} diagonal within eigenvalue block")
        if _relabelling_exists(ta, tb, fa.eigenvalue_blocks, fb.eigenvalue_blocks) is False:
            return LUComparison("Inequivalent", "no eigenvalue-block relabelling matches Omega and Theta jointly")
    return LUComparison("Inconclusive")


def _relabelling_exists(ta, tb, blocks_a, blocks_b, budget: int = 200_000):
    """Search for a weight-preserving index map carrying (Omega, Theta) of a onto b.

    Returns True if one exists, False if the exhaustive search found none and
    None if the node budget ran out (treated as undecided).
    """
    order = [i for blk in blocks_a for i in blk]
    cands = {i: blk_b for blk_a, blk_b in zip(blocks_a, blocks_b) for i in blk_a}
    mats = [(ta.Omega, tb.Omega), (ta.Theta, tb.Theta)]
    assigned: list[tuple[int, int]] = []
    used: set[int] = set()
    nodes = 0

    def fits(i, j):
        for ma, mb in mats:
            if abs(ma[i, i] - mb[j, j]) > _CMP_TOL:
                return False
            for i2, j2 in assigned:
                if abs(ma[i, i2] - mb[j, j2]) > _CMP_TOL:
                    return False
        return True

    def extend(pos):
        nonlocal nodes
        if pos == len(order):
            return True
        i = order[pos]
        for j in cands[i]:
            if j in used:
                continue
            nodes += 1
            if nodes > budget:
                raise _Budget
            if fits(i, j):
                assigned.append((i, j))
                used.add(j)
                if extend(pos + 1):
                    return True
                assigned.pop()
                used.discard(j)
        return False

    try:
        return extend(0)
    except _Budget:
        return None


class _Budget(Exception):
    pass


def table_to_json(t: InvariantTable) -> dict:
    return {
        "convention": t.convention,
        "n": t.n,
        "J": t.J.tolist(),
        "Omega": t.Omega.tolist(),
        "Theta": t.Theta.tolist(),
        "X": {"re": t.X.real.tolist(), "im": t.X.imag.tolist()},
        "Y": {"re": t.Y.real.tolist(), "im": t.Y.imag.tolist()},
    }
