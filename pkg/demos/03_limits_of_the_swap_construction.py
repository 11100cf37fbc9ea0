"""The eigenvector swap on the 6x6 member breaks positivity of the partial transpose.

The swap equals its own partial transpose as a matrix, but conjugating by it
does not commute with the partial transpose, and the new state is NPT.

Run with ``python demos/03_limits_of_the_swap_construction.py``.
"""
import numpy as np

from boundent import apply_theorem2, check_ppt, assemble, example3, partial_transpose
from boundent.operators import swap

for eps in (0.01, 0.05, 0.1, 1 / 6):
    rho, _ = example3(2, eps)
    sigma, _ = apply_theorem2(rho, swap(36, 7, 9), 0)
    rep = check_ppt(assemble(sigma))
    print(f"eps={eps:.3f}: min eigenvalue of the partial transpose {rep.min_eigenvalue:+.3e} -> {rep.verdict}")

rho, _ = example3(2, 0.1)
sigma, _ = apply_theorem2(rho, swap(36, 7, 9), 0)
p = swap(36, 7, 9).matrix().real
gap = np.max(np.abs(partial_transpose(sigma.matrix(), rho.shape)
                    - p @ partial_transpose(rho.matrix(), rho.shape) @ p.T))
print(f"max |(P rho P)^T_B - P rho^T_B P| = {gap:.3e}")
