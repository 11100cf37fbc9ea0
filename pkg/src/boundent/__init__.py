"""Bound entangled states from permutation and monomial operators.

Generators for three PPT entangled families, two constructions producing new
PPT entangled states from them, and checks that certify the results (PPT,
range-criterion violation, local-unitary inequivalence).
"""
from .certify import certify, check_ppt, check_range_violation, search_product_supports
from .constructions import apply_theorem1, apply_theorem2
from .families import FamilyId, example1, example2, example3, generate, transform_certificate
from .invariants import compare_lu, compute_invariants, fingerprint
from .linalg import DEFAULT_TOL, BipartiteShape, Tolerance, partial_trace, partial_transpose
from .operators import MonomialOperator, OperatorSpec, build, parse_spec
from .states import DensityMatrix, SpectralState, assemble, range_basis, validate

__version__ = "0.1.0"
