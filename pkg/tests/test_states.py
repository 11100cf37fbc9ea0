"""Spectral states, density matrices and their JSON form."""
import numpy as np
import pytest

from boundent.linalg import BipartiteShape, basis_vector
from boundent.states import (
    DensityMatrix,
    SpectralState,
    TraceError,
    assemble,
    range_basis,
    state_digest,
    state_from_json,
    state_to_json,
    validate,
)

SHAPE = BipartiteShape(2, 2)


def singlet() -> SpectralState:
    v = (basis_vector(4, 1) - basis_vector(4, 2)) / np.sqrt(2)
    return SpectralState(SHAPE, (1.0,), (v,))


def test_assemble_and_validate():
    d = assemble(singlet())
    rep = validate(d)
    assert rep.passed and rep.trace_deviation < 1e-15
    assert range_basis(d).shape == (4, 1)


def test_trace_error():
    s = SpectralState(SHAPE, (0.5,), (basis_vector(4, 0),))
    with pytest.raises(TraceError) as info:
        assemble(s)
    assert info.value.trace == pytest.approx(0.5)


def test_rejects_bad_pairs():
    with pytest.raises(ValueError):
        SpectralState(SHAPE, (1.0, 0.0), (basis_vector(4, 0),))
    with pytest.raises(ValueError):
        SpectralState(SHAPE, (-0.1, 1.1), (basis_vector(4, 0), basis_vector(4, 1)))
    with pytest.raises(ValueError):
        SpectralState(SHAPE, (1.0,), (basis_vector(5, 0),))
    with pytest.raises(ValueError):
        SpectralState(SHAPE, (1.0,), (2 * basis_vector(4, 0),))


def test_unnormalized_vectors_and_normalized_copy():
    s = SpectralState(SHAPE, (0.25,), (2 * basis_vector(4, 3),), normalized=False)
    assert s.trace() == pytest.approx(1.0)
    t = s.normalized_copy()
    assert t.normalized and t.weights == (1.0,)
    np.testing.assert_allclose(s.matrix(), t.matrix())


def test_validate_flags_negative_matrix():
    d = DensityMatrix(SHAPE, np.diag([1.5, -0.5, 0, 0]))
    assert not validate(d).passed
    with pytest.raises(ValueError):
        DensityMatrix(SHAPE, np.eye(3))


def test_json_round_trip_and_digest():
    rng = np.random.default_rng(0)
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    v /= np.linalg.norm(v)
    s = SpectralState(SHAPE, (0.3, 0.7), (v, basis_vector(4, 0)))
    data = state_to_json(s)
    assert data["shape"] == [2, 2] and data["normalized"] is True
    back = state_from_json(data)
    np.testing.assert_array_equal(back.matrix(), s.matrix())
    assert state_digest(back) == state_digest(s)
    with pytest.raises(ValueError):
        state_from_json({"shape": [2, 2]})
