"""
Tests for the Hermitian form, membership and group operations.
"""

import numpy as np
import pytest

from trace_fields.errors import InvalidParameter, NotInGroup
from trace_fields.hermitian import (
    FORM_MATRIX,
    IDENTITY,
    OMEGA,
    GroupSpec,
    VectorType,
    anti_transpose_inverse,
    canonical_phase,
    chordal_distance,
    conjugate,
    form_residual,
    herm_inner,
    mul,
    power,
    random_su21,
    trace,
    validate_su21,
    vector_type,
)

from .conftest import REAL_LOXODROMIC, SCREW_LOXODROMIC

E1, E2, E3 = IDENTITY


def test_inner_product_on_null_basis():
    assert herm_inner(E1, E3) == 1
    assert herm_inner(E2, E2) == 1
    assert herm_inner(E1, E1) == 0
    v = np.array([1 + 2j, 0.5j, -1])
    w = np.array([2, 1 - 1j, 3j])
    assert np.isclose(herm_inner(v, w), np.conj(herm_inner(w, v)))
    assert np.isclose(herm_inner(v, w), v @ FORM_MATRIX @ w.conj())


def test_validate_accepts_members():
    assert validate_su21(IDENTITY).residual == 0
    assert validate_su21(REAL_LOXODROMIC).residual < 1e-15
    assert validate_su21(OMEGA * IDENTITY).residual < 1e-15


def test_validate_rejects_non_members():
    broken = REAL_LOXODROMIC.copy()
    broken[0, 1] = 0.1
    with pytest.raises(NotInGroup) as info:
        validate_su21(broken)
    assert info.value.details["max_residual"] > 0.05
    # preserves the form but has determinant -1
    with pytest.raises(NotInGroup):
        validate_su21(FORM_MATRIX)
    with pytest.raises(InvalidParameter):
        validate_su21(np.eye(2))


def test_anti_transpose_inverse():
    assert np.allclose(anti_transpose_inverse(IDENTITY).matrix, IDENTITY)
    inverse = anti_transpose_inverse(SCREW_LOXODROMIC).matrix
    expected = np.diag(np.conj(np.diag(SCREW_LOXODROMIC))[::-1])
    assert np.allclose(inverse, expected)
    g = random_su21(3)
    assert np.max(np.abs(g.matrix @ g.inverse.matrix - IDENTITY)) < 1e-12


def test_products_and_traces():
    g = random_su21(4)
    assert np.allclose(mul(IDENTITY, g).matrix, g.matrix)
    assert trace(REAL_LOXODROMIC) == 3.5
    assert np.isclose(trace(conjugate(random_su21(5), g)), g.trace)
    assert np.allclose(power(g, -2) @ power(g, 2), IDENTITY)


def test_random_elements_are_members_and_reproducible():
    for seed in range(20):
        g = random_su21(seed)
        assert form_residual(g.matrix) <= 1e-10
    assert np.array_equal(random_su21(7).matrix, random_su21(7).matrix)
    with pytest.raises(InvalidParameter):
        random_su21(0, spread=0)


def test_elements_are_read_only():
    g = random_su21(1)
    with pytest.raises(ValueError):
        g.matrix[0, 0] = 0


def test_group_spec_reports_offending_generator():
    broken = REAL_LOXODROMIC.copy()
    broken[2, 2] = 3
    with pytest.raises(NotInGroup) as info:
        GroupSpec.from_matrices([IDENTITY, broken])
    assert info.value.details["generator"] == 1
    spec = GroupSpec.from_matrices([IDENTITY, REAL_LOXODROMIC])
    assert spec.labels == ("g0", "g1")


def test_vector_types_and_projective_helpers():
    assert vector_type(E1) is VectorType.ISOTROPIC
    assert vector_type(E2) is VectorType.POSITIVE
    assert vector_type([1, 0, -1]) is VectorType.NEGATIVE

    v = canonical_phase([0, 2j, 1])
    assert np.isclose(np.linalg.norm(v), 1)
    assert np.isclose(v[1], abs(v[1]))

    assert chordal_distance(E1, 3j * E1) < 1e-12
    assert np.isclose(chordal_distance(E1, E2), 1)


def test_chordal_distance_resolves_nearby_lines():
    v = E1 + 0.5 * E2
    assert chordal_distance(v, (2 - 1j) * v) < 1e-14
    # the perturbation is Euclidean-orthogonal to v
    nearby = v + 1e-10 * (-0.5 * E1 + E2)
    assert 1e-11 < chordal_distance(v, nearby) < 1e-9
    assert np.isclose(chordal_distance(v, nearby), chordal_distance(nearby, v), rtol=1e-6, atol=0)


def test_products_record_their_membership():
    g, h = random_su21(1), random_su21(2)
    assert mul(g, h).validated
    assert conjugate(g, h).validated
    assert not mul(2 * IDENTITY, IDENTITY).validated
    assert not conjugate(IDENTITY, np.diag([2.0, 1.0, 1.0])).validated
