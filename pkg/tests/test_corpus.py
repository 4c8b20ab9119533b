"""
Tests for the explicit test groups.
"""

import numpy as np
import pytest

from trace_fields.classification import ElementType, classify_element
from trace_fields.corpus import (
    CORPORA,
    build_corpus,
    corpus_so21,
    corpus_su11,
    hide,
    random_loxodromic,
    sl2r_embed,
    sl2r_to_so21,
)
from trace_fields.detectors import irreducibility
from trace_fields.errors import InvalidParameter, NotUnimodular
from trace_fields.hermitian import IDENTITY, GroupSpec, trace, validate_su21


def test_sl2r_embedding_examples():
    assert np.allclose(sl2r_embed(1, 0, 0, 1).matrix, IDENTITY)

    translation = sl2r_embed(1, 1, 0, 1).matrix
    assert np.allclose(translation, [[1, 0, -1j], [0, 1, 0], [0, 0, 1]])
    assert classify_element(translation).tag is ElementType.PARABOLIC_UNIPOTENT

    hyperbolic = sl2r_embed(2, 0, 0, 0.5)
    assert np.isclose(hyperbolic.trace, 3.5)
    assert classify_element(hyperbolic).tag is ElementType.LOXODROMIC


def test_sl2r_embedding_is_a_homomorphism():
    x, y = (2, 1, 1, 1), (1, 3, 0, 1)
    product = (2 * 1 + 1 * 0, 2 * 3 + 1 * 1, 1 * 1 + 1 * 0, 1 * 3 + 1 * 1)
    assert np.allclose(sl2r_embed(*x).matrix @ sl2r_embed(*y).matrix, sl2r_embed(*product).matrix)
    assert np.allclose(
        sl2r_to_so21(*x).matrix @ sl2r_to_so21(*y).matrix, sl2r_to_so21(*product).matrix
    )


def test_unimodular_check():
    with pytest.raises(NotUnimodular):
        sl2r_embed(1, 1, 1, 1)
    with pytest.raises(NotUnimodular):
        sl2r_to_so21(2, 0, 0, 1)


def test_so21_kinds_are_real():
    assert np.allclose(corpus_so21("hyperbolic", lam=2.0).matrix, np.diag([2.0, 1.0, 0.5]))
    for kind, params in [
        ("rotation", {"theta": 0.7}),
        ("parabolic", {"x": 2.0}),
        ("sl2", {"a": 2, "b": 1, "c": 1, "d": 1}),
    ]:
        assert np.all(corpus_so21(kind, **params).matrix.imag == 0)
    assert classify_element(corpus_so21("rotation", theta=0.7)).tag is ElementType.ELLIPTIC


def test_so21_kind_errors():
    with pytest.raises(InvalidParameter):
        corpus_so21("hyperbolic", lam=0.5)
    with pytest.raises(InvalidParameter):
        corpus_so21("rotation")
    with pytest.raises(InvalidParameter):
        corpus_so21("shear", x=1.0)


def test_su11_blocks_are_reducible():
    g = corpus_su11([[2, 0], [0, 0.5]])
    h = corpus_su11(np.exp(1j * np.pi / 7) * np.array([[1, -1j], [0, 1]]))
    assert not irreducibility(GroupSpec(generators=(g, h))).irreducible
    with pytest.raises(InvalidParameter):
        corpus_su11([[2, 0], [0, 2]])


def test_hide_and_random_loxodromic_are_seeded():
    first, s = hide([np.diag([2.0, 1.0, 0.5])], seed=4)
    second, _ = hide([np.diag([2.0, 1.0, 0.5])], seed=4)
    assert np.array_equal(first[0], second[0])
    assert np.isclose(trace(first[0]), 3.5)
    validate_su21(s)

    element, lam, phi = random_loxodromic(7)
    assert 1.1 <= lam <= 10
    assert -np.pi < phi <= np.pi
    assert classify_element(element).tag is ElementType.LOXODROMIC


@pytest.mark.parametrize("name", sorted(CORPORA))
def test_every_corpus_builds(name):
    corpus = build_corpus(name, seed=1)
    assert corpus.name == name
    assert corpus.generators
    for g in corpus.generators:
        validate_su21(g)


def test_unknown_corpus():
    with pytest.raises(InvalidParameter) as excinfo:
        build_corpus("nope")
    assert "sl2z" in excinfo.value.details["available"]
