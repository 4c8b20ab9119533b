"""
Tests for word manipulation and breadth-first enumeration.
"""

import numpy as np
import pytest

from trace_fields.errors import InvalidParameter
from trace_fields.hermitian import IDENTITY, random_su21
from trace_fields.words import (
    WordSampler,
    display_word,
    evaluate_word,
    free_reduce,
    inverse_word,
    letter,
    letter_index,
    substitute,
)

from .conftest import REAL_LOXODROMIC


def test_letters():
    assert letter(0) == "a"
    assert letter(1, inverse=True) == "B"
    assert letter_index("C") == (2, True)
    with pytest.raises(InvalidParameter):
        letter(26)
    with pytest.raises(InvalidParameter):
        letter_index("?")


def test_word_algebra():
    assert free_reduce("aAb") == "b"
    assert free_reduce("abBA") == ""
    assert inverse_word("abC") == "cBA"
    assert substitute("aB", {"a": "ab", "b": "a"}) == "abA"
    assert substitute("ab", {"a": "ab", "b": "B"}) == "a"
    assert display_word("") == "1"


def test_evaluate_word_uses_group_inverses():
    g, h = random_su21(0).matrix, random_su21(1).matrix
    assert np.allclose(evaluate_word("aA", [g]), IDENTITY)
    assert np.allclose(evaluate_word("abA", [g, h]), g @ h @ np.linalg.inv(g))
    with pytest.raises(InvalidParameter):
        evaluate_word("c", [g, h])


def test_breadth_first_order_and_counts():
    sampler = WordSampler(max_length=2).bind([random_su21(0), random_su21(1)])
    words = [s.word for s in sampler.words()]
    # 4 words of length 1, then 4 * 3 freely reduced words of length 2
    assert len(words) == 16
    assert words[:4] == ["a", "A", "b", "B"]
    assert "aA" not in words
    assert [len(w) for w in words] == sorted(len(w) for w in words)


def test_words_match_evaluation():
    generators = [random_su21(2).matrix, random_su21(3).matrix]
    sampler = WordSampler(max_length=3).bind(generators)
    for sample in sampler.words(include_identity=True):
        assert np.allclose(sample.matrix, evaluate_word(sample.word, generators))


def test_samples_drop_repeated_traces():
    sampler = WordSampler(max_length=2).bind([REAL_LOXODROMIC])
    # A and A^{-1} share the pair (tr, tr of the inverse) for a real diagonal
    assert [s.word for s in sampler.samples()] == ["a", "aa"]
    undeduped = WordSampler(max_length=2, dedup=False).bind([REAL_LOXODROMIC])
    assert [s.word for s in undeduped.samples()] == ["a", "A", "aa", "AA"]


def test_sampler_validation():
    with pytest.raises(InvalidParameter):
        WordSampler(max_length=0)
    with pytest.raises(InvalidParameter):
        list(WordSampler().words())
