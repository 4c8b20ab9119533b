"""
Shared fixtures: tolerances, short word samplers and the named corpora.
"""

import numpy as np
import pytest

from trace_fields.config import Tolerances
from trace_fields.corpus import build_corpus, loxodromic_diagonal
from trace_fields.hermitian import GroupSpec
from trace_fields.words import WordSampler

REAL_LOXODROMIC = np.diag([2.0, 1.0, 0.5]).astype(complex)
SCREW_LOXODROMIC = loxodromic_diagonal(2.0, np.pi / 5)
# [[1, 1, tau], [0, 1, -1], [0, 0, 1]] with tau = -1/2
UNIPOTENT = np.array([[1, 1, -0.5], [0, 1, -1], [0, 0, 1]], dtype=complex)


def corpus_spec(name: str, seed: int = 0) -> GroupSpec:
    corpus = build_corpus(name, seed)
    return GroupSpec.from_matrices(corpus.generators, assumed_discrete=corpus.assumed_discrete)


@pytest.fixture
def tol() -> Tolerances:
    return Tolerances()


@pytest.fixture
def sampler(tol: Tolerances) -> WordSampler:
    return WordSampler(max_length=3, tol=tol)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)


@pytest.fixture
def so21_hidden() -> GroupSpec:
    return corpus_spec("so21-hidden")


@pytest.fixture
def sl2z() -> GroupSpec:
    return corpus_spec("sl2z")


@pytest.fixture
def screw() -> GroupSpec:
    return corpus_spec("screw")
