"""
Word enumeration over a finite generating set.

Generators are written a, b, c, ... and their inverses A, B, C, ... Words are
freely reduced and enumerated breadth-first by length, then lexicographically
in the letter order a < A < b < B < ... Matrices are built incrementally, one
multiplication per word.
"""

import logging
from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field, replace
from string import ascii_lowercase
from typing import Any

import numpy as np

from .config import Tolerances, default_tolerances, settings
from .errors import InvalidParameter
from .hermitian import FORM_MATRIX, IDENTITY, as_matrix

logger = logging.getLogger(__name__)

IDENTITY_WORD = ""

TraceKey = Callable[[np.ndarray], tuple[int, ...]]


def letter(index: int, inverse: bool = False) -> str:
    if not 0 <= index < len(ascii_lowercase):
        raise InvalidParameter("at most 26 generators are supported", index=index)
    char = ascii_lowercase[index]
    return char.upper() if inverse else char


def letter_index(char: str) -> tuple[int, bool]:
    """Return (generator index, is_inverse) for a single letter."""
    lower = char.lower()
    if len(char) != 1 or lower not in ascii_lowercase:
        raise InvalidParameter(f"invalid word letter {char!r}")
    return ascii_lowercase.index(lower), char.isupper()


def inverse_word(word: str) -> str:
    return word[::-1].swapcase()


def free_reduce(word: str) -> str:
    stack: list[str] = []
    for char in word:
        if stack and stack[-1] == char.swapcase():
            stack.pop()
        else:
            stack.append(char)
    return "".join(stack)


def substitute(word: str, images: Mapping[str, str]) -> str:
    """Replace each lowercase letter by its image word (inverses by the inverse image)."""
    parts = []
    for char in word:
        image = images[char.lower()]
        parts.append(inverse_word(image) if char.isupper() else image)
    return free_reduce("".join(parts))


def display_word(word: str) -> str:
    return word or "1"


def evaluate_word(word: str, generators: Sequence[Any]) -> np.ndarray:
    """Multiply out a word; inverses use the anti-transpose J M^H J."""
    result = IDENTITY.copy()
    for char in word:
        index, inverse = letter_index(char)
        if index >= len(generators):
            raise InvalidParameter(f"word {word!r} uses a missing generator", letter=char)
        m = as_matrix(generators[index])
        result = result @ (FORM_MATRIX @ m.conj().T @ FORM_MATRIX if inverse else m)
    return result


def trace_pair_key(step: float) -> TraceKey:
    """Quantized (tr M, tr M^{-1}) key, used to drop repeated traces."""

    def key(m: np.ndarray) -> tuple[int, ...]:
        tr = complex(np.trace(m))
        tr_inv = complex(np.trace(FORM_MATRIX @ m.conj().T @ FORM_MATRIX))
        return tuple(int(round(x / step)) for x in (tr.real, tr.imag, tr_inv.real, tr_inv.imag))

    return key


@dataclass(frozen=True, eq=False)
class WordSample:
    word: str
    matrix: np.ndarray = field(repr=False)

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))


@dataclass(frozen=True, eq=False)
class WordSampler:
    """Deterministic breadth-first enumeration of freely reduced words.

    ``samples()`` filters repeated traces; ``words()`` emits every reduced word.
    Dedup filters emitted samples only, so words whose prefixes were dropped are
    still reached.
    """

    generators: tuple[np.ndarray, ...] = ()
    max_length: int = field(default_factory=lambda: settings.MAX_WORD_LENGTH)
    include_inverses: bool = True
    dedup: bool = True
    tol: Tolerances = field(default_factory=default_tolerances)

    def __post_init__(self) -> None:
        if self.max_length < 1:
            raise InvalidParameter("max_length must be at least 1", max_length=self.max_length)
        object.__setattr__(
            self, "generators", tuple(as_matrix(g).copy() for g in self.generators)
        )

    def bind(self, generators: Sequence[Any]) -> "WordSampler":
        """Same enumeration settings over another generating set."""
        return replace(self, generators=tuple(as_matrix(g) for g in generators))

    def with_max_length(self, max_length: int) -> "WordSampler":
        return replace(self, max_length=max_length)

    def alphabet(self) -> list[tuple[str, np.ndarray]]:
        letters = []
        for index, g in enumerate(self.generators):
            letters.append((letter(index), g))
            if self.include_inverses:
                inverse = FORM_MATRIX @ g.conj().T @ FORM_MATRIX
                letters.append((letter(index, inverse=True), inverse))
        return letters

    def words(self, include_identity: bool = False) -> Iterator[WordSample]:
        if not self.generators:
            raise InvalidParameter("sampler has no generators")
        if include_identity:
            yield WordSample(IDENTITY_WORD, IDENTITY.copy())
        alphabet = self.alphabet()
        frontier = [WordSample(IDENTITY_WORD, IDENTITY.copy())]
        for length in range(1, self.max_length + 1):
            next_frontier = []
            for sample in frontier:
                last = sample.word[-1:] if sample.word else ""
                for char, m in alphabet:
                    if last and char == last.swapcase():
                        continue
                    extended = WordSample(sample.word + char, sample.matrix @ m)
                    next_frontier.append(extended)
                    yield extended
            logger.debug(f"Enumerated {len(next_frontier)} words of length {length}")
            frontier = next_frontier

    def samples(self, key: TraceKey | None = None) -> Iterator[WordSample]:
        if not self.dedup:
            yield from self.words()
            return
        key = key or trace_pair_key(self.tol.eps_field)
        seen: set[tuple[int, ...]] = set()
        for sample in self.words():
            k = key(sample.matrix)
            if k in seen:
                continue
            seen.add(k)
            yield sample
