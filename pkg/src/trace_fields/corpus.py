"""
Explicit test groups.

SL(2,R) enters SU(2,1) in two ways: acting on the (e1, e3) coordinates and
fixing e2 (a group preserving the complex geodesic polar to e2), and through
the symmetric square, which lands in SO(2,1) for the form z1 w3 + z2 w2 + z3 w1.
"""

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from .config import Tolerances, default_tolerances
from .errors import InvalidParameter, NotUnimodular
from .hermitian import (
    Su21Element,
    as_matrix,
    conjugate,
    random_su21,
    validate_su21,
)

logger = logging.getLogger(__name__)

SQRT2 = float(np.sqrt(2.0))


def _check_unimodular(a: float, b: float, c: float, d: float, tol: Tolerances) -> None:
    det = a * d - b * c
    if abs(det - 1) > tol.eps_form:
        raise NotUnimodular("ad - bc must equal 1", det=det)


def sl2r_embed(
    a: float, b: float, c: float, d: float, tol: Tolerances | None = None
) -> Su21Element:
    """[[a, 0, -ib], [0, 1, 0], [ic, 0, d]], fixing the positive vector e2.

    Raises:
        NotUnimodular: ad - bc differs from 1 beyond eps_form
    """
    tol = tol or default_tolerances()
    _check_unimodular(a, b, c, d, tol)
    m = np.array([[a, 0, -1j * b], [0, 1, 0], [1j * c, 0, d]], dtype=complex)
    return validate_su21(m, tol)


def sl2r_to_so21(
    a: float, b: float, c: float, d: float, tol: Tolerances | None = None
) -> Su21Element:
    """Symmetric square of [[a, b], [c, d]] in the null basis (a real element of SO(2,1))."""
    tol = tol or default_tolerances()
    _check_unimodular(a, b, c, d, tol)
    m = np.array(
        [
            [a * a, SQRT2 * a * b, -b * b],
            [SQRT2 * a * c, a * d + b * c, -SQRT2 * b * d],
            [-c * c, -SQRT2 * c * d, d * d],
        ],
        dtype=complex,
    )
    return validate_su21(m, tol)


def corpus_so21(kind: str, tol: Tolerances | None = None, **params: float) -> Su21Element:
    """Real elements of SO(2,1).

    Kinds:
        hyperbolic(lam): diag(lam, 1, 1/lam), lam > 1
        rotation(theta): elliptic, rotation angle theta about the center
        parabolic(x): unipotent, image of [[1, x], [0, 1]]
        sl2(a, b, c, d): image of any unimodular real 2x2 matrix
    """
    tol = tol or default_tolerances()
    try:
        if kind == "hyperbolic":
            lam = params["lam"]
            if not lam > 1:
                raise InvalidParameter("hyperbolic needs lam > 1", lam=lam)
            root = float(np.sqrt(lam))
            return sl2r_to_so21(root, 0.0, 0.0, 1 / root, tol)
        if kind == "rotation":
            half = params["theta"] / 2
            return sl2r_to_so21(np.cos(half), -np.sin(half), np.sin(half), np.cos(half), tol)
        if kind == "parabolic":
            return sl2r_to_so21(1.0, params["x"], 0.0, 1.0, tol)
        if kind == "sl2":
            return sl2r_to_so21(params["a"], params["b"], params["c"], params["d"], tol)
    except KeyError as e:
        raise InvalidParameter(f"missing parameter {e.args[0]!r} for kind {kind!r}") from e
    raise InvalidParameter(f"unknown SO(2,1) kind {kind!r}")


def corpus_su11(block: Any, tol: Tolerances | None = None) -> Su21Element:
    """Put a 2x2 block on the (e1, e3) coordinates, with 1/det(block) in the middle.

    The block must preserve z1 conj(w3) + z3 conj(w1); the result fixes the
    complex line of e2.
    """
    tol = tol or default_tolerances()
    u = np.asarray(block, dtype=complex)
    if u.shape != (2, 2):
        raise InvalidParameter(f"expected a 2x2 block, got shape {u.shape}")
    det = complex(np.linalg.det(u))
    if abs(abs(det) - 1) > tol.eps_form:
        raise InvalidParameter("block determinant must have modulus 1", det=abs(det))
    m = np.array(
        [[u[0, 0], 0, u[0, 1]], [0, 1 / det, 0], [u[1, 0], 0, u[1, 1]]],
        dtype=complex,
    )
    return validate_su21(m, tol)


def loxodromic_diagonal(lam: float, phi: float) -> np.ndarray:
    unit = np.exp(1j * phi)
    return np.diag([lam * unit, np.exp(-2j * phi), unit / lam])


def hide(
    generators: Sequence[Any],
    seed: int | np.random.Generator | None = 0,
    tol: Tolerances | None = None,
) -> tuple[list[np.ndarray], Su21Element]:
    """Conjugate every generator by one random element S; return them with S."""
    tol = tol or default_tolerances()
    s = random_su21(seed, tol=tol)
    return [conjugate(s, g).matrix.copy() for g in generators], s


def random_loxodromic(
    seed: int | np.random.Generator | None = 0,
    lam_range: tuple[float, float] = (1.1, 10.0),
    tol: Tolerances | None = None,
) -> tuple[Su21Element, float, float]:
    """Random conjugate of diag(lam e^{i phi}, e^{-2 i phi}, lam^{-1} e^{i phi}).

    Returns the element with its lam and phi, phi uniform in (-pi, pi].
    """
    tol = tol or default_tolerances()
    rng = np.random.default_rng(seed)
    lam = float(rng.uniform(*lam_range))
    phi = float(np.pi - rng.uniform(0.0, 2 * np.pi))
    s = random_su21(rng, tol=tol)
    return conjugate(s, loxodromic_diagonal(lam, phi)), lam, phi


@dataclass(frozen=True, eq=False)
class NamedCorpus:
    name: str
    description: str
    generators: list[np.ndarray]
    assumed_discrete: bool = False


def _single_lox(seed: int, tol: Tolerances) -> NamedCorpus:
    hidden, _ = hide([loxodromic_diagonal(2.0, np.pi / 5)], seed, tol)
    return NamedCorpus("single-lox", "one hidden loxodromic, lambda = 2, phi = pi/5", hidden)


def _sl2z(seed: int, tol: Tolerances) -> NamedCorpus:
    generators = [sl2r_embed(1, 1, 0, 1, tol).matrix, sl2r_embed(0, -1, 1, 0, tol).matrix]
    return NamedCorpus(
        "sl2z",
        "SL(2,Z) fixing e2: real trace field, C-Fuchsian",
        [g.copy() for g in generators],
        assumed_discrete=True,
    )


def _so21_hidden(seed: int, tol: Tolerances) -> NamedCorpus:
    real = [
        corpus_so21("sl2", tol, a=2, b=1, c=1, d=1).matrix,
        corpus_so21("parabolic", tol, x=1).matrix,
    ]
    hidden, _ = hide(real, seed, tol)
    return NamedCorpus(
        "so21-hidden",
        "symmetric square of SL(2,Z) generators, conjugated by a hidden element",
        hidden,
        assumed_discrete=True,
    )


def _su11(seed: int, tol: Tolerances) -> NamedCorpus:
    phase = np.exp(1j * np.pi / 7)
    generators = [
        corpus_su11([[2, 0], [0, 0.5]], tol).matrix,
        corpus_su11(phase * np.array([[1, -1j], [0, 1]]), tol).matrix,
    ]
    return NamedCorpus(
        "su11", "SU(1,1) blocks on (e1, e3) fixing the line of e2", [g.copy() for g in generators]
    )


def _screw(seed: int, tol: Tolerances) -> NamedCorpus:
    rng = np.random.default_rng(seed)
    other, _ = hide([loxodromic_diagonal(3.0, np.pi / 7)], rng, tol)
    return NamedCorpus(
        "screw",
        "loxodromic screw motion with a hidden second loxodromic (non-real traces)",
        [loxodromic_diagonal(2.0, np.pi / 5), *other],
    )


def _random_irreducible(seed: int, tol: Tolerances) -> NamedCorpus:
    rng = np.random.default_rng(seed)
    generators = [random_su21(rng, tol=tol).matrix.copy() for _ in range(3)]
    return NamedCorpus("random-irreducible", "three random elements of SU(2,1)", generators)


CORPORA: dict[str, Callable[[int, Tolerances], NamedCorpus]] = {
    "single-lox": _single_lox,
    "sl2z": _sl2z,
    "so21-hidden": _so21_hidden,
    "su11": _su11,
    "screw": _screw,
    "random-irreducible": _random_irreducible,
}


def build_corpus(name: str, seed: int = 0, tol: Tolerances | None = None) -> NamedCorpus:
    tol = tol or default_tolerances()
    try:
        builder = CORPORA[name]
    except KeyError as e:
        raise InvalidParameter(
            f"unknown corpus {name!r}", available=sorted(CORPORA)
        ) from e
    corpus = builder(seed, tol)
    for g in corpus.generators:
        validate_su21(as_matrix(g), tol)
    logger.debug(f"Built corpus {name} with {len(corpus.generators)} generators")
    return corpus
