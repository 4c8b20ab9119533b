"""
Structural tests on finitely generated subgroups of SU(2,1).

Irreducibility is decided through common eigenvectors: an invariant complex
line is a common eigenline, and an invariant complex plane has an invariant
polar point, which is again a common eigenline. Loxodromic elements are
searched among short words first and then produced from a parabolic B and a
transversal C as B^n C.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from .classification import (
    ElementType,
    classify_element,
    eigenvalue_clusters,
    loxodromic_data,
    matrix_scale,
    null_space,
    parabolic_normal_form,
)
from .config import Tolerances, default_tolerances, settings
from .errors import BoundaryCase, NoLoxodromicFound, TraceFieldError
from .hermitian import (
    CUBE_ROOTS_OF_UNITY,
    FORM_MATRIX,
    GroupSpec,
    Su21Element,
    VectorType,
    as_matrix,
    canonical_phase,
    chordal_distance,
    power,
    trace,
    vector_type,
)
from .words import WordSample, WordSampler, display_word

logger = logging.getLogger(__name__)

# parabolic words and transversal candidates tried by the boost phase
MAX_BOOST_CANDIDATES = 8
# loxodromic words compared pairwise by the elementary screen
MAX_SCREEN_WORDS = 32


@dataclass(frozen=True, eq=False)
class IrreducibilityReport:
    irreducible: bool
    witness: np.ndarray | None = None
    witness_type: VectorType | None = None
    dual_witness: np.ndarray | None = None
    dual_witness_type: VectorType | None = None


@dataclass(frozen=True, eq=False)
class LoxodromicSearch:
    """A loxodromic word and how it was found.

    For boosted results ``word`` is ``base_word^power transversal_word``.
    """

    word: str
    element: Su21Element
    searched: int
    base_word: str | None = None
    transversal_word: str | None = None
    power: int | None = None

    @property
    def boosted(self) -> bool:
        return self.power is not None


def _eigenspaces(m: np.ndarray, tol: Tolerances) -> list[np.ndarray]:
    eta = float(np.sqrt(tol.eps_solve)) * matrix_scale(m)
    spaces = []
    for cluster in eigenvalue_clusters(m, tol):
        basis = null_space(m - cluster.value * np.eye(3), eta)
        if basis.shape[1]:
            spaces.append(basis)
    return spaces


def _intersect(u: np.ndarray, v: np.ndarray, threshold: float) -> np.ndarray:
    """Orthonormal basis of span(u) n span(v) for orthonormal u, v."""
    _, s, vh = np.linalg.svd(np.hstack([u, -v]))
    padded = np.concatenate([s, np.zeros(vh.shape[0] - s.size)])
    coefficients = vh[padded <= threshold].conj().T
    if not coefficients.size:
        return np.zeros((3, 0), dtype=complex)
    vectors = u @ coefficients[: u.shape[1]]
    q, r = np.linalg.qr(vectors)
    keep = np.abs(np.diag(r)) > threshold
    return q[:, keep]


def common_eigenvectors(matrices: Sequence[Any], tol: Tolerances | None = None) -> list[np.ndarray]:
    """Common eigenvectors of all matrices, one per surviving joint eigenspace."""
    tol = tol or default_tolerances()
    threshold = float(np.sqrt(tol.eps_solve))
    candidates = [np.eye(3, dtype=complex)]
    for m in matrices:
        spaces = _eigenspaces(as_matrix(m), tol)
        candidates = [
            joint
            for current in candidates
            for space in spaces
            if (joint := _intersect(current, space, threshold)).shape[1]
        ]
        if not candidates:
            return []
    return [canonical_phase(c[:, 0]) for c in candidates]


def irreducibility(spec: GroupSpec, tol: Tolerances | None = None) -> IrreducibilityReport:
    """Look for an invariant complex line, directly and through the polar of an invariant plane."""
    tol = tol or default_tolerances()
    direct = common_eigenvectors(spec.matrices, tol)
    # a common eigenvector u of the transposes annihilates an invariant plane,
    # whose polar point is J conj(u)
    transposed = common_eigenvectors([m.T for m in spec.matrices], tol)
    dual = [canonical_phase(FORM_MATRIX @ u.conj()) for u in transposed]

    witness = direct[0] if direct else None
    dual_witness = dual[0] if dual else None
    report = IrreducibilityReport(
        irreducible=witness is None and dual_witness is None,
        witness=witness,
        witness_type=vector_type(witness, tol) if witness is not None else None,
        dual_witness=dual_witness,
        dual_witness_type=vector_type(dual_witness, tol) if dual_witness is not None else None,
    )
    logger.info(
        f"Irreducibility check over {len(spec.generators)} generators: {report.irreducible}"
    )
    return report


def _is_loxodromic(m: np.ndarray, tol: Tolerances) -> bool:
    try:
        return classify_element(m, tol).tag is ElementType.LOXODROMIC
    except BoundaryCase:
        return False


def boost_loxodromic(
    base: Any,
    transversal: Any,
    tol: Tolerances | None = None,
    n_max: int | None = None,
) -> tuple[int, np.ndarray] | None:
    """Least n (doubling, then bisection) with |tr(B^n C)| > 3, or None up to n_max.

    For a parabolic B and a C not fixing the fixed point of B, |tr(B^n C)| grows
    at least linearly in n (quadratically for unipotent B with a size-3 Jordan
    block), so the search is logarithmic in the answer.
    """
    tol = tol or default_tolerances()
    n_max = n_max or settings.BOOST_MAX_POWER
    b = as_matrix(base)
    c = as_matrix(transversal)
    bound = 3 + tol.eps_class

    def escapes(n: int) -> bool:
        return abs(trace(power(b, n) @ c)) > bound

    n = 1
    while n <= n_max and not escapes(n):
        n *= 2
    if n > n_max:
        return None

    low, high = n // 2, n
    while high - low > 1:
        middle = (low + high) // 2
        if escapes(middle):
            high = middle
        else:
            low = middle
    for candidate in range(high, min(2 * high, n_max) + 1):
        product = power(b, candidate) @ c
        if _is_loxodromic(product, tol):
            return candidate, product
    return None


def _parabolic_fixed_point(m: np.ndarray, tol: Tolerances) -> np.ndarray | None:
    try:
        return parabolic_normal_form(m, tol).fixed_point
    except TraceFieldError as e:
        logger.debug(f"No usable parabolic normal form: {e}")
        return None


def find_loxodromic(
    spec: GroupSpec, sampler: WordSampler | None = None, tol: Tolerances | None = None
) -> LoxodromicSearch:
    """First loxodromic word, falling back to boosted products B^n C.

    Raises:
        NoLoxodromicFound: neither phase produced a loxodromic element
    """
    tol = tol or default_tolerances()
    sampler = (sampler or WordSampler(tol=tol)).bind(spec.matrices)
    searched = 0
    parabolics: list[WordSample] = []
    visited: list[WordSample] = []

    for sample in sampler.samples():
        searched += 1
        try:
            verdict = classify_element(sample.matrix, tol)
        except BoundaryCase as e:
            logger.debug(f"Skipping boundary word {display_word(sample.word)}: {e}")
            continue
        if verdict.tag is ElementType.LOXODROMIC:
            logger.info(f"Loxodromic word {display_word(sample.word)} after {searched} words")
            return LoxodromicSearch(
                word=sample.word, element=Su21Element(matrix=sample.matrix), searched=searched
            )
        if verdict.tag.is_parabolic and len(parabolics) < MAX_BOOST_CANDIDATES:
            parabolics.append(sample)
        visited.append(sample)

    for base in parabolics:
        fixed = _parabolic_fixed_point(base.matrix, tol)
        if fixed is None:
            continue
        transversals = [
            s for s in visited if chordal_distance(s.matrix @ fixed, fixed) > tol.eps_class
        ][:MAX_BOOST_CANDIDATES]
        for transversal in transversals:
            searched += 1
            found = boost_loxodromic(base.matrix, transversal.matrix, tol)
            if found is None:
                continue
            n, product = found
            word = base.word * n + transversal.word
            logger.info(
                f"Boosted loxodromic ({display_word(base.word)})^{n} "
                f"{display_word(transversal.word)}"
            )
            return LoxodromicSearch(
                word=word,
                element=Su21Element(matrix=product),
                searched=searched,
                base_word=base.word,
                transversal_word=transversal.word,
                power=n,
            )

    raise NoLoxodromicFound(
        "no loxodromic element among the sampled words or boosted products",
        searched=searched,
        max_length=sampler.max_length,
    )


def elementary_screen(
    spec: GroupSpec, sampler: WordSampler | None = None, tol: Tolerances | None = None
) -> bool:
    """Return False once two loxodromic words with disjoint fixed points are found.

    True only means "possibly elementary"; elementarity is never certified.
    """
    tol = tol or default_tolerances()
    sampler = (sampler or WordSampler(tol=tol)).bind(spec.matrices)
    endpoints: list[tuple[str, np.ndarray, np.ndarray]] = []
    for sample in sampler.samples():
        if len(endpoints) >= MAX_SCREEN_WORDS:
            break
        if not _is_loxodromic(sample.matrix, tol):
            continue
        try:
            data = loxodromic_data(sample.matrix, tol)
        except TraceFieldError:
            continue
        attracting, _, repelling = data.fixed_points
        for word, p, q in endpoints:
            distances = [
                chordal_distance(x, y) for x in (attracting, repelling) for y in (p, q)
            ]
            if min(distances) > tol.eps_class:
                logger.info(
                    f"Words {display_word(word)} and {display_word(sample.word)} "
                    "have disjoint axes: not elementary"
                )
                return False
        endpoints.append((sample.word, attracting, repelling))
    return True


def is_screw_motion(g: Any, tol: Tolerances | None = None) -> bool:
    """True iff no lift omega^k g has real trace.

    Raises:
        BoundaryCase: the smallest |Im| lies in [eps_field, 2 eps_field)
    """
    tol = tol or default_tolerances()
    tr = trace(g)
    smallest = min(abs((omega * tr).imag) for omega in CUBE_ROOTS_OF_UNITY)
    if smallest < tol.eps_field:
        return False
    if smallest < 2 * tol.eps_field:
        raise BoundaryCase("a lift has nearly real trace", imag=smallest)
    return True


def positive_common_fixed_point(report: IrreducibilityReport) -> np.ndarray | None:
    """The polar point of an invariant complex geodesic, when one is visible."""
    if report.witness_type is VectorType.POSITIVE:
        return report.witness
    if report.dual_witness_type is VectorType.POSITIVE:
        return report.dual_witness
    return None
