"""
Reconstruction of group elements from trace data.

With A = diag(lambda1, lambda2, lambda3) loxodromic and B arbitrary, three
small linear systems recover, from traces alone,

    the diagonal      b11, b22, b33             (traces of B, AB, A^{-1}B)
    the products      b12 b21, b13 b31, b23 b32 (diagonals of BAB)
    the mixed terms   b12 conj(b32), b13 conj(b31), b23 conj(b21)
                                                (diagonals of BAB^{-1}, B^{-1}AB)

After a diagonal conjugation setting b12 = 1 (or b32 = 1) the remaining
entries of B follow from these ledgers and the orthogonality relations of
SU(2,1). Arbitrary generators are then written in a basis of nine words of
M(3, C) through the trace form (X, Y) = tr(XY).
"""

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field, replace
from enum import Enum
from itertools import chain
from typing import Any

import numpy as np
from scipy.linalg import lu_factor, lu_solve, qr

from .classification import (
    LoxodromicData,
    diagonalizing_conjugator,
    loxodromic_data,
    matrix_scale,
)
from .config import Tolerances, default_tolerances
from .detectors import LoxodromicSearch, find_loxodromic, irreducibility
from .errors import (
    BasisNotFound,
    FrameDegenerate,
    IllConditioned,
    InvalidParameter,
    NoLoxodromicFound,
    Reducible,
    TraceFieldNotReal,
    TraceFieldError,
)
from .hermitian import (
    FORM_MATRIX,
    IDENTITY,
    GroupSpec,
    Su21Element,
    as_matrix,
    chordal_distance,
    trace,
)
from .trace_field import PhaseRecovery, recover_phase, sample_traces
from .words import (
    IDENTITY_WORD,
    WordSample,
    WordSampler,
    display_word,
    evaluate_word,
    free_reduce,
    inverse_word,
    substitute,
)

logger = logging.getLogger(__name__)

BASIS_SIZE = 9
# conjugates W A W^{-1} examined when looking for a pair without common fixed points
MAX_CONJUGATES = 64
# pairs tried per word length before giving up on a realization
MAX_PAIR_ATTEMPTS = 8
# extra word length granted to the basis search when every pair fell short
MAX_EXTRA_LENGTH = 2


class CertificateKind(str, Enum):
    FIELD_REALIZATION = "FieldRealization"
    REAL_FORM = "RealForm"


@dataclass(frozen=True, eq=False)
class Certificate:
    """Conjugator, transformed generators and the residual that backs them.

    ``residual`` is the largest reconstruction mismatch for FieldRealization
    certificates and the largest |Im| of a transformed entry for RealForm ones.
    """

    kind: CertificateKind
    conjugator: Su21Element
    transformed_generators: list[np.ndarray]
    residual: float
    basis_words: tuple[str, ...] | None = None
    reconstructed: list[np.ndarray] | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def conjugation_residual(self, generators: Sequence[Any]) -> float:
        """max |f g f^{-1} - transformed| over the given generators."""
        f = self.conjugator
        return max(
            float(np.max(np.abs(f.matrix @ as_matrix(g) @ f.inverse.matrix - t)))
            for g, t in zip(generators, self.transformed_generators)
        )


@dataclass(frozen=True)
class DiagonalLoxodromic:
    lam: float
    phi: float

    def __post_init__(self) -> None:
        if not self.lam > 1:
            raise InvalidParameter("a diagonal loxodromic needs lambda > 1", lam=self.lam)

    @classmethod
    def from_data(cls, data: LoxodromicData) -> "DiagonalLoxodromic":
        return cls(lam=data.lam, phi=data.phi)

    @classmethod
    def from_phase(cls, phase: PhaseRecovery) -> "DiagonalLoxodromic":
        return cls(lam=phase.lam, phi=phase.phi)

    @property
    def eigenvalues(self) -> np.ndarray:
        unit = np.exp(1j * self.phi)
        return np.array([self.lam * unit, np.exp(-2j * self.phi), unit / self.lam])

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.eigenvalues)

    @property
    def inverse_matrix(self) -> np.ndarray:
        return np.diag(1 / self.eigenvalues)


@dataclass(frozen=True)
class EntryLedger:
    """Entries and entry products of B recovered from traces.

    diagonal = (b11, b22, b33)
    products = (b12 b21, b13 b31, b23 b32)
    mixed    = (b12 conj(b32), b13 conj(b31), b23 conj(b21))
    """

    diagonal: tuple[complex, complex, complex]
    products: tuple[complex, complex, complex]
    mixed: tuple[complex, complex, complex]

    @classmethod
    def direct(cls, b: Any) -> "EntryLedger":
        """Ledger read straight off the entries of a matrix."""
        m = as_matrix(b)
        return cls(
            diagonal=(m[0, 0], m[1, 1], m[2, 2]),
            products=(m[0, 1] * m[1, 0], m[0, 2] * m[2, 0], m[1, 2] * m[2, 1]),
            mixed=(
                m[0, 1] * np.conj(m[2, 1]),
                m[0, 2] * np.conj(m[2, 0]),
                m[1, 2] * np.conj(m[1, 0]),
            ),
        )

    def swapped(self) -> "EntryLedger":
        """Ledger of J B J, the index reversal i -> 4 - i."""
        b11, b22, b33 = self.diagonal
        p12, p13, p23 = self.products
        m12, m13, m23 = self.mixed
        return EntryLedger(
            diagonal=(b33, b22, b11),
            products=(p23, p13, p12),
            mixed=(np.conj(m12), np.conj(m13), np.conj(m23)),
        )

    def max_difference(self, other: "EntryLedger") -> float:
        ours = np.array([*self.diagonal, *self.products, *self.mixed])
        theirs = np.array([*other.diagonal, *other.products, *other.mixed])
        return float(np.max(np.abs(ours - theirs)))


def _solve_checked(
    system: np.ndarray, rhs: np.ndarray, tol: Tolerances, name: str
) -> np.ndarray:
    condition = float(np.linalg.cond(system))
    if not np.isfinite(condition) or condition > 1 / tol.eps_solve:
        raise IllConditioned(f"{name} system is singular to working precision", condition=condition)
    return lu_solve(lu_factor(system), rhs)


def diagonal_system(a: DiagonalLoxodromic) -> np.ndarray:
    ev = a.eigenvalues
    return np.array([np.ones(3), ev, 1 / ev])


def diagonal_system_det(lam: float, phi: float) -> float:
    """(lambda^-2 - lambda^2) + 2 (lambda - lambda^-1) cos(3 phi)."""
    return (lam**-2 - lam**2) + 2 * (lam - 1 / lam) * float(np.cos(3 * phi))


def product_system(a: DiagonalLoxodromic) -> np.ndarray:
    l1, l2, l3 = a.eigenvalues
    return np.array([[l2, l3, 0], [l1, 0, l3], [0, l1, l2]])


def product_system_det(a: DiagonalLoxodromic) -> complex:
    """-2 lambda1 lambda2 lambda3 = -2 det A."""
    return complex(-2 * np.prod(a.eigenvalues))


def mixed_system(a: DiagonalLoxodromic) -> np.ndarray:
    l1, l2, l3 = a.eigenvalues
    c1, c2, c3 = np.conj(a.eigenvalues)
    return np.array([[l2, l3, 0], [c2, c1, 0], [0, c3, c2]])


def mixed_system_det(lam: float, phi: float) -> complex:
    """e^{2 i phi} (lambda e^{-3 i phi} - lambda^{-1} e^{3 i phi})."""
    return complex(np.exp(2j * phi) * (lam * np.exp(-3j * phi) - np.exp(3j * phi) / lam))


def recover_diagonal(
    a: DiagonalLoxodromic,
    t1: complex,
    t2: complex,
    t3: complex,
    tol: Tolerances | None = None,
) -> tuple[complex, complex, complex]:
    """Solve for (b11, b22, b33) from tr B, tr AB and tr A^{-1}B.

    Raises:
        IllConditioned: |det L| < eps_solve |L| or L is numerically singular
    """
    tol = tol or default_tolerances()
    system = diagonal_system(a)
    det = abs(np.linalg.det(system))
    if det < tol.eps_solve * np.linalg.norm(system, 2):
        raise IllConditioned("diagonal system is degenerate (near-parabolic A)", det=float(det))
    solution = _solve_checked(system, np.array([t1, t2, t3], dtype=complex), tol, "diagonal")
    return complex(solution[0]), complex(solution[1]), complex(solution[2])


def _anti_inverse(m: np.ndarray) -> np.ndarray:
    return FORM_MATRIX @ m.conj().T @ FORM_MATRIX


def _frame_a(a: DiagonalLoxodromic, a_matrix: Any | None) -> np.ndarray:
    return a.matrix if a_matrix is None else as_matrix(a_matrix)


def diagonal_of(
    a: DiagonalLoxodromic, b: Any, tol: Tolerances | None = None, a_matrix: Any | None = None
) -> tuple[complex, complex, complex]:
    """Diagonal of B in the eigenframe of A, computed from three traces.

    ``a_matrix`` is A written in the same frame as B; traces do not see the frame.
    """
    m = as_matrix(b)
    a_m = _frame_a(a, a_matrix)
    return recover_diagonal(a, trace(m), trace(a_m @ m), trace(_anti_inverse(a_m) @ m), tol)


def recover_products(
    a: DiagonalLoxodromic, b: Any, tol: Tolerances | None = None, a_matrix: Any | None = None
) -> tuple[complex, complex, complex]:
    """(b12 b21, b13 b31, b23 b32) from the diagonals of B and BAB.

    c_ii = lambda_i b_ii^2 + sum over k != i of lambda_k b_ik b_ki
    """
    tol = tol or default_tolerances()
    m = as_matrix(b)
    a_m = _frame_a(a, a_matrix)
    ev = a.eigenvalues
    b_diag = np.array(diagonal_of(a, m, tol, a_m))
    c_diag = np.array(diagonal_of(a, m @ a_m @ m, tol, a_m))
    rhs = c_diag - ev * b_diag**2
    solution = _solve_checked(product_system(a), rhs, tol, "product")
    return complex(solution[0]), complex(solution[1]), complex(solution[2])


def recover_mixed(
    a: DiagonalLoxodromic, b: Any, tol: Tolerances | None = None, a_matrix: Any | None = None
) -> tuple[complex, complex, complex]:
    """(b12 conj(b32), b13 conj(b31), b23 conj(b21)).

    Uses c11 and conj(c33) of C = BAB^{-1} and conj(d11) of D = B^{-1}AB.
    """
    tol = tol or default_tolerances()
    m = as_matrix(b)
    m_inv = _anti_inverse(m)
    a_m = _frame_a(a, a_matrix)
    l1, _, l3 = a.eigenvalues
    b11, _, b33 = diagonal_of(a, m, tol, a_m)
    c11, _, c33 = diagonal_of(a, m @ a_m @ m_inv, tol, a_m)
    d11, _, _ = diagonal_of(a, m_inv @ a_m @ m, tol, a_m)
    outer = b11 * np.conj(b33)
    rhs = np.array(
        [
            c11 - l1 * outer,
            np.conj(c33) - np.conj(l3) * outer,
            np.conj(d11) - np.conj(l1) * np.conj(outer),
        ]
    )
    solution = _solve_checked(mixed_system(a), rhs, tol, "mixed")
    return complex(solution[0]), complex(solution[1]), complex(solution[2])


def entry_ledger(
    a: DiagonalLoxodromic, b: Any, tol: Tolerances | None = None, a_matrix: Any | None = None
) -> EntryLedger:
    tol = tol or default_tolerances()
    return EntryLedger(
        diagonal=diagonal_of(a, b, tol, a_matrix),
        products=recover_products(a, b, tol, a_matrix),
        mixed=recover_mixed(a, b, tol, a_matrix),
    )


def _best_quotient(options: list[tuple[complex, complex]], threshold: float, entry: str) -> complex:
    numerator, divisor = max(options, key=lambda option: abs(option[1]))
    if abs(divisor) <= threshold:
        raise Reducible(f"{entry} is not determined: every divisor vanishes")
    return complex(numerator / divisor)


def reconstruct_from_ledger(ledger: EntryLedger, threshold: float) -> np.ndarray:
    """Rebuild B normalized to b12 = 1 from its ledger.

    b31 comes from column orthogonality; b23 and b13 each have three
    expressions and the one with the largest divisor is used.
    """
    b11, b22, b33 = ledger.diagonal
    p12, p13, p23 = ledger.products
    m12, _, m23 = ledger.mixed
    conj = np.conj

    b12 = 1.0 + 0j
    b21 = p12
    b32 = conj(m12)
    b31 = -(b21 * conj(b22) + b11 * conj(b32))
    b23 = _best_quotient(
        [
            (p23, b32),
            (m23, conj(b21)),
            (-(b21 * conj(b33) + b22 * conj(b32)), conj(b31)),
        ],
        threshold,
        "b23",
    )
    b13 = _best_quotient(
        [
            (p13, b31),
            (-(b11 * conj(b23) + conj(b22)), conj(b21)),
            (-(b33 + conj(b22) * b23), conj(b32)),
        ],
        threshold,
        "b13",
    )
    return np.array([[b11, b12, b13], [b21, b22, b23], [b31, b32, b33]], dtype=complex)


def _third_of_argument(b: complex) -> float:
    """alpha in (-pi/3, pi/3] with e^{3 i alpha} b real positive."""
    angle = float(np.angle(b))
    if angle >= np.pi:
        angle = -np.pi
    return -angle / 3


def normalize_pair(A: Any, B: Any, tol: Tolerances | None = None) -> Certificate:
    """Conjugate A to diagonal form and B to b12 = 1 (or b32 = 1), then rebuild both from traces.

    The reconstructed pair uses only tr A, lambda and traces of words in A, B.
    The residual compares it with the actually conjugated pair.

    Raises:
        Reducible: b12 and b32 both vanish in the eigenframe of A
        IllConditioned: A is near-parabolic or the reconstruction misses
    """
    tol = tol or default_tolerances()
    a_m = as_matrix(A)
    b_m = as_matrix(B)
    scale = max(matrix_scale(a_m), matrix_scale(b_m))

    data = loxodromic_data(a_m, tol)
    if data.lam < 1 + 10 * tol.eps_class:
        raise IllConditioned("loxodromic element is too close to parabolic", lam=data.lam)
    diagonalizer = diagonalizing_conjugator(a_m, data, tol)
    b_diag_frame = diagonalizer.matrix @ b_m @ diagonalizer.inverse.matrix

    phase = recover_phase(trace(a_m), data.lam, tol)
    diagonal = DiagonalLoxodromic.from_phase(phase)
    ledger = entry_ledger(diagonal, b_m, tol, a_matrix=a_m)

    b12 = complex(b_diag_frame[0, 1])
    b32 = complex(b_diag_frame[2, 1])
    threshold = tol.eps_class * scale
    if max(abs(b12), abs(b32)) < threshold:
        raise Reducible(
            "b12 and b32 vanish: the polar eigenvector of A is invariant",
            b12=abs(b12),
            b32=abs(b32),
        )

    if abs(b12) >= abs(b32):
        branch, rho, alpha = "b12", 1 / abs(b12), _third_of_argument(b12)
        rebuilt_b = reconstruct_from_ledger(ledger, threshold)
    else:
        branch, rho, alpha = "b32", abs(b32), _third_of_argument(b32)
        swapped = reconstruct_from_ledger(ledger.swapped(), threshold)
        rebuilt_b = FORM_MATRIX @ swapped @ FORM_MATRIX

    x = np.diag([rho * np.exp(1j * alpha), np.exp(-2j * alpha), np.exp(1j * alpha) / rho])
    conjugator = Su21Element(matrix=x @ diagonalizer.matrix)
    transformed = [
        conjugator.matrix @ m @ conjugator.inverse.matrix for m in (a_m, b_m)
    ]
    rebuilt = [diagonal.matrix, rebuilt_b]
    residual = max(float(np.max(np.abs(r - t))) for r, t in zip(rebuilt, transformed))
    logger.debug(f"Pair normalization via {branch}: residual {residual:.3e}")
    if residual > tol.eps_cert * scale:
        raise IllConditioned(
            "pair reconstruction does not match the conjugated pair",
            residual=residual,
            branch=branch,
        )
    return Certificate(
        kind=CertificateKind.FIELD_REALIZATION,
        conjugator=conjugator,
        transformed_generators=transformed,
        residual=residual,
        reconstructed=rebuilt,
        details={"branch": branch, "lam": data.lam, "phi": phase.phi, "rho": rho, "alpha": alpha},
    )


@dataclass(frozen=True, eq=False)
class BurnsideBasis:
    """Nine words spanning M(3, C) and their trace-form Gram matrix."""

    words: tuple[str, ...]
    matrices: tuple[np.ndarray, ...]
    gram: np.ndarray
    searched: int = 0

    def reconstruct(
        self, coefficients: np.ndarray, matrices: Sequence[np.ndarray] | None = None
    ) -> np.ndarray:
        terms = self.matrices if matrices is None else matrices
        return sum((c * m for c, m in zip(coefficients, terms)), np.zeros((3, 3), dtype=complex))


def trace_form_gram(matrices: Sequence[np.ndarray]) -> np.ndarray:
    return np.array([[np.trace(x @ y) for y in matrices] for x in matrices])


def _span_rank(vectors: list[np.ndarray], threshold: float) -> int:
    _, r, _ = qr(np.column_stack(vectors), mode="economic", pivoting=True)
    diagonal = np.abs(np.diag(r))
    if not diagonal.size or diagonal[0] == 0:
        return 0
    return int(np.sum(diagonal > threshold * diagonal[0]))


def burnside_basis(sampler: WordSampler, tol: Tolerances | None = None) -> BurnsideBasis:
    """Greedy scan (identity first, then words in enumeration order) for a basis of M(3, C).

    A word is kept when it enlarges the span of the kept matrices, measured by
    pivoted QR of the normalized, flattened matrices.

    Raises:
        BasisNotFound: enumeration ended below rank 9
        IllConditioned: the trace form of the basis is singular
    """
    tol = tol or default_tolerances()
    threshold = float(np.sqrt(tol.eps_solve))
    words: list[str] = []
    matrices: list[np.ndarray] = []
    vectors: list[np.ndarray] = []
    searched = 0
    candidates = chain([WordSample(IDENTITY_WORD, IDENTITY.copy())], sampler.words())
    for sample in candidates:
        searched += 1
        flat = sample.matrix.reshape(-1)
        flat = flat / np.linalg.norm(flat)
        if _span_rank([*vectors, flat], threshold) > len(vectors):
            words.append(sample.word)
            matrices.append(sample.matrix)
            vectors.append(flat)
            if len(words) == BASIS_SIZE:
                break
    else:
        raise BasisNotFound(
            "word enumeration ended before nine independent words were found",
            rank=len(words),
            searched=searched,
            max_length=sampler.max_length,
        )

    gram = trace_form_gram(matrices)
    det = abs(np.linalg.det(gram))
    if det <= tol.eps_solve:
        raise IllConditioned("trace form of the basis is singular", det=float(det))
    logger.debug(f"Burnside basis {[display_word(w) for w in words]} after {searched} words")
    return BurnsideBasis(
        words=tuple(words), matrices=tuple(matrices), gram=gram, searched=searched
    )


def trace_form_decompose(
    gamma: Any,
    basis: BurnsideBasis,
    tol: Tolerances | None = None,
    frame_matrices: Sequence[np.ndarray] | None = None,
) -> np.ndarray:
    """Coefficients c with sum c_i S_i = gamma, from (gamma, S_i) = sum_j c_j (S_j, S_i).

    ``frame_matrices`` are the basis words written in the frame of ``gamma``;
    only traces of products are taken from them.
    """
    tol = tol or default_tolerances()
    g = as_matrix(gamma)
    terms = basis.matrices if frame_matrices is None else frame_matrices
    rhs = np.array([np.trace(g @ s) for s in terms])
    return _solve_checked(basis.gram.T, rhs, tol, "trace form")


def _separated(first: Sequence[np.ndarray], second: Sequence[np.ndarray], tol: Tolerances) -> bool:
    return all(chordal_distance(p, q) > tol.eps_class for p in first for q in second)


def _commutes(a: np.ndarray, c: np.ndarray, tol: Tolerances) -> bool:
    scale = matrix_scale(a) * matrix_scale(c)
    return float(np.max(np.abs(a @ c - c @ a))) <= tol.eps_class * scale


def _pair_candidates(
    search: LoxodromicSearch, sampler: WordSampler, tol: Tolerances
) -> Iterator[tuple[str, np.ndarray, str, np.ndarray]]:
    """Pairs of conjugates of A without a common fixed point in P(V).

    Candidates are A and W A W^{-1} for words W in enumeration order. Each new
    conjugate is paired with every earlier candidate whose fixed points it
    avoids, oldest first. Fixed points of a conjugate come from its own
    eigenframe, not from pushing those of A through W.
    """
    a = search.element.matrix
    points = loxodromic_data(a, tol).fixed_points
    candidates: list[tuple[str, np.ndarray, tuple[np.ndarray, ...]]] = [(search.word, a, points)]
    examined = 0
    for sample in sampler.words():
        if examined >= MAX_CONJUGATES:
            break
        examined += 1
        w = sample.matrix
        conjugate = w @ a @ _anti_inverse(w)
        if _commutes(a, conjugate, tol):
            continue
        try:
            conjugate_points = loxodromic_data(conjugate, tol).fixed_points
        except TraceFieldError as e:
            logger.debug(f"Skipping conjugate by {display_word(sample.word)}: {e}")
            continue
        word = free_reduce(sample.word + search.word + inverse_word(sample.word))
        for other_word, other, other_points in candidates:
            if _separated(other_points, conjugate_points, tol):
                yield other_word, other, word, conjugate
        candidates.append((word, conjugate, conjugate_points))
    logger.debug(f"Pair candidates exhausted after {examined} conjugates")


def _realize_with_pair(
    spec: GroupSpec,
    pair_words: tuple[str, str],
    first: np.ndarray,
    second: np.ndarray,
    sampler: WordSampler,
    tol: Tolerances,
    require_real: bool = False,
) -> Certificate:
    pair = normalize_pair(first, second, tol)
    assert pair.reconstructed is not None

    pair_sampler = replace(sampler, dedup=False).bind(pair.reconstructed)
    basis = burnside_basis(pair_sampler, tol)
    original_frame = [evaluate_word(w, [first, second]) for w in basis.words]

    f = pair.conjugator
    transformed = []
    rebuilt = []
    residual = 0.0
    for g in spec.matrices:
        coefficients = trace_form_decompose(g, basis, tol, frame_matrices=original_frame)
        rec = basis.reconstruct(coefficients)
        actual = f.matrix @ g @ f.inverse.matrix
        residual = max(residual, float(np.max(np.abs(rec - actual))))
        transformed.append(actual)
        rebuilt.append(rec)

    scale = max(matrix_scale(t) for t in transformed)
    if residual > tol.eps_cert * scale:
        raise IllConditioned("trace-form reconstruction misses the generators", residual=residual)
    if require_real:
        imaginary = max(float(np.max(np.abs(t.imag))) for t in transformed)
        if imaginary > tol.eps_field * scale:
            raise IllConditioned("conjugated generators are not real", max_imag=imaginary)

    first_word, second_word = pair_words
    basis_words = tuple(substitute(w, {"a": first_word, "b": second_word}) for w in basis.words)
    return Certificate(
        kind=CertificateKind.FIELD_REALIZATION,
        conjugator=f,
        transformed_generators=transformed,
        residual=residual,
        basis_words=basis_words,
        reconstructed=rebuilt,
        details={
            "pair_words": [first_word, second_word],
            "pair_branch": pair.details["branch"],
            "lam": pair.details["lam"],
            "pair_residual": pair.residual,
        },
    )


def realize_over_trace_field(
    spec: GroupSpec, tol: Tolerances | None = None, sampler: WordSampler | None = None
) -> Certificate:
    """Conjugate an irreducible group so that every generator is rebuilt from trace data.

    Finds a loxodromic A, picks conjugates A1, A2 of A with no common fixed
    point, normalizes the pair, and decomposes every generator over a Burnside
    basis of words in A1, A2 using traces only. A pair that turns out
    degenerate or badly conditioned is replaced by the next candidate; once
    MAX_PAIR_ATTEMPTS pairs fail the basis search is repeated with longer words.

    Raises:
        Reducible: the group has an invariant complex line
        NoLoxodromicFound: the word searches were exhausted
        BasisNotFound: no pair produced nine independent words
        IllConditioned: a solve or the final reconstruction misses its tolerance
    """
    return _realize(spec, tol or default_tolerances(), sampler)


def _realize(
    spec: GroupSpec,
    tol: Tolerances,
    sampler: WordSampler | None,
    require_real: bool = False,
) -> Certificate:
    sampler = (sampler or WordSampler(tol=tol)).bind(spec.matrices)

    report = irreducibility(spec, tol)
    if not report.irreducible:
        witness = report.witness if report.witness is not None else report.dual_witness
        raise Reducible(
            "group has a common invariant complex line",
            witness=None if witness is None else [[float(z.real), float(z.imag)] for z in witness],
        )

    search = find_loxodromic(spec, sampler, tol)
    failure: TraceFieldError | None = None
    attempts = 0
    for extra_length in range(MAX_EXTRA_LENGTH + 1):
        pair_sampler = sampler.with_max_length(sampler.max_length + extra_length)
        basis_short = False
        tried = 0
        for first_word, first, second_word, second in _pair_candidates(
            search, pair_sampler, tol
        ):
            if tried >= MAX_PAIR_ATTEMPTS:
                break
            tried += 1
            attempts += 1
            try:
                certificate = _realize_with_pair(
                    spec,
                    (first_word, second_word),
                    first,
                    second,
                    pair_sampler,
                    tol,
                    require_real=require_real,
                )
            except (Reducible, IllConditioned, BasisNotFound, FrameDegenerate) as e:
                basis_short = basis_short or isinstance(e, BasisNotFound)
                logger.debug(
                    f"Pair {display_word(first_word)}, {display_word(second_word)} "
                    f"rejected: {e}"
                )
                failure = e
                continue
            logger.info(
                f"Realized {len(spec.generators)} generators over the trace field "
                f"after {attempts} pair(s), residual {certificate.residual:.3e}"
            )
            return replace(
                certificate,
                details={"loxodromic_word": search.word, **certificate.details},
            )
        if not basis_short:
            break

    if failure is None:
        raise NoLoxodromicFound(
            "no two conjugates of the loxodromic word without a common fixed point",
            loxodromic_word=search.word,
        )
    failure.details["pair_attempts"] = attempts
    raise failure


def conjugate_into_so21(
    spec: GroupSpec, tol: Tolerances | None = None, sampler: WordSampler | None = None
) -> Certificate:
    """Conjugate a group with real sampled trace field into SO(2,1).

    The reconstruction is accepted within eps_cert; the imaginary parts of the
    conjugated generators must then stay below eps_field relative to their size.

    Raises:
        TraceFieldNotReal: sampled traces are not real
        Reducible, IllConditioned: as for realize_over_trace_field
    """
    tol = tol or default_tolerances()
    report = sample_traces(spec, sampler, tol)
    if not report.is_real:
        raise TraceFieldNotReal(
            "sampled trace field is not real",
            max_imag=report.max_imag,
            max_relative_imag=report.max_relative_imag,
        )
    realization = _realize(spec, tol, sampler, require_real=True)
    imaginary = max(float(np.max(np.abs(t.imag))) for t in realization.transformed_generators)
    return replace(
        realization,
        kind=CertificateKind.REAL_FORM,
        residual=imaginary,
        details={**realization.details, "realization_residual": realization.residual},
    )
