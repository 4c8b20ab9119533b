"""
Hermitian-form core for SU(2,1).

All vectors and matrices are written in the null basis e1, e2, e3 where the
Hermitian form of signature (2,1) reads

    <z, w> = z1 conj(w3) + z2 conj(w2) + z3 conj(w1)

i.e. <z, w> = z^T J conj(w) with J the anti-diagonal of ones. A matrix lies in
SU(2,1) iff its rows v1, v2, v3 satisfy <vi, vj> = J_ij and det = 1, which is
the same as A J A^H = J. The inverse is then the Hermitian anti-transpose
A^{-1} = J A^H J.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from .config import Tolerances, default_tolerances
from .errors import DegenerateSample, InvalidParameter, NotInGroup

logger = logging.getLogger(__name__)

FORM_MATRIX = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]], dtype=complex)
IDENTITY = np.eye(3, dtype=complex)
OMEGA = complex(np.exp(2j * np.pi / 3))
CUBE_ROOTS_OF_UNITY = (1 + 0j, OMEGA, OMEGA**2)

# at most this many redraws before random_su21 gives up
MAX_SAMPLE_ATTEMPTS = 32
_MIN_FRAME_NORM = 1e-3


class VectorType(str, Enum):
    ISOTROPIC = "isotropic"
    POSITIVE = "positive"
    NEGATIVE = "negative"


def as_matrix(m: Any) -> np.ndarray:
    """Coerce an element or array-like into a finite 3x3 complex array."""
    if isinstance(m, Su21Element):
        return m.matrix
    arr = np.asarray(m, dtype=complex)
    if arr.shape != (3, 3):
        raise InvalidParameter(f"expected a 3x3 matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameter("matrix has non-finite entries")
    return arr


def as_vector(v: Any) -> np.ndarray:
    arr = np.asarray(v, dtype=complex).reshape(-1)
    if arr.shape != (3,):
        raise InvalidParameter(f"expected a vector of length 3, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameter("vector has non-finite entries")
    return arr


def herm_inner(v: Any, w: Any) -> complex:
    """Return <v, w> = v1 conj(w3) + v2 conj(w2) + v3 conj(w1)."""
    v = np.asarray(v, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return complex(v[0] * np.conj(w[2]) + v[1] * np.conj(w[1]) + v[2] * np.conj(w[0]))


def gram(m: np.ndarray) -> np.ndarray:
    """Matrix of pairwise inner products of the rows, M J M^H."""
    return m @ FORM_MATRIX @ m.conj().T


def form_residuals(m: Any) -> np.ndarray:
    """Residuals of the six row conditions followed by |det - 1|."""
    arr = as_matrix(m)
    g = gram(arr)
    return np.array(
        [
            abs(g[0, 0]),
            abs(g[1, 1] - 1),
            abs(g[2, 2]),
            abs(g[0, 1]),
            abs(g[1, 2]),
            abs(g[0, 2] - 1),
            abs(np.linalg.det(arr) - 1),
        ]
    )


def form_residual(m: Any) -> float:
    return float(np.max(form_residuals(m)))


@dataclass(frozen=True, eq=False)
class Su21Element:
    """A 3x3 complex matrix together with its SU(2,1) membership witness."""

    matrix: np.ndarray
    residual: float = 0.0
    validated: bool = True

    def __post_init__(self) -> None:
        arr = np.array(self.matrix, dtype=complex)
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @property
    def inverse(self) -> "Su21Element":
        return anti_transpose_inverse(self)

    @property
    def trace(self) -> complex:
        return trace(self.matrix)

    def __matmul__(self, other: "Su21Element") -> "Su21Element":
        return mul(self, other)


@dataclass(frozen=True)
class GroupSpec:
    """Finitely generated subgroup of SU(2,1) given by validated generators."""

    generators: tuple[Su21Element, ...]
    assumed_discrete: bool = False
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.generators:
            raise InvalidParameter("a group needs at least one generator")
        if not self.labels:
            object.__setattr__(
                self, "labels", tuple(f"g{k}" for k in range(len(self.generators)))
            )

    @classmethod
    def from_matrices(
        cls,
        matrices: Sequence[Any],
        assumed_discrete: bool = False,
        tol: Tolerances | None = None,
    ) -> "GroupSpec":
        tol = tol or default_tolerances()
        generators = []
        for index, m in enumerate(matrices):
            try:
                generators.append(validate_su21(m, tol))
            except NotInGroup as e:
                e.details["generator"] = index
                raise
        return cls(generators=tuple(generators), assumed_discrete=assumed_discrete)

    @property
    def matrices(self) -> list[np.ndarray]:
        return [g.matrix for g in self.generators]

    def conjugated(self, s: "Su21Element") -> "GroupSpec":
        return GroupSpec(
            generators=tuple(conjugate(s, g) for g in self.generators),
            assumed_discrete=self.assumed_discrete,
            labels=self.labels,
        )


def validate_su21(m: Any, tol: Tolerances | None = None) -> Su21Element:
    """Check the six row conditions and det = 1 within eps_form.

    Raises:
        NotInGroup: the largest residual exceeds eps_form
    """
    tol = tol or default_tolerances()
    arr = as_matrix(m)
    residuals = form_residuals(arr)
    max_residual = float(np.max(residuals))
    if max_residual > tol.eps_form:
        raise NotInGroup(
            "matrix is not in SU(2,1)",
            max_residual=max_residual,
            residuals=[float(r) for r in residuals],
        )
    return Su21Element(matrix=arr, residual=max_residual)


def anti_transpose_inverse(g: Any) -> Su21Element:
    """Return the matrix whose (i, j) entry is conj(a_{4-j, 4-i})."""
    arr = as_matrix(g)
    inv = FORM_MATRIX @ arr.conj().T @ FORM_MATRIX
    residual = g.residual if isinstance(g, Su21Element) else form_residual(inv)
    return Su21Element(matrix=inv, residual=residual)


def _witnessed(product: np.ndarray) -> Su21Element:
    """Wrap a product, validated only if its residual passes eps_form times |entries|^2."""
    residual = form_residual(product)
    bound = default_tolerances().eps_form * max(1.0, float(np.max(np.abs(product)))) ** 2
    return Su21Element(matrix=product, residual=residual, validated=residual <= bound)


def mul(a: Any, b: Any) -> Su21Element:
    """Matrix product with its own form residual; not validated when that residual fails."""
    return _witnessed(as_matrix(a) @ as_matrix(b))


def trace(m: Any) -> complex:
    return complex(np.trace(as_matrix(m)))


def conjugate(s: Any, g: Any) -> Su21Element:
    """Return s g s^{-1} using the anti-transpose inverse of s."""
    s_arr = as_matrix(s)
    s_inv = FORM_MATRIX @ s_arr.conj().T @ FORM_MATRIX
    return _witnessed(s_arr @ as_matrix(g) @ s_inv)


def power(g: Any, n: int) -> np.ndarray:
    """g^n for any integer n (negative powers through the anti-transpose)."""
    arr = as_matrix(g)
    if n < 0:
        arr = FORM_MATRIX @ arr.conj().T @ FORM_MATRIX
        n = -n
    return np.linalg.matrix_power(arr, n)


def principal_cube_root(z: complex) -> complex:
    return complex(np.power(complex(z), 1 / 3))


def random_su21(
    seed: int | np.random.Generator | None = 0,
    spread: float = 1.0,
    tol: Tolerances | None = None,
) -> Su21Element:
    """Pseudo-random element of SU(2,1).

    A negative vector n and positive vectors p, q are drawn around the
    orthonormal frame (e1 - e3)/sqrt2, (e1 + e3)/sqrt2, e2 and orthonormalized
    against the form. The rows are then v1 = (p + n)/sqrt2, v2 = q,
    v3 = (p - n)/sqrt2 (isotropic, unit positive, isotropic with <v1, v3> = 1),
    and the determinant is fixed by the principal cube root of its inverse.

    Args:
        seed: integer seed or a numpy Generator (consumed in place)
        spread: scale of the Gaussian perturbation, must be positive

    Raises:
        InvalidParameter: spread is not positive
        DegenerateSample: every redraw produced a degenerate frame
    """
    if not spread > 0:
        raise InvalidParameter("spread must be positive", spread=spread)
    tol = tol or default_tolerances()
    rng = np.random.default_rng(seed)
    sqrt2 = np.sqrt(2.0)
    f_minus = np.array([1, 0, -1], dtype=complex) / sqrt2
    f_plus = np.array([1, 0, 1], dtype=complex) / sqrt2
    e2 = np.array([0, 1, 0], dtype=complex)

    def draw() -> np.ndarray:
        return spread * (rng.standard_normal(3) + 1j * rng.standard_normal(3)) / sqrt2

    for attempt in range(MAX_SAMPLE_ATTEMPTS):
        n = f_minus + draw()
        p = f_plus + draw()
        q = e2 + draw()

        nn = herm_inner(n, n).real
        if nn > -_MIN_FRAME_NORM:
            continue
        n = n / np.sqrt(-nn)

        p = p + herm_inner(p, n) * n
        pp = herm_inner(p, p).real
        if pp < _MIN_FRAME_NORM:
            continue
        p = p / np.sqrt(pp)

        q = q + herm_inner(q, n) * n - herm_inner(q, p) * p
        qq = herm_inner(q, q).real
        if qq < _MIN_FRAME_NORM:
            continue
        q = q / np.sqrt(qq)

        m = np.vstack([(p + n) / sqrt2, q, (p - n) / sqrt2])
        delta = np.linalg.det(m)
        m = m * np.power(complex(delta), -1 / 3)
        residual = form_residual(m)
        if residual <= tol.eps_form:
            return Su21Element(matrix=m, residual=residual)
        logger.debug(f"random_su21 attempt {attempt} rejected, residual {residual:.3e}")

    raise DegenerateSample(
        "could not draw a non-degenerate frame", attempts=MAX_SAMPLE_ATTEMPTS
    )


def canonical_phase(v: Any) -> np.ndarray:
    """Scale v to unit Euclidean norm with its largest entry real positive."""
    v = as_vector(v)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise InvalidParameter("zero vector has no projective class")
    v = v / norm
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])


def chordal_distance(u: Any, v: Any) -> float:
    """Fubini-Study chordal distance between the lines through u and v."""
    u = as_vector(u)
    v = as_vector(v)
    # sine of the angle between the lines, without forming 1 - cos^2
    rejection = v - (np.vdot(u, v) / np.vdot(u, u).real) * u
    return float(np.linalg.norm(rejection) / np.linalg.norm(v))


def vector_type(v: Any, tol: Tolerances | None = None) -> VectorType:
    """Sign of <v, v> relative to |v|^2, isotropic within eps_class."""
    tol = tol or default_tolerances()
    v = as_vector(v)
    value = herm_inner(v, v).real / float(np.vdot(v, v).real)
    if abs(value) <= tol.eps_class:
        return VectorType.ISOTROPIC
    return VectorType.POSITIVE if value > 0 else VectorType.NEGATIVE
