"""
Conjugacy classification of SU(2,1) elements.

Eigenvalues come from the characteristic cubic

    mu^3 - tr mu^2 + c1 mu - det = 0

(for SU(2,1), c1 = conj(tr) and det = 1) solved in closed form after the
shift mu = x + tr/3, followed by one Newton polish per root. Roots closer than
eps_solve^{1/3} |g| are treated as one repeated eigenvalue; repeated
eigenvalues are then told apart by the dimension of their eigenspace, which is
well conditioned even when the roots themselves are not.

Loxodromic elements carry eigenvalues lambda e^{i phi}, e^{-2 i phi},
lambda^{-1} e^{i phi} with lambda > 1. Parabolic elements are reduced to one of
two normal forms:

    unipotent    [[1, 1, tau], [0, 1, -1], [0, 0, 1]],  tau = -1/2 + s i
    rotational   [[e^{i phi}, 0, r i e^{i phi}], [0, e^{-2 i phi}, 0], [0, 0, e^{i phi}]]
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from .config import Tolerances, default_tolerances
from .errors import (
    BoundaryCase,
    FrameDegenerate,
    InconsistentSpectrum,
    NotLoxodromic,
    NotParabolic,
)
from .hermitian import (
    CUBE_ROOTS_OF_UNITY,
    FORM_MATRIX,
    IDENTITY,
    OMEGA,
    Su21Element,
    as_matrix,
    canonical_phase,
    herm_inner,
    trace,
)

logger = logging.getLogger(__name__)


class ElementType(str, Enum):
    IDENTITY = "Identity"
    ELLIPTIC = "Elliptic"
    PARABOLIC_UNIPOTENT = "ParabolicUnipotent"
    ELLIPTIC_PARABOLIC = "EllipticParabolic"
    LOXODROMIC = "Loxodromic"

    @property
    def is_parabolic(self) -> bool:
        return self in (ElementType.PARABOLIC_UNIPOTENT, ElementType.ELLIPTIC_PARABOLIC)


@dataclass(frozen=True)
class ElementClass:
    """Classification verdict.

    ``margin`` is the distance of the deciding quantity from its threshold and
    ``lift`` the cube root of unity dividing out the center (1 unless the
    element is a scalar or unipotent multiple of omega).
    """

    tag: ElementType
    margin: float
    lift: complex = 1 + 0j
    eigenvalues: tuple[complex, ...] = ()
    fast_path: bool = False


@dataclass(frozen=True)
class EigenCluster:
    value: complex
    multiplicity: int
    members: tuple[complex, ...]


@dataclass(frozen=True, eq=False)
class LoxodromicData:
    """Canonical eigen-data of a loxodromic element.

    ``frame`` holds eigenvectors for lambda1, lambda2, lambda3 as columns,
    scaled so that <c1, c3> = 1 and <c2, c2> = 1.
    """

    lam: float
    phi: float
    frame: np.ndarray = field(repr=False)

    @property
    def eigenvalues(self) -> tuple[complex, complex, complex]:
        return loxodromic_eigenvalues(self.lam, self.phi)

    @property
    def trace(self) -> complex:
        return sum(self.eigenvalues)

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.eigenvalues)

    @property
    def fixed_points(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Attracting, polar and repelling fixed points in P(V)."""
        return self.frame[:, 0], self.frame[:, 1], self.frame[:, 2]


class ParabolicKind(str, Enum):
    ELLIPTIC_ROTATIONAL = "EllipticRotational"
    UNIPOTENT_TAU = "UnipotentTau"


@dataclass(frozen=True)
class EllipticRotational:
    phi: float
    r: float

    kind = ParabolicKind.ELLIPTIC_ROTATIONAL

    def matrix(self) -> np.ndarray:
        return rotational_power(self.phi, self.r, 1)


@dataclass(frozen=True)
class UnipotentTau:
    s: float

    kind = ParabolicKind.UNIPOTENT_TAU

    @property
    def tau(self) -> complex:
        return complex(-0.5, self.s)

    def matrix(self) -> np.ndarray:
        return unipotent_power(self.s, 1)


@dataclass(frozen=True)
class ParabolicForm:
    """Normal form of a parabolic element and the conjugator reaching it.

    conjugator . g . conjugator^{-1} = lift * form.matrix()
    """

    form: EllipticRotational | UnipotentTau
    conjugator: Su21Element
    lift: complex = 1 + 0j
    residual: float = 0.0

    @property
    def kind(self) -> ParabolicKind:
        return self.form.kind

    @property
    def fixed_point(self) -> np.ndarray:
        """The boundary fixed point, first column of the inverse conjugator."""
        return self.conjugator.inverse.matrix[:, 0].copy()


def loxodromic_eigenvalues(lam: float, phi: float) -> tuple[complex, complex, complex]:
    unit = complex(np.exp(1j * phi))
    return lam * unit, complex(np.exp(-2j * phi)), unit / lam


def unipotent_power(s: float, n: int) -> np.ndarray:
    """Closed form of B^n for the unipotent normal form with parameter s."""
    tau = complex(-0.5, s)
    f = (1 - n) * n / 2
    return np.array(
        [[1, n, n * tau + f], [0, 1, -n], [0, 0, 1]],
        dtype=complex,
    )


def rotational_power(phi: float, r: float, n: int) -> np.ndarray:
    """Closed form of B^n for the ellipto-rotational normal form."""
    unit = complex(np.exp(1j * n * phi))
    return np.array(
        [
            [unit, 0, unit * 1j * n * r],
            [0, complex(np.exp(-2j * n * phi)), 0],
            [0, 0, unit],
        ],
        dtype=complex,
    )


def characteristic_coefficients(m: Any) -> tuple[complex, complex, complex]:
    """Return (tr, sum of principal 2x2 minors, det)."""
    a = as_matrix(m)
    minors = (
        a[0, 0] * a[1, 1]
        - a[0, 1] * a[1, 0]
        + a[0, 0] * a[2, 2]
        - a[0, 2] * a[2, 0]
        + a[1, 1] * a[2, 2]
        - a[1, 2] * a[2, 1]
    )
    return complex(np.trace(a)), complex(minors), complex(np.linalg.det(a))


def _cubic_roots(tr: complex, c1: complex, det: complex) -> list[complex]:
    # x^3 - 3 p x = 2 q after mu = x + tr/3
    mu = tr / 3
    p = mu * mu - c1 / 3
    q = mu**3 - c1 * mu / 2 + det / 2
    disc = np.sqrt(complex(q * q - p**3))
    base = q + disc if abs(q + disc) >= abs(q - disc) else q - disc
    if abs(base) < 1e-300:
        return [mu, mu, mu]
    r2 = complex(np.power(base, 1 / 3))
    r3 = p / r2
    return [
        mu + r2 + r3,
        mu + r2 * OMEGA + r3 * OMEGA.conjugate(),
        mu + r2 * OMEGA.conjugate() + r3 * OMEGA,
    ]


def _newton_polish(root: complex, tr: complex, c1: complex, det: complex) -> complex:
    def poly(z: complex) -> complex:
        return ((z - tr) * z + c1) * z - det

    slope = (3 * root - 2 * tr) * root + c1
    if slope == 0:
        return root
    candidate = root - poly(root) / slope
    return candidate if abs(poly(candidate)) <= abs(poly(root)) else root


def characteristic_roots(m: Any) -> np.ndarray:
    """Eigenvalues sorted by decreasing modulus."""
    tr, c1, det = characteristic_coefficients(m)
    roots = [_newton_polish(z, tr, c1, det) for z in _cubic_roots(tr, c1, det)]
    return np.array(sorted(roots, key=lambda z: -abs(z)), dtype=complex)


def matrix_scale(m: Any) -> float:
    return max(1.0, float(np.linalg.norm(as_matrix(m), 2)))


def eigenvalue_clusters(m: Any, tol: Tolerances | None = None) -> list[EigenCluster]:
    """Group roots closer than eps_solve^{1/3} |m|.

    A perturbed triple root splits by about the cube root of the coefficient
    error, which grows linearly with |m|.

    Cluster values use the trace: a triple cluster sits at tr/3 and a pair at
    (tr - single)/2, both free of the cube-root error of the individual roots.
    """
    tol = tol or default_tolerances()
    arr = as_matrix(m)
    roots = characteristic_roots(arr)
    radius = float(np.cbrt(tol.eps_solve)) * matrix_scale(arr)
    tr = trace(arr)

    close = [
        (i, j) for i in range(3) for j in range(i + 1, 3) if abs(roots[i] - roots[j]) <= radius
    ]
    if len(close) >= 2:
        return [EigenCluster(tr / 3, 3, tuple(roots))]
    if len(close) == 1:
        i, j = close[0]
        k = 3 - i - j
        single = complex(roots[k])
        pair = EigenCluster((tr - single) / 2, 2, (complex(roots[i]), complex(roots[j])))
        single_cluster = EigenCluster(single, 1, (single,))
        return sorted([pair, single_cluster], key=lambda c: -abs(c.value))
    return [EigenCluster(complex(z), 1, (complex(z),)) for z in roots]


def _singular_values(a: np.ndarray) -> np.ndarray:
    return np.linalg.svd(a, compute_uv=False)


def null_vector(a: np.ndarray) -> np.ndarray:
    """Right singular vector of the smallest singular value."""
    _, _, vh = np.linalg.svd(a)
    return vh[-1].conj()


def null_space(a: np.ndarray, threshold: float) -> np.ndarray:
    """Orthonormal columns spanning the numerical kernel of a."""
    _, s, vh = np.linalg.svd(a)
    rank = int(np.sum(s > threshold))
    return vh[rank:].conj().T


def range_vector(a: np.ndarray) -> np.ndarray:
    """Dominant left singular vector of a."""
    u, _, _ = np.linalg.svd(a)
    return u[:, 0]


def _decide_by_modulus(
    modulus_excess: float,
    eigenvalues: tuple[complex, ...],
    tol: Tolerances,
    elliptic_margin: float,
) -> ElementClass:
    if modulus_excess > 2 * tol.eps_class:
        return ElementClass(
            ElementType.LOXODROMIC, margin=modulus_excess - tol.eps_class, eigenvalues=eigenvalues
        )
    if modulus_excess > tol.eps_class:
        raise BoundaryCase(
            "largest eigenvalue modulus is within tolerance of 1",
            modulus_excess=modulus_excess,
        )
    return ElementClass(ElementType.ELLIPTIC, margin=elliptic_margin, eigenvalues=eigenvalues)


def classify_element(g: Any, tol: Tolerances | None = None) -> ElementClass:
    """Classify g as identity, elliptic, parabolic (two kinds) or loxodromic.

    Raises:
        BoundaryCase: the deciding quantity sits within tolerance of its threshold
    """
    tol = tol or default_tolerances()
    m = as_matrix(g)

    for omega in CUBE_ROOTS_OF_UNITY:
        distance = float(np.max(np.abs(m - omega * IDENTITY)))
        if distance < tol.eps_class:
            return ElementClass(
                ElementType.IDENTITY,
                margin=tol.eps_class - distance,
                lift=omega,
                eigenvalues=(omega, omega, omega),
            )

    tr = trace(m)
    if abs(tr) > 3 + tol.eps_class:
        return ElementClass(
            ElementType.LOXODROMIC, margin=abs(tr) - 3 - tol.eps_class, fast_path=True
        )

    scale = matrix_scale(m)
    eta = float(np.sqrt(tol.eps_solve)) * scale
    roots = characteristic_roots(m)
    clusters = eigenvalue_clusters(m, tol)
    eigenvalues = tuple(complex(z) for z in roots)

    if len(clusters) == 3:
        gaps = [abs(roots[i] - roots[j]) for i in range(3) for j in range(i + 1, 3)]
        return _decide_by_modulus(
            float(abs(roots[0]) - 1), eigenvalues, tol, elliptic_margin=float(min(gaps))
        )

    if len(clusters) == 1:
        omega = min(CUBE_ROOTS_OF_UNITY, key=lambda w: abs(clusters[0].value - w))
        nilpotent = m - omega * IDENTITY
        sv = _singular_values(nilpotent)
        rank = int(np.sum(sv > eta))
        if rank == 0:
            raise BoundaryCase(
                "element is nearly scalar but not within eps_class of a cube root of unity",
                distance=float(np.max(np.abs(nilpotent))),
            )
        repeated = (omega, omega, omega)
        if rank == 1:
            return ElementClass(
                ElementType.PARABOLIC_UNIPOTENT,
                margin=float(sv[0] - eta),
                lift=omega,
                eigenvalues=repeated,
            )
        square = float(np.linalg.norm(nilpotent @ nilpotent, 2))
        if square > eta * scale:
            return ElementClass(
                ElementType.PARABOLIC_UNIPOTENT,
                margin=square - eta * scale,
                lift=omega,
                eigenvalues=repeated,
            )
        # three distinct but close eigenvalues of a diagonalizable element
        return _decide_by_modulus(
            float(abs(roots[0]) - 1), eigenvalues, tol, elliptic_margin=eta * scale - square
        )

    pair = next(c for c in clusters if c.multiplicity == 2)
    single = next(c for c in clusters if c.multiplicity == 1)
    sv = _singular_values(m - pair.value * IDENTITY)
    if sv[1] <= eta:
        # two-dimensional eigenspace: read the pair off the compression to it
        _, _, vh = np.linalg.svd(m - pair.value * IDENTITY)
        basis = vh[1:].conj().T
        compressed = basis.conj().T @ m @ basis
        inner = np.linalg.eigvals(compressed)
        excess = float(max(np.max(np.abs(inner)), abs(single.value)) - 1)
        refined = tuple(complex(z) for z in sorted([*inner, single.value], key=lambda z: -abs(z)))
        return _decide_by_modulus(
            excess, refined, tol, elliptic_margin=max(0.0, tol.eps_class - excess)
        )

    vectors = [null_vector(m - z * IDENTITY) for z in (*pair.members, single.value)]
    frame_sv = _singular_values(np.column_stack(vectors))
    ratio = float(frame_sv[-1] / frame_sv[0])
    threshold = float(np.sqrt(tol.eps_solve))
    if ratio > threshold:
        return _decide_by_modulus(
            float(abs(roots[0]) - 1), eigenvalues, tol, elliptic_margin=ratio - threshold
        )
    return ElementClass(
        ElementType.ELLIPTIC_PARABOLIC,
        margin=threshold - ratio,
        eigenvalues=(pair.value, pair.value, single.value),
    )


def _principal_angle(z: complex) -> float:
    phi = float(np.angle(z))
    return phi + 2 * np.pi if phi <= -np.pi else phi


def loxodromic_data(g: Any, tol: Tolerances | None = None) -> LoxodromicData:
    """Extract (lambda, phi) and the adapted eigenframe of a loxodromic element.

    Raises:
        NotLoxodromic: g does not classify as loxodromic
        InconsistentSpectrum: eigenvalues do not follow the SU(2,1) pattern
        FrameDegenerate: the isotropic eigenvectors do not pair
    """
    tol = tol or default_tolerances()
    m = as_matrix(g)
    verdict = classify_element(m, tol)
    if verdict.tag is not ElementType.LOXODROMIC:
        raise NotLoxodromic(f"element is {verdict.tag.value}", tag=verdict.tag.value)

    roots = characteristic_roots(m)
    lam = float(abs(roots[0]))
    phi = _principal_angle(roots[0])
    expected = np.array(loxodromic_eigenvalues(lam, phi))
    mismatch = float(np.max(np.abs(roots - expected)))
    if mismatch > tol.eps_class * lam:
        raise InconsistentSpectrum(
            "eigenvalues do not match lambda e^{i phi}, e^{-2 i phi}, lambda^{-1} e^{i phi}",
            mismatch=mismatch,
        )

    c1 = canonical_phase(null_vector(m - expected[0] * IDENTITY))
    c2 = canonical_phase(null_vector(m - expected[1] * IDENTITY))
    c3 = null_vector(m - expected[2] * IDENTITY)

    norm2 = herm_inner(c2, c2).real
    if norm2 <= tol.eps_class:
        raise InconsistentSpectrum("polar eigenvector is not positive", norm=norm2)
    c2 = c2 / np.sqrt(norm2)

    pairing = herm_inner(c1, c3)
    if abs(pairing) <= tol.eps_class:
        raise FrameDegenerate("isotropic eigenvectors are not paired", pairing=abs(pairing))
    c3 = c3 / np.conj(pairing)

    frame = np.column_stack([c1, c2, c3])
    logger.debug(f"Loxodromic data: lambda={lam:.12g}, phi={phi:.12g}")
    return LoxodromicData(lam=lam, phi=phi, frame=frame)


def frame_conjugator(frame: np.ndarray) -> Su21Element:
    """Return S = F^{-1} for an adapted frame F, after the cube-root det fix."""
    delta = complex(np.linalg.det(frame))
    fixed = frame * np.power(delta, -1 / 3)
    inverse = FORM_MATRIX @ fixed.conj().T @ FORM_MATRIX
    return Su21Element(matrix=inverse)


def diagonalizing_conjugator(
    g: Any, d: LoxodromicData, tol: Tolerances | None = None
) -> Su21Element:
    """Return S in SU(2,1) with S g S^{-1} = diag(lambda1, lambda2, lambda3).

    Raises:
        FrameDegenerate: eigenvalues nearly collide, the frame is badly
            conditioned, or the conjugated matrix is not diagonal
    """
    tol = tol or default_tolerances()
    m = as_matrix(g)
    scale = matrix_scale(m)
    eigenvalues = d.eigenvalues
    gap = min(abs(eigenvalues[i] - eigenvalues[j]) for i in range(3) for j in range(i + 1, 3))
    if gap < np.sqrt(tol.eps_solve) * scale:
        raise FrameDegenerate("eigenvalues nearly collide (near-parabolic)", gap=float(gap))

    condition = float(np.linalg.cond(d.frame))
    if condition > 1 / np.sqrt(tol.eps_solve):
        raise FrameDegenerate("eigenframe is numerically dependent", condition=condition)

    s = frame_conjugator(d.frame)
    conjugated = s.matrix @ m @ s.inverse.matrix
    residual = float(np.max(np.abs(conjugated - d.diagonal)))
    if residual > 10 * tol.eps_form * scale:
        raise FrameDegenerate(
            "conjugated element is not diagonal", residual=residual, condition=condition
        )
    return Su21Element(matrix=s.matrix, residual=residual)


def _complete_frame(f1: np.ndarray, f2: np.ndarray) -> np.ndarray:
    """Isotropic f3 orthogonal to f2 with <f1, f3> = 1.

    Starts from the standard basis vector pairing best with f1.
    """
    pairings = [abs(herm_inner(f1, e)) for e in IDENTITY]
    w = IDENTITY[int(np.argmax(pairings))].copy()
    w = w - herm_inner(w, f2) * f2
    w = w / herm_inner(w, f1)
    return w - (herm_inner(w, w).real / 2) * f1


def _positive_unit(v: np.ndarray, tol: Tolerances) -> np.ndarray:
    v = canonical_phase(v)
    norm = herm_inner(v, v).real
    if norm <= tol.eps_class:
        raise FrameDegenerate("expected a positive vector", norm=norm)
    return v / np.sqrt(norm)


def _rotational_form(
    h: np.ndarray, repeated: complex, single: complex | None, tol: Tolerances
) -> tuple[EllipticRotational, Su21Element, float]:
    scale = matrix_scale(h)
    eta = float(np.sqrt(tol.eps_solve)) * scale
    nilpotent = h - repeated * IDENTITY
    if single is not None:
        f1 = canonical_phase(null_vector(nilpotent))
        f2 = _positive_unit(null_vector(h - single * IDENTITY), tol)
    else:
        # vertical translation: kernel is span(f1, f2), range is span(f1)
        f1 = canonical_phase(range_vector(nilpotent))
        kernel = null_space(nilpotent, eta)
        candidates = [k - np.vdot(f1, k) * f1 for k in kernel.T]
        f2 = _positive_unit(max(candidates, key=lambda x: np.linalg.norm(x)), tol)

    conjugator = frame_conjugator(np.column_stack([f1, f2, _complete_frame(f1, f2)]))
    normal = conjugator.matrix @ h @ conjugator.inverse.matrix
    phi = _principal_angle(repeated) if single is not None else 0.0
    r = float((normal[0, 2] / (1j * normal[0, 0])).real)
    form = EllipticRotational(phi=phi, r=r)
    residual = float(np.max(np.abs(normal - form.matrix())))
    return form, conjugator, residual


def _unipotent_form(h: np.ndarray, tol: Tolerances) -> tuple[UnipotentTau, Su21Element, float]:
    nilpotent = h - IDENTITY
    f1 = canonical_phase(range_vector(nilpotent @ nilpotent))
    f2 = _positive_unit(np.conj(np.cross(FORM_MATRIX @ f1, f1)), tol)
    base = frame_conjugator(np.column_stack([f1, f2, _complete_frame(f1, f2)]))
    upper = base.matrix @ h @ base.inverse.matrix

    # X = diag(rho e^{i alpha}, e^{-2 i alpha}, rho^{-1} e^{i alpha}) sets b12 = 1
    b12 = complex(upper[0, 1])
    if abs(b12) <= tol.eps_class:
        raise FrameDegenerate("unipotent element has no Jordan block of size 3")
    rho = 1 / abs(b12)
    alpha = -float(np.angle(b12)) / 3
    x = np.diag([rho * np.exp(1j * alpha), np.exp(-2j * alpha), np.exp(1j * alpha) / rho])
    conjugator = Su21Element(matrix=x @ base.matrix)
    normal = conjugator.matrix @ h @ conjugator.inverse.matrix
    form = UnipotentTau(s=float(normal[0, 2].imag))
    residual = float(np.max(np.abs(normal - form.matrix())))
    return form, conjugator, residual


def parabolic_normal_form(g: Any, tol: Tolerances | None = None) -> ParabolicForm:
    """Conjugate a parabolic element into its rotational or unipotent normal form.

    Raises:
        NotParabolic: g does not classify as parabolic
        FrameDegenerate: the adapted frame could not be built or does not
            reach the normal form within eps_class
    """
    tol = tol or default_tolerances()
    m = as_matrix(g)
    verdict = classify_element(m, tol)
    if not verdict.tag.is_parabolic:
        raise NotParabolic(f"element is {verdict.tag.value}", tag=verdict.tag.value)

    lift = verdict.lift
    h = m / lift
    form: EllipticRotational | UnipotentTau
    if verdict.tag is ElementType.ELLIPTIC_PARABOLIC:
        repeated, _, single = verdict.eigenvalues
        form, conjugator, residual = _rotational_form(h, repeated, single, tol)
    else:
        nilpotent = h - IDENTITY
        eta = float(np.sqrt(tol.eps_solve)) * matrix_scale(h)
        rank = int(np.sum(_singular_values(nilpotent) > eta))
        if rank == 1:
            form, conjugator, residual = _rotational_form(h, 1 + 0j, None, tol)
        else:
            form, conjugator, residual = _unipotent_form(h, tol)

    if residual > tol.eps_class * matrix_scale(m):
        raise FrameDegenerate("normal form not reached", residual=residual)
    logger.debug(f"Parabolic normal form {form} with lift {lift}")
    return ParabolicForm(form=form, conjugator=conjugator, lift=lift, residual=residual)
