"""
R-Fuchsian / C-Fuchsian classification of (assumed) discrete groups.

A discrete irreducible group is R-Fuchsian exactly when its invariant trace
field is real; a reducible one with a positive common fixed point preserves the
complex geodesic polar to that point and is C-Fuchsian. Discreteness is never
decided here: it is a caller assertion echoed in the verdict.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .config import Tolerances, default_tolerances
from .detectors import IrreducibilityReport, irreducibility, positive_common_fixed_point
from .errors import TraceFieldError
from .hermitian import CUBE_ROOTS_OF_UNITY, GroupSpec, Su21Element
from .reconstruction import Certificate, CertificateKind, conjugate_into_so21
from .trace_field import TraceReport, invariant_trace_report
from .words import WordSampler, display_word

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    R_FUCHSIAN = "RFuchsian"
    C_FUCHSIAN = "CFuchsian"
    NOT_FUCHSIAN = "NotFuchsianOfEitherKind"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True, eq=False)
class FuchsianVerdict:
    verdict: Verdict
    assumed_discrete: bool
    certificate: Certificate | None = None
    polar_point: np.ndarray | None = None
    cause: dict | None = None
    invariant_report: TraceReport | None = None
    irreducibility: IrreducibilityReport | None = None
    cube_words: list[str] = field(default_factory=list)


def cube_subgroup(
    spec: GroupSpec, sampler: WordSampler, tol: Tolerances
) -> tuple[GroupSpec, list[str]]:
    """Irreducible set of cubes: generator cubes first, then cubes of further words."""
    cubes: list[np.ndarray] = [g @ g @ g for g in spec.matrices]
    words = [3 * chr(ord("a") + k) for k in range(len(cubes))]
    candidate = GroupSpec(generators=tuple(Su21Element(matrix=c) for c in cubes))
    if irreducibility(candidate, tol).irreducible:
        return candidate, words
    for sample in sampler.bind(spec.matrices).samples():
        cube = sample.matrix @ sample.matrix @ sample.matrix
        cubes.append(cube)
        words.append(3 * sample.word)
        candidate = GroupSpec(generators=tuple(Su21Element(matrix=c) for c in cubes))
        if irreducibility(candidate, tol).irreducible:
            return candidate, words
    return candidate, words


def _real_lift(m: np.ndarray) -> tuple[np.ndarray, complex]:
    lifts = [(omega * m, omega) for omega in CUBE_ROOTS_OF_UNITY]
    return min(lifts, key=lambda lift: float(np.max(np.abs(lift[0].imag))))


def _inconclusive(
    assumed_discrete: bool,
    cause: dict,
    **kwargs: object,
) -> FuchsianVerdict:
    logger.info(f"Fuchsian classification inconclusive: {cause.get('message')}")
    return FuchsianVerdict(
        verdict=Verdict.INCONCLUSIVE, assumed_discrete=assumed_discrete, cause=cause, **kwargs
    )


def classify_fuchsian(
    spec: GroupSpec,
    assumed_discrete: bool,
    sampler: WordSampler | None = None,
    tol: Tolerances | None = None,
) -> FuchsianVerdict:
    """Decide R-Fuchsian / C-Fuchsian / neither for a group asserted discrete.

    Reconstruction failures are reported as Inconclusive with their cause.
    """
    tol = tol or default_tolerances()
    sampler = sampler or WordSampler(tol=tol)
    if not assumed_discrete:
        return _inconclusive(
            assumed_discrete,
            {"tag": "NotAssumedDiscrete", "message": "discreteness was not asserted"},
        )

    report = invariant_trace_report(spec, sampler, tol)
    reducibility = irreducibility(spec, tol)
    context = {"invariant_report": report, "irreducibility": reducibility}

    if not reducibility.irreducible:
        polar = positive_common_fixed_point(reducibility)
        if polar is None:
            return _inconclusive(
                assumed_discrete,
                {
                    "tag": "Elementary",
                    "message": "common fixed point is not positive (elementary group)",
                },
                **context,
            )
        logger.info("Reducible group with a positive common fixed point: C-Fuchsian")
        return FuchsianVerdict(
            verdict=Verdict.C_FUCHSIAN,
            assumed_discrete=assumed_discrete,
            polar_point=polar,
            **context,
        )

    if not report.is_real:
        logger.info(f"Invariant trace field not real (max_imag={report.max_imag:.3e})")
        return FuchsianVerdict(
            verdict=Verdict.NOT_FUCHSIAN, assumed_discrete=assumed_discrete, **context
        )

    cubes, cube_words = cube_subgroup(spec, sampler, tol)
    try:
        real_form = conjugate_into_so21(cubes, tol, sampler)
    except TraceFieldError as e:
        logger.warning(f"Real form of the cube subgroup failed: {e}")
        return _inconclusive(assumed_discrete, e.to_dict(), cube_words=cube_words, **context)

    f = real_form.conjugator
    lifted = [_real_lift(f.matrix @ g @ f.inverse.matrix) for g in spec.matrices]
    transformed = [m for m, _ in lifted]
    imaginary = max(float(np.max(np.abs(m.imag))) for m in transformed)
    scale = max(max(1.0, float(np.linalg.norm(m, 2))) for m in transformed)
    if imaginary > tol.eps_field * scale:
        return _inconclusive(
            assumed_discrete,
            {
                "tag": "IllConditioned",
                "message": "generators are not real after the cube-subgroup conjugation",
                "details": {"max_imag": imaginary},
            },
            cube_words=cube_words,
            **context,
        )

    certificate = Certificate(
        kind=CertificateKind.REAL_FORM,
        conjugator=f,
        transformed_generators=transformed,
        residual=imaginary,
        basis_words=real_form.basis_words,
        details={
            **real_form.details,
            "lifts": [[float(omega.real), float(omega.imag)] for _, omega in lifted],
            "cube_words": [display_word(w) for w in cube_words],
        },
    )
    logger.info(f"R-Fuchsian: real form residual {imaginary:.3e}")
    return FuchsianVerdict(
        verdict=Verdict.R_FUCHSIAN,
        assumed_discrete=assumed_discrete,
        certificate=certificate,
        cube_words=cube_words,
        **context,
    )
