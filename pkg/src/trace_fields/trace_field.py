"""
Trace samples, phase recovery and reality tests.

For a loxodromic A with eigenvalues lambda e^{i phi}, e^{-2 i phi},
lambda^{-1} e^{i phi} and t = lambda + 1/lambda:

    |tr A|^2 = t^2 + 1 + 2 t cos(3 phi)
    cos(phi) = (cos(3 phi) + (Re tr A + 1) t) / (2 Re tr A + t^2 - 1)
    Im tr A  = sin(phi) (t - 2 cos(phi))

so e^{i phi}, and with it every eigenvalue of A, is a rational expression in
the trace of A, its conjugate and lambda.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .classification import ElementType, classify_element, loxodromic_data
from .config import Tolerances, default_tolerances
from .errors import DenominatorUnderflow, InvalidParameter, OutOfRange, TraceFieldError
from .hermitian import FORM_MATRIX, GroupSpec
from .words import TraceKey, WordSample, WordSampler, display_word

logger = logging.getLogger(__name__)

# explicit cubes are compared against the cube-trace identity on this many samples
CUBE_CHECK_SAMPLES = 16


@dataclass(frozen=True)
class TraceSample:
    word: str
    trace: complex
    # imaginary part relative to the size of the word matrix (round-off scale)
    relative_imag: float = 0.0


@dataclass(frozen=True)
class TraceReport:
    """Sampled surrogate for a trace field.

    ``max_imag`` is the largest |Im| over the samples; reality is decided on the
    imaginary parts relative to the matrix norm of each word (cubed for cube
    traces), which is the scale round-off lives on.
    """

    samples: list[TraceSample]
    is_real: bool
    max_imag: float
    max_relative_imag: float
    lam_witness: float | None = None
    witness_word: str | None = None
    cube_check_residual: float | None = None

    @property
    def traces(self) -> list[complex]:
        return [s.trace for s in self.samples]


@dataclass(frozen=True)
class PhaseRecovery:
    """e^{i phi} of a loxodromic element recovered from (tr, lambda) alone."""

    tr: complex
    lam: float
    cos3phi: float
    cosphi: float
    sinphi: float

    @property
    def t(self) -> float:
        return self.lam + 1 / self.lam

    @property
    def unit(self) -> complex:
        return complex(self.cosphi, self.sinphi)

    @property
    def phi(self) -> float:
        return float(np.arctan2(self.sinphi, self.cosphi))

    def eigenvalues(self) -> tuple[complex, complex, complex]:
        unit = self.unit
        return self.lam * unit, unit.conjugate() ** 2, unit / self.lam


def _check_lambda(lam: float) -> None:
    if not lam > 1:
        raise InvalidParameter("lambda must exceed 1", lam=lam)


def recover_cos3phi(tr: complex, lam: float, tol: Tolerances | None = None) -> float:
    """Return cos(3 phi) = (|tr|^2 - lambda^2 - lambda^-2 - 3) / (2 t).

    Raises:
        OutOfRange: the value lies outside [-1 - eps_field, 1 + eps_field]
    """
    tol = tol or default_tolerances()
    _check_lambda(lam)
    t = lam + 1 / lam
    value = (abs(tr) ** 2 - lam**2 - lam**-2 - 3) / (2 * t)
    if abs(value) > 1 + tol.eps_field:
        raise OutOfRange("inconsistent (trace, lambda) pair", cos3phi=value, lam=lam)
    return float(np.clip(value, -1.0, 1.0))


def recover_cosphi(
    tr: complex, lam: float, cos3phi: float, tol: Tolerances | None = None
) -> float:
    tol = tol or default_tolerances()
    _check_lambda(lam)
    t = lam + 1 / lam
    re = complex(tr).real
    denominator = 2 * re + t * t - 1
    if abs(denominator) < tol.eps_solve:
        raise DenominatorUnderflow("cos(phi) denominator vanishes", denominator=denominator)
    return float((cos3phi + (re + 1) * t) / denominator)


def recover_sinphi(
    tr: complex, lam: float, cosphi: float, tol: Tolerances | None = None
) -> float:
    """Return Im(tr) / (t - 2 cos(phi)); the denominator is at least t - 2 > 0."""
    tol = tol or default_tolerances()
    _check_lambda(lam)
    denominator = lam + 1 / lam - 2 * cosphi
    if abs(denominator) < tol.eps_solve:
        raise DenominatorUnderflow("sin(phi) denominator vanishes", denominator=denominator)
    return float(complex(tr).imag / denominator)


def recover_phase(tr: complex, lam: float, tol: Tolerances | None = None) -> PhaseRecovery:
    """Run the three recoveries and check that the result is a consistent phase.

    Raises:
        OutOfRange: inconsistent inputs (the recovered point is off the unit
            circle or breaks the triple-angle identity)
    """
    tol = tol or default_tolerances()
    cos3phi = recover_cos3phi(tr, lam, tol)
    cosphi = recover_cosphi(tr, lam, cos3phi, tol)
    sinphi = recover_sinphi(tr, lam, cosphi, tol)
    recovery = PhaseRecovery(tr=complex(tr), lam=lam, cos3phi=cos3phi, cosphi=cosphi, sinphi=sinphi)

    bound = tol.eps_field * max(1.0, recovery.t)
    unit_error = abs(cosphi**2 + sinphi**2 - 1)
    triple_error = abs(4 * cosphi**3 - 3 * cosphi - cos3phi)
    if unit_error > bound or triple_error > bound:
        raise OutOfRange(
            "recovered phase is inconsistent",
            unit_error=unit_error,
            triple_angle_error=triple_error,
        )
    return recovery


def cube_trace(tr: complex, tr_inv: complex) -> complex:
    """tr(A^3) = tr(A)^3 - 3 tr(A) tr(A^{-1}) + 3."""
    return complex(tr) ** 3 - 3 * complex(tr) * complex(tr_inv) + 3


def _bound_sampler(spec: GroupSpec, sampler: WordSampler | None, tol: Tolerances) -> WordSampler:
    if sampler is None:
        return WordSampler(tol=tol).bind(spec.matrices)
    return sampler.bind(spec.matrices)


def _norm(m: np.ndarray) -> float:
    return max(1.0, float(np.linalg.norm(m, 2)))


def _find_lambda_witness(
    samples: list[WordSample], tol: Tolerances
) -> tuple[float | None, str | None]:
    for sample in samples:
        try:
            if classify_element(sample.matrix, tol).tag is ElementType.LOXODROMIC:
                return loxodromic_data(sample.matrix, tol).lam, sample.word
        except TraceFieldError as e:
            logger.debug(f"Skipping word {display_word(sample.word)} for lambda witness: {e}")
    return None, None


def _report(
    words: list[WordSample],
    values: list[complex],
    scales: list[float],
    tol: Tolerances,
    cube_check_residual: float | None = None,
) -> TraceReport:
    samples = [
        TraceSample(word=w.word, trace=v, relative_imag=abs(v.imag) / s)
        for w, v, s in zip(words, values, scales)
    ]
    max_imag = max((abs(s.trace.imag) for s in samples), default=0.0)
    max_relative = max((s.relative_imag for s in samples), default=0.0)
    lam, word = _find_lambda_witness(words, tol)
    return TraceReport(
        samples=samples,
        is_real=max_relative < tol.eps_field,
        max_imag=max_imag,
        max_relative_imag=max_relative,
        lam_witness=lam,
        witness_word=word,
        cube_check_residual=cube_check_residual,
    )


def sample_traces(
    spec: GroupSpec, sampler: WordSampler | None = None, tol: Tolerances | None = None
) -> TraceReport:
    """Traces of all words up to the sampler's max length (repeated traces dropped)."""
    tol = tol or default_tolerances()
    sampler = _bound_sampler(spec, sampler, tol)
    words = list(sampler.samples())
    values = [w.trace for w in words]
    report = _report(words, values, [_norm(w.matrix) for w in words], tol)
    logger.info(
        f"Sampled {len(words)} traces up to length {sampler.max_length}; "
        f"real={report.is_real}, max_imag={report.max_imag:.3e}"
    )
    return report


def _cube_key(step: float) -> TraceKey:
    def key(m: np.ndarray) -> tuple[int, ...]:
        tr = complex(np.trace(m))
        tr_inv = complex(np.trace(FORM_MATRIX @ m.conj().T @ FORM_MATRIX))
        value = cube_trace(tr, tr_inv)
        return int(round(value.real / step)), int(round(value.imag / step))

    return key


def invariant_trace_report(
    spec: GroupSpec, sampler: WordSampler | None = None, tol: Tolerances | None = None
) -> TraceReport:
    """Cube traces of sampled words, a surrogate for the invariant trace field.

    Cubes kill the center, so the report does not depend on the chosen lifts.
    The first samples are cross-checked against explicit matrix cubes.
    """
    tol = tol or default_tolerances()
    sampler = _bound_sampler(spec, sampler, tol)
    words = list(sampler.samples(key=_cube_key(tol.eps_field)))
    values = []
    for w in words:
        tr_inv = complex(np.trace(FORM_MATRIX @ w.matrix.conj().T @ FORM_MATRIX))
        values.append(cube_trace(w.trace, tr_inv))

    residual = 0.0
    for w, value in zip(words[:CUBE_CHECK_SAMPLES], values):
        explicit = complex(np.trace(w.matrix @ w.matrix @ w.matrix))
        residual = max(residual, abs(explicit - value) / _norm(w.matrix) ** 3)
    if residual > tol.eps_field:
        logger.warning(f"Cube trace identity off by {residual:.3e} on the check subsample")

    report = _report(
        words, values, [_norm(w.matrix) ** 3 for w in words], tol, cube_check_residual=residual
    )
    logger.info(
        f"Sampled {len(words)} cube traces; real={report.is_real}, "
        f"max_imag={report.max_imag:.3e}"
    )
    return report
