"""
Analysis service for Trace Fields.

Dispatches a command over a GroupFile and packages the outcome as a
ReportFile. Shared by the command line and the HTTP API.
"""

import logging
import time
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

import numpy as np

from ..classification import (
    ElementType,
    EllipticRotational,
    classify_element,
    loxodromic_data,
    parabolic_normal_form,
)
from ..config import Tolerances, settings
from ..detectors import elementary_screen, find_loxodromic, irreducibility, is_screw_motion
from ..errors import InvalidParameter, TraceFieldError
from ..formats import (
    CertificatePayload,
    ErrorPayload,
    GroupFile,
    ReportFile,
    TraceSamplePayload,
    encode_complex,
    encode_vector,
    to_json_value,
)
from ..fuchsian import classify_fuchsian
from ..hermitian import GroupSpec, trace
from ..reconstruction import (
    Certificate,
    conjugate_into_so21,
    normalize_pair,
    realize_over_trace_field,
)
from ..trace_field import TraceReport, invariant_trace_report, recover_phase, sample_traces
from ..words import WordSampler, display_word

logger = logging.getLogger(__name__)


@dataclass
class CommandContext:
    spec: GroupSpec
    tol: Tolerances
    sampler: WordSampler
    assumed_discrete: bool


@dataclass
class CommandOutcome:
    result: dict[str, Any]
    certificates: list[Certificate]
    trace_samples: list[tuple[str, complex]]


Handler = Callable[[CommandContext], CommandOutcome]


def _outcome(
    result: dict[str, Any],
    certificates: list[Certificate] | None = None,
    trace_samples: list[tuple[str, complex]] | None = None,
) -> CommandOutcome:
    return CommandOutcome(result, certificates or [], trace_samples or [])


def _report_summary(report: TraceReport) -> dict[str, Any]:
    return {
        "is_real": report.is_real,
        "max_imag": report.max_imag,
        "max_relative_imag": report.max_relative_imag,
        "sample_count": len(report.samples),
        "lam_witness": report.lam_witness,
        "witness_word": report.witness_word,
    }


class AnalysisService:
    """Run library operations on a GroupFile and build ReportFiles."""

    def __init__(self, tolerances: Tolerances | None = None):
        self.tolerances = tolerances or Tolerances.from_settings()
        self.handlers: dict[str, Handler] = {
            "validate": self._validate,
            "classify": self._classify,
            "trace-field": self._trace_field,
            "invariant-field": self._invariant_field,
            "normalize": self._normalize,
            "realize": self._realize,
            "so21": self._so21,
            "detect": self._detect,
            "find-lox": self._find_lox,
        }

    @property
    def commands(self) -> list[str]:
        return list(self.handlers)

    def run(
        self,
        command: str,
        group_file: GroupFile,
        seed: int | None = None,
        overrides: dict[str, Any] | None = None,
    ) -> ReportFile:
        """
        Run one command and capture domain errors in the report.

        Args:
            command: one of ``commands``
            group_file: parsed input
            seed: echoed in the report (defaults to RANDOM_SEED)
            overrides: eps_form / eps_class / eps_field / max_length / assume_discrete

        Returns:
            ReportFile with ``error`` set when a domain error occurred
        """
        handler = self.handlers.get(command)
        if handler is None:
            raise KeyError(command)
        overrides = overrides or {}
        seed = settings.RANDOM_SEED if seed is None else seed
        started = time.perf_counter()
        logger.info(f"Running {command} on input {group_file.digest()[:12]}")

        report = ReportFile(command=command, input_digest=group_file.digest(), seed=seed)
        try:
            context = self._context(group_file, overrides)
            outcome = handler(context)
            report.result = {k: to_json_value(v) for k, v in outcome.result.items()}
            report.certificates = [
                CertificatePayload.from_certificate(c) for c in outcome.certificates
            ]
            report.trace_samples = [
                TraceSamplePayload(word=word, trace=encode_complex(value))
                for word, value in outcome.trace_samples
            ]
        except TraceFieldError as e:
            logger.error(f"{command} failed with {e.tag}: {e}")
            report.error = ErrorPayload.from_error(e)

        report.timing_seconds = time.perf_counter() - started
        logger.info(f"{command} finished in {report.timing_seconds:.3f}s (ok={report.ok})")
        return report

    def _context(self, group_file: GroupFile, overrides: dict[str, Any]) -> CommandContext:
        try:
            tol = group_file.resolve_tolerances(
                self.tolerances,
                eps_form=overrides.get("eps_form"),
                eps_class=overrides.get("eps_class"),
                eps_field=overrides.get("eps_field"),
            )
        except ValueError as e:
            raise InvalidParameter("inconsistent tolerances", reason=str(e)) from e
        max_length = overrides.get("max_length") or (
            group_file.sampler.max_length if group_file.sampler else settings.MAX_WORD_LENGTH
        )
        spec = group_file.to_group_spec(tol)
        sampler = WordSampler(max_length=max_length, tol=tol).bind(spec.matrices)
        assumed_discrete = (
            bool(overrides.get("assume_discrete")) or group_file.flags.assumed_discrete
        )
        return CommandContext(spec, tol, sampler, assumed_discrete)

    def _validate(self, ctx: CommandContext) -> CommandOutcome:
        return _outcome(
            {
                "valid": True,
                "generators": [
                    {"label": label, "residual": g.residual}
                    for label, g in zip(ctx.spec.labels, ctx.spec.generators)
                ],
            }
        )

    def _classify_one(self, g: np.ndarray, tol: Tolerances) -> dict[str, Any]:
        entry: dict[str, Any] = {"trace": encode_complex(trace(g))}
        try:
            verdict = classify_element(g, tol)
            entry.update(
                tag=verdict.tag.value,
                margin=verdict.margin,
                lift=encode_complex(verdict.lift),
                fast_path=verdict.fast_path,
            )
            if verdict.tag is ElementType.LOXODROMIC:
                data = loxodromic_data(g, tol)
                phase = recover_phase(trace(g), data.lam, tol)
                entry.update(
                    lam=data.lam,
                    phi=data.phi,
                    eigenvalues=[encode_complex(z) for z in data.eigenvalues],
                    recovered_phi=phase.phi,
                )
            elif verdict.tag.is_parabolic:
                form = parabolic_normal_form(g, tol)
                normal: dict[str, Any] = {"kind": form.kind.value}
                if isinstance(form.form, EllipticRotational):
                    normal.update(phi=form.form.phi, r=form.form.r)
                else:
                    normal.update(s=form.form.s)
                entry.update(
                    normal_form=normal,
                    normal_form_residual=form.residual,
                    fixed_point=encode_vector(form.fixed_point),
                    eigenvalues=[encode_complex(z) for z in verdict.eigenvalues],
                )
            else:
                entry["eigenvalues"] = [encode_complex(z) for z in verdict.eigenvalues]
        except TraceFieldError as e:
            entry["error"] = e.to_dict()
            return entry
        try:
            entry["screw_motion"] = is_screw_motion(g, tol)
        except TraceFieldError as e:
            entry["screw_motion"] = None
            entry["screw_motion_error"] = e.to_dict()
        return entry

    def _classify(self, ctx: CommandContext) -> CommandOutcome:
        return _outcome(
            {
                "elements": [
                    {"label": label, **self._classify_one(g, ctx.tol)}
                    for label, g in zip(ctx.spec.labels, ctx.spec.matrices)
                ]
            }
        )

    def _trace_field(self, ctx: CommandContext) -> CommandOutcome:
        report = sample_traces(ctx.spec, ctx.sampler, ctx.tol)
        return _outcome(
            _report_summary(report),
            trace_samples=[(display_word(s.word), s.trace) for s in report.samples],
        )

    def _invariant_field(self, ctx: CommandContext) -> CommandOutcome:
        report = invariant_trace_report(ctx.spec, ctx.sampler, ctx.tol)
        return _outcome(
            {**_report_summary(report), "cube_check_residual": report.cube_check_residual},
            trace_samples=[(display_word(s.word), s.trace) for s in report.samples],
        )

    def _normalize(self, ctx: CommandContext) -> CommandOutcome:
        if len(ctx.spec.generators) < 2:
            raise InvalidParameter("normalize needs two generators (A loxodromic, B)")
        a, b = ctx.spec.matrices[:2]
        certificate = normalize_pair(a, b, ctx.tol)
        return _outcome(
            {"residual": certificate.residual, **certificate.details}, [certificate]
        )

    def _realize(self, ctx: CommandContext) -> CommandOutcome:
        certificate = realize_over_trace_field(ctx.spec, ctx.tol, ctx.sampler)
        return _outcome({"residual": certificate.residual, **certificate.details}, [certificate])

    def _so21(self, ctx: CommandContext) -> CommandOutcome:
        certificate = conjugate_into_so21(ctx.spec, ctx.tol, ctx.sampler)
        return _outcome({"residual": certificate.residual, **certificate.details}, [certificate])

    def _detect(self, ctx: CommandContext) -> CommandOutcome:
        verdict = classify_fuchsian(ctx.spec, ctx.assumed_discrete, ctx.sampler, ctx.tol)
        reducibility = verdict.irreducibility or irreducibility(ctx.spec, ctx.tol)
        result: dict[str, Any] = {
            "verdict": verdict.verdict.value,
            "assumed_discrete": verdict.assumed_discrete,
            "irreducible": reducibility.irreducible,
            "possibly_elementary": elementary_screen(ctx.spec, ctx.sampler, ctx.tol),
            "cause": verdict.cause,
        }
        if reducibility.witness is not None:
            result["witness"] = encode_vector(reducibility.witness)
            result["witness_type"] = reducibility.witness_type
        if verdict.polar_point is not None:
            result["polar_point"] = encode_vector(verdict.polar_point)
        if verdict.invariant_report is not None:
            result["invariant_field"] = _report_summary(verdict.invariant_report)
        certificates = [verdict.certificate] if verdict.certificate else []
        return _outcome(result, certificates)

    def _find_lox(self, ctx: CommandContext) -> CommandOutcome:
        search = find_loxodromic(ctx.spec, ctx.sampler, ctx.tol)
        data = loxodromic_data(search.element, ctx.tol)
        return _outcome(
            {
                "word": display_word(search.word),
                "searched": search.searched,
                "boosted": search.boosted,
                "base_word": search.base_word,
                "transversal_word": search.transversal_word,
                "power": search.power,
                "lam": data.lam,
                "phi": data.phi,
            }
        )
