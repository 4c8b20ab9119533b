"""
File formats: GroupFile (input) and ReportFile (output).

Complex numbers are [re, im] pairs and matrices are 3x3 nested lists of such
pairs. Unknown fields are rejected and ``format_version`` must be 1.
"""

import hashlib
from collections.abc import Sequence
from enum import Enum
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, JsonValue, field_validator

from .config import Tolerances
from .errors import NotInGroup, TraceFieldError
from .hermitian import GroupSpec, validate_su21
from .reconstruction import Certificate

FORMAT_VERSION = 1

ComplexPair = tuple[float, float]
MatrixPayload = list[list[ComplexPair]]


def encode_complex(z: complex) -> ComplexPair:
    z = complex(z)
    return float(z.real), float(z.imag)


def decode_complex(pair: Sequence[float]) -> complex:
    return complex(pair[0], pair[1])


def encode_matrix(m: Any) -> MatrixPayload:
    return [[encode_complex(z) for z in row] for row in np.asarray(m, dtype=complex)]


def decode_matrix(payload: MatrixPayload) -> np.ndarray:
    return np.array([[decode_complex(p) for p in row] for row in payload], dtype=complex)


def encode_vector(v: Any) -> list[ComplexPair]:
    return [encode_complex(z) for z in np.asarray(v, dtype=complex).reshape(-1)]


def to_json_value(value: Any) -> JsonValue:
    """Convert numpy scalars, complex numbers, arrays and enums to plain JSON values."""
    if isinstance(value, Enum):
        return to_json_value(value.value)
    if isinstance(value, bool | np.bool_):
        return bool(value)
    if isinstance(value, int | np.integer):
        return int(value)
    if isinstance(value, float | np.floating):
        return float(value)
    if isinstance(value, complex | np.complexfloating):
        return list(encode_complex(value))
    if isinstance(value, np.ndarray):
        return [to_json_value(x) for x in value.tolist()]
    if isinstance(value, dict):
        return {str(k): to_json_value(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [to_json_value(x) for x in value]
    if value is None or isinstance(value, str):
        return value
    return str(value)


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GroupFlags(StrictModel):
    assumed_discrete: bool = False


class ToleranceOverrides(StrictModel):
    eps_form: float | None = Field(default=None, gt=0)
    eps_class: float | None = Field(default=None, gt=0)
    eps_field: float | None = Field(default=None, gt=0)
    eps_solve: float | None = Field(default=None, gt=0)
    eps_cert: float | None = Field(default=None, gt=0)


class SamplerOptions(StrictModel):
    max_length: int = Field(default=6, ge=1, le=12)


class GroupFile(StrictModel):
    """Generators of a group plus flags, tolerance overrides and sampler options."""

    format_version: Literal[1] = FORMAT_VERSION
    generators: list[MatrixPayload] = Field(min_length=1)
    flags: GroupFlags = Field(default_factory=GroupFlags)
    tolerances: ToleranceOverrides | None = None
    sampler: SamplerOptions | None = None

    @field_validator("generators")
    @classmethod
    def _check_shapes(cls, generators: list[MatrixPayload]) -> list[MatrixPayload]:
        for index, m in enumerate(generators):
            if len(m) != 3 or any(len(row) != 3 for row in m):
                raise ValueError(f"generator {index} is not a 3x3 matrix")
        return generators

    @classmethod
    def from_matrices(
        cls,
        matrices: Sequence[Any],
        assumed_discrete: bool = False,
        max_length: int | None = None,
    ) -> "GroupFile":
        return cls(
            generators=[encode_matrix(m) for m in matrices],
            flags=GroupFlags(assumed_discrete=assumed_discrete),
            sampler=SamplerOptions(max_length=max_length) if max_length else None,
        )

    def matrices(self) -> list[np.ndarray]:
        return [decode_matrix(m) for m in self.generators]

    def resolve_tolerances(self, base: Tolerances, **overrides: float | None) -> Tolerances:
        """File overrides on top of ``base``, then explicit overrides on top of those."""
        file_values = self.tolerances.model_dump() if self.tolerances else {}
        return base.with_overrides(**file_values).with_overrides(**overrides)

    def to_group_spec(self, tol: Tolerances) -> GroupSpec:
        """Validate every generator.

        Raises:
            NotInGroup: with the offending generator index in ``details``
        """
        generators = []
        for index, m in enumerate(self.matrices()):
            try:
                generators.append(validate_su21(m, tol))
            except NotInGroup as e:
                e.details["generator"] = index
                raise
        return GroupSpec(generators=tuple(generators), assumed_discrete=self.flags.assumed_discrete)

    def digest(self) -> str:
        return hashlib.sha256(self.model_dump_json().encode("utf-8")).hexdigest()


class CertificatePayload(StrictModel):
    kind: str
    conjugator: MatrixPayload
    transformed_generators: list[MatrixPayload]
    residual: float
    basis_words: list[str] | None = None
    details: dict[str, JsonValue] = Field(default_factory=dict)

    @classmethod
    def from_certificate(cls, certificate: Certificate) -> "CertificatePayload":
        return cls(
            kind=certificate.kind.value,
            conjugator=encode_matrix(certificate.conjugator.matrix),
            transformed_generators=[encode_matrix(m) for m in certificate.transformed_generators],
            residual=float(certificate.residual),
            basis_words=list(certificate.basis_words) if certificate.basis_words else None,
            details={k: to_json_value(v) for k, v in certificate.details.items()},
        )


class TraceSamplePayload(StrictModel):
    word: str
    trace: ComplexPair


class ErrorPayload(StrictModel):
    tag: str
    message: str
    details: dict[str, JsonValue] = Field(default_factory=dict)

    @classmethod
    def from_error(cls, error: TraceFieldError) -> "ErrorPayload":
        return cls(
            tag=error.tag,
            message=error.message,
            details={k: to_json_value(v) for k, v in error.details.items()},
        )


class ReportFile(StrictModel):
    format_version: Literal[1] = FORMAT_VERSION
    command: str
    input_digest: str
    seed: int = 0
    result: dict[str, JsonValue] = Field(default_factory=dict)
    certificates: list[CertificatePayload] = Field(default_factory=list)
    trace_samples: list[TraceSamplePayload] = Field(default_factory=list)
    error: ErrorPayload | None = None
    timing_seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.error is None
