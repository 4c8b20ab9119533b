"""
Tests for the GroupFile and ReportFile formats.
"""

import json

import numpy as np
import pytest
from pydantic import ValidationError

from trace_fields.config import Tolerances
from trace_fields.corpus import corpus_so21
from trace_fields.errors import NotInGroup, Reducible
from trace_fields.formats import (
    CertificatePayload,
    ErrorPayload,
    GroupFile,
    ReportFile,
    TraceSamplePayload,
    decode_complex,
    decode_matrix,
    encode_complex,
    to_json_value,
)
from trace_fields.hermitian import IDENTITY, trace
from trace_fields.reconstruction import normalize_pair

from .conftest import REAL_LOXODROMIC, SCREW_LOXODROMIC


def test_group_file_round_trip():
    group_file = GroupFile.from_matrices([REAL_LOXODROMIC, SCREW_LOXODROMIC], max_length=4)
    parsed = GroupFile.model_validate_json(group_file.model_dump_json())
    assert parsed == group_file
    assert parsed.sampler.max_length == 4
    for ours, theirs in zip(parsed.matrices(), [REAL_LOXODROMIC, SCREW_LOXODROMIC]):
        assert np.array_equal(ours, theirs)


def test_complex_pairs():
    assert encode_complex(1 - 2j) == (1.0, -2.0)
    assert decode_complex([0.5, 3]) == 0.5 + 3j


def test_group_file_is_strict():
    payload = json.loads(GroupFile.from_matrices([IDENTITY]).model_dump_json())
    with pytest.raises(ValidationError):
        GroupFile.model_validate({**payload, "format_version": 2})
    with pytest.raises(ValidationError):
        GroupFile.model_validate({**payload, "comment": "extra"})
    with pytest.raises(ValidationError):
        GroupFile.model_validate({**payload, "generators": [payload["generators"][0][:2]]})
    with pytest.raises(ValidationError):
        GroupFile.model_validate({**payload, "generators": []})
    with pytest.raises(ValidationError):
        GroupFile.model_validate({**payload, "sampler": {"max_length": 13}})


def test_group_spec_reports_offending_generator():
    bad = REAL_LOXODROMIC.copy()
    bad[0, 0] = 3
    group_file = GroupFile.from_matrices([IDENTITY, bad])
    with pytest.raises(NotInGroup) as excinfo:
        group_file.to_group_spec(Tolerances())
    assert excinfo.value.details["generator"] == 1


def test_tolerance_resolution_order():
    group_file = GroupFile.model_validate(
        {
            "generators": json.loads(GroupFile.from_matrices([IDENTITY]).model_dump_json())[
                "generators"
            ],
            "tolerances": {"eps_field": 1e-6, "eps_class": 1e-7},
        }
    )
    tol = group_file.resolve_tolerances(Tolerances(), eps_field=1e-5)
    assert tol.eps_class == 1e-7
    assert tol.eps_field == 1e-5
    assert tol.eps_form == Tolerances().eps_form


def test_digest_is_stable():
    first = GroupFile.from_matrices([REAL_LOXODROMIC])
    second = GroupFile.from_matrices([REAL_LOXODROMIC.copy()])
    assert first.digest() == second.digest()
    assert first.digest() != GroupFile.from_matrices([SCREW_LOXODROMIC]).digest()


def test_json_values():
    assert to_json_value(np.float64(1.5)) == 1.5
    assert to_json_value(np.bool_(True)) is True
    assert to_json_value(2 + 1j) == [2.0, 1.0]
    assert to_json_value({"v": np.array([1, 2])}) == {"v": [1, 2]}


def test_report_with_error():
    error = Reducible("common invariant line", witness=[[1.0, 0.0]])
    report = ReportFile(command="so21", input_digest="x", error=ErrorPayload.from_error(error))
    assert not report.ok
    parsed = ReportFile.model_validate_json(report.model_dump_json())
    assert parsed.error.tag == "Reducible"
    assert parsed.error.details == {"witness": [[1.0, 0.0]]}


def test_report_with_certificate_round_trip():
    rotation = corpus_so21("rotation", theta=0.8).matrix
    certificate = normalize_pair(SCREW_LOXODROMIC, rotation)
    group_file = GroupFile.from_matrices([SCREW_LOXODROMIC, rotation])
    report = ReportFile(
        command="normalize",
        input_digest=group_file.digest(),
        seed=3,
        result={"branch": certificate.details["branch"]},
        certificates=[CertificatePayload.from_certificate(certificate)],
        trace_samples=[
            TraceSamplePayload(word="b", trace=encode_complex(trace(rotation))),
        ],
    )
    parsed = ReportFile.model_validate_json(report.model_dump_json())
    assert parsed == report
    assert parsed.ok

    payload = parsed.certificates[0]
    assert payload.kind == "FieldRealization"
    assert payload.residual == certificate.residual
    assert np.array_equal(decode_matrix(payload.conjugator), certificate.conjugator.matrix)
    for ours, theirs in zip(payload.transformed_generators, certificate.transformed_generators):
        assert np.array_equal(decode_matrix(ours), theirs)
    assert payload.details["lam"] == certificate.details["lam"]
    assert decode_complex(parsed.trace_samples[0].trace) == trace(rotation)
