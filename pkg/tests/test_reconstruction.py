"""
Tests for ledger recovery, pair normalization, Burnside bases and realizations.
"""

import numpy as np
import pytest

from trace_fields.classification import matrix_scale
from trace_fields.corpus import corpus_so21, loxodromic_diagonal
from trace_fields.errors import (
    BasisNotFound,
    IllConditioned,
    Reducible,
    TraceFieldNotReal,
)
from trace_fields.hermitian import (
    FORM_MATRIX,
    IDENTITY,
    GroupSpec,
    random_su21,
    trace,
    validate_su21,
)
from trace_fields.reconstruction import (
    CertificateKind,
    DiagonalLoxodromic,
    EntryLedger,
    _third_of_argument,
    burnside_basis,
    conjugate_into_so21,
    diagonal_system,
    diagonal_system_det,
    entry_ledger,
    mixed_system,
    mixed_system_det,
    normalize_pair,
    product_system,
    product_system_det,
    realize_over_trace_field,
    recover_diagonal,
    recover_mixed,
    recover_products,
    trace_form_decompose,
)
from trace_fields.words import WordSampler, evaluate_word

from .conftest import REAL_LOXODROMIC, SCREW_LOXODROMIC, corpus_spec

PARAMETERS = [(2.0, 0.0), (2.0, np.pi / 5), (1.3, -2.1), (7.5, 3.0)]


@pytest.mark.parametrize("lam,phi", PARAMETERS)
def test_system_determinants(lam, phi):
    a = DiagonalLoxodromic(lam, phi)
    assert np.isclose(np.linalg.det(diagonal_system(a)), diagonal_system_det(lam, phi))
    assert np.isclose(np.linalg.det(product_system(a)), product_system_det(a))
    assert np.isclose(product_system_det(a), -2)
    assert np.isclose(np.linalg.det(mixed_system(a)), mixed_system_det(lam, phi))


def test_recover_diagonal_of_identity():
    a = DiagonalLoxodromic(2.0, 0.4)
    ev = a.eigenvalues
    assert np.allclose(recover_diagonal(a, 3, ev.sum(), (1 / ev).sum()), (1, 1, 1))


def test_recover_diagonal_rejects_near_parabolic():
    a = DiagonalLoxodromic(1 + 1e-5, 0.0)
    with pytest.raises(IllConditioned):
        recover_diagonal(a, 3, 3, 3)


def test_products_vanish_for_diagonal_b():
    a = DiagonalLoxodromic(2.0, 0.4)
    assert np.allclose(recover_products(a, IDENTITY), 0)
    assert np.allclose(recover_products(a, loxodromic_diagonal(3.0, 1.1)), 0)


@pytest.mark.parametrize("seed", range(4))
def test_ledger_matches_entries(seed):
    a = DiagonalLoxodromic(2.0, 0.3)
    b = random_su21(seed).matrix
    ledger = entry_ledger(a, b)
    assert ledger.max_difference(EntryLedger.direct(b)) < 1e-8 * matrix_scale(b) ** 2


def test_swapped_ledger_is_the_reversed_matrix():
    b = random_su21(5).matrix
    swapped = EntryLedger.direct(b).swapped()
    assert swapped.max_difference(EntryLedger.direct(FORM_MATRIX @ b @ FORM_MATRIX)) < 1e-12


def _check_normalized(certificate, a, b, entry):
    a_t, b_t = certificate.transformed_generators
    f = certificate.conjugator.matrix
    assert np.allclose(f @ a @ np.linalg.inv(f), a_t)
    assert np.allclose(a_t, np.diag(np.diag(a_t)))
    assert np.isclose(b_t[entry], 1)
    assert certificate.residual < 1e-8
    for rebuilt, actual in zip(certificate.reconstructed, (a_t, b_t)):
        assert np.allclose(rebuilt, actual, atol=1e-8)
    assert np.isclose(trace(b_t), trace(b))


def _imaginary_corner_pair(w: complex, s: float, t: float) -> np.ndarray:
    """L(w, s) @ T with T the vertical translation by i t.

    Row 1 is (1, 0, i t), so b12 = 0 and b13 is purely imaginary, while
    b32 = w and the lower left corner is -|w|^2/2 + i s.
    """
    upper = np.array(
        [[1, w, -abs(w) ** 2 / 2 + 1j * s], [0, 1, -np.conj(w)], [0, 0, 1]], dtype=complex
    )
    lower = FORM_MATRIX @ upper @ FORM_MATRIX
    vertical = np.array([[1, 0, 1j * t], [0, 1, 0], [0, 0, 1]], dtype=complex)
    return lower @ vertical


def test_normalize_pair_b12_branch():
    # reversing the indices moves the vanishing entry from b12 to b32
    b = FORM_MATRIX @ _imaginary_corner_pair(0.6 + 0.3j, 0.4, 0.7) @ FORM_MATRIX
    validate_su21(b)
    assert abs(b[2, 1]) < 1e-15 and abs(b[0, 1]) > 0.5
    assert abs(b[2, 0].real) < 1e-15 and abs(b[2, 0]) > 0.5
    certificate = normalize_pair(REAL_LOXODROMIC, b)
    assert certificate.kind is CertificateKind.FIELD_REALIZATION
    assert certificate.details["branch"] == "b12"
    _check_normalized(certificate, REAL_LOXODROMIC, b, (0, 1))
    assert abs(certificate.transformed_generators[1][2, 1]) < 1e-12


def test_normalize_pair_b32_branch():
    b = _imaginary_corner_pair(0.6 + 0.3j, 0.4, 0.7)
    validate_su21(b)
    assert abs(b[0, 1]) < 1e-15
    assert np.isclose(b[0, 2], 0.7j)
    certificate = normalize_pair(REAL_LOXODROMIC, b)
    assert certificate.details["branch"] == "b32"
    _check_normalized(certificate, REAL_LOXODROMIC, b, (2, 1))
    assert abs(certificate.transformed_generators[1][0, 1]) < 1e-12


def test_normalize_pair_angle_range():
    assert _third_of_argument(complex(-1.0, 0.0)) == pytest.approx(np.pi / 3)
    assert _third_of_argument(complex(-1.0, -0.0)) == pytest.approx(np.pi / 3)
    assert _third_of_argument(1j) == pytest.approx(-np.pi / 6)
    checked = 0
    for seed in range(10):
        try:
            certificate = normalize_pair(SCREW_LOXODROMIC, random_su21(seed).matrix)
        except IllConditioned:
            continue
        assert -np.pi / 3 < certificate.details["alpha"] <= np.pi / 3
        checked += 1
    assert checked >= 5


def test_recover_mixed_worked_example():
    # b12 = 0, b13 = 0.7i, b21 = -conj(w), b23 = -0.7i conj(w), b31 = -|w|^2/2 + 0.4i
    b = _imaginary_corner_pair(0.6 + 0.3j, 0.4, 0.7)
    m12, m13, m23 = recover_mixed(DiagonalLoxodromic(2.0, 0.3), b)
    assert abs(m12) < 1e-9
    assert abs(m13 - (0.28 - 0.1575j)) < 1e-9
    assert abs(m23 - 0.315j) < 1e-9


def test_normalize_pair_hidden_frame():
    s = random_su21(3).matrix
    s_inv = FORM_MATRIX @ s.conj().T @ FORM_MATRIX
    a = s @ loxodromic_diagonal(2.0, np.pi / 5) @ s_inv
    b = s @ corpus_so21("rotation", theta=0.8).matrix @ s_inv
    certificate = normalize_pair(a, b)
    assert np.isclose(certificate.details["lam"], 2)
    assert np.isclose(certificate.details["phi"], np.pi / 5)
    assert certificate.residual < 1e-7 * matrix_scale(b)


def test_normalize_pair_rejects_diagonal_b():
    with pytest.raises(Reducible):
        normalize_pair(REAL_LOXODROMIC, loxodromic_diagonal(3.0, 0.2))


def test_burnside_basis_needs_irreducible_pair():
    sampler = WordSampler(max_length=4, dedup=False).bind(
        [REAL_LOXODROMIC, loxodromic_diagonal(3.0, 0.2)]
    )
    with pytest.raises(BasisNotFound) as excinfo:
        burnside_basis(sampler)
    assert excinfo.value.details["rank"] <= 3


def test_burnside_basis_and_decomposition():
    generators = [random_su21(11).matrix, random_su21(12).matrix]
    basis = burnside_basis(WordSampler(max_length=4, dedup=False).bind(generators))
    assert len(basis.words) == 9
    assert basis.words[0] == ""

    for k, m in enumerate(basis.matrices):
        assert np.allclose(trace_form_decompose(m, basis), np.eye(9)[k], atol=1e-8)

    gamma = evaluate_word("abAbbaBA", generators)
    rebuilt = basis.reconstruct(trace_form_decompose(gamma, basis))
    assert np.linalg.norm(rebuilt - gamma) < 1e-6 * np.linalg.norm(gamma)


def test_realize_random_group():
    spec = corpus_spec("random-irreducible")
    certificate = realize_over_trace_field(spec, sampler=WordSampler(max_length=4))
    assert certificate.kind is CertificateKind.FIELD_REALIZATION
    assert len(certificate.basis_words) == 9
    scale = max(matrix_scale(m) for m in certificate.transformed_generators)
    assert certificate.residual < 1e-7 * scale
    assert certificate.conjugation_residual(spec.matrices) < 1e-8 * scale
    for rebuilt, actual in zip(certificate.reconstructed, certificate.transformed_generators):
        assert np.allclose(rebuilt, actual, atol=1e-7 * scale)


def test_so21_recovers_hidden_real_group(so21_hidden):
    certificate = conjugate_into_so21(so21_hidden, sampler=WordSampler(max_length=4))
    assert certificate.kind is CertificateKind.REAL_FORM
    for m in certificate.transformed_generators:
        assert np.max(np.abs(m.imag)) < 1e-7 * matrix_scale(m)
        assert np.allclose(m.conj().T @ FORM_MATRIX @ m, FORM_MATRIX, atol=1e-7)
    assert "realization_residual" in certificate.details


def test_so21_rejects_reducible_group(sl2z):
    with pytest.raises(Reducible):
        conjugate_into_so21(sl2z, sampler=WordSampler(max_length=3))


def test_so21_rejects_screw_group(screw):
    with pytest.raises(TraceFieldNotReal):
        conjugate_into_so21(screw, sampler=WordSampler(max_length=2))


def test_realize_rejects_reducible_group():
    spec = GroupSpec.from_matrices([REAL_LOXODROMIC, loxodromic_diagonal(3.0, 0.2)])
    with pytest.raises(Reducible):
        realize_over_trace_field(spec, sampler=WordSampler(max_length=2))
