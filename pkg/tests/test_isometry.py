from __future__ import annotations

import numpy as np
import pytest

from magic_rigidity.rigidity.dilation import dilate
from magic_rigidity.rigidity.isometry import (
    IsometryEvaluator,
    _bits,
    epr_fidelity,
    fidelity_from_m,
    isometry_output,
    magic_terms,
    output_epr_fidelity,
    output_pauli_expectation,
    swap_isometry_expectation,
)
from magic_rigidity.rigidity.magic_operator import epr_pairs_vector, magic_matrix
from magic_rigidity.rigidity.pauli import pauli_frame
from magic_rigidity.strategy import ideal_parallel, ideal_single_round, perturb
from magic_rigidity.tensor import FeasibilityError, pauli_string


def evaluator(s):
    d = dilate(s)
    return IsometryEvaluator(d, pauli_frame(d))


def pauli_label(x_bits, z_bits):
    """Letter string of X^x Z^z without phase, plus the phase making it a Pauli string."""
    letters, phase = [], 1
    for x, z in zip(x_bits, z_bits):
        if x and z:
            letters.append("Y")
            phase *= -1j  # X Z = -i Y
        else:
            letters.append("X" if x else "Z" if z else "I")
    return "".join(letters), phase


def epr_expectation(m, s, t, u, v):
    """<EPR pairs| X^s Z^t (x) X^u Z^v |EPR pairs> = Tr(W_A W_B^T) / 2^m."""
    la, pa = pauli_label(_bits(s, m), _bits(t, m))
    lb, pb = pauli_label(_bits(u, m), _bits(v, m))
    wa = pa * pauli_string(la)
    wb = pb * pauli_string(lb)
    return np.trace(wa @ wb.T) / 2**m


@pytest.fixture(scope="module")
def ideal_ev():
    return evaluator(ideal_single_round())


def test_identity_label_is_one(ideal_ev):
    iso, direct = ideal_ev.exact_table()
    assert iso[0, 0, 0, 0] == pytest.approx(1.0, abs=1e-12)
    assert direct[0, 0, 0, 0] == pytest.approx(1.0, abs=1e-12)


def test_ideal_n1_table_matches_epr_values(ideal_ev):
    iso, direct = ideal_ev.exact_table()
    expected = np.array([
        epr_expectation(2, s, t, u, v)
        for s in range(4) for t in range(4) for u in range(4) for v in range(4)
    ]).reshape(4, 4, 4, 4)
    np.testing.assert_allclose(iso, expected, atol=1e-12)
    np.testing.assert_allclose(direct, expected, atol=1e-12)


def test_xx_on_epr_pairs():
    ev = evaluator(ideal_single_round())
    val = swap_isometry_expectation(ev, (1, 0), (0, 0), (1, 0), (0, 0))
    assert val.iso_value == pytest.approx(1.0, abs=1e-12)
    assert val.discrepancy <= 1e-12
    with pytest.raises(ValueError):
        swap_isometry_expectation(ev, (1,), (0,), (1,), (0,))


def test_ideal_n2_random_labels():
    ev = evaluator(ideal_parallel(2))
    iso, direct = ev.exact_table()
    rng = np.random.default_rng(0)
    for s, t, u, v in rng.integers(0, 16, size=(40, 4)):
        exp = epr_expectation(4, s, t, u, v)
        assert abs(iso[s, t, u, v] - exp) <= 1e-10
        assert abs(direct[s, t, u, v] - exp) <= 1e-10


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_closed_form_matches_materialized_output(seed):
    s = perturb(ideal_single_round(), 1e-2, seed)
    d = dilate(s)
    frame = pauli_frame(d)
    ev = IsometryEvaluator(d, frame)
    phi = isometry_output(d, frame)
    assert np.linalg.norm(phi) == pytest.approx(1.0, abs=1e-12)
    iso, _ = ev.exact_table()
    rng = np.random.default_rng(seed)
    for lab in rng.integers(0, 4, size=(30, 4)):
        assert abs(output_pauli_expectation(phi, *lab) - iso[tuple(lab)]) <= 1e-12


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_fidelity_bound_is_below_true_fidelity(seed):
    s = perturb(ideal_single_round(), 3e-3, seed)
    d = dilate(s)
    frame = pauli_frame(d)
    fr = epr_fidelity(IsometryEvaluator(d, frame))
    true = output_epr_fidelity(isometry_output(d, frame))
    assert fr.fidelity_bound <= true + 1e-12
    assert fr.imag_part <= 1e-12


def test_certificate_expectation_matches_operator():
    # the weighted label sum is <M> on the output; at the ideal point <M> = 1
    ev = evaluator(ideal_parallel(2))
    fr = epr_fidelity(ev)
    assert fr.m_expectation == pytest.approx(1.0, abs=1e-12)
    epr = epr_pairs_vector(2)
    assert np.vdot(epr, magic_matrix(2) @ epr).real == pytest.approx(1.0, abs=1e-12)
    terms = magic_terms(2)
    identity_weight = sum(w for w, s_, t, u, v in terms if (s_, t, u, v) == (0, 0, 0, 0))
    assert identity_weight == pytest.approx(np.trace(magic_matrix(2)).real / 2**8, abs=1e-12)
    on_epr = sum(w * epr_expectation(4, s_, t, u, v) for w, s_, t, u, v in terms)
    assert on_epr == pytest.approx(1.0, abs=1e-12)


def test_fidelity_from_m_is_linear():
    assert fidelity_from_m(1.0) == 1.0
    assert fidelity_from_m(1.0 - 4 / 9) == pytest.approx(0.0)


def test_sampled_estimator_is_consistent():
    s = perturb(ideal_single_round(), 1e-2, 5)
    ev = evaluator(s)
    iso, _ = ev.exact_table()
    for lab in [(1, 0, 1, 0), (2, 3, 2, 3), (3, 1, 0, 2)]:
        mean, err = ev.sampled(*lab, budget=2000, seed=1)
        assert err > 0
        assert abs(mean - iso[lab]) <= 6 * err + 1e-12


def test_sampled_is_exact_on_ideal():
    ev = evaluator(ideal_parallel(2))
    iso, _ = ev.exact_table()
    mean, err = ev.sampled(3, 5, 3, 5, budget=16, seed=0)
    assert err <= 1e-12
    assert abs(mean - iso[3, 5, 3, 5]) <= 1e-12


def test_three_rounds_require_sampling():
    ev = evaluator(ideal_parallel(3))
    with pytest.raises(FeasibilityError):
        ev.exact_table()
    with pytest.raises(FeasibilityError):
        isometry_output(ev.d, ev.frame)
    mean, err = ev.sampled(0, 0, 0, 0, budget=2, seed=0)
    assert mean == pytest.approx(1.0, abs=1e-12)
