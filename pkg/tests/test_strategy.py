from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from magic_rigidity.game import Answer, all_questions, deterministic_tables, win_parallel
from magic_rigidity.strategy import (
    CalibrationError,
    MeasurementFamily,
    PureStrategy,
    all_parity_vectors,
    classical_strategy,
    correlation,
    ideal_parallel,
    ideal_single_round,
    input_index,
    input_vector,
    mean_correlation,
    output_observable,
    perturb,
    strategies_equal,
    strategy_from_json,
    strategy_to_json,
    win_probability,
)
from magic_rigidity.tensor import ContractViolation, FeasibilityError, LayoutError


PERTURBED_2 = perturb(ideal_parallel(2), 1e-3, 2)


def bits(x, n):
    return tuple((x >> k) & 1 for k in range(n))


def brute_force_win(s: PureStrategy) -> float:
    """Sum over questions and answer pairs of the referee's verdict times the joint probability."""
    n, m = s.n, 2**s.n
    total = 0.0
    for q in all_questions(n):
        pa = s.alice.projectors(q.r).reshape(m * m, *s.alice.projectors(q.r).shape[2:])
        pb = s.bob.projectors(q.c)
        pb = pb.reshape(m * m, *pb.shape[2:])
        for xa in range(m * m):
            left = pa[xa] @ s.psi
            for yb in range(m * m):
                ans = Answer(bits(xa // m, n), bits(xa % m, n), bits(yb // m, n), bits(yb % m, n))
                if win_parallel(q, ans):
                    total += np.vdot(s.psi, left @ pb[yb].T).real
    return total / 9**n


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ideal_strategy_wins_with_certainty(n):
    assert abs(win_probability(ideal_parallel(n)) - 1.0) <= 1e-10


def test_ideal_families_are_projective():
    ideal_parallel(2).check()


def test_ideal_rejects_large_n():
    with pytest.raises(FeasibilityError):
        ideal_parallel(4)
    with pytest.raises(ValueError):
        ideal_parallel(0)


@pytest.mark.parametrize("seed_", [0, 1])
def test_win_probability_matches_referee_enumeration(seed_):
    s = perturb(ideal_single_round(), 0.05, seed_)
    assert abs(win_probability(s) - brute_force_win(s)) < 1e-12


def test_win_probability_dense_path_matches_referee_n2():
    s = perturb(ideal_parallel(2), 0.02, 3, per_round=False)
    assert not s.is_product
    assert abs(win_probability(s) - brute_force_win(s)) < 1e-12


def test_product_and_dense_paths_agree():
    s = perturb(ideal_parallel(2), 0.01, 5)
    dense = PureStrategy(2, s.psi, s.alice.to_dense(), s.bob.to_dense())
    assert abs(win_probability(s) - win_probability(dense)) < 1e-12


def test_classical_embedding_reaches_eight_ninths():
    tables = deterministic_tables()
    best = max(win_probability(classical_strategy(a, b)) for a in tables[:16] for b in tables)
    assert best == pytest.approx(8 / 9, abs=1e-12)


@pytest.mark.parametrize("kind", ["state-mix", "measurement-rotate", "both"])
@pytest.mark.parametrize("eps", [1e-4, 1e-2])
def test_perturb_calibration(kind, eps):
    s = perturb(ideal_single_round(), eps, 4, kind=kind)
    assert abs(1.0 - win_probability(s) - eps) <= 1e-4
    s.check()
    assert s.meta["kind"] == kind


def test_perturb_is_deterministic():
    a = perturb(ideal_parallel(2), 1e-3, 9)
    b = perturb(ideal_parallel(2), 1e-3, 9)
    assert strategies_equal(a, b)
    c = perturb(ideal_parallel(2), 1e-3, 10)
    assert not strategies_equal(a, c)


def test_perturb_preserves_product_structure_only_when_asked():
    assert perturb(ideal_parallel(2), 1e-3, 0, per_round=True).is_product
    assert not perturb(ideal_parallel(2), 1e-3, 0, per_round=False).is_product


def test_perturb_rejects_bad_arguments():
    with pytest.raises(ValueError):
        perturb(ideal_single_round(), 0.9, 0)
    with pytest.raises(ValueError):
        perturb(ideal_single_round(), 1e-3, 0, kind="shake")


def test_perturb_reports_unmet_tolerance():
    with pytest.raises(CalibrationError):
        perturb(ideal_single_round(), 1e-2, 0, iterations=2)


def test_zero_eps_returns_ideal_win():
    s = perturb(ideal_single_round(), 0.0, 0)
    assert abs(win_probability(s) - 1.0) < 1e-10


def test_serialization_round_trip_is_bit_exact():
    for s in (ideal_parallel(2), perturb(ideal_parallel(2), 1e-3, 1, per_round=False)):
        t = strategy_from_json(strategy_to_json(s))
        assert strategies_equal(s, t)
        assert t.meta == s.meta
        assert strategy_to_json(t) == strategy_to_json(s)


def test_serialization_rejects_other_documents():
    with pytest.raises(ValueError):
        strategy_from_json('{"schema": "other"}')


@settings(max_examples=30, deadline=None)
@seed(3)
@given(st.integers(min_value=0, max_value=8), st.integers(min_value=0, max_value=8),
       st.integers(min_value=0, max_value=2), st.integers(min_value=0, max_value=2))
def test_observable_ignores_selections_where_parity_is_zero(r, c, sel_a, sel_b):
    s = PERTURBED_2
    rv, cv = input_vector(r, 2), input_vector(c, 2)
    p = (1, 0)
    base = s.alice.observable(rv, cv, p)
    moved = s.alice.observable(rv, (cv[0], sel_a), p)
    np.testing.assert_array_equal(base, moved)
    base_b = s.bob.observable(cv, rv, (0, 1))
    moved_b = s.bob.observable(cv, (sel_b, rv[1]), (0, 1))
    np.testing.assert_array_equal(base_b, moved_b)


@pytest.mark.parametrize("n", [1, 2])
def test_ideal_correlations_are_one(n):
    s = ideal_parallel(n)
    for p in all_parity_vectors(n):
        assert mean_correlation(s, p) == pytest.approx(1.0, abs=1e-12)


def test_correlation_equals_parity_win_probability():
    # <A B> = 1 - 2 Pr[selected parities differ]
    s = perturb(ideal_single_round(), 0.03, 6)
    r, c = (1,), (2,)
    pa = s.alice.grouped(r, c)
    pb = s.bob.grouped(c, r)
    differ = sum(np.vdot(s.psi, pa[x] @ s.psi @ pb[y].T).real for x in (0, 1) for y in (0, 1) if x != y)
    assert correlation(s, r, c, (1,)) == pytest.approx(1 - 2 * differ, abs=1e-12)


def test_output_observable_validation():
    s = ideal_single_round()
    obs = output_observable(s, "alice", (0,), (1,), (2,))
    np.testing.assert_allclose(obs.matrix @ obs.matrix, np.eye(4), atol=1e-12)
    with pytest.raises(ValueError):
        output_observable(s, "carol", (0,), (1,), (2,))
    with pytest.raises(ValueError):
        output_observable(s, "alice", (0,), (2,), (2,))
    with pytest.raises(LayoutError):
        output_observable(s, "alice", (0, 0), (1,), (2,))


def test_broken_family_is_rejected():
    s = ideal_single_round()
    bad = np.array(s.alice.rounds[0])
    bad[0, 0, 0] = bad[0, 0, 0] * 0.5
    fam = MeasurementFamily("alice", 1, rounds=(bad,))
    with pytest.raises(ContractViolation):
        fam.check()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_input_index_round_trip(n):
    for i in range(3**n):
        assert input_index(input_vector(i, n)) == i
