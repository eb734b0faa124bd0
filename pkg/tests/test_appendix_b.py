from __future__ import annotations

import math

import numpy as np
import pytest

from magic_rigidity.rigidity.appendix_b import CHAIN, CONDITIONS, OBSERVABLES, appendix_b_audit
from magic_rigidity.strategy import CELLS, ideal_parallel, ideal_single_round, perturb
from magic_rigidity.tensor import pauli_string


def test_ideal_observables_match_square():
    s = ideal_single_round()
    for name, (side, own, other) in OBSERVABLES.items():
        fam = s.alice if side == "alice" else s.bob
        r, c = (own, other) if side == "alice" else (other, own)
        sign, label = CELLS[r][c]
        np.testing.assert_allclose(fam.observable((own,), (other,), (1,)), sign * pauli_string(label), atol=1e-12)


def test_ideal_audit_is_exact():
    rep = appendix_b_audit(ideal_single_round())
    assert rep.eps <= 1e-12
    np.testing.assert_allclose(rep.expectations, 1.0, atol=1e-12)
    assert rep.chain_total <= 1e-12
    assert rep.direct_residual <= 1e-12
    assert all(rep.flags) and rep.chain_dominates


def test_chain_endpoints():
    assert CHAIN[0] == (1, ("X1", "Z1"), ())
    assert CHAIN[-1] == (-1, ("Z1", "X1"), ())
    assert len(CONDITIONS) == 9


@pytest.mark.parametrize("eps", [1e-4, 1e-3, 1e-2])
@pytest.mark.parametrize("seed", range(5))
def test_perturbed_conditions_and_chain(eps, seed):
    rep = appendix_b_audit(perturb(ideal_single_round(), eps, seed))
    # each condition loses at most twice the loss on one of nine questions
    assert min(rep.expectations) >= 1 - 18 * rep.eps - 1e-12
    assert rep.chain_dominates
    # twelve steps, each a single-question switch of cost at most 6 sqrt(eps)
    assert rep.chain_total <= 12 * 6 * math.sqrt(rep.eps) + 1e-12
    assert rep.chain_constant == pytest.approx(rep.chain_total / math.sqrt(rep.eps))


def test_requires_one_round():
    with pytest.raises(ValueError):
        appendix_b_audit(ideal_parallel(2))


def test_report_dict_round_trip():
    rep = appendix_b_audit(perturb(ideal_single_round(), 1e-3, 0))
    d = rep.to_dict()
    assert d["chain_dominates"] is True
    assert len(d["step_distances"]) == len(CHAIN) - 1
