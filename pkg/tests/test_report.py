from __future__ import annotations

import json

import pytest

from magic_rigidity.rigidity.report import REPORT_SCHEMA_VERSION, analyze, default_labels
from magic_rigidity.strategy import ideal_parallel, ideal_single_round, perturb


def test_ideal_one_round_report_is_exact():
    rep = analyze(ideal_single_round(), seed=0, eps=0.0)
    assert len(rep.pauli_table) == 256
    assert rep.max_residual() <= 1e-12
    assert rep.max_discrepancy() <= 1e-12
    assert rep.fidelity.fidelity_bound == pytest.approx(1.0, abs=1e-12)
    assert all(v == pytest.approx(1.0) for v in rep.consistency.values())
    assert rep.meta["dilation"] == "inert"


def test_report_json_is_versioned_and_sorted():
    rep = analyze(perturb(ideal_single_round(), 1e-3, 0), seed=0)
    doc = json.loads(rep.to_json())
    assert doc["schema_version"] == REPORT_SCHEMA_VERSION
    assert doc["meta"]["distribution"] == "uniform"
    assert rep.to_json() == json.dumps(doc, sort_keys=True, indent=2)
    assert {"phase-alice", "switch", "pauli-anticommute", "word-product"} <= set(rep.relation_ids())


def test_three_rounds_without_budget_skip_isometry():
    rep = analyze(ideal_parallel(3), seed=0, eps=0.0, relations=False, consistency=False)
    assert rep.fidelity is None
    assert rep.meta["skipped"]


def test_default_labels():
    assert len(default_labels(1)) == 256
    labels = default_labels(2, extra=5, seed=1)
    assert len(labels) == len(set(labels[:-5])) + 5
    assert (0, 0, 0, 0) in labels
