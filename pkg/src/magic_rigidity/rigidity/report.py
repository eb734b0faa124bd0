"""Aggregate residual tables, isometry values and fidelity into one JSON report."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..strategy import PureStrategy, all_parity_vectors, mean_correlation
from .dilation import DilatedStrategy, dilate
from .isometry import (
    MAX_EXACT_ROUNDS,
    FidelityResult,
    IsometryEvaluator,
    IsometryValue,
    _bits,
    epr_fidelity,
    magic_terms,
)
from .pauli import cell_word_residuals, pauli_frame, single_pauli_residuals, word_relation_residuals
from .relations import RelationRow, consistency_residuals, loss, relation_residuals

REPORT_SCHEMA = "magic-rigidity/report"
REPORT_SCHEMA_VERSION = 1
CONVENTION = (
    "qubits per round ordered (A1,A2,B1,B2) with EPR pairs (A1,B1),(A2,B2); "
    "round k owns frame qubits 2k,2k+1; inputs and answers little-endian over rounds; "
    "questions uniform iid"
)


@dataclass
class RigidityReport:
    meta: dict
    relations: list[RelationRow] = field(default_factory=list)
    consistency: dict = field(default_factory=dict)
    fidelity: FidelityResult | None = None
    pauli_table: list[IsometryValue] = field(default_factory=list)

    def max_residual(self, ids=None) -> float:
        vals = [r.residual for r in self.relations if ids is None or r.id in ids]
        return max(vals) if vals else 0.0

    def max_discrepancy(self) -> float:
        return max((p.discrepancy for p in self.pauli_table), default=0.0)

    def relation_ids(self) -> list[str]:
        return sorted({r.id for r in self.relations})

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "schema_version": REPORT_SCHEMA_VERSION,
            "meta": self.meta,
            "relations": [r.to_dict() for r in self.relations],
            "consistency": self.consistency,
            "fidelity": self.fidelity.to_dict() if self.fidelity else None,
            "pauli_table": [p.to_dict() for p in self.pauli_table],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _label_table(ev: IsometryEvaluator, labels, sampled_budget: int | None, seed: int) -> list[IsometryValue]:
    m = ev.m
    out = []
    if sampled_budget is None:
        iso, direct = ev.exact_table()
    for i, (s, t, u, v) in enumerate(labels):
        if sampled_budget is None:
            val = IsometryValue(_bits(s, m), _bits(t, m), _bits(u, m), _bits(v, m),
                                complex(iso[s, t, u, v]), complex(direct[s, t, u, v]))
        else:
            est, err = ev.sampled(s, t, u, v, sampled_budget, seed + i)
            val = IsometryValue(_bits(s, m), _bits(t, m), _bits(u, m), _bits(v, m), est, ev.direct(s, t, u, v), err)
        out.append(val)
    return out


def default_labels(n: int, extra: int = 0, seed: int = 0) -> list[tuple[int, int, int, int]]:
    """Every label for one round; otherwise the certificate's labels plus ``extra`` random ones."""
    size = 2 ** (2 * n)
    if n == 1:
        return [(s, t, u, v) for s in range(size) for t in range(size) for u in range(size) for v in range(size)]
    labels = sorted({(s, t, u, v) for _, s, t, u, v in magic_terms(n)})
    if extra:
        rng = np.random.default_rng(seed)
        labels += [tuple(int(x) for x in row) for row in rng.integers(0, size, size=(extra, 4))]
    return labels


def analyze(
    s: PureStrategy,
    *,
    seed: int | None = None,
    kind: str | None = None,
    eps: float | None = None,
    sampled_budget: int | None = None,
    relations: bool = True,
    consistency: bool = True,
    isometry: bool = True,
    fidelity: bool = True,
    labels=None,
    dilated: DilatedStrategy | None = None,
) -> RigidityReport:
    """Run the enabled checks on one strategy.

    Isometry and fidelity use the exact sum for n <= 2 and the sampled
    estimator otherwise; with n > 2 and no ``sampled_budget`` they are
    skipped and the reason recorded in ``meta["skipped"]``.
    """
    n = s.n
    if eps is None:
        eps = loss(s)
    d = dilated if dilated is not None else dilate(s)
    meta = {
        "n": n,
        "eps": eps,
        "seed": seed,
        "kind": kind if kind is not None else s.meta.get("kind", "ideal"),
        "convention": CONVENTION,
        "distribution": "uniform",
        "dilation": d.mode,
        "skipped": [],
    }
    report = RigidityReport(meta)
    frame = pauli_frame(d)
    if relations:
        report.relations += relation_residuals(d, eps)
        report.relations += single_pauli_residuals(d, frame, eps)
        report.relations += word_relation_residuals(d, frame, eps, seed=seed or 0)
        report.relations += cell_word_residuals(d, frame, eps)
    if consistency:
        report.relations += consistency_residuals(d, eps)
        report.consistency = {
            "".join(map(str, p)): mean_correlation(s, p) for p in all_parity_vectors(n)
        }
    if isometry or fidelity:
        budget = sampled_budget if n > MAX_EXACT_ROUNDS else None
        if n > MAX_EXACT_ROUNDS and sampled_budget is None:
            meta["skipped"].append("isometry: exact sum infeasible beyond two rounds and no sampled budget given")
        else:
            ev = IsometryEvaluator(d, frame)
            if isometry:
                lab = labels if labels is not None else default_labels(n, seed=seed or 0)
                report.pauli_table = _label_table(ev, lab, budget, seed or 0)
            if fidelity:
                report.fidelity = epr_fidelity(ev, sampled=budget is not None, budget=budget or 0, seed=seed or 0)
    return report
