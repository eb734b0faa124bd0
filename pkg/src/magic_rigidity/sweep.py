"""Perturbation sweeps and power-law fits of deficits against the loss."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .lemmas import run_lemma_tests
from .rigidity.appendix_b import appendix_b_audit
from .rigidity.dilation import dilate
from .rigidity.isometry import MAX_EXACT_ROUNDS, IsometryEvaluator, epr_fidelity
from .rigidity.pauli import pauli_frame, single_pauli_residuals
from .rigidity.relations import consistency_residuals, max_residual, relation_residuals
from .strategy import KINDS, MAX_DENSE_ROUNDS, ideal_parallel, perturb, win_probability
from .tensor import FeasibilityError

SWEEP_SCHEMA = "magic-rigidity/sweep"
SWEEP_SCHEMA_VERSION = 1
CHECKS = ("relations", "consistency", "isometry", "fidelity", "appendix_b", "lemmas")
MAX_EPS = 0.2
MIN_FIT_POINTS = 3
# values at or below this are rounding noise of an exact zero and are not fitted
NOISE_FLOOR = 1e-13

# CSV columns after the identifying ones; empty when a check is off or not applicable
QUANTITIES = (
    "fidelity_deficit",
    "m_deficit",
    "iso_discrepancy_max",
    "phase_max",
    "commute_max",
    "pauli_max",
    "switch_max",
    "product_max",
    "input_switch_max",
    "appendix_b_min_margin",
    "chain_total",
    "direct_residual",
)
FIT_QUANTITIES = (
    "fidelity_deficit",
    "m_deficit",
    "iso_discrepancy_max",
    "phase_max",
    "commute_max",
    "pauli_max",
    "switch_max",
    "product_max",
    "input_switch_max",
    "direct_residual",
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    n_values: tuple[int, ...] = (1,)
    eps_values: tuple[float, ...] = (1e-4, 3e-4, 1e-3, 3e-3, 1e-2)
    seeds: tuple[int, ...] = tuple(range(10))
    kind: str = "both"
    per_round: bool = False
    checks: tuple[str, ...] = ("relations", "fidelity")
    out_dir: str = "results"
    sampled_budget: int | None = None
    lemma_seeds: int = 100

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "eps_values", tuple(float(e) for e in self.eps_values))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        object.__setattr__(self, "checks", tuple(self.checks))
        self.validate()

    def validate(self) -> None:
        if not self.n_values or any(n < 1 or n > MAX_DENSE_ROUNDS for n in self.n_values):
            raise ConfigError(f"n_values must lie in 1..{MAX_DENSE_ROUNDS}, got {self.n_values}")
        if not self.eps_values or any(not 0.0 <= e <= MAX_EPS for e in self.eps_values):
            raise ConfigError(f"eps_values must lie in [0, {MAX_EPS}], got {self.eps_values}")
        if not self.seeds:
            raise ConfigError("seed list is empty")
        if self.kind not in KINDS:
            raise ConfigError(f"kind must be one of {KINDS}, got {self.kind!r}")
        unknown = set(self.checks) - set(CHECKS)
        if unknown:
            raise ConfigError(f"unknown checks {sorted(unknown)}; available {CHECKS}")
        needs_iso = {"isometry", "fidelity"} & set(self.checks)
        if needs_iso and self.sampled_budget is None and max(self.n_values) > MAX_EXACT_ROUNDS:
            raise ConfigError(f"isometry checks beyond n = {MAX_EXACT_ROUNDS} need a sampled budget")
        if not self.per_round and max(self.n_values) > 2:
            raise ConfigError("non-product perturbations are limited to n <= 2; set per_round")

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known - {"schema_version"}
        if extra:
            raise ConfigError(f"unknown config keys {sorted(extra)}")
        version = data.get("schema_version", SWEEP_SCHEMA_VERSION)
        if version != SWEEP_SCHEMA_VERSION:
            raise ConfigError(f"unsupported config schema_version {version}")
        return cls(**{k: v for k, v in data.items() if k in known})

    @classmethod
    def load(cls, path: str | Path, **overrides) -> "SweepConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_dict(data)

    def with_overrides(self, **overrides) -> "SweepConfig":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_dict(self) -> dict:
        d = asdict(self)
        # where results land is not part of the experiment record
        d.pop("out_dir")
        d["schema_version"] = SWEEP_SCHEMA_VERSION
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in d.items()}


@dataclass(frozen=True)
class FitResult:
    quantity: str
    exponent: float | None
    constant: float | None
    r2: float | None
    points: int
    per_n: dict = field(default_factory=dict)
    skipped: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def _loglog(x, y) -> tuple[float, float, float]:
    lx, ly = np.log(np.asarray(x)), np.log(np.asarray(y))
    design = np.vstack([lx, np.ones_like(lx)]).T
    (slope, icpt), *_ = np.linalg.lstsq(design, ly, rcond=None)
    pred = design @ np.array([slope, icpt])
    ss_res = float(np.sum((ly - pred) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(math.exp(icpt)), r2


def _fit_points(rows, quantity: str):
    xs, ys = [], []
    for row in rows:
        x, y = row.get("eps_measured"), row.get(quantity)
        if x is None or y is None or x <= NOISE_FLOOR or y <= NOISE_FLOOR:
            continue
        xs.append(x)
        ys.append(y)
    return xs, ys


def _fit_one(rows, quantity: str) -> tuple[dict | None, str | None]:
    xs, ys = _fit_points(rows, quantity)
    distinct = {round(math.log10(x), 1) for x in xs}
    if len(distinct) < MIN_FIT_POINTS:
        return None, f"needs at least {MIN_FIT_POINTS} distinct eps points with nonzero deficits, found {len(distinct)}"
    slope, const, r2 = _loglog(xs, ys)
    return {"exponent": slope, "constant": const, "r2": r2, "points": len(xs)}, None


def fit_quantity(rows, quantity: str) -> FitResult:
    """Log-log least squares of a deficit against the measured loss, pooled and per n."""
    pooled, reason = _fit_one(rows, quantity)
    per_n = {}
    for n in sorted({r["n"] for r in rows}):
        sub = [r for r in rows if r["n"] == n]
        fit, why = _fit_one(sub, quantity)
        per_n[str(n)] = fit if fit is not None else {"skipped": why}
    if pooled is None:
        return FitResult(quantity, None, None, None, 0, per_n, reason)
    return FitResult(quantity, pooled["exponent"], pooled["constant"], pooled["r2"], pooled["points"], per_n)


def run_cell(cfg: SweepConfig, n: int, eps: float, seed: int) -> dict:
    """All enabled measurements for one (n, eps, seed) cell."""
    base = ideal_parallel(n)
    s = perturb(base, eps, seed, kind=cfg.kind, per_round=cfg.per_round)
    loss = max(0.0, 1.0 - win_probability(s))
    row = {"n": n, "eps": eps, "seed": seed, "kind": cfg.kind, "eps_measured": loss}
    checks = set(cfg.checks)
    d = dilate(s) if checks & {"relations", "consistency", "isometry", "fidelity"} else None
    if "relations" in checks:
        rel = relation_residuals(d, loss)
        row["phase_max"] = max(max_residual(rel, "phase-alice"), max_residual(rel, "phase-bob"))
        row["commute_max"] = (
            max(max_residual(rel, "commute-alice"), max_residual(rel, "commute-bob")) if n > 1 else None
        )
        frame = pauli_frame(d)
        pr = single_pauli_residuals(d, frame, loss)
        row["pauli_max"] = max(r.residual for r in pr)
    if "consistency" in checks:
        con = consistency_residuals(d, loss)
        row["switch_max"] = max_residual(con, "switch")
        # with one round both quantities are identically zero
        if n > 1:
            row["product_max"] = max(max_residual(con, "product-alice"), max_residual(con, "product-bob"))
            row["input_switch_max"] = max_residual(con, "input-switch")
    if checks & {"isometry", "fidelity"}:
        ev = IsometryEvaluator(d, pauli_frame(d))
        sampled = n > MAX_EXACT_ROUNDS
        if "isometry" in checks and not sampled:
            iso, direct = ev.exact_table()
            row["iso_discrepancy_max"] = float(np.max(np.abs(iso - direct)))
        if "fidelity" in checks:
            fr = epr_fidelity(ev, sampled=sampled, budget=cfg.sampled_budget or 0, seed=seed)
            row["m_deficit"] = max(0.0, 1.0 - fr.m_expectation)
            row["fidelity_deficit"] = max(0.0, 1.0 - fr.fidelity_bound)
    if "appendix_b" in checks and n == 1:
        ab = appendix_b_audit(s)
        row["appendix_b_min_margin"] = min(e - ab.threshold for e in ab.expectations)
        row["chain_total"] = ab.chain_total
        row["direct_residual"] = ab.direct_residual
    return row


@dataclass
class SweepResult:
    config: SweepConfig
    rows: list[dict]
    failures: list[dict]
    fits: list[FitResult]
    lemma_summaries: list = field(default_factory=list)

    def csv_text(self) -> str:
        buf = io.StringIO()
        cols = ["schema_version", "n", "eps", "seed", "kind", "eps_measured", *QUANTITIES]
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(cols)
        for row in self.rows:
            out = []
            for c in cols:
                v = SWEEP_SCHEMA_VERSION if c == "schema_version" else row.get(c)
                out.append("" if v is None else repr(v) if isinstance(v, float) else v)
            w.writerow(out)
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "schema": SWEEP_SCHEMA,
            "schema_version": SWEEP_SCHEMA_VERSION,
            "config": self.config.to_dict(),
            "fits": [f.to_dict() for f in self.fits],
            "failures": self.failures,
            "lemmas": [s.to_dict() for s in self.lemma_summaries],
            "cells": len(self.rows),
        }

    def json_text(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def fit(self, quantity: str) -> FitResult:
        for f in self.fits:
            if f.quantity == quantity:
                return f
        raise KeyError(quantity)

    def write(self, out_dir: str | Path) -> tuple[Path, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        csv_path, json_path = out / "sweep.csv", out / "sweep.json"
        csv_path.write_bytes(self.csv_text().encode("utf-8"))
        json_path.write_text(self.json_text() + "\n", encoding="utf-8")
        return csv_path, json_path


def run_sweep(cfg: SweepConfig) -> SweepResult:
    rows, failures = [], []
    for n in cfg.n_values:
        for eps in cfg.eps_values:
            for seed in cfg.seeds:
                try:
                    rows.append(run_cell(cfg, n, eps, seed))
                except (FeasibilityError, RuntimeError, ValueError) as exc:
                    failures.append({"n": n, "eps": eps, "seed": seed, "error": f"{type(exc).__name__}: {exc}"})
    rows.sort(key=lambda r: (r["n"], r["eps"], r["seed"]))
    failures.sort(key=lambda r: (r["n"], r["eps"], r["seed"]))
    fits = [fit_quantity(rows, q) for q in FIT_QUANTITIES if any(r.get(q) is not None for r in rows)]
    lemmas = run_lemma_tests(cfg.lemma_seeds) if "lemmas" in cfg.checks else []
    return SweepResult(cfg, rows, failures, fits, lemmas)
