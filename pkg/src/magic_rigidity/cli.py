"""Command-line front end.

Exit codes: 0 success, 1 a checked inequality or residual failed,
2 configuration or feasibility error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .game import classical_value_single
from .lemmas import run_lemma_tests, summaries_to_json
from .rigidity.appendix_b import appendix_b_audit
from .rigidity.magic_operator import implication_audit, spectral_report, spectral_report_product
from .rigidity.report import analyze
from .strategy import KINDS, CalibrationError, MAX_DENSE_ROUNDS, ideal_parallel, ideal_single_round, perturb, win_probability
from .sweep import ConfigError, SweepConfig, run_sweep
from .tensor import FeasibilityError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
OUT_ENV = "MAGIC_RIGIDITY_OUT"
IDEAL_TOL = 1e-8
DEFAULT_N3_BUDGET = 8
CLI_SCHEMA_VERSION = 1


def _out_dir(args) -> Path:
    if getattr(args, "out", None):
        return Path(args.out)
    return Path(os.environ.get(OUT_ENV, "results"))


def _write_json(args, name: str, payload: dict) -> Path:
    out = _out_dir(args)
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return path


def cmd_ideal_check(args) -> int:
    n = args.n
    if n < 1 or n > MAX_DENSE_ROUNDS:
        raise FeasibilityError(f"ideal check supports 1 <= n <= {MAX_DENSE_ROUNDS}, got {n}")
    s = ideal_parallel(n)
    win = win_probability(s)
    budget = args.sampled_budget if args.sampled_budget is not None else DEFAULT_N3_BUDGET
    report = analyze(s, seed=args.seed, kind="ideal", eps=0.0, sampled_budget=budget)
    breaches = []
    if abs(win - 1.0) > IDEAL_TOL:
        breaches.append(f"win probability {win!r}")
    worst = report.max_residual()
    if worst > IDEAL_TOL:
        breaches.append(f"max relation residual {worst!r}")
    disc = report.max_discrepancy()
    if disc > IDEAL_TOL:
        breaches.append(f"max isometry discrepancy {disc!r}")
    if report.fidelity is not None and abs(report.fidelity.fidelity_bound - 1.0) > IDEAL_TOL:
        breaches.append(f"fidelity bound {report.fidelity.fidelity_bound!r}")
    payload = report.to_dict()
    payload["win_probability"] = win
    payload["breaches"] = breaches
    path = _write_json(args, f"ideal_check_n{n}.json", payload)
    status = "FAIL" if breaches else "PASS"
    print(f"ideal-check n={n}: {status} win={win:.12f} max_residual={worst:.3e} max_discrepancy={disc:.3e}")
    for b in breaches:
        print(f"  breach: {b}")
    print(f"report: {path}")
    return EXIT_FAIL if breaches else EXIT_OK


def cmd_classical_value(args) -> int:
    value, count = classical_value_single(return_count=True)
    if args.json:
        payload = {"num": value.numerator, "den": value.denominator, "schema_version": CLI_SCHEMA_VERSION}
        if args.verbose:
            payload["optimal_pairs"] = count
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"{value.numerator}/{value.denominator}")
        if args.verbose:
            print(f"optimal deterministic pairs: {count}")
    return EXIT_OK


def _sweep_config(args) -> SweepConfig:
    overrides = {
        "n_values": args.n,
        "eps_values": args.eps,
        "seeds": list(range(args.seeds)) if args.seeds is not None else None,
        "kind": args.kind,
        "sampled_budget": args.sampled_budget,
        "out_dir": args.out,
    }
    if args.config:
        return SweepConfig.load(args.config, **overrides)
    return SweepConfig().with_overrides(**{k: tuple(v) if isinstance(v, list) else v for k, v in overrides.items()})


def cmd_sweep(args) -> int:
    cfg = _sweep_config(args)
    if args.out is None and os.environ.get(OUT_ENV):
        cfg = cfg.with_overrides(out_dir=os.environ[OUT_ENV])
    result = run_sweep(cfg)
    csv_path, json_path = result.write(cfg.out_dir)
    for fit in result.fits:
        if fit.skipped:
            print(f"{fit.quantity}: fit skipped ({fit.skipped})")
        else:
            print(f"{fit.quantity}: exponent={fit.exponent:.3f} constant={fit.constant:.3g} r2={fit.r2:.3f}")
    for fail in result.failures:
        print(f"cell failure n={fail['n']} eps={fail['eps']} seed={fail['seed']}: {fail['error']}")
    print(f"wrote {csv_path} and {json_path}")
    lemma_fail = any(s.failures for s in result.lemma_summaries)
    return EXIT_FAIL if result.failures or lemma_fail else EXIT_OK


def cmd_lemma_tests(args) -> int:
    seeds = [args.seed] if args.seed is not None else None
    summaries = run_lemma_tests(args.seeds, lemma=args.lemma, seeds=seeds)
    text = summaries_to_json(summaries)
    _write_json(args, "lemma_tests.json", {"schema_version": CLI_SCHEMA_VERSION, "lemmas": json.loads(text)})
    for s in summaries:
        status = "PASS" if s.failures == 0 else "FAIL"
        line = f"{s.lemma}: {status} trials={s.trials} failures={s.failures} min_slack={s.min_slack:.3e}"
        if s.failing_seeds:
            line += f" replay seeds={s.failing_seeds}"
        print(line)
    return EXIT_FAIL if any(s.failures for s in summaries) else EXIT_OK


def cmd_spectrum(args) -> int:
    n = args.n
    dense = spectral_report(n)
    product = spectral_report_product(n)
    audit = implication_audit(trials=args.seeds, seed=args.seed)
    payload = {
        "schema_version": CLI_SCHEMA_VERSION,
        "dense": dense.to_dict(),
        "product": product.to_dict(),
        "implication_audit": audit.to_dict(),
    }
    path = _write_json(args, f"spectrum_n{n}.json", payload)
    ok = dense.passed and product.passed and audit.failures == 0
    print(
        f"spectrum n={n}: {'PASS' if ok else 'FAIL'} top={dense.top_eigenvalue:.12f} "
        f"multiplicity={dense.top_multiplicity} second_abs={dense.second_abs:.12f} "
        f"implication failures={audit.failures}/{audit.trials}"
    )
    print(f"report: {path}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_appendix_b(args) -> int:
    base = ideal_single_round()
    eps = args.eps[0] if args.eps else 0.0
    s = perturb(base, eps, args.seed, kind=args.kind or "both")
    rep = appendix_b_audit(s)
    payload = rep.to_dict() | {"schema_version": CLI_SCHEMA_VERSION, "seed": args.seed, "kind": args.kind or "both"}
    path = _write_json(args, f"appendix_b_seed{args.seed}.json", payload)
    ok = all(rep.flags) and rep.chain_dominates
    print(
        f"appendix-b eps={rep.eps:.3e}: {'PASS' if ok else 'FAIL'} min_expectation={min(rep.expectations):.9f} "
        f"threshold={rep.threshold:.9f} chain_total={rep.chain_total:.3e} direct={rep.direct_residual:.3e}"
    )
    print(f"report: {path}")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="magic-rigidity", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add_out(sp):
        sp.add_argument("--out", default=None, help=f"output directory (default ${OUT_ENV} or ./results)")

    sp = sub.add_parser("ideal-check", help="all residual suites on the ideal strategy")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0, help="seed for sampled labels")
    sp.add_argument("--sampled-budget", type=int, default=None)
    add_out(sp)
    sp.set_defaults(func=cmd_ideal_check)

    sp = sub.add_parser("classical-value", help="exact single-round classical value")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--verbose", action="store_true")
    sp.set_defaults(func=cmd_classical_value)

    sp = sub.add_parser("sweep", help="perturbation sweep with exponent fits")
    sp.add_argument("--config", default=None)
    sp.add_argument("--n", type=int, nargs="+", default=None)
    sp.add_argument("--eps", type=float, nargs="+", default=None)
    sp.add_argument("--seeds", type=int, default=None, help="use seeds 0..N-1")
    sp.add_argument("--kind", choices=KINDS, default=None)
    sp.add_argument("--sampled-budget", type=int, default=None)
    add_out(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("lemma-tests", help="randomized inequality oracles")
    sp.add_argument("--lemma", default=None)
    sp.add_argument("--seeds", type=int, default=500, help="run seeds 0..N-1")
    sp.add_argument("--seed", type=int, default=None, help="replay a single seed")
    add_out(sp)
    sp.set_defaults(func=cmd_lemma_tests)

    sp = sub.add_parser("spectrum", help="certificate operator spectrum and implication audit")
    sp.add_argument("--n", type=int, default=1, choices=(1, 2, 3))
    sp.add_argument("--seeds", type=int, default=1000, help="implication audit trials")
    sp.add_argument("--seed", type=int, default=0)
    add_out(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("appendix-b", help="single-round conditions and anticommutation chain")
    sp.add_argument("--eps", type=float, nargs=1, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--kind", choices=KINDS, default=None)
    add_out(sp)
    sp.set_defaults(func=cmd_appendix_b)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FeasibilityError, ConfigError, CalibrationError, KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
