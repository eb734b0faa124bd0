"""Single-round consistency conditions and the anticommutation chain.

Winning forces nine two-party correlations close to 1.  Chaining them with
the state-dependent distance moves X1 Z1 step by step onto -Z1 X1; the audit
replays that chain on an actual strategy and accumulates the true per-step
distances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..strategy import PureStrategy, win_probability

# name -> (side, own input, other player's input) of the single-round output observable
OBSERVABLES = {
    "X1": ("alice", 1, 1), "X2": ("alice", 1, 0), "Z1": ("alice", 0, 0), "Z2": ("alice", 0, 1),
    "W1": ("alice", 2, 0), "W2": ("alice", 2, 1),
    "X3": ("bob", 1, 1), "X4": ("bob", 0, 1), "Z3": ("bob", 0, 0), "Z4": ("bob", 1, 0),
    "W3": ("bob", 2, 0), "W4": ("bob", 2, 1),
}

# (sign, alice word, bob word); each is expected to have expectation near 1
CONDITIONS = (
    (1, ("Z1",), ("Z3",)),
    (1, ("Z2",), ("Z4",)),
    (1, ("Z1", "Z2"), ("W3",)),
    (1, ("X2",), ("X4",)),
    (1, ("X1",), ("X3",)),
    (1, ("X1", "X2"), ("W4",)),
    (-1, ("W1",), ("Z3", "X4")),
    (-1, ("W2",), ("Z4", "X3")),
    (-1, ("W1", "W2"), ("W3", "W4")),
)

# Chain from X1 Z1 to -Z1 X1; consecutive entries are close on the state.
CHAIN = (
    (1, ("X1", "Z1"), ()),
    (1, ("X1", "Z2"), ("W3",)),
    (1, ("X1", "Z2"), ("W3",)),
    (1, ("X1",), ("W3", "Z4")),
    (1, (), ("W3", "Z4", "X3")),
    (-1, ("W2",), ("W3",)),
    (1, ("W1",), ("W3", "W3", "W4")),
    (1, ("W1",), ("W4",)),
    (-1, (), ("W4", "Z3", "X4")),
    (-1, ("Z1",), ("W4", "X4")),
    (-1, ("Z1", "X2"), ("W4",)),
    (-1, ("Z1", "X2", "X2", "X1"), ()),
    (-1, ("Z1", "X1"), ()),
)


def _observables(s: PureStrategy) -> dict:
    out = {}
    for name, (side, own, other) in OBSERVABLES.items():
        fam = s.alice if side == "alice" else s.bob
        out[name] = fam.observable((own,), (other,), (1,))
    return out


def _word(ops: dict, names, dim: int) -> np.ndarray:
    m = np.eye(dim, dtype=complex)
    for name in names:
        m = m @ ops[name]
    return m


def _applied(s: PureStrategy, ops: dict, step) -> np.ndarray:
    sign, alice, bob = step
    a = _word(ops, alice, s.dims[0])
    b = _word(ops, bob, s.dims[1])
    return sign * (a @ s.psi @ b.T)


@dataclass(frozen=True)
class AppendixBReport:
    eps: float
    expectations: tuple[float, ...]
    threshold: float
    step_distances: tuple[float, ...]
    chain_total: float
    direct_residual: float
    flags: tuple[bool, ...] = field(default=())

    @property
    def chain_dominates(self) -> bool:
        return self.direct_residual <= self.chain_total + 1e-9

    @property
    def chain_constant(self) -> float:
        """Chain total divided by sqrt(eps); infinite at eps = 0 with a nonzero total."""
        if self.eps <= 0:
            return 0.0 if self.chain_total == 0 else math.inf
        return self.chain_total / math.sqrt(self.eps)

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "expectations": list(self.expectations),
            "threshold": self.threshold,
            "flags": list(self.flags),
            "step_distances": list(self.step_distances),
            "chain_total": self.chain_total,
            "direct_residual": self.direct_residual,
            "chain_dominates": self.chain_dominates,
        }


def appendix_b_audit(s: PureStrategy) -> AppendixBReport:
    if s.n != 1:
        raise ValueError(f"single-round audit needs n = 1, got n = {s.n}")
    eps = max(0.0, 1.0 - win_probability(s))
    ops = _observables(s)
    exps = []
    for sign, alice, bob in CONDITIONS:
        val = np.vdot(s.psi, _applied(s, ops, (sign, alice, bob)))
        exps.append(float(val.real))
    threshold = 1.0 - 9.0 * eps
    flags = tuple(e >= threshold - 1e-6 for e in exps)
    vecs = [_applied(s, ops, step) for step in CHAIN]
    steps = tuple(float(np.linalg.norm(vecs[i] - vecs[i + 1])) for i in range(len(vecs) - 1))
    total = math.fsum(steps)
    direct = float(np.linalg.norm(vecs[0] - vecs[-1]))
    return AppendixBReport(eps, tuple(exps), threshold, steps, total, direct, flags)
