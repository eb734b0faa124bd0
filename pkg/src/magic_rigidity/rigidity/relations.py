"""Residual tables for the dilated observables.

Every row is a state-dependent distance (or its square, where the bound is
stated for the square) together with the shape of the bound it is expected
to satisfy.  ``bound_value`` is that shape evaluated at the strategy's loss
with unit constant, except for the explicit-constant input-switching bound.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass

import numpy as np

from ..strategy import PureStrategy, input_vector, win_probability
from .dilation import DilatedStrategy, d_alice, d_bob, d_cross, other_inputs

CELL_INDICES = tuple(itertools.product(range(3), range(3)))


@dataclass(frozen=True)
class RelationRow:
    id: str
    indices: dict
    residual: float
    bound_kind: str
    bound_value: float | None

    def to_dict(self) -> dict:
        return asdict(self)


def phase_sign(r: int, r2: int, c: int, c2: int) -> int:
    """-1 exactly when the two cells share neither row nor column."""
    return -1 if (r != r2 and c != c2) else 1


def loss(s: PureStrategy) -> float:
    return max(0.0, 1.0 - win_probability(s))


def _sqrt_bound(eps: float, scale: float = 1.0) -> float:
    return scale * math.sqrt(max(eps, 0.0))


def relation_residuals(d: DilatedStrategy, eps: float | None = None) -> list[RelationRow]:
    """Same-round (anti)commutation and cross-round commutation residuals, both players."""
    n = d.n
    if eps is None:
        eps = loss(d.base)
    rows = []
    for side, ops, dist in (("alice", d.alice, d_alice), ("bob", d.bob, d_bob)):
        for k in range(n):
            for (r, c), (r2, c2) in itertools.product(CELL_INDICES, repeat=2):
                o1, o2 = ops[(r, c, k)], ops[(r2, c2, k)]
                sgn = phase_sign(r, r2, c, c2)
                rows.append(RelationRow(
                    f"phase-{side}",
                    {"k": k + 1, "r": r, "c": c, "r2": r2, "c2": c2, "f": int(sgn < 0)},
                    dist(d, o1 @ o2, sgn * (o2 @ o1)),
                    "O(sqrt(eps))",
                    _sqrt_bound(eps),
                ))
        for k, k2 in itertools.combinations(range(n), 2):
            for (r, c), (r2, c2) in itertools.product(CELL_INDICES, repeat=2):
                o1, o2 = ops[(r, c, k)], ops[(r2, c2, k2)]
                rows.append(RelationRow(
                    f"commute-{side}",
                    {"k": k + 1, "k2": k2 + 1, "r": r, "c": c, "r2": r2, "c2": c2},
                    dist(d, o1 @ o2, o2 @ o1),
                    "O(sqrt(eps))",
                    _sqrt_bound(eps),
                ))
    return rows


def _product_of_dilated(ops: dict, dim: int, keys) -> np.ndarray:
    m = np.eye(dim, dtype=complex)
    for key in keys:
        m = m @ ops[key]
    return m


def _embed_primary(d: DilatedStrategy, op: np.ndarray) -> np.ndarray:
    """Base observable on the primary register tensored with identity on ancillas."""
    if d.mode == "inert":
        return op
    return np.kron(op, np.eye(d.ancilla_dim**d.n))


def product_consistency(d: DilatedStrategy, side: str, fixed, p) -> float:
    """E over free inputs of d(base parity observable, ordered product of dilated ones)^2.

    For Alice ``fixed`` is the column vector and the average runs over rows;
    for Bob the roles swap.
    """
    n = d.n
    s = d.base
    fam = s.alice if side == "alice" else s.bob
    ops = d.alice if side == "alice" else d.bob
    dist = d_alice if side == "alice" else d_bob
    dim = d.dims[0] if side == "alice" else d.dims[1]
    vals = []
    for idx in range(3**n):
        free = input_vector(idx, n)
        base = _embed_primary(d, fam.observable(free, fixed, p))
        if side == "alice":
            keys = [(free[k], fixed[k], k) for k in range(n) if p[k]]
        else:
            keys = [(fixed[k], free[k], k) for k in range(n) if p[k]]
        vals.append(dist(d, base, _product_of_dilated(ops, dim, keys)) ** 2)
    return math.fsum(vals) / len(vals)


def input_switch_quantity(s: PureStrategy, i: int, r: int, c: int) -> float:
    """|1 - E_{rows agreeing with r at round i} <psi| A A' |psi>| with rows drawn independently.

    The round-i observable only depends on column c at round i, and the double
    average factorizes into the squared norm of the row-averaged observable.
    """
    n = s.n
    m = 3 ** (n - 1)
    sels = tuple(c for _ in range(n))
    p = tuple(int(j == i) for j in range(n))
    avg = sum(s.alice.observable(other_inputs(n, i, j, r), sels, p) for j in range(m)) / m
    v = avg @ s.psi
    return abs(1.0 - float(np.vdot(v, v).real))


def input_switch_quantity_direct(s: PureStrategy, i: int, r: int, c: int) -> float:
    """Same quantity by explicit double sum over both row vectors."""
    n = s.n
    m = 3 ** (n - 1)
    sels = tuple(c for _ in range(n))
    p = tuple(int(j == i) for j in range(n))
    obs = [s.alice.observable(other_inputs(n, i, j, r), sels, p) for j in range(m)]
    total = []
    for a in obs:
        for b in obs:
            total.append(np.vdot(s.psi, a @ b @ s.psi))
    return abs(1.0 - sum(total) / m**2)


def consistency_residuals(
    d: DilatedStrategy,
    eps: float | None = None,
    selections=None,
) -> list[RelationRow]:
    """Player-switch distances, product consistency, and the input-switch quantity.

    ``selections`` is an iterable of (fixed vector, p) pairs used for the
    product-consistency rows of both players; default is every pair.
    """
    n = d.n
    if eps is None:
        eps = loss(d.base)
    rows = []
    for k in range(n):
        for r, c in CELL_INDICES:
            rows.append(RelationRow(
                "switch",
                {"k": k + 1, "r": r, "c": c},
                d_cross(d, d.alice[(r, c, k)], d.bob[(r, c, k)]),
                "O(sqrt(eps))",
                _sqrt_bound(eps),
            ))
    if selections is None:
        selections = [
            (input_vector(i, n), p)
            for i in range(3**n)
            for p in itertools.product((0, 1), repeat=n)
        ]
    for fixed, p in selections:
        fixed, p = tuple(fixed), tuple(p)
        for side in ("alice", "bob"):
            rows.append(RelationRow(
                f"product-{side}",
                {"fixed": list(fixed), "p": list(p)},
                product_consistency(d, side, fixed, p),
                "O(n*sqrt(eps))",
                _sqrt_bound(eps, n),
            ))
    for i in range(n):
        for r, c in CELL_INDICES:
            rows.append(RelationRow(
                "input-switch",
                {"k": i + 1, "r": r, "c": c},
                input_switch_quantity(d.base, i, r, c),
                "36*eps",
                36.0 * eps,
            ))
    return rows


def max_residual(rows, ident: str) -> float:
    vals = [row.residual for row in rows if row.id == ident]
    return max(vals) if vals else 0.0
