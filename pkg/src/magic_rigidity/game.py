"""Referee for the Magic Square game and its n-fold parallel repetition.

Alice answers a row with bits (a0, a1) and implicitly a2 = a0 ^ a1; Bob answers
a column with (b0, b1) and implicitly b2 = 1 ^ b0 ^ b1.  A round is won when
Alice's entry in Bob's column equals Bob's entry in Alice's row.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


def _check_trit(x: int, what: str) -> int:
    if x not in (0, 1, 2):
        raise ValueError(f"{what} must be in {{0,1,2}}, got {x!r}")
    return int(x)


def _check_bit(x: int, what: str) -> int:
    if x not in (0, 1):
        raise ValueError(f"{what} must be a bit, got {x!r}")
    return int(x)


def alice_entry(c: int, a0: int, a1: int) -> int:
    return (a0, a1, a0 ^ a1)[c]


def bob_entry(r: int, b0: int, b1: int) -> int:
    return (b0, b1, 1 ^ b0 ^ b1)[r]


def win_single(r: int, c: int, alice: tuple[int, int], bob: tuple[int, int]) -> bool:
    r = _check_trit(r, "row")
    c = _check_trit(c, "column")
    a0, a1 = (_check_bit(x, "Alice answer bit") for x in alice)
    b0, b1 = (_check_bit(x, "Bob answer bit") for x in bob)
    return alice_entry(c, a0, a1) == bob_entry(r, b0, b1)


@dataclass(frozen=True)
class Question:
    r: tuple[int, ...]
    c: tuple[int, ...]

    def __post_init__(self):
        r = tuple(_check_trit(x, "row") for x in self.r)
        c = tuple(_check_trit(x, "column") for x in self.c)
        if len(r) != len(c) or not r:
            raise ValueError(f"row and column vectors need equal nonzero length, got {len(r)}, {len(c)}")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "c", c)

    @property
    def n(self) -> int:
        return len(self.r)


@dataclass(frozen=True)
class Answer:
    a0: tuple[int, ...]
    a1: tuple[int, ...]
    b0: tuple[int, ...]
    b1: tuple[int, ...]

    def __post_init__(self):
        fields = {}
        for name in ("a0", "a1", "b0", "b1"):
            fields[name] = tuple(_check_bit(x, name) for x in getattr(self, name))
            object.__setattr__(self, name, fields[name])
        if len({len(v) for v in fields.values()}) != 1:
            raise ValueError("answer bit vectors must share one length")

    @property
    def n(self) -> int:
        return len(self.a0)

    @property
    def a2(self) -> tuple[int, ...]:
        return tuple(x ^ y for x, y in zip(self.a0, self.a1))

    @property
    def b2(self) -> tuple[int, ...]:
        return tuple(1 ^ x ^ y for x, y in zip(self.b0, self.b1))


def win_parallel(q: Question, ans: Answer) -> bool:
    if q.n != ans.n:
        raise ValueError(f"question has {q.n} rounds but answer has {ans.n}")
    return all(
        win_single(q.r[k], q.c[k], (ans.a0[k], ans.a1[k]), (ans.b0[k], ans.b1[k]))
        for k in range(q.n)
    )


def all_questions(n: int):
    """Every question pair in little-endian order (round 0 varies fastest)."""
    for rev in itertools.product(range(9), repeat=n):
        idx = rev[::-1]
        yield Question(tuple(i // 3 for i in idx), tuple(i % 3 for i in idx))


# A deterministic player is a table input -> (x0, x1).
Table = tuple[tuple[int, int], ...]
_ANSWERS: tuple[tuple[int, int], ...] = ((0, 0), (0, 1), (1, 0), (1, 1))
_TABLES: tuple[Table, ...] = tuple(itertools.product(_ANSWERS, repeat=3))


def deterministic_wins(alice: Sequence[tuple[int, int]], bob: Sequence[tuple[int, int]]) -> int:
    """Number of the 9 question pairs won by fixed answer tables."""
    return sum(win_single(r, c, alice[r], bob[c]) for r in range(3) for c in range(3))


def classical_value_single(return_count: bool = False):
    """Best single-round value over all 4^3 x 4^3 deterministic strategy pairs.

    Integer counting only.  With ``return_count`` also returns the number of
    optimal pairs.  Raises AssertionError if any pair wins all nine questions.
    """
    best = -1
    count = 0
    for alice in _TABLES:
        for bob in _TABLES:
            w = deterministic_wins(alice, bob)
            if w == 9:
                raise AssertionError(f"deterministic pair {alice}, {bob} wins every question")
            if w > best:
                best, count = w, 1
            elif w == best:
                count += 1
    value = Fraction(best, 9)
    return (value, count) if return_count else value


def deterministic_tables() -> tuple[Table, ...]:
    return _TABLES
