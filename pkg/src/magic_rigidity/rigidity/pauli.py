"""Approximate Pauli observables extracted from the dilated strategy.

Round k (0-based) owns qubits 2k and 2k+1.  Each frame member is the dilated
observable of the square cell that carries the corresponding single-qubit
Pauli in the ideal strategy:

    X on qubit 2k   <- cell (1, 1)  "XI"
    X on qubit 2k+1 <- cell (1, 0)  "IX"
    Z on qubit 2k   <- cell (0, 0)  "ZI"
    Z on qubit 2k+1 <- cell (0, 1)  "IZ"

Bob uses the same cells, so in the ideal strategy both players' frames are
the same Pauli matrices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..strategy import CELLS
from ..tensor import DenseOperator, RegisterLayout
from .dilation import DilatedStrategy, d_alice, d_bob, d_cross
from .relations import CELL_INDICES, RelationRow, _sqrt_bound, loss

FRAME_CELLS = {"X": ((1, 1), (1, 0)), "Z": ((0, 0), (0, 1))}


@dataclass(frozen=True, eq=False)
class PauliFrame:
    n: int
    x: tuple[np.ndarray, ...]
    z: tuple[np.ndarray, ...]
    xb: tuple[np.ndarray, ...]
    zb: tuple[np.ndarray, ...]

    @property
    def size(self) -> int:
        return 2 * self.n


@dataclass(frozen=True)
class PauliWord:
    """X exponents ``a`` and Z exponents ``b`` over the 2n frame qubits.

    Alice words multiply frame members in ascending qubit order, Bob words in
    descending order: ``X^a Z^b`` versus ``(X^B)^a (Z^B)^b``.
    """

    a: tuple[int, ...]
    b: tuple[int, ...]
    side: str = "alice"

    def __post_init__(self):
        a = tuple(int(v) for v in self.a)
        b = tuple(int(v) for v in self.b)
        if len(a) != len(b) or any(v not in (0, 1) for v in a + b):
            raise ValueError("word exponents must be equal-length bit vectors")
        if self.side not in ("alice", "bob"):
            raise ValueError(f"unknown side {self.side!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


def pauli_frame(d: DilatedStrategy) -> PauliFrame:
    x, z, xb, zb = [], [], [], []
    for k in range(d.n):
        for q in range(2):
            rx, cx = FRAME_CELLS["X"][q]
            rz, cz = FRAME_CELLS["Z"][q]
            x.append(d.alice[(rx, cx, k)])
            z.append(d.alice[(rz, cz, k)])
            xb.append(d.bob[(rx, cx, k)])
            zb.append(d.bob[(rz, cz, k)])
    return PauliFrame(d.n, tuple(x), tuple(z), tuple(xb), tuple(zb))


def _ordered(ops, bits, descending: bool) -> np.ndarray:
    idx = range(len(ops) - 1, -1, -1) if descending else range(len(ops))
    m = np.eye(ops[0].shape[0], dtype=complex)
    for i in idx:
        if bits[i]:
            m = m @ ops[i]
    return m


def x_part(frame: PauliFrame, a, side: str = "alice") -> np.ndarray:
    return _ordered(frame.x if side == "alice" else frame.xb, a, side == "bob")


def z_part(frame: PauliFrame, b, side: str = "alice") -> np.ndarray:
    return _ordered(frame.z if side == "alice" else frame.zb, b, side == "bob")


def word_matrix(frame: PauliFrame, word: PauliWord) -> np.ndarray:
    if len(word.a) != frame.size:
        raise ValueError(f"word length {len(word.a)} does not match frame size {frame.size}")
    return x_part(frame, word.a, word.side) @ z_part(frame, word.b, word.side)


def word_to_observable(frame: PauliFrame, word: PauliWord) -> DenseOperator:
    m = word_matrix(frame, word)
    reg = "A" if word.side == "alice" else "B"
    return DenseOperator(RegisterLayout(((reg, m.shape[0]),)), m, hermitian=None, unitary=True)


# Single-qubit letter -> (x bit, z bit, phase) with Y = i X Z.
LETTER = {"I": (0, 0, 1), "X": (1, 0, 1), "Z": (0, 1, 1), "Y": (1, 1, 1j)}


def label_to_word(label: str) -> tuple[tuple[int, ...], tuple[int, ...], complex]:
    """Pauli string -> (a, b, phase) with string = phase * X^a Z^b."""
    a, b, ph = [], [], 1
    for ch in label:
        xa, zb, p = LETTER[ch]
        a.append(xa)
        b.append(zb)
        ph *= p
    return tuple(a), tuple(b), ph


def cell_word(n: int, r: int, c: int, k: int) -> tuple[tuple[int, ...], tuple[int, ...], complex]:
    """Frame word reproducing cell (r, c) of round k, with its scalar factor."""
    sign, label = CELLS[r][c]
    a2, b2, ph = label_to_word(label)
    a = [0] * (2 * n)
    b = [0] * (2 * n)
    a[2 * k], a[2 * k + 1] = a2
    b[2 * k], b[2 * k + 1] = b2
    return tuple(a), tuple(b), sign * ph


def single_pauli_residuals(d: DilatedStrategy, frame: PauliFrame, eps: float | None = None) -> list[RelationRow]:
    """The five single-qubit relation families: consistency, anticommutation, commutation."""
    if eps is None:
        eps = loss(d.base)
    b = _sqrt_bound(eps)
    rows = []
    m = frame.size
    for i in range(m):
        rows.append(RelationRow("pauli-consistency-x", {"i": i + 1}, d_cross(d, frame.x[i], frame.xb[i]), "O(sqrt(eps))", b))
        rows.append(RelationRow("pauli-consistency-z", {"i": i + 1}, d_cross(d, frame.z[i], frame.zb[i]), "O(sqrt(eps))", b))
        xz = frame.x[i] @ frame.z[i]
        zx = frame.z[i] @ frame.x[i]
        rows.append(RelationRow("pauli-anticommute", {"i": i + 1}, d_alice(d, xz, -zx), "O(sqrt(eps))", b))
    for i, j in itertools.permutations(range(m), 2):
        rows.append(RelationRow("pauli-commute-x", {"i": i + 1, "j": j + 1},
                                d_alice(d, frame.x[i] @ frame.x[j], frame.x[j] @ frame.x[i]), "O(sqrt(eps))", b))
        rows.append(RelationRow("pauli-commute-z", {"i": i + 1, "j": j + 1},
                                d_alice(d, frame.z[i] @ frame.z[j], frame.z[j] @ frame.z[i]), "O(sqrt(eps))", b))
    return rows


def _bits(x: int, m: int) -> tuple[int, ...]:
    return tuple((x >> i) & 1 for i in range(m))


def word_relation_residuals(
    d: DilatedStrategy,
    frame: PauliFrame,
    eps: float | None = None,
    max_pairs: int = 256,
    seed: int = 0,
) -> list[RelationRow]:
    """Multi-qubit word relations: product rule and cross-player consistency.

    The product rule is checked on every label quadruple when there are at
    most ``max_pairs`` of them, otherwise on a seeded uniform sample.
    """
    if eps is None:
        eps = loss(d.base)
    n = d.n
    m = frame.size
    size = 2**m
    xs = [x_part(frame, _bits(i, m)) for i in range(size)]
    zs = [z_part(frame, _bits(i, m)) for i in range(size)]
    xbs = [x_part(frame, _bits(i, m), "bob") for i in range(size)]
    zbs = [z_part(frame, _bits(i, m), "bob") for i in range(size)]
    rows = []
    for ia in range(size):
        for ib in range(size):
            rows.append(RelationRow(
                "word-consistency",
                {"a": list(_bits(ia, m)), "b": list(_bits(ib, m))},
                d_cross(d, xs[ia] @ zs[ib], zbs[ib] @ xbs[ia]),
                "O(n*sqrt(eps))",
                _sqrt_bound(eps, n),
            ))
    total = size**4
    if total <= max_pairs:
        quads = list(itertools.product(range(size), repeat=4))
    else:
        rng = np.random.default_rng(seed)
        quads = [tuple(int(v) for v in q) for q in rng.integers(0, size, size=(max_pairs, 4))]
    for ia, ib, ia2, ib2 in quads:
        lhs = xs[ia] @ zs[ib] @ xs[ia2] @ zs[ib2]
        sign = (-1) ** bin(ia2 & ib).count("1")
        rhs = sign * (xs[ia ^ ia2] @ zs[ib ^ ib2])
        rows.append(RelationRow(
            "word-product",
            {"a": list(_bits(ia, m)), "b": list(_bits(ib, m)), "a2": list(_bits(ia2, m)), "b2": list(_bits(ib2, m))},
            d_alice(d, lhs, rhs),
            "O(n^2*sqrt(eps))",
            _sqrt_bound(eps, n * n),
        ))
    return rows


def cell_word_residuals(d: DilatedStrategy, frame: PauliFrame, eps: float | None = None) -> list[RelationRow]:
    """Distance between each dilated cell observable and its frame word, both players."""
    if eps is None:
        eps = loss(d.base)
    n = d.n
    rows = []
    for k in range(n):
        for r, c in CELL_INDICES:
            a, b, ph = cell_word(n, r, c, k)
            wa = ph * word_matrix(frame, PauliWord(a, b, "alice"))
            wb = ph * word_matrix(frame, PauliWord(a, b, "bob"))
            rows.append(RelationRow("cell-word-alice", {"k": k + 1, "r": r, "c": c},
                                    d_alice(d, d.alice[(r, c, k)], wa), "O(sqrt(eps))", _sqrt_bound(eps)))
            rows.append(RelationRow("cell-word-bob", {"k": k + 1, "r": r, "c": c},
                                    d_bob(d, d.bob[(r, c, k)], wb), "O(sqrt(eps))", _sqrt_bound(eps)))
    return rows
