"""Ancilla dilation of single-round observables.

Each player gets one ancilla per round, of dimension 3**(n-1), prepared in the
uniform superposition over the other rounds' inputs.  The dilated observable
for round k reads the other inputs off ancilla k.

When both measurement families are products over rounds the single-round
observables do not depend on the other inputs, so every dilated observable is
the base observable tensored with identity on all ancillas.  The ancillas then
factor out of every quantity computed here and the ``inert`` mode drops them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..strategy import PureStrategy
from ..tensor import FeasibilityError, RegisterLayout, StateVector, StructuredOperator

MAX_FULL_ROUNDS = 2


def other_inputs(n: int, k: int, j: int, fixed: int) -> tuple[int, ...]:
    """Input vector with ``fixed`` at round k and ancilla index j spread over the rest."""
    vec = []
    rest = j
    for i in range(n):
        if i == k:
            vec.append(fixed)
        else:
            vec.append(rest % 3)
            rest //= 3
    return tuple(vec)


@dataclass(frozen=True, eq=False)
class DilatedStrategy:
    """Dilated state in matrix form plus all single-round dilated observables.

    ``alice[(r, c, k)]`` is the dilated Alice observable for row r, column c,
    round k; ``bob[(r, c, k)]`` the Bob observable for the same cell.  Both
    are dense matrices on the player's local dilated space.
    """

    base: PureStrategy
    mode: str
    psi: np.ndarray
    alice: dict
    bob: dict
    thin_a: np.ndarray = field(repr=False)
    thin_b: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def ancilla_dim(self) -> int:
        return 3 ** (self.n - 1)

    @property
    def dims(self) -> tuple[int, int]:
        return self.psi.shape

    @property
    def layout(self) -> RegisterLayout:
        return full_layout(self.base)

    def alice_structured(self, r: int, c: int, k: int) -> StructuredOperator:
        return _structured(self.base, "alice", r, c, k)

    def bob_structured(self, r: int, c: int, k: int) -> StructuredOperator:
        return _structured(self.base, "bob", r, c, k)

    def full_state(self) -> StateVector:
        """psi tensored with uniform ancillas, in register order A, ancA*, B, ancB*."""
        n = self.n
        m = self.ancilla_dim
        u = np.full(m**n, m ** (-n / 2), dtype=complex)
        big = np.kron(self.base.psi, np.outer(u, u))
        return StateVector(full_layout(self.base), big.reshape(-1))


def full_layout(s: PureStrategy) -> RegisterLayout:
    n = s.n
    m = 3 ** (n - 1)
    regs = [("A", s.dims[0])] + [(f"ancA{k + 1}", m) for k in range(n)]
    regs += [("B", s.dims[1])] + [(f"ancB{k + 1}", m) for k in range(n)]
    return RegisterLayout(tuple(regs))


def single_round_observable(s: PureStrategy, side: str, r: int, c: int, k: int, j: int) -> np.ndarray:
    """Round-k output observable at the input vector encoded by ancilla index j."""
    n = s.n
    if side == "alice":
        inputs = other_inputs(n, k, j, r)
        sels = tuple(c for _ in range(n))
        return s.alice.observable(inputs, sels, tuple(int(i == k) for i in range(n)))
    inputs = other_inputs(n, k, j, c)
    sels = tuple(r for _ in range(n))
    return s.bob.observable(inputs, sels, tuple(int(i == k) for i in range(n)))


def _structured(s: PureStrategy, side: str, r: int, c: int, k: int) -> StructuredOperator:
    m = 3 ** (s.n - 1)
    prim = "A" if side == "alice" else "B"
    anc = f"anc{prim}{k + 1}"
    terms = []
    for j in range(m):
        proj = np.zeros((m, m))
        proj[j, j] = 1.0
        terms.append((1.0, ((prim, single_round_observable(s, side, r, c, k, j)), (anc, proj))))
    return StructuredOperator(full_layout(s), tuple(terms), hermitian=True, unitary=True)


def _local_dilated(s: PureStrategy, side: str, r: int, c: int, k: int) -> np.ndarray:
    """Dense dilated observable on (primary, anc_1, ..., anc_n) of one player."""
    n = s.n
    m = 3 ** (n - 1)
    ops = [single_round_observable(s, side, r, c, k, j) for j in range(m)]
    d = ops[0].shape[0]
    # block-diagonal over ancilla k, identity on the other ancillas
    t = np.zeros((d, m, d, m), dtype=complex)
    for j, op in enumerate(ops):
        t[:, j, :, j] = op
    before = m**k
    after = m ** (n - k - 1)
    # axes: primary, anc_<k (before), anc_k, anc_>k (after)
    t = np.einsum("ajbl,pq,uv->apjubqlv", t, np.eye(before), np.eye(after))
    size = d * m**n
    return t.reshape(size, size)


def _thin(psi: np.ndarray):
    u, sv, vh = np.linalg.svd(psi, full_matrices=False)
    keep = sv > 1e-14 * max(sv[0], 1e-300)
    u, sv, vh = u[:, keep], sv[keep], vh[keep]
    return u * sv, vh.T * sv


def dilate(s: PureStrategy, mode: str = "auto") -> DilatedStrategy:
    """Build the dilated strategy.

    ``mode`` is ``"full"`` (explicit ancillas, n <= 2), ``"inert"`` (product
    strategies only, ancillas dropped) or ``"auto"``.
    """
    n = s.n
    if mode == "auto":
        mode = "inert" if s.is_product or n == 1 else "full"
    if mode == "inert":
        if not (s.is_product or n == 1):
            raise ValueError("inert dilation requires round-product measurements")
        psi = s.psi
        alice = {}
        bob = {}
        for k in range(n):
            for r in range(3):
                for c in range(3):
                    alice[(r, c, k)] = single_round_observable(s, "alice", r, c, k, 0)
                    bob[(r, c, k)] = single_round_observable(s, "bob", r, c, k, 0)
    elif mode == "full":
        if n > MAX_FULL_ROUNDS:
            raise FeasibilityError(
                f"explicit dilation supported for n <= {MAX_FULL_ROUNDS}; "
                "n = 3 needs round-product measurements"
            )
        m = 3 ** (n - 1)
        u = np.full(m**n, m ** (-n / 2), dtype=complex)
        psi = np.kron(s.psi, np.outer(u, u))
        alice = {}
        bob = {}
        for k in range(n):
            for r in range(3):
                for c in range(3):
                    alice[(r, c, k)] = _local_dilated(s, "alice", r, c, k)
                    bob[(r, c, k)] = _local_dilated(s, "bob", r, c, k)
    else:
        raise ValueError(f"unknown dilation mode {mode!r}")
    ta, tb = _thin(psi)
    return DilatedStrategy(s, mode, psi, alice, bob, ta, tb)


# --- distances in matrix form ---------------------------------------------


def d_alice(d: DilatedStrategy, m1: np.ndarray, m2: np.ndarray) -> float:
    """||(M1 - M2) psi'|| for Alice operators."""
    return float(np.linalg.norm(m1 @ d.thin_a - m2 @ d.thin_a))


def d_bob(d: DilatedStrategy, m1: np.ndarray, m2: np.ndarray) -> float:
    return float(np.linalg.norm(m1 @ d.thin_b - m2 @ d.thin_b))


def d_cross(d: DilatedStrategy, ma: np.ndarray, mb: np.ndarray) -> float:
    """||(MA (x) I - I (x) MB) psi'||."""
    return float(np.linalg.norm(ma @ d.psi - d.psi @ mb.T))
