"""Swap-isometry Pauli expectations and EPR fidelity.

The isometry copies the approximate Paulis into fresh 2n-qubit output
registers (one per player) that start maximally entangled with junk
registers.  For output Pauli labels (s, t) on Alice and (u, v) on Bob the
output expectation reduces to

    2^{-8n} sum_{a,b,d,e} (-1)^{(b+t).s + (e+v).u}
        <psi'| W^A_{a+s,b+t}^dag W^A_{a,b} (x) W^B_{d+u,e+v}^dag W^B_{d,e} |psi'>

with W^A_{a,b} = X^a Z^b built from the Pauli frame.  Everything is evaluated
in the Schmidt basis of the dilated state, psi' = U_A S U_B^T, so each label
costs only r x r work where r is the Schmidt rank.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..tensor import FeasibilityError
from .dilation import DilatedStrategy
from .pauli import LETTER, PauliFrame, x_part, z_part

MAX_EXACT_ROUNDS = 2
MAX_MATERIALIZED_ROUNDS = 1

# One round of the certificate operator on qubits (A1, A2, B1, B2): weight 1/18 each.
M1_TERMS = ("IXIX", "XIXI", "XXXX", "ZIZI", "IZIZ", "ZZZZ", "XZXZ", "ZXZX", "YYYY")
M1_IDENTITY_WEIGHT = 0.5
M1_TERM_WEIGHT = 1.0 / 18.0


def _bits(x: int, m: int) -> tuple[int, ...]:
    return tuple((x >> i) & 1 for i in range(m))


def _int(bits) -> int:
    return sum(int(b) << i for i, b in enumerate(bits))


def _dot(x: int, y: int) -> int:
    return bin(x & y).count("1") & 1


def _schmidt(psi: np.ndarray):
    u, sv, vh = np.linalg.svd(psi, full_matrices=False)
    keep = sv > 1e-14 * max(sv[0], 1e-300)
    return u[:, keep], sv[keep], vh[keep].T


class IsometryEvaluator:
    """Caches Schmidt-compressed word blocks of one dilated strategy.

    ``exact_table`` needs n <= 2; ``sampled`` works for any n but only
    estimates the closed-form sum.
    """

    def __init__(self, d: DilatedStrategy, frame: PauliFrame):
        self.d = d
        self.frame = frame
        self.m = frame.size
        self.size = 2**self.m
        self.ua, self.sv, self.ub = _schmidt(d.psi)
        self._words = {}
        self._closed = {}
        self._table = None
        # lazily filled X and Z parts per side, keyed by exponent integer
        self._parts = {"alice": ({}, {}), "bob": ({}, {})}

    # words W_{a,b} restricted to the Schmidt span: W @ U
    def _word_cols(self, side: str) -> np.ndarray:
        if side not in self._words:
            m, size = self.m, self.size
            basis = self.ua if side == "alice" else self.ub
            xs = [x_part(self.frame, _bits(i, m), side) for i in range(size)]
            zu = [z_part(self.frame, _bits(i, m), side) @ basis for i in range(size)]
            self._words[side] = np.array([[xs[a] @ zu[b] for b in range(size)] for a in range(size)])
        return self._words[side]

    def _closed_blocks(self, side: str) -> np.ndarray:
        """Compressed closed-form operators indexed [s, t] as r x r blocks."""
        if side not in self._closed:
            m, size = self.m, self.size
            basis = self.ua if side == "alice" else self.ub
            r = basis.shape[1]
            xs = [x_part(self.frame, _bits(i, m), side) for i in range(size)]
            xs_h = [x.conj().T for x in xs]
            # columns Z^b U for every b, side by side
            zu = np.concatenate([z_part(self.frame, _bits(b, m), side) @ basis for b in range(size)], axis=1)
            zu_h = zu.conj().T
            idx = np.arange(size)
            out = np.empty((size, size, r, r), dtype=complex)
            for s in range(size):
                g = sum(xs_h[a ^ s] @ xs[a] for a in range(size))
                k = (zu_h @ (g @ zu)).reshape(size, r, size, r)
                sign = np.array([(-1) ** _dot(b, s) for b in range(size)], dtype=float)
                for t in range(size):
                    # sum over b of sign(b ^ t) * K[b ^ t, b]
                    blocks = k[idx ^ t, :, idx, :]
                    out[s, t] = np.tensordot(sign[idx ^ t], blocks, axes=1)
            self._closed[side] = out
        return self._closed[side]

    def _direct_blocks(self, side: str) -> np.ndarray:
        basis = self.ua if side == "alice" else self.ub
        y = self._word_cols(side)
        return np.einsum("ir,stiq->strq", basis.conj(), y)

    def _pair_table(self, alice_blocks: np.ndarray, bob_blocks: np.ndarray) -> np.ndarray:
        # Tr(S alpha S beta^T) for every (s,t) x (u,v)
        size = self.size
        r = self.sv.size
        weighted = alice_blocks * self.sv[None, None, :, None] * self.sv[None, None, None, :]
        lhs = weighted.reshape(size * size, r * r)
        rhs = bob_blocks.reshape(size * size, r * r)
        return (lhs @ rhs.T).reshape(size, size, size, size)

    def exact_table(self) -> tuple[np.ndarray, np.ndarray]:
        """(iso, direct) arrays indexed [s, t, u, v] over all labels."""
        if self.d.n > MAX_EXACT_ROUNDS:
            raise FeasibilityError(
                f"exact isometry sum has 2^{8 * self.d.n} terms; use sampled mode for n > {MAX_EXACT_ROUNDS}"
            )
        if self._table is None:
            iso = self._pair_table(self._closed_blocks("alice"), self._closed_blocks("bob"))
            iso = iso * 2.0 ** (-4 * self.m)
            direct = self._pair_table(self._direct_blocks("alice"), self._direct_blocks("bob"))
            self._table = (iso, direct)
        return self._table

    def direct(self, s: int, t: int, u: int, v: int) -> complex:
        wa = x_part(self.frame, _bits(s, self.m)) @ z_part(self.frame, _bits(t, self.m))
        wb = x_part(self.frame, _bits(u, self.m), "bob") @ z_part(self.frame, _bits(v, self.m), "bob")
        return complex(np.vdot(self.d.psi, wa @ self.d.psi @ wb.T))

    def sampled(self, s: int, t: int, u: int, v: int, budget: int, seed: int) -> tuple[complex, float]:
        """Monte-Carlo estimate of the closed-form sum and its standard error."""
        m = self.m
        rng = np.random.default_rng(seed)
        draws = rng.integers(0, self.size, size=(budget, 4))
        psi = self.d.psi
        parts = self._parts

        def word(side, a, b):
            xs, zs = parts[side]
            if a not in xs:
                xs[a] = x_part(self.frame, _bits(a, m), side)
            if b not in zs:
                zs[b] = z_part(self.frame, _bits(b, m), side)
            return xs[a] @ zs[b]

        vals = np.empty(budget, dtype=complex)
        for i, (a, b, dd, e) in enumerate(draws):
            a, b, dd, e = int(a), int(b), int(dd), int(e)
            oa = word("alice", a ^ s, b ^ t).conj().T @ word("alice", a, b)
            ob = word("bob", dd ^ u, e ^ v).conj().T @ word("bob", dd, e)
            sign = (-1) ** (_dot(b ^ t, s) + _dot(e ^ v, u))
            vals[i] = sign * np.vdot(psi, oa @ psi @ ob.T)
        mean = complex(vals.mean())
        err = float(np.sqrt((np.abs(vals - mean) ** 2).sum() / max(budget - 1, 1) / budget))
        return mean, err


@dataclass(frozen=True)
class IsometryValue:
    s: tuple[int, ...]
    t: tuple[int, ...]
    u: tuple[int, ...]
    v: tuple[int, ...]
    iso_value: complex
    direct_value: complex
    std_error: float = 0.0

    @property
    def discrepancy(self) -> float:
        return abs(self.iso_value - self.direct_value)

    def to_dict(self) -> dict:
        return {
            "s": list(self.s), "t": list(self.t), "u": list(self.u), "v": list(self.v),
            "iso_value": [self.iso_value.real, self.iso_value.imag],
            "direct_value": [self.direct_value.real, self.direct_value.imag],
            "discrepancy": self.discrepancy,
        }


def swap_isometry_expectation(
    evaluator: IsometryEvaluator,
    s, t, u, v,
    sampled: bool = False,
    budget: int = 4096,
    seed: int = 0,
) -> IsometryValue:
    m = evaluator.m
    for vec in (s, t, u, v):
        if len(vec) != m:
            raise ValueError(f"label length {len(vec)} does not match 2n = {m}")
    si, ti, ui, vi = (_int(x) for x in (s, t, u, v))
    direct = evaluator.direct(si, ti, ui, vi)
    if sampled:
        iso, err = evaluator.sampled(si, ti, ui, vi, budget, seed)
        return IsometryValue(tuple(s), tuple(t), tuple(u), tuple(v), iso, direct, err)
    iso, _ = evaluator.exact_table()
    return IsometryValue(tuple(s), tuple(t), tuple(u), tuple(v), complex(iso[si, ti, ui, vi]), direct)


def magic_terms(n: int):
    """(weight, s, t, u, v) integer labels of the certificate operator, Y phases folded in."""
    per_round = [(M1_IDENTITY_WEIGHT, "IIII")] + [(M1_TERM_WEIGHT, t) for t in M1_TERMS]
    out = []
    for combo in itertools.product(per_round, repeat=n):
        w = 1.0
        xa, za, xb, zb = [], [], [], []
        phase = 1
        for weight, label in combo:
            w *= weight
            for ch, xs, zs in ((label[0], xa, za), (label[1], xa, za), (label[2], xb, zb), (label[3], xb, zb)):
                x, z, p = LETTER[ch]
                xs.append(x)
                zs.append(z)
                phase *= p
        out.append((w * phase, _int(xa), _int(za), _int(xb), _int(zb)))
    return out


@dataclass(frozen=True)
class FidelityResult:
    m_expectation: float
    fidelity_bound: float
    imag_part: float

    def to_dict(self) -> dict:
        return {"m_expectation": self.m_expectation, "fidelity_bound": self.fidelity_bound}


def fidelity_from_m(m_value: float) -> float:
    """Lower bound on EPR fidelity implied by the certificate expectation."""
    return 1.0 - 2.25 * (1.0 - m_value)


def epr_fidelity(evaluator: IsometryEvaluator, sampled: bool = False, budget: int = 4096, seed: int = 0) -> FidelityResult:
    n = evaluator.d.n
    total = 0j
    if sampled:
        for i, (w, s, t, u, v) in enumerate(magic_terms(n)):
            val, _ = evaluator.sampled(s, t, u, v, budget, seed + i)
            total += w * val
    else:
        iso, _ = evaluator.exact_table()
        for w, s, t, u, v in magic_terms(n):
            total += w * iso[s, t, u, v]
    m = float(total.real)
    return FidelityResult(m, fidelity_from_m(m), float(abs(total.imag)))


# --- materialized output state (n = 1 companion route) --------------------


def isometry_output(d: DilatedStrategy, frame: PauliFrame) -> np.ndarray:
    """Output vector indexed [alice, bob, out_A, junk_A, out_B, junk_B].

    Built term by term from the defining sum; only feasible for one round.
    """
    if d.n > MAX_MATERIALIZED_ROUNDS:
        raise FeasibilityError("materializing the isometry output is limited to n = 1")
    m = frame.size
    size = 2**m
    psi = d.psi
    da, db = psi.shape
    wa = [[x_part(frame, _bits(a, m)) @ z_part(frame, _bits(b, m)) for b in range(size)] for a in range(size)]
    wb = [[x_part(frame, _bits(a, m), "bob") @ z_part(frame, _bits(b, m), "bob") for b in range(size)] for a in range(size)]
    # alice-side partial: sum over b of signed W^A_{a,b} per (a, c)
    alice_part = np.zeros((size, size, da, da), dtype=complex)  # [out, junk]
    bob_part = np.zeros((size, size, db, db), dtype=complex)
    for a, b, c in itertools.product(range(size), repeat=3):
        sign = (-1) ** _dot(b, a ^ c)
        alice_part[a ^ c, c] += sign * wa[a][b]
        bob_part[a ^ c, c] += sign * wb[a][b]
    phi = np.einsum("xjik,kl,yqml->imxjyq", alice_part, psi, bob_part)
    return phi * 2.0 ** (-3 * m)


def output_pauli_expectation(phi: np.ndarray, s: int, t: int, u: int, v: int) -> complex:
    size = phi.shape[2]
    idx = np.arange(size)
    za = np.array([(-1) ** _dot(t, x) for x in idx], dtype=float)
    zb = np.array([(-1) ** _dot(v, x) for x in idx], dtype=float)
    moved = phi * za[None, None, :, None, None, None] * zb[None, None, None, None, :, None]
    moved = moved[:, :, idx ^ s][:, :, :, :, idx ^ u]
    return complex(np.vdot(phi, moved))


def output_epr_fidelity(phi: np.ndarray) -> float:
    """Overlap of the two output registers with 2n EPR pairs, junk traced out."""
    size = phi.shape[2]
    diag = np.einsum("abxjxq->abjq", phi) / np.sqrt(size)
    return float(np.vdot(diag, diag).real)
