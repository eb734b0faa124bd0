"""Entangled strategies for the parallel Magic Square game.

States are held in matrix form: a joint vector over Alice (dim ``dA``) then
Bob (dim ``dB``) is the row-major flattening of a ``dA x dB`` matrix ``psi``.
An Alice operator ``P`` acts as ``P @ psi`` and a Bob operator ``Q`` as
``psi @ Q.T``, so ``<psi| P (x) Q |psi> = Tr(psi^H P psi Q^T)``.

Measurement families are indexed by ``[input, x0, x1]`` where ``input`` is the
little-endian base-3 code of the question vector and ``x0``, ``x1`` are the
little-endian integer codes of the two answer bit vectors.
"""

from __future__ import annotations

import base64
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .tensor import (
    ContractViolation,
    DenseOperator,
    FeasibilityError,
    LayoutError,
    RegisterLayout,
    StateVector,
    pauli_string,
)

SCHEMA_VERSION = 1
MAX_DENSE_ROUNDS = 3
PROJ_TOL = 1e-10

# Cell (r, c) of the ideal square; each entry is a sign and a two-qubit Pauli label.
CELLS = (
    ((1, "ZI"), (1, "IZ"), (1, "ZZ")),
    ((1, "IX"), (1, "XI"), (1, "XX")),
    ((-1, "ZX"), (-1, "XZ"), (1, "YY")),
)

KINDS = ("state-mix", "measurement-rotate", "both")


class CalibrationError(RuntimeError):
    """Perturbation could not be tuned to the requested loss."""


def cell_operator(r: int, c: int) -> np.ndarray:
    sign, label = CELLS[r][c]
    return sign * pauli_string(label)


def entry_bit(side: str, sel: int, x0, x1):
    """Square entry picked by ``sel`` from a two-bit answer (works on arrays)."""
    if sel == 0:
        return x0
    if sel == 1:
        return x1
    return x0 ^ x1 ^ (1 if side == "bob" else 0)


def input_index(vec: Sequence[int]) -> int:
    return int(sum(int(v) * 3**k for k, v in enumerate(vec)))


def input_vector(index: int, n: int) -> tuple[int, ...]:
    return tuple((index // 3**k) % 3 for k in range(n))


def _bits(x: int, n: int) -> tuple[int, ...]:
    return tuple((x >> k) & 1 for k in range(n))


def _kron_all(mats) -> np.ndarray:
    m = np.ones((1, 1), dtype=complex)
    for x in mats:
        m = np.kron(m, x)
    return m


@dataclass(frozen=True, eq=False)
class MeasurementFamily:
    """Projective measurements of one player for every question vector.

    Exactly one of ``rounds`` (per-round families, shape ``(3, 2, 2, d_k, d_k)``
    each, combined by Kronecker product with round 0 most significant) and
    ``dense`` (shape ``(3**n, 2**n, 2**n, d, d)``) is set.
    """

    side: str
    n: int
    rounds: tuple[np.ndarray, ...] | None = None
    dense: np.ndarray | None = None

    def __post_init__(self):
        if self.side not in ("alice", "bob"):
            raise ValueError(f"side must be 'alice' or 'bob', got {self.side!r}")
        if (self.rounds is None) == (self.dense is None):
            raise ValueError("exactly one of rounds or dense must be given")
        if self.rounds is not None:
            rs = tuple(np.array(r, dtype=complex) for r in self.rounds)
            if len(rs) != self.n:
                raise LayoutError(f"{len(rs)} round families for n={self.n}")
            for r in rs:
                if r.ndim != 5 or r.shape[:3] != (3, 2, 2) or r.shape[3] != r.shape[4]:
                    raise LayoutError(f"round family has shape {r.shape}")
                r.setflags(write=False)
            object.__setattr__(self, "rounds", rs)
        else:
            d = np.array(self.dense, dtype=complex)
            m = 2**self.n
            if d.ndim != 5 or d.shape[:3] != (3**self.n, m, m) or d.shape[3] != d.shape[4]:
                raise LayoutError(f"dense family has shape {d.shape} for n={self.n}")
            d.setflags(write=False)
            object.__setattr__(self, "dense", d)

    @property
    def is_product(self) -> bool:
        return self.rounds is not None

    @property
    def dim(self) -> int:
        if self.rounds is not None:
            return int(np.prod([r.shape[3] for r in self.rounds]))
        return self.dense.shape[3]

    def to_dense(self) -> "MeasurementFamily":
        if self.dense is not None:
            return self
        m = 2**self.n
        d = self.dim
        out = np.empty((3**self.n, m, m, d, d), dtype=complex)
        for i in range(3**self.n):
            rv = input_vector(i, self.n)
            for x0 in range(m):
                b0 = _bits(x0, self.n)
                for x1 in range(m):
                    b1 = _bits(x1, self.n)
                    out[i, x0, x1] = _kron_all(
                        self.rounds[k][rv[k], b0[k], b1[k]] for k in range(self.n)
                    )
        return MeasurementFamily(self.side, self.n, dense=out)

    def projectors(self, inputs: Sequence[int]) -> np.ndarray:
        """All projectors for one question vector, shape ``(2**n, 2**n, d, d)``."""
        if self.dense is not None:
            return np.array(self.dense[input_index(inputs)])
        return self.to_dense().dense[input_index(inputs)]

    def _labels(self, sels: Sequence[int]) -> np.ndarray:
        """Label code of the selected entries for each (x0, x1)."""
        m = 2**self.n
        x0 = np.arange(m)[:, None]
        x1 = np.arange(m)[None, :]
        lab = np.zeros((m, m), dtype=np.int64)
        for k, sel in enumerate(sels):
            bit = entry_bit(self.side, sel, (x0 >> k) & 1, (x1 >> k) & 1)
            lab = lab + (bit << k)
        return lab

    def grouped(self, inputs: Sequence[int], sels: Sequence[int]) -> np.ndarray:
        """Coarse-grained projectors onto the selected entries, shape ``(2**n, d, d)``.

        Index ``x`` is the little-endian code of the entry picked by ``sels[k]``
        in each round ``k``.
        """
        if self.rounds is not None:
            per = []
            for k, (r, sel) in enumerate(zip(inputs, sels)):
                fam = self.rounds[k][r]
                g = np.zeros((2,) + fam.shape[2:], dtype=complex)
                for x0 in (0, 1):
                    for x1 in (0, 1):
                        g[entry_bit(self.side, sel, x0, x1)] += fam[x0, x1]
                per.append(g)
            out = []
            for x in range(2**self.n):
                out.append(_kron_all(per[k][(x >> k) & 1] for k in range(self.n)))
            return np.array(out)
        fam = self.dense[input_index(inputs)]
        d = fam.shape[-1]
        lab = self._labels(sels).reshape(-1)
        onehot = np.zeros((2**self.n, lab.size))
        onehot[lab, np.arange(lab.size)] = 1.0
        return (onehot @ fam.reshape(lab.size, d * d)).reshape(-1, d, d)

    def observable(self, inputs: Sequence[int], sels: Sequence[int], p: Sequence[int]) -> np.ndarray:
        """``sum (-1)^{entries . p} P`` with a fixed summation order.

        Rounds with ``p_k = 0`` never influence the signs, so changing ``sels``
        there leaves the result bit-identical.
        """
        p = tuple(int(v) for v in p)
        if not any(p):
            return np.eye(self.dim, dtype=complex)
        if self.rounds is not None:
            facs = []
            for k in range(self.n):
                fam = self.rounds[k][inputs[k]]
                if not p[k]:
                    facs.append(np.eye(fam.shape[-1], dtype=complex))
                    continue
                o = np.zeros(fam.shape[2:], dtype=complex)
                for x0 in (0, 1):
                    for x1 in (0, 1):
                        o += (-1) ** entry_bit(self.side, sels[k], x0, x1) * fam[x0, x1]
                facs.append(o)
            return _kron_all(facs)
        fam = self.dense[input_index(inputs)]
        m = 2**self.n
        x0 = np.arange(m)[:, None]
        x1 = np.arange(m)[None, :]
        parity = np.zeros((m, m), dtype=np.int64)
        for k in range(self.n):
            if p[k]:
                parity ^= entry_bit(self.side, sels[k], (x0 >> k) & 1, (x1 >> k) & 1)
        signs = (1 - 2 * parity).reshape(-1).astype(float)
        d = fam.shape[-1]
        return np.tensordot(signs, fam.reshape(m * m, d, d), axes=1)

    def check(self, tol: float = PROJ_TOL) -> None:
        """Raise ContractViolation unless every input gives a projective measurement."""
        blocks = []
        if self.rounds is not None:
            for r in self.rounds:
                blocks.extend(r[i].reshape(4, *r.shape[3:]) for i in range(3))
        else:
            blocks.extend(f.reshape(-1, *f.shape[2:]) for f in self.dense)
        for fam in blocks:
            eye = np.eye(fam.shape[-1])
            if np.max(np.abs(fam.sum(axis=0) - eye)) > tol:
                raise ContractViolation("projector family is incomplete")
            for i, p in enumerate(fam):
                if np.max(np.abs(p - p.conj().T)) > tol or np.max(np.abs(p @ p - p)) > tol:
                    raise ContractViolation("family member is not an orthogonal projector")
                for q in fam[i + 1:]:
                    if np.max(np.abs(p @ q)) > tol:
                        raise ContractViolation("family members are not orthogonal")

    def conjugated(self, unitaries) -> "MeasurementFamily":
        """Rotate each input's family by its unitary (per round or per global input)."""
        if self.rounds is not None:
            rs = []
            for fam, us in zip(self.rounds, unitaries):
                new = np.empty_like(fam)
                for i in range(3):
                    u = us[i]
                    new[i] = u @ fam[i] @ u.conj().T
                rs.append(new)
            return MeasurementFamily(self.side, self.n, rounds=tuple(rs))
        new = np.empty_like(self.dense)
        for i, u in enumerate(unitaries):
            new[i] = u @ self.dense[i] @ u.conj().T
        return MeasurementFamily(self.side, self.n, dense=new)


@dataclass(frozen=True, eq=False)
class PureStrategy:
    n: int
    psi: np.ndarray
    alice: MeasurementFamily
    bob: MeasurementFamily
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        psi = np.array(self.psi, dtype=complex)
        if psi.shape != (self.alice.dim, self.bob.dim):
            raise LayoutError(
                f"state matrix shape {psi.shape} does not match local dims "
                f"({self.alice.dim}, {self.bob.dim})"
            )
        if abs(np.linalg.norm(psi) - 1.0) > 1e-12:
            raise ContractViolation(f"state norm {np.linalg.norm(psi)!r} is not 1")
        if self.alice.n != self.n or self.bob.n != self.n:
            raise LayoutError("measurement families disagree with the round count")
        if self.alice.side != "alice" or self.bob.side != "bob":
            raise ValueError("families passed on the wrong side")
        psi.setflags(write=False)
        object.__setattr__(self, "psi", psi)

    @property
    def dims(self) -> tuple[int, int]:
        return self.psi.shape

    @property
    def layout(self) -> RegisterLayout:
        return RegisterLayout((("A", self.dims[0]), ("B", self.dims[1])))

    @property
    def state(self) -> StateVector:
        return StateVector(self.layout, self.psi.reshape(-1))

    @property
    def is_product(self) -> bool:
        return self.alice.is_product and self.bob.is_product

    def check(self) -> None:
        self.alice.check()
        self.bob.check()


def _single_round_families() -> tuple[np.ndarray, np.ndarray]:
    eye = np.eye(4)
    alice = np.empty((3, 2, 2, 4, 4), dtype=complex)
    bob = np.empty((3, 2, 2, 4, 4), dtype=complex)
    for i in range(3):
        for x0 in (0, 1):
            for x1 in (0, 1):
                alice[i, x0, x1] = (
                    (eye + (-1) ** x0 * cell_operator(i, 0))
                    @ (eye + (-1) ** x1 * cell_operator(i, 1))
                    / 4
                )
                bob[i, x0, x1] = (
                    (eye + (-1) ** x0 * cell_operator(0, i))
                    @ (eye + (-1) ** x1 * cell_operator(1, i))
                    / 4
                )
    return alice, bob


def ideal_single_round() -> PureStrategy:
    """Two EPR pairs, (A1, B1) and (A2, B2), with the square's observables."""
    return ideal_parallel(1)


def ideal_parallel(n: int) -> PureStrategy:
    if n < 1:
        raise ValueError("need at least one round")
    if n > MAX_DENSE_ROUNDS:
        raise FeasibilityError(f"ideal strategy supported for n <= {MAX_DENSE_ROUNDS}, got {n}")
    a, b = _single_round_families()
    psi1 = np.eye(4, dtype=complex) / 2
    psi = _kron_all([psi1] * n)
    return PureStrategy(
        n,
        psi,
        MeasurementFamily("alice", n, rounds=(a,) * n),
        MeasurementFamily("bob", n, rounds=(b,) * n),
        meta={"kind": "ideal"},
    )


def classical_strategy(alice_table, bob_table) -> PureStrategy:
    """Deterministic single-round strategy on one-dimensional local spaces."""
    a = np.zeros((3, 2, 2, 1, 1), dtype=complex)
    b = np.zeros((3, 2, 2, 1, 1), dtype=complex)
    for i in range(3):
        a[(i,) + tuple(alice_table[i])] = 1.0
        b[(i,) + tuple(bob_table[i])] = 1.0
    return PureStrategy(
        1,
        np.ones((1, 1), dtype=complex),
        MeasurementFamily("alice", 1, rounds=(a,)),
        MeasurementFamily("bob", 1, rounds=(b,)),
        meta={"kind": "classical"},
    )


def _apply_on_axes(t: np.ndarray, m: np.ndarray, axes: tuple[int, int]) -> np.ndarray:
    front = (0, 1)
    t = np.moveaxis(t, axes, front)
    shape = t.shape
    t = (m @ t.reshape(m.shape[0], -1)).reshape(shape)
    return np.moveaxis(t, front, axes)


def _round_win_operator(fa: np.ndarray, fb: np.ndarray) -> np.ndarray:
    """Single-round win operator averaged over the nine questions."""
    da, db = fa.shape[-1], fb.shape[-1]
    w = np.zeros((da * db, da * db), dtype=complex)
    for r in range(3):
        for c in range(3):
            for x0 in (0, 1):
                for x1 in (0, 1):
                    for y0 in (0, 1):
                        for y1 in (0, 1):
                            if entry_bit("alice", c, x0, x1) == entry_bit("bob", r, y0, y1):
                                w += np.kron(fa[r, x0, x1], fb[c, y0, y1])
    return w / 9


def win_probability(s: PureStrategy) -> float:
    """Exact success probability under uniform questions."""
    n = s.n
    if s.is_product:
        da = [f.shape[-1] for f in s.alice.rounds]
        db = [f.shape[-1] for f in s.bob.rounds]
        t = s.psi.reshape(da + db)
        v = t
        for k in range(n):
            w = _round_win_operator(s.alice.rounds[k], s.bob.rounds[k])
            v = _apply_on_axes(v, w, (k, n + k))
        return float(np.vdot(t, v).real)
    if n > 2:
        raise FeasibilityError("non-product strategies are evaluated for n <= 2 only")
    alice, bob = s.alice.to_dense(), s.bob.to_dense()
    psi = s.psi
    terms = []
    for ri in range(3**n):
        rv = input_vector(ri, n)
        for ci in range(3**n):
            cv = input_vector(ci, n)
            pa = alice.grouped(rv, cv)
            qb = bob.grouped(cv, rv)
            left = pa @ psi
            right = psi @ np.transpose(qb, (0, 2, 1))
            terms.append(np.vdot(left, right).real)
    return math.fsum(terms) / 9**n


@dataclass(frozen=True, eq=False)
class OutputObservable:
    operator: DenseOperator
    side: str
    inputs: tuple[int, ...]
    p: tuple[int, ...]
    other: tuple[int, ...]

    @property
    def matrix(self) -> np.ndarray:
        return self.operator.matrix


def output_observable(s: PureStrategy, side: str, inputs, p, other, verify: bool = True) -> OutputObservable:
    """Parity observable of the answers selected by ``other`` on rounds where ``p`` is 1.

    For Alice ``inputs`` is the row vector and ``other`` the column vector;
    for Bob the roles swap.
    """
    n = s.n
    inputs, p, other = tuple(inputs), tuple(int(x) for x in p), tuple(other)
    if len(inputs) != n or len(p) != n or len(other) != n:
        raise LayoutError("input, parity and tag vectors must have length n")
    if any(x not in (0, 1) for x in p):
        raise ValueError("parity vector must be binary")
    if any(x not in (0, 1, 2) for x in inputs + other):
        raise ValueError("inputs and tags must lie in {0,1,2}")
    fam = s.alice if side == "alice" else s.bob if side == "bob" else None
    if fam is None:
        raise ValueError(f"unknown side {side!r}")
    m = fam.observable(inputs, other, p)
    if verify:
        fam_blocks = fam.projectors(inputs).reshape(-1, fam.dim, fam.dim) if not fam.is_product else None
        if fam_blocks is not None and np.max(np.abs(fam_blocks.sum(axis=0) - np.eye(fam.dim))) > PROJ_TOL:
            raise ContractViolation("projector family is incomplete")
        if np.max(np.abs(m - m.conj().T)) > PROJ_TOL or np.max(np.abs(m @ m - np.eye(fam.dim))) > PROJ_TOL:
            raise ContractViolation("output observable is not a Hermitian involution")
    layout = RegisterLayout((("A" if side == "alice" else "B", fam.dim),))
    return OutputObservable(DenseOperator(layout, m, True, True), side, inputs, p, other)


def correlation(s: PureStrategy, r, c, p) -> float:
    """``<psi| A^c_{r,p} (x) B^r_{c,p} |psi>``."""
    a = s.alice.observable(tuple(r), tuple(c), p)
    b = s.bob.observable(tuple(c), tuple(r), p)
    val = np.vdot(s.psi, a @ s.psi @ b.T)
    if abs(val.imag) > 1e-10:
        raise ArithmeticError(f"correlation has imaginary part {val.imag:.3e}")
    return float(val.real)


def mean_correlation(s: PureStrategy, p) -> float:
    n = s.n
    vals = [
        correlation(s, input_vector(ri, n), input_vector(ci, n), p)
        for ri in range(3**n)
        for ci in range(3**n)
    ]
    return math.fsum(vals) / 9**n


# --- perturbations ---------------------------------------------------------


def random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    """Random Hermitian matrix scaled to unit operator norm."""
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    h = (g + g.conj().T) / 2
    return h / np.max(np.abs(np.linalg.eigvalsh(h)))


class _Rotation:
    """exp(i theta H) from one eigendecomposition."""

    def __init__(self, h: np.ndarray):
        self.vals, self.vecs = np.linalg.eigh(h)

    def __call__(self, theta: float) -> np.ndarray:
        return (self.vecs * np.exp(1j * theta * self.vals)) @ self.vecs.conj().T


def _rotations_for(fam: MeasurementFamily, rng, per_round: bool):
    if per_round and fam.is_product:
        return "rounds", [[_Rotation(random_hermitian(rng, f.shape[-1])) for _ in range(3)] for f in fam.rounds]
    dense = fam.to_dense()
    return "dense", [_Rotation(random_hermitian(rng, dense.dim)) for _ in range(3**fam.n)]


def perturb(
    s: PureStrategy,
    target_eps: float,
    seed: int,
    kind: str = "both",
    per_round: bool = True,
    iterations: int = 60,
    tol: float = 1e-4,
) -> PureStrategy:
    """Seeded perturbation tuned by bisection on one angle to lose with probability ``target_eps``.

    ``state-mix`` replaces psi by ``cos t psi + sin t chi`` with a random unit
    chi orthogonal to psi.  ``measurement-rotate`` conjugates every input's
    projectors by ``exp(i t H)`` with random unit-norm Hermitian H, drawn per
    round and per single-round input when ``per_round`` (keeping product
    structure) or per global question otherwise.  ``both`` uses one angle for
    the two.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    if not 0.0 <= target_eps <= 0.2:
        raise ValueError(f"target_eps must lie in [0, 0.2], got {target_eps}")
    if target_eps == 0:
        return s
    if s.n > 2 and not (per_round and s.is_product):
        raise FeasibilityError("non-product perturbations are supported for n <= 2")
    rng = np.random.default_rng(seed)
    mix = kind in ("state-mix", "both")
    rot = kind in ("measurement-rotate", "both")
    chi = None
    if mix:
        g = rng.standard_normal(s.psi.shape) + 1j * rng.standard_normal(s.psi.shape)
        g = g - np.vdot(s.psi, g) * s.psi
        chi = g / np.linalg.norm(g)
    rots = None
    if rot:
        rots = (_rotations_for(s.alice, rng, per_round), _rotations_for(s.bob, rng, per_round))

    def build(theta: float) -> PureStrategy:
        psi = s.psi
        alice, bob = s.alice, s.bob
        if mix:
            psi = np.cos(theta) * s.psi + np.sin(theta) * chi
            psi = psi / np.linalg.norm(psi)
        if rot:
            fams = []
            for fam, (mode, rs) in zip((s.alice, s.bob), rots):
                if mode == "rounds":
                    fams.append(fam.conjugated([[u(theta) for u in per] for per in rs]))
                else:
                    fams.append(fam.to_dense().conjugated([u(theta) for u in rs]))
            alice, bob = fams
        meta = {"kind": kind, "seed": int(seed), "target_eps": float(target_eps), "theta": float(theta),
                "per_round": bool(per_round)}
        return PureStrategy(s.n, psi, alice, bob, meta=meta)

    target = 1.0 - target_eps
    lo, hi = 0.0, math.pi / 2
    f_lo = win_probability(build(lo)) - target
    f_hi = win_probability(build(hi)) - target
    if f_lo < 0 or f_hi > 0:
        raise CalibrationError(
            f"{kind} perturbation cannot bracket win probability {target:.6f} "
            f"(endpoints {f_lo + target:.6f}, {f_hi + target:.6f})"
        )
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if win_probability(build(mid)) - target > 0:
            lo = mid
        else:
            hi = mid
    out = build(0.5 * (lo + hi))
    achieved = win_probability(out)
    if abs(achieved - target) > tol:
        raise CalibrationError(f"calibrated win probability {achieved:.6f} misses {target:.6f}")
    return out


# --- serialization ---------------------------------------------------------


def _enc(a: np.ndarray) -> dict:
    a = np.ascontiguousarray(a, dtype="<c16")
    return {"shape": list(a.shape), "dtype": "complex128-le", "data": base64.b64encode(a.tobytes()).decode("ascii")}


def _dec(d: dict) -> np.ndarray:
    if d.get("dtype") != "complex128-le":
        raise ValueError(f"unsupported array dtype {d.get('dtype')!r}")
    raw = base64.b64decode(d["data"])
    return np.frombuffer(raw, dtype="<c16").reshape(d["shape"]).astype(complex)


def _fam_to_dict(f: MeasurementFamily) -> dict:
    if f.is_product:
        return {"kind": "product", "rounds": [_enc(r) for r in f.rounds]}
    return {"kind": "dense", "data": _enc(f.dense)}


def _fam_from_dict(side: str, n: int, d: dict) -> MeasurementFamily:
    if d["kind"] == "product":
        return MeasurementFamily(side, n, rounds=tuple(_dec(r) for r in d["rounds"]))
    return MeasurementFamily(side, n, dense=_dec(d["data"]))


def strategy_to_json(s: PureStrategy) -> str:
    doc = {
        "schema": "magic-rigidity/strategy",
        "schema_version": SCHEMA_VERSION,
        "n": s.n,
        "psi": _enc(s.psi),
        "alice": _fam_to_dict(s.alice),
        "bob": _fam_to_dict(s.bob),
        "meta": s.meta,
    }
    return json.dumps(doc, sort_keys=True)


def strategy_from_json(text: str) -> PureStrategy:
    doc = json.loads(text)
    if doc.get("schema") != "magic-rigidity/strategy":
        raise ValueError("not a strategy document")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported strategy schema version {doc.get('schema_version')}")
    n = int(doc["n"])
    return PureStrategy(
        n,
        _dec(doc["psi"]),
        _fam_from_dict("alice", n, doc["alice"]),
        _fam_from_dict("bob", n, doc["bob"]),
        meta=doc.get("meta", {}),
    )


def strategies_equal(s: PureStrategy, t: PureStrategy) -> bool:
    """Bit-level equality of state and measurement data."""
    if s.n != t.n or not np.array_equal(s.psi, t.psi):
        return False
    for f, g in ((s.alice, t.alice), (s.bob, t.bob)):
        if f.is_product != g.is_product:
            return False
        if f.is_product:
            if not all(np.array_equal(a, b) for a, b in zip(f.rounds, g.rounds)):
                return False
        elif not np.array_equal(f.dense, g.dense):
            return False
    return True


def all_parity_vectors(n: int):
    return itertools.product((0, 1), repeat=n)
