"""Randomized oracles for the state-dependent-distance toolkit.

Every check measures its hypothesis quantities on the generated instance and
asserts the conclusion as a literal inequality, so a failure points at an
implementation bug.  Instances alternate between fully random operators
(large hypotheses, loose bounds) and near-Pauli instances where both players
hold small perturbations of Pauli strings on a perturbed maximally entangled
state (small hypotheses, tight bounds).

Bipartite instances use the matrix form of the state: Alice's operator M
acts as ``M @ psi`` and Bob's operator N as ``psi @ N.T``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .tensor import pauli_string

TOL = 1e-10
COHERENT_TOL = 1e-12


# --- generators -----------------------------------------------------------


def random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (g + g.conj().T) / 2


def random_hermitian_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    """Random Hermitian matrix with its eigenvalues replaced by their signs."""
    vals, vecs = np.linalg.eigh(random_hermitian(rng, d))
    signs = np.where(vals >= 0, 1.0, -1.0)
    return (vecs * signs) @ vecs.conj().T


def random_unitary_near(rng: np.random.Generator, d: int, scale: float) -> np.ndarray:
    vals, vecs = np.linalg.eigh(random_hermitian(rng, d) / math.sqrt(d))
    return (vecs * np.exp(1j * scale * vals)) @ vecs.conj().T


def random_state(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_pauli(rng: np.random.Generator, qubits: int) -> np.ndarray:
    while True:
        label = "".join(rng.choice(list("IXYZ"), size=qubits))
        if set(label) != {"I"}:
            return pauli_string(label)


def conjugate(u: np.ndarray, m: np.ndarray) -> np.ndarray:
    return u @ m @ u.conj().T


def bipartite_state(rng: np.random.Generator, d: int, noise: float) -> np.ndarray:
    psi = np.eye(d, dtype=complex) / math.sqrt(d)
    psi = psi + noise * (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / d
    return psi / np.linalg.norm(psi)


# --- distances ------------------------------------------------------------


def dist(a: np.ndarray, b: np.ndarray, v: np.ndarray) -> float:
    return float(np.linalg.norm(a @ v - b @ v))


def dist_ab(psi: np.ndarray, alice: np.ndarray, bob: np.ndarray) -> float:
    """d(A (x) I, I (x) B) on a bipartite state in matrix form."""
    return float(np.linalg.norm(alice @ psi - psi @ bob.T))


def prod(mats, d: int) -> np.ndarray:
    out = np.eye(d, dtype=complex)
    for m in mats:
        out = out @ m
    return out


def best_sign(psi: np.ndarray, left: np.ndarray, right: np.ndarray) -> int:
    """Sign alpha minimizing d(left, alpha right) on Alice's side."""
    return 1 if dist(left, right, psi) <= dist(left, -right, psi) else -1


# --- instances ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LemmaInstance:
    """One generated instance; ``ops`` maps role names to matrices."""

    seed: int
    lemma: str
    dims: tuple[int, ...]
    ops: dict
    state: np.ndarray
    alpha: np.ndarray | None = None
    near: bool = False


@dataclass(frozen=True)
class CheckResult:
    name: str
    lhs: float
    rhs: float
    tol: float = TOL

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.slack >= -self.tol


def _lemma_rng(lemma: str, seed: int) -> np.random.Generator:
    tag = sum(ord(ch) * 31**i for i, ch in enumerate(lemma)) % (2**31)
    return np.random.default_rng([seed, tag])


def triangle_instance(seed: int, d: int = 8) -> LemmaInstance:
    rng = _lemma_rng("triangle", seed)
    near = seed % 2 == 1
    a = random_hermitian(rng, d)
    if near:
        b = a + 1e-3 * random_hermitian(rng, d)
        c = b + 1e-3 * random_hermitian(rng, d)
    else:
        b, c = random_hermitian(rng, d), random_hermitian(rng, d)
    dd = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return LemmaInstance(seed, "triangle", (d,), {"A": a, "B": b, "C": c, "D": dd}, random_state(rng, d), near=near)


def check_triangle(inst: LemmaInstance) -> list[CheckResult]:
    a, b, c, dd = (inst.ops[k] for k in "ABCD")
    v = inst.state
    tri = CheckResult("triangle", dist(a, c, v), dist(a, b, v) + dist(b, c, v))
    norm_d = float(np.linalg.norm(dd, 2))
    tri2 = CheckResult("triangle-product", dist(dd @ a, dd @ c, v), dist(dd @ a, dd @ b, v) + norm_d * dist(b, c, v))
    return [tri, tri2]


def coherent_instance(seed: int, d: int = 4, count: int | None = None) -> LemmaInstance:
    rng = _lemma_rng("coherent-average", seed)
    n = count if count is not None else 1 + seed % 6
    ops = {}
    for i in range(n):
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        b = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        ops[("A", i)] = a / np.linalg.norm(a, 2)
        ops[("B", i)] = b / np.linalg.norm(b, 2)
    return LemmaInstance(seed, "coherent-average", (d, n), ops, random_state(rng, d))


def check_coherent_average(inst: LemmaInstance) -> float:
    """Absolute defect between the coherent distance squared and the average distance squared."""
    d, n = inst.dims
    psi = inst.state
    avg = math.fsum(dist(inst.ops[("A", i)], inst.ops[("B", i)], psi) ** 2 for i in range(n)) / n
    ext = np.concatenate([psi for _ in range(n)]) / math.sqrt(n)
    # index order (state, label) flattened label-major to keep blocks contiguous
    big_a = np.zeros((d * n, d * n), dtype=complex)
    big_b = np.zeros((d * n, d * n), dtype=complex)
    for i in range(n):
        big_a[i * d:(i + 1) * d, i * d:(i + 1) * d] = inst.ops[("A", i)]
        big_b[i * d:(i + 1) * d, i * d:(i + 1) * d] = inst.ops[("B", i)]
    coherent = dist(big_a, big_b, ext) ** 2
    return abs(coherent - avg)


def save_eps_instance(seed: int, d: int = 8) -> LemmaInstance:
    rng = _lemma_rng("save-eps", seed)
    near = seed % 2 == 1
    t = random_hermitian_unitary(rng, d)
    if near:
        scale = 10 ** rng.uniform(-3, -0.5)
        s = conjugate(random_unitary_near(rng, d, scale), t)
        t2 = conjugate(random_unitary_near(rng, d, scale), t)
    else:
        s = random_hermitian_unitary(rng, d)
        t2 = random_hermitian_unitary(rng, d)
    return LemmaInstance(seed, "save-eps", (d,), {"T": t, "T2": t2, "S": s}, random_state(rng, d), near=near)


def check_save_eps(inst: LemmaInstance) -> CheckResult:
    t, t2, s = inst.ops["T"], inst.ops["T2"], inst.ops["S"]
    v = inst.state
    ts = float(np.vdot(v, t @ s @ v).real)
    t2s = float(np.vdot(v, t2 @ s @ v).real)
    delta = max(1.0 - ts, 1.0 - t2s, 0.0)
    tt2 = float(np.vdot(v, t @ t2 @ v).real)
    return CheckResult("save-eps", 1.0 - 4.0 * delta - tt2, 0.0)


def switch_instance(seed: int, qubits: int = 2, k: int | None = None) -> LemmaInstance:
    """k-tuples S, T, P on Alice with Bob partners SB, TB; P is a second string sharing SB.

    Near instances start from Pauli strings, so signs alpha come from exact
    commutation; random instances pick the minimizing sign per pair.
    """
    rng = _lemma_rng("switch", seed)
    d = 2**qubits
    k = k if k is not None else 2 + seed % 3
    near = seed % 2 == 1
    ops = {}
    if near:
        scale = 10 ** rng.uniform(-3, -1)
        noise = 10 ** rng.uniform(-4, -1.5)
        psi = bipartite_state(rng, d, noise)
        for role in ("S", "T", "P"):
            for i in range(k):
                base = random_pauli(rng, qubits) if role != "P" else ops[("S", i, "ideal")]
                ops[(role, i, "ideal")] = base
                ops[(role, i)] = conjugate(random_unitary_near(rng, d, scale), base)
                ops[(role + "B", i)] = conjugate(random_unitary_near(rng, d, scale), base).conj()
    else:
        psi = random_state(rng, d * d).reshape(d, d)
        for role in ("S", "T", "P"):
            for i in range(k):
                ops[(role, i)] = random_hermitian_unitary(rng, d)
                ops[(role + "B", i)] = random_hermitian_unitary(rng, d)
    alpha = np.ones((k, k), dtype=int)
    for i, j in itertools.product(range(k), repeat=2):
        s, t = ops[("S", i)], ops[("T", j)]
        if near:
            si, tj = ops[("S", i, "ideal")], ops[("T", j, "ideal")]
            alpha[i, j] = 1 if np.allclose(si @ tj, tj @ si) else -1
        else:
            alpha[i, j] = best_sign(psi, s @ t, t @ s)
    return LemmaInstance(seed, "switch", (d, d, k), ops, psi, alpha, near)


def _alice_dist(psi, m1, m2) -> float:
    return float(np.linalg.norm(m1 @ psi - m2 @ psi))


def check_switch_lemmas(inst: LemmaInstance) -> list[CheckResult]:
    d, _, k = inst.dims
    psi = inst.state
    ops = inst.ops
    alpha = inst.alpha
    S = [ops[("S", i)] for i in range(k)]
    T = [ops[("T", i)] for i in range(k)]
    P = [ops[("P", i)] for i in range(k)]
    SB = [ops[("SB", i)] for i in range(k)]
    TB = [ops[("TB", i)] for i in range(k)]
    out = []

    # operators on one side, products on the other, reversed order
    eps_i = [dist_ab(psi, S[i], SB[i]) for i in range(k)]
    lhs = float(np.linalg.norm(prod(S, d) @ psi - psi @ prod(SB[::-1], d).T))
    out.append(CheckResult("con2", lhs, math.fsum(eps_i)))

    # two Alice strings sharing Bob partners
    e1 = max(eps_i)
    e2 = max(dist_ab(psi, P[i], SB[i]) for i in range(k))
    out.append(CheckResult("consistency-string", _alice_dist(psi, prod(S, d), prod(P, d)), k * (e1 + e2)))

    # move the last of S_1..S_k to the front; alpha_{ik} from the S-S relation
    sgn = np.ones(k, dtype=int)
    for i in range(k - 1):
        sgn[i] = best_sign(psi, S[i] @ S[k - 1], S[k - 1] @ S[i])
    e2s = max((_alice_dist(psi, S[i] @ S[k - 1], sgn[i] * S[k - 1] @ S[i]) for i in range(k - 1)), default=0.0)
    target = int(np.prod(sgn[: k - 1])) * prod([S[k - 1]] + S[: k - 1], d)
    out.append(CheckResult("switch3", _alice_dist(psi, prod(S, d), target), 2 * (k - 2) * e1 + (k - 1) * e2s))

    # S-block past T-block
    eps1 = max(dist_ab(psi, S[i], SB[i]) for i in range(k))
    eps2 = max(dist_ab(psi, T[i], TB[i]) for i in range(k))
    eps3 = max(_alice_dist(psi, S[i] @ T[j], alpha[i, j] * T[j] @ S[i]) for i in range(k) for j in range(k))
    st = prod(S + T, d)
    target = int(np.prod(alpha)) * prod(T + S, d)
    bound = 2 * (k - 1) * eps2 + k * (2 * (k - 1) * eps1 + k * eps3)
    out.append(CheckResult("switchmany", _alice_dist(psi, st, target), bound))

    # riffle into S1 T1 S2 T2 ...
    sign = 1
    for i in range(1, k):
        for j in range(i):
            sign *= int(alpha[i, j])
    riffled = prod([m for pair in zip(S, T) for m in pair], d)
    bound = 2 * (k - 1) * eps2 + math.fsum(2 * (j - 2) * eps1 + (j - 1) * eps3 for j in range(2, k + 1))
    out.append(CheckResult("riffle", _alice_dist(psi, st, sign * riffled), bound))
    return out


# --- drivers --------------------------------------------------------------


@dataclass
class LemmaSummary:
    lemma: str
    trials: int
    failures: int
    min_slack: float
    failing_seeds: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def _run_results(name: str, seeds, produce: Callable[[int], list[CheckResult]]) -> dict[str, LemmaSummary]:
    out: dict[str, LemmaSummary] = {}
    for seed in seeds:
        for res in produce(seed):
            summ = out.setdefault(res.name, LemmaSummary(res.name, 0, 0, math.inf))
            summ.trials += 1
            summ.min_slack = min(summ.min_slack, res.slack)
            if not res.passed:
                summ.failures += 1
                summ.failing_seeds.append(seed)
    return out


def _coherent_results(seed: int) -> list[CheckResult]:
    return [CheckResult("coherent-average", check_coherent_average(coherent_instance(seed)), COHERENT_TOL, tol=0.0)]


LEMMAS: dict[str, Callable[[int], list[CheckResult]]] = {
    "triangle": lambda seed: check_triangle(triangle_instance(seed)),
    "coherent-average": _coherent_results,
    "save-eps": lambda seed: [check_save_eps(save_eps_instance(seed))],
    "switch": lambda seed: check_switch_lemmas(switch_instance(seed)),
}


def run_lemma_tests(seed_count: int = 500, lemma: str | None = None, seeds=None) -> list[LemmaSummary]:
    """Run the oracle groups over seeds; returns one summary per checked inequality."""
    names = [lemma] if lemma else list(LEMMAS)
    for name in names:
        if name not in LEMMAS:
            raise KeyError(f"unknown lemma group {name!r}; choose from {sorted(LEMMAS)}")
    seed_list = list(seeds) if seeds is not None else list(range(seed_count))
    out = []
    for name in names:
        out.extend(_run_results(name, seed_list, LEMMAS[name]).values())
    return out


def summaries_to_json(summaries) -> str:
    return json.dumps([s.to_dict() for s in summaries], sort_keys=True, indent=2)
