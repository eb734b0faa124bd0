"""The 4n-qubit certificate operator and its spectral guarantees.

One round acts on qubits (A1, A2, B1, B2) with EPR pairing (A1, B1), (A2, B2);
n rounds are the tensor power in round order.  Its unique top eigenvector is
the product of EPR pairs and every other eigenvalue has modulus at most 5/9,
which turns an expectation of 1 - delta into EPR fidelity 1 - (9/4) delta.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from ..strategy import ideal_parallel, input_vector, all_parity_vectors
from ..tensor import DENSE_LIMIT, DenseOperator, FeasibilityError, RegisterLayout, hermitian_eig, pauli_string
from .isometry import M1_IDENTITY_WEIGHT, M1_TERM_WEIGHT, M1_TERMS

QUBIT_ORDER = ("A1", "A2", "B1", "B2")
GAP = 5.0 / 9.0
FIDELITY_SLOPE = 9.0 / 4.0


@lru_cache(maxsize=None)
def _m1() -> np.ndarray:
    m = M1_IDENTITY_WEIGHT * np.eye(16, dtype=complex)
    for label in M1_TERMS:
        m = m + M1_TERM_WEIGHT * pauli_string(label)
    return m


def magic_matrix(n: int) -> np.ndarray:
    if 16**n > DENSE_LIMIT:
        raise FeasibilityError(f"dense certificate operator needs 16^{n} > {DENSE_LIMIT}")
    out = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        out = np.kron(out, _m1())
    return out


def magic_operator(n: int) -> DenseOperator:
    m = magic_matrix(n)
    regs = tuple((f"{q}_{k + 1}", 2) for k in range(n) for q in QUBIT_ORDER)
    return DenseOperator(RegisterLayout(regs), m, hermitian=True, unitary=False)


def epr_pairs_vector(n: int) -> np.ndarray:
    """Product of EPR pairs (A1,B1)(A2,B2) per round in the certificate's qubit order."""
    one = np.zeros(16, dtype=complex)
    for i, j in itertools.product(range(2), repeat=2):
        one[(i << 3) | (j << 2) | (i << 1) | j] = 0.5
    out = np.ones(1, dtype=complex)
    for _ in range(n):
        out = np.kron(out, one)
    return out


@dataclass(frozen=True)
class SpectralReport:
    n: int
    top_eigenvalue: float
    top_multiplicity: int
    top_overlap: float
    second_abs: float
    gap_inequality_min_eig: float
    method: str

    @property
    def passed(self) -> bool:
        return (
            abs(self.top_eigenvalue - 1.0) <= 1e-10
            and self.top_multiplicity == 1
            and self.top_overlap >= 1.0 - 1e-10
            and self.second_abs <= GAP + 1e-10
            and self.gap_inequality_min_eig >= -1e-10
        )

    def to_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def _spectral_from_matrix(n: int, m: np.ndarray, method: str) -> SpectralReport:
    vals, vecs = hermitian_eig(m)
    top = vals[0]
    mult = int(np.sum(np.abs(vals - top) <= 1e-9))
    epr = epr_pairs_vector(n)
    overlap = float(abs(np.vdot(epr, vecs[:, 0])) ** 2)
    second = float(np.max(np.abs(vals[1:]))) if vals.size > 1 else 0.0
    proj = np.outer(epr, epr.conj())
    slack = proj + GAP * (np.eye(m.shape[0]) - proj) - m
    min_eig = float(np.linalg.eigvalsh(slack)[0])
    return SpectralReport(n, float(top), mult, overlap, second, min_eig, method)


def spectral_report(n: int) -> SpectralReport:
    """Dense eigen-analysis of the n-round operator (n <= 3)."""
    return _spectral_from_matrix(n, magic_matrix(n), "dense")


def spectral_report_product(n: int) -> SpectralReport:
    """Same checks using only the one-round spectrum and the tensor structure.

    Eigenvalues of the power are products of one-round eigenvalues; the
    operator inequality reduces to every non-top product being at most 5/9.
    """
    vals, vecs = hermitian_eig(_m1())
    prods = np.array([np.prod(c) for c in itertools.product(vals, repeat=n)])
    order = np.argsort(-prods, kind="stable")
    prods = prods[order]
    top = prods[0]
    mult = int(np.sum(np.abs(prods - top) <= 1e-9))
    overlap_one = abs(np.vdot(epr_pairs_vector(1), vecs[:, 0])) ** 2
    second = float(np.max(np.abs(prods[1:])))
    # on the complement of the top product vector: 5/9 - lambda >= 0; on it: 1 - top
    min_eig = float(min(GAP - np.max(prods[1:]), 1.0 - top))
    return SpectralReport(n, float(top), mult, float(overlap_one**n), second, min_eig, "product")


def random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


@dataclass(frozen=True)
class ImplicationAudit:
    trials: int
    failures: int
    min_slack: float
    failing_seeds: tuple[int, ...]

    def to_dict(self) -> dict:
        return asdict(self) | {"failing_seeds": list(self.failing_seeds)}


def implication_audit(trials: int = 1000, seed: int = 0) -> ImplicationAudit:
    """Check fidelity >= 1 - (9/4) delta whenever Tr[M rho] = 1 - delta.

    Each trial mixes a Ginibre density matrix with the EPR projector by a
    random weight so that delta spans both small and vacuous regimes.
    """
    m = _m1()
    epr = epr_pairs_vector(1)
    proj = np.outer(epr, epr.conj())
    slacks = []
    failing = []
    for i in range(trials):
        rng = np.random.default_rng([seed, i])
        lam = rng.random() ** 2
        rho = lam * random_density(rng, 16) + (1.0 - lam) * proj
        delta = 1.0 - float(np.trace(m @ rho).real)
        fid = float(np.trace(proj @ rho).real)
        slack = fid - (1.0 - FIDELITY_SLOPE * delta)
        slacks.append(slack)
        if slack < -1e-10:
            failing.append(i)
    return ImplicationAudit(trials, len(failing), float(min(slacks)), tuple(failing))


def average_correlation_operator(n: int) -> np.ndarray:
    """Uniform average over rows, columns and parity vectors of the ideal A (x) B.

    Returned in the certificate qubit order (per round A1, A2, B1, B2).
    """
    s = ideal_parallel(n)
    da = 4**n
    total = np.zeros((da * da, da * da), dtype=complex)
    count = 0
    for ri in range(3**n):
        r = input_vector(ri, n)
        for ci in range(3**n):
            c = input_vector(ci, n)
            for p in all_parity_vectors(n):
                a = s.alice.observable(r, c, p)
                b = s.bob.observable(c, r, p)
                total += np.kron(a, b)
                count += 1
    total /= count
    # reorder (A rounds..., B rounds...) -> per round (A, B)
    t = total.reshape([4] * (2 * n) * 2)
    perm = [x for k in range(n) for x in (k, n + k)]
    perm = perm + [2 * n + x for x in perm]
    return t.transpose(perm).reshape(da * da, da * da)
