"""Complex linear algebra over named multi-register Hilbert spaces.

Vectors are stored row-major over the register order of their layout, so the
first register is the most significant index.  Operators come in two flavours:
:class:`DenseOperator` holds an explicit matrix, :class:`StructuredOperator`
holds a weighted sum of Kronecker terms and is applied factor by factor
without ever forming the full matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

DENSE_LIMIT = 4096
NORM_TOL = 1e-12
FLAG_TOL = 1e-10
EIG_TOL = 1e-9


class LayoutError(ValueError):
    """Registers or dimensions do not line up."""


class ContractViolation(ValueError):
    """An operation was called on inputs that break its precondition."""


class FeasibilityError(RuntimeError):
    """The requested computation exceeds the supported dense size."""


@dataclass(frozen=True)
class RegisterLayout:
    registers: tuple[tuple[str, int], ...]

    def __post_init__(self):
        regs = tuple((str(name), int(dim)) for name, dim in self.registers)
        object.__setattr__(self, "registers", regs)
        names = [name for name, _ in regs]
        if len(set(names)) != len(names):
            raise LayoutError(f"duplicate register names in {names}")
        for name, dim in regs:
            if dim < 1:
                raise LayoutError(f"register {name!r} has non-positive dimension {dim}")

    @classmethod
    def of(cls, *registers: tuple[str, int]) -> "RegisterLayout":
        return cls(tuple(registers))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.registers)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.registers)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64)) if self.registers else 1

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise LayoutError(f"no register named {name!r} in {self.names}") from None

    def dim(self, name: str) -> int:
        return self.registers[self.index(name)][1]

    def extended(self, *registers: tuple[str, int]) -> "RegisterLayout":
        return RegisterLayout(self.registers + tuple(registers))


@dataclass(frozen=True)
class StateVector:
    """Amplitude vector over a layout.

    ``is_state`` marks values that must be unit norm; intermediate results of
    operator application are plain vectors and carry ``is_state=False``.
    """

    layout: RegisterLayout
    amplitudes: np.ndarray
    is_state: bool = True

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape[0] != self.layout.total_dim:
            raise LayoutError(
                f"vector length {amps.shape[0]} does not match layout dimension "
                f"{self.layout.total_dim}"
            )
        if self.is_state and abs(np.linalg.norm(amps) - 1.0) > NORM_TOL:
            raise ContractViolation(f"state norm {np.linalg.norm(amps)!r} is not 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, layout: RegisterLayout, index: Sequence[int]) -> "StateVector":
        amps = np.zeros(layout.dims, dtype=complex)
        amps[tuple(index)] = 1.0
        return cls(layout, amps.reshape(-1))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self, other: "StateVector") -> "StateVector":
        layout = self.layout.extended(*other.layout.registers)
        return StateVector(
            layout,
            np.kron(self.amplitudes, other.amplitudes),
            is_state=self.is_state and other.is_state,
        )

    def as_tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.layout.dims)


# A factor targets one register or an ordered group of registers; the block
# acts on their joint space in the given order.
Target = Union[str, tuple[str, ...]]
Term = tuple[complex, tuple[tuple[tuple[str, ...], np.ndarray], ...]]


class LinearOperator:
    """Base class. ``hermitian`` and ``unitary`` are True/False/None (unknown)."""

    layout: RegisterLayout
    hermitian: bool | None
    unitary: bool | None

    def apply_array(self, amps: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_dense(self) -> np.ndarray:
        raise NotImplementedError

    def adjoint(self) -> "LinearOperator":
        raise NotImplementedError

    def apply(self, v: StateVector) -> StateVector:
        if v.layout != self.layout:
            raise LayoutError("operator and vector layouts differ")
        return StateVector(self.layout, self.apply_array(v.amplitudes), is_state=False)

    def _dense_guard(self):
        if self.layout.total_dim > DENSE_LIMIT:
            raise FeasibilityError(
                f"dense form of a {self.layout.total_dim}-dimensional operator exceeds "
                f"the limit {DENSE_LIMIT}"
            )

    def norm_inf(self) -> float:
        """Operator (spectral) norm of the densified operator."""
        return float(np.linalg.norm(self.to_dense(), 2))

    def check_hermitian(self, tol: float = FLAG_TOL) -> bool:
        m = self.to_dense()
        return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)

    def check_unitary(self, tol: float = FLAG_TOL) -> bool:
        m = self.to_dense()
        eye = np.eye(m.shape[0])
        return bool(np.max(np.abs(m.conj().T @ m - eye), initial=0.0) <= tol)

    def __matmul__(self, other: "LinearOperator") -> "ProductOperator":
        return compose(self, other)

    def __neg__(self) -> "LinearOperator":
        return scaled(self, -1.0)


@dataclass(frozen=True, eq=False)
class DenseOperator(LinearOperator):
    layout: RegisterLayout
    matrix: np.ndarray
    hermitian: bool | None = None
    unitary: bool | None = None

    def __post_init__(self):
        d = self.layout.total_dim
        if d > DENSE_LIMIT:
            raise FeasibilityError(f"dense operators are capped at dimension {DENSE_LIMIT}")
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (d, d):
            raise LayoutError(f"dense matrix shape {m.shape} does not match layout dimension {d}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def apply_array(self, amps):
        return self.matrix @ amps

    def to_dense(self):
        return np.array(self.matrix)

    def adjoint(self):
        return DenseOperator(self.layout, self.matrix.conj().T, self.hermitian, self.unitary)


def _normalize_target(target: Target) -> tuple[str, ...]:
    return (target,) if isinstance(target, str) else tuple(target)


@dataclass(frozen=True, eq=False)
class StructuredOperator(LinearOperator):
    layout: RegisterLayout
    terms: tuple[Term, ...]
    hermitian: bool | None = None
    unitary: bool | None = None

    def __post_init__(self):
        clean = []
        for weight, factors in self.terms:
            seen: set[str] = set()
            fs = []
            for target, block in factors:
                regs = _normalize_target(target)
                for r in regs:
                    self.layout.index(r)
                    if r in seen:
                        raise LayoutError(f"register {r!r} targeted twice in one term")
                    seen.add(r)
                bd = int(np.prod([self.layout.dim(r) for r in regs]))
                b = np.array(block, dtype=complex)
                if b.shape != (bd, bd):
                    raise LayoutError(
                        f"block of shape {b.shape} does not fit registers {regs} (dim {bd})"
                    )
                b.setflags(write=False)
                fs.append((regs, b))
            clean.append((complex(weight), tuple(fs)))
        object.__setattr__(self, "terms", tuple(clean))

    def apply_array(self, amps):
        dims = self.layout.dims
        x = np.asarray(amps, dtype=complex).reshape(dims)
        out = np.zeros(dims, dtype=complex)
        for weight, factors in self.terms:
            t = x
            for regs, block in factors:
                axes = [self.layout.index(r) for r in regs]
                front = list(range(len(axes)))
                t = np.moveaxis(t, axes, front)
                shape = t.shape
                t = (block @ t.reshape(block.shape[0], -1)).reshape(shape)
                t = np.moveaxis(t, front, axes)
            out += weight * t
        return out.reshape(-1)

    def to_dense(self):
        self._dense_guard()
        d = self.layout.total_dim
        return np.stack([self.apply_array(col) for col in np.eye(d, dtype=complex)], axis=1)

    def adjoint(self):
        terms = tuple(
            (np.conj(w), tuple((regs, b.conj().T) for regs, b in fs)) for w, fs in self.terms
        )
        return StructuredOperator(self.layout, terms, self.hermitian, self.unitary)


@dataclass(frozen=True, eq=False)
class ProductOperator(LinearOperator):
    """``coeff * ops[0] @ ops[1] @ ...``; applied right to left, never densified on apply."""

    layout: RegisterLayout
    ops: tuple[LinearOperator, ...]
    coeff: complex = 1.0
    hermitian: bool | None = None
    unitary: bool | None = None

    def apply_array(self, amps):
        x = np.asarray(amps, dtype=complex)
        for op in reversed(self.ops):
            x = op.apply_array(x)
        return self.coeff * x

    def to_dense(self):
        self._dense_guard()
        m = np.eye(self.layout.total_dim, dtype=complex)
        for op in self.ops:
            m = m @ op.to_dense()
        return self.coeff * m

    def adjoint(self):
        return ProductOperator(
            self.layout,
            tuple(op.adjoint() for op in reversed(self.ops)),
            np.conj(self.coeff),
            self.hermitian,
            self.unitary,
        )


def compose(*ops: LinearOperator) -> ProductOperator:
    if not ops:
        raise ContractViolation("compose needs at least one operator")
    layout = ops[0].layout
    for op in ops[1:]:
        if op.layout != layout:
            raise LayoutError("cannot compose operators on different layouts")
    unitary = True if all(op.unitary for op in ops) else None
    return ProductOperator(layout, tuple(ops), 1.0, None, unitary)


def scaled(op: LinearOperator, c: complex) -> ProductOperator:
    herm = op.hermitian if np.isreal(c) else None
    uni = op.unitary if abs(abs(c) - 1.0) < 1e-15 else None
    return ProductOperator(op.layout, (op,), complex(c), herm, uni)


def identity(layout: RegisterLayout) -> StructuredOperator:
    return StructuredOperator(layout, ((1.0, ()),), hermitian=True, unitary=True)


def kron_assemble(
    factors: Iterable[tuple[Target, np.ndarray]],
    layout: RegisterLayout,
    weight: complex = 1.0,
    hermitian: bool | None = None,
    unitary: bool | None = None,
) -> StructuredOperator:
    """Ordered Kronecker product of blocks; unreferenced registers get identities."""
    return StructuredOperator(layout, ((weight, tuple(factors)),), hermitian, unitary)


def apply(op: LinearOperator, v: StateVector) -> StateVector:
    return op.apply(v)


def hermitian_eig(op: LinearOperator | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of a Hermitian operator, eigenvalues descending.

    Each eigenvector is rephased so that its first entry of magnitude above
    1e-12 is real and positive.  Raises :class:`ContractViolation` if the
    input is not Hermitian within 1e-10.
    """
    m = op.to_dense() if isinstance(op, LinearOperator) else np.asarray(op, dtype=complex)
    if np.max(np.abs(m - m.conj().T), initial=0.0) > FLAG_TOL:
        raise ContractViolation("hermitian_eig called on a non-Hermitian operator")
    m = (m + m.conj().T) / 2
    vals, vecs = np.linalg.eigh(m)
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    for j in range(vecs.shape[1]):
        nz = np.flatnonzero(np.abs(vecs[:, j]) > 1e-12)
        if nz.size:
            z = vecs[nz[0], j]
            vecs[:, j] *= np.conj(z) / abs(z)
    scale = max(np.max(np.abs(vals), initial=0.0), 1.0)
    resid = np.linalg.norm(m @ vecs - vecs * vals, axis=0)
    if np.any(resid > EIG_TOL * scale):
        raise ArithmeticError(f"eigensolver residual {resid.max():.3e} above tolerance")
    return vals, vecs


def state_dep_distance(a: LinearOperator, b: LinearOperator, v: StateVector) -> float:
    """``||(A - B) v||``."""
    if a.layout != v.layout or b.layout != v.layout:
        raise LayoutError("state-dependent distance needs matching layouts")
    return float(np.linalg.norm(a.apply_array(v.amplitudes) - b.apply_array(v.amplitudes)))


# Single-qubit Paulis, real where possible.
I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI = {"I": I2, "X": SX, "Y": SY, "Z": SZ}


def pauli_string(label: str) -> np.ndarray:
    """Dense Kronecker product for a label such as ``"ZX"`` (first letter most significant)."""
    m = np.ones((1, 1), dtype=complex)
    for ch in label:
        m = np.kron(m, PAULI[ch])
    return m


def kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    m = np.ones((1, 1), dtype=complex)
    for x in mats:
        m = np.kron(m, x)
    return m
