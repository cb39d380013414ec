"""
n-qubit state vectors, gates, circuits and dense unitary assembly.

Conventions:
  - Qubit 0 is the MOST significant bit of the basis index, so |k1 k2 ... kn> has index
    sum(2**(n-m) * k_m). Bitstrings render MSB first: basis_state(3, 6) is |110>.
  - A circuit applies its gates in list order (leftmost first).
  - Gate kernels never build a 2**n x 2**n matrix. The amplitude vector is viewed as an
    n-axis tensor of shape (2,)*n, where axis q walks the amplitude pairs at stride
    2**(n-1-q), and each gate updates those pairs in place on a copy.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from typing import Union

import numpy as np

NORM_TOL = 1e-9
GATE_NORM_TOL = 1e-12
UNITARY_TOL = 1e-9
MAX_DENSE_QUBITS = 12

_SQRT1_2 = 1.0 / math.sqrt(2.0)


class CircuitError(ValueError):
    """Gate or circuit violates its contract (index out of range, bad wiring, size mismatch)."""


class DenseLimitError(CircuitError):
    """Circuit is too wide for dense matrix assembly."""


class NormViolationError(ArithmeticError):
    """A state or matrix drifted off the unit sphere or picked up NaN/Inf."""


# -----------------------------------------------------------------------------
# Gates
# -----------------------------------------------------------------------------
def _check_index(name: str, value: int) -> None:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 0:
        raise CircuitError(f"{name} must be a non-negative integer qubit index (got {value!r})")


def _check_theta(theta: float) -> None:
    if not math.isfinite(theta):
        raise CircuitError(f"phase angle must be finite (got {theta!r})")


@dataclass(frozen=True)
class Hadamard:
    target: int

    def __post_init__(self) -> None:
        _check_index("target", self.target)

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)

    def inverse(self) -> Hadamard:
        return self


@dataclass(frozen=True)
class PauliX:
    target: int

    def __post_init__(self) -> None:
        _check_index("target", self.target)

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)

    def inverse(self) -> PauliX:
        return self


@dataclass(frozen=True)
class Phase:
    """P(theta): |1> picks up exp(i*theta), |0> is untouched."""

    target: int
    theta: float

    def __post_init__(self) -> None:
        _check_index("target", self.target)
        _check_theta(self.theta)

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)

    def inverse(self) -> Phase:
        return Phase(self.target, -self.theta)


@dataclass(frozen=True)
class ControlledPhase:
    """Diagonal gate: |11> on (control, target) picks up exp(i*theta)."""

    control: int
    target: int
    theta: float

    def __post_init__(self) -> None:
        _check_index("control", self.control)
        _check_index("target", self.target)
        _check_theta(self.theta)
        if self.control == self.target:
            raise CircuitError(f"ControlledPhase control and target must differ (both {self.control})")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control, self.target)

    def inverse(self) -> ControlledPhase:
        return ControlledPhase(self.control, self.target, -self.theta)


@dataclass(frozen=True)
class Swap:
    a: int
    b: int

    def __post_init__(self) -> None:
        _check_index("a", self.a)
        _check_index("b", self.b)
        if self.a == self.b:
            raise CircuitError(f"Swap needs two distinct wires (both {self.a})")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.a, self.b)

    def inverse(self) -> Swap:
        return self


Gate = Union[Hadamard, PauliX, Phase, ControlledPhase, Swap]
GATE_TYPES = (Hadamard, PauliX, Phase, ControlledPhase, Swap)


# -----------------------------------------------------------------------------
# Circuit
# -----------------------------------------------------------------------------
@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if isinstance(self.n_qubits, bool) or not isinstance(self.n_qubits, int) or self.n_qubits < 1:
            raise CircuitError(f"n_qubits must be a positive integer (got {self.n_qubits!r})")
        gates = tuple(self.gates)
        for pos, g in enumerate(gates):
            if not isinstance(g, GATE_TYPES):
                raise CircuitError(f"gate #{pos} is not a Gate: {g!r}")
            _check_wires(g, self.n_qubits, where=f"gate #{pos}")
        object.__setattr__(self, "gates", gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def then(self, other: Circuit | Iterable[Gate]) -> Circuit:
        """Append gates (or another circuit's gates) after this circuit."""
        extra = other.gates if isinstance(other, Circuit) else tuple(other)
        if isinstance(other, Circuit) and other.n_qubits != self.n_qubits:
            raise CircuitError(f"cannot join a {other.n_qubits}-qubit circuit onto {self.n_qubits} qubits")
        return Circuit(self.n_qubits, self.gates + tuple(extra))

    def inverse(self) -> Circuit:
        """Reversed order, each gate inverted."""
        return Circuit(self.n_qubits, tuple(g.inverse() for g in reversed(self.gates)))

    def count(self, kind: type) -> int:
        return sum(1 for g in self.gates if isinstance(g, kind))


def _check_wires(gate: Gate, n_qubits: int, *, where: str = "gate") -> None:
    for q in gate.qubits:
        if q >= n_qubits:
            raise CircuitError(f"{where}: qubit {q} out of range for a {n_qubits}-qubit register ({gate!r})")


# -----------------------------------------------------------------------------
# State vectors and matrices
# -----------------------------------------------------------------------------
def _frozen_complex(values: Sequence[complex] | np.ndarray) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128, copy=True)
    if not np.all(np.isfinite(arr)):
        raise NormViolationError("amplitudes contain NaN or Inf")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """2**n_qubits complex amplitudes with unit norm. Immutable."""

    n_qubits: int
    amps: np.ndarray

    def __post_init__(self) -> None:
        if isinstance(self.n_qubits, bool) or not isinstance(self.n_qubits, int) or self.n_qubits < 1:
            raise CircuitError(f"n_qubits must be a positive integer (got {self.n_qubits!r})")
        amps = _frozen_complex(self.amps)
        if amps.ndim != 1 or amps.size != 1 << self.n_qubits:
            raise CircuitError(
                f"a {self.n_qubits}-qubit state needs {1 << self.n_qubits} amplitudes (got shape {amps.shape})"
            )
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise NormViolationError(f"state norm^2 is {norm2!r}, expected 1 within {NORM_TOL}")
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_amplitudes(cls, amps: Sequence[complex] | np.ndarray) -> StateVector:
        size = len(amps)
        if size < 2 or size & (size - 1):
            raise CircuitError(f"amplitude count must be a power of two >= 2 (got {size})")
        return cls(size.bit_length() - 1, np.asarray(amps))

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def norm_squared(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def bitstring(self, index: int) -> str:
        return format(index, f"0{self.n_qubits}b")

    def allclose(self, other: StateVector, atol: float = 1e-12) -> bool:
        return self.n_qubits == other.n_qubits and bool(np.max(np.abs(self.amps - other.amps)) <= atol)

    def __repr__(self) -> str:
        return f"StateVector(n_qubits={self.n_qubits}, amps={np.array2string(self.amps, precision=6)})"


@dataclass(frozen=True, eq=False)
class UnitaryMatrix:
    """
    Dense square complex matrix satisfying U^dagger U = gram_scale * I.

    gram_scale is 1 for genuine unitaries (every circuit). Unnormalized Fourier matrices
    (gram N) and the two sparse FFT factors (gram 2) are carried as scaled unitaries.
    """

    elements: np.ndarray
    gram_scale: float = 1.0

    def __post_init__(self) -> None:
        el = _frozen_complex(self.elements)
        if el.ndim != 2 or el.shape[0] != el.shape[1] or el.shape[0] < 1:
            raise CircuitError(f"unitary must be a non-empty square matrix (got shape {el.shape})")
        gram = el.conj().T @ el
        err = float(np.max(np.abs(gram - self.gram_scale * np.eye(el.shape[0]))))
        if err > UNITARY_TOL * max(1.0, self.gram_scale):
            raise NormViolationError(
                f"U^dagger U deviates from {self.gram_scale:g}*I by {err:.3e} (dim {el.shape[0]})"
            )
        object.__setattr__(self, "elements", el)

    @property
    def dim(self) -> int:
        return int(self.elements.shape[0])

    def max_abs_diff(self, other: UnitaryMatrix | np.ndarray) -> float:
        rhs = other.elements if isinstance(other, UnitaryMatrix) else np.asarray(other)
        if rhs.shape != self.elements.shape:
            raise CircuitError(f"shape mismatch {self.elements.shape} vs {rhs.shape}")
        return float(np.max(np.abs(self.elements - rhs)))

    def apply(self, state: StateVector) -> StateVector:
        if state.dim != self.dim:
            raise CircuitError(f"cannot apply a {self.dim}x{self.dim} matrix to a {state.dim}-amplitude state")
        return StateVector(state.n_qubits, self.elements @ state.amps)

    def nonzero_count(self, atol: float = 0.0) -> int:
        return int(np.count_nonzero(np.abs(self.elements) > atol))


# -----------------------------------------------------------------------------
# Kernels
# -----------------------------------------------------------------------------
def _wire_index(n: int, fixed: dict[int, int]) -> tuple:
    """Index tuple into the (2,)*n tensor view with some wires pinned to 0/1."""
    return tuple(fixed.get(q, slice(None)) for q in range(n))


def _apply_kernel(data: np.ndarray, gate: Gate, n: int) -> np.ndarray:
    """
    Apply `gate` along axis 0 of `data` (shape (2**n, *batch)). Returns a new array.

    Trailing axes are carried along untouched, which lets circuit_to_unitary push
    every basis column through the same kernel in one pass.
    """
    batch = data.shape[1:]
    t = np.array(data, dtype=np.complex128, copy=True).reshape((2,) * n + batch)

    if isinstance(gate, Hadamard):
        i0, i1 = _wire_index(n, {gate.target: 0}), _wire_index(n, {gate.target: 1})
        a, b = t[i0].copy(), t[i1].copy()
        t[i0] = (a + b) * _SQRT1_2
        t[i1] = (a - b) * _SQRT1_2
    elif isinstance(gate, PauliX):
        i0, i1 = _wire_index(n, {gate.target: 0}), _wire_index(n, {gate.target: 1})
        a, b = t[i0].copy(), t[i1].copy()
        t[i0] = b
        t[i1] = a
    elif isinstance(gate, Phase):
        t[_wire_index(n, {gate.target: 1})] *= np.exp(1j * gate.theta)
    elif isinstance(gate, ControlledPhase):
        t[_wire_index(n, {gate.control: 1, gate.target: 1})] *= np.exp(1j * gate.theta)
    elif isinstance(gate, Swap):
        t = np.ascontiguousarray(np.swapaxes(t, gate.a, gate.b))
    else:  # pragma: no cover
        raise CircuitError(f"unsupported gate {gate!r}")

    return t.reshape(data.shape)


def _norm2(v: np.ndarray) -> float:
    return float(np.vdot(v, v).real)


# -----------------------------------------------------------------------------
# Public operations
# -----------------------------------------------------------------------------
def basis_state(n: int, index: int) -> StateVector:
    """|index> on n qubits, index read MSB-first (basis_state(3, 6) == |110>)."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise CircuitError(f"n must be a positive integer (got {n!r})")
    if not 0 <= index < (1 << n):
        raise CircuitError(f"basis index {index} out of range for {n} qubits (0..{(1 << n) - 1})")
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(n, amps)


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    _check_wires(gate, state.n_qubits)
    before = state.norm_squared()
    out = _apply_kernel(state.amps, gate, state.n_qubits)
    drift = abs(_norm2(out) - before)
    if drift > GATE_NORM_TOL:
        raise NormViolationError(f"{gate!r} changed norm^2 by {drift:.3e}")
    return StateVector(state.n_qubits, out)


def apply_circuit(state: StateVector, circuit: Circuit) -> StateVector:
    if state.n_qubits != circuit.n_qubits:
        raise CircuitError(f"state has {state.n_qubits} qubits but circuit expects {circuit.n_qubits}")
    amps = state.amps
    norm = state.norm_squared()
    for gate in circuit.gates:
        amps = _apply_kernel(amps, gate, state.n_qubits)
        after = _norm2(amps)
        if abs(after - norm) > GATE_NORM_TOL:
            raise NormViolationError(f"{gate!r} changed norm^2 by {abs(after - norm):.3e}")
        norm = after
    # StateVector re-checks the 1e-9 unit-norm invariant on the way out.
    return StateVector(state.n_qubits, amps)


def circuit_to_unitary(circuit: Circuit) -> UnitaryMatrix:
    """Dense matrix whose column j is apply_circuit(basis_state(n, j), circuit)."""
    n = circuit.n_qubits
    if n > MAX_DENSE_QUBITS:
        raise DenseLimitError(f"dense assembly is limited to {MAX_DENSE_QUBITS} qubits (got {n})")
    data = np.eye(1 << n, dtype=np.complex128)
    for gate in circuit.gates:
        data = _apply_kernel(data, gate, n)
    return UnitaryMatrix(data)
