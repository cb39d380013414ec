"""
Quantum Fourier transform: circuit construction, Fourier matrices, Fourier-basis
preparation and the symbolic operator-string form of a circuit.

The forward QFT uses omega = exp(+2*pi*i/N) with 1/sqrt(N) scaling. With the final
swap layer it equals dft_matrix(2**n, QUANTUM) under the MSB-first wire order of qcore.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .models import QUANTUM, FourierConvention
from .qcore import (
    Circuit,
    ControlledPhase,
    Gate,
    Hadamard,
    PauliX,
    Phase,
    StateVector,
    Swap,
    UnitaryMatrix,
    apply_circuit,
    basis_state,
)


class FourierError(ValueError):
    """Bad transform size, basis index or operator string."""


@dataclass(frozen=True)
class QftCircuitSpec:
    n_qubits: int
    inverse: bool = False
    include_final_swaps: bool = True

    def __post_init__(self) -> None:
        if isinstance(self.n_qubits, bool) or not isinstance(self.n_qubits, int) or self.n_qubits < 1:
            raise FourierError(f"QFT needs at least one qubit (got {self.n_qubits!r})")

    @property
    def expected_gate_count(self) -> int:
        n = self.n_qubits
        return n + n * (n - 1) // 2 + (n // 2 if self.include_final_swaps else 0)


# -----------------------------------------------------------------------------
# Roots of unity and Fourier matrices
# -----------------------------------------------------------------------------
def roots_of_unity(n: int, sign: int = -1) -> list[complex]:
    """[w**0, ..., w**(n-1)] with w = exp(sign * 2*pi*i / n)."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise FourierError(f"roots_of_unity needs n >= 1 (got {n!r})")
    if sign not in (1, -1):
        raise FourierError(f"sign must be +1 or -1 (got {sign!r})")
    k = np.arange(n)
    return [complex(w) for w in np.exp(sign * 2j * np.pi * k / n)]


def dft_matrix(size: int, convention: FourierConvention = QUANTUM) -> UnitaryMatrix:
    """Element (k, j) = factor * w**(k*j); exponents reduced mod `size` before lookup."""
    if isinstance(size, bool) or not isinstance(size, int) or size < 1:
        raise FourierError(f"dft_matrix needs N >= 1 (got {size!r})")
    roots = np.array(roots_of_unity(size, convention.sign), dtype=np.complex128)
    k = np.arange(size)
    factor = convention.normalization.factor(size)
    elements = factor * roots[np.outer(k, k) % size]
    return UnitaryMatrix(elements, gram_scale=size * factor * factor)


def bit_reverse_permutation(n_qubits: int) -> np.ndarray:
    """perm[i] = i with its n-bit binary representation reversed."""
    idx = np.arange(1 << n_qubits)
    rev = np.zeros_like(idx)
    for b in range(n_qubits):
        rev |= ((idx >> b) & 1) << (n_qubits - 1 - b)
    return rev


# -----------------------------------------------------------------------------
# Circuits
# -----------------------------------------------------------------------------
def build_qft_circuit(spec: QftCircuitSpec) -> Circuit:
    """
    For q = 0..n-1 (MSB first): H(q), then CP(control=q', target=q, pi/2**(q'-q)) for
    q' = q+1..n-1. Then Swap(q, n-1-q) for q < n//2 if include_final_swaps.
    The inverse is the reversed sequence with negated phases.
    """
    n = spec.n_qubits
    gates: list[Gate] = []
    for q in range(n):
        gates.append(Hadamard(q))
        for other in range(q + 1, n):
            gates.append(ControlledPhase(other, q, math.pi / (1 << (other - q))))
    if spec.include_final_swaps:
        gates.extend(Swap(q, n - 1 - q) for q in range(n // 2))
    circuit = Circuit(n, tuple(gates))
    return circuit.inverse() if spec.inverse else circuit


def qft_circuit(n_qubits: int, *, inverse: bool = False, include_final_swaps: bool = True) -> Circuit:
    return build_qft_circuit(QftCircuitSpec(n_qubits, inverse=inverse, include_final_swaps=include_final_swaps))


def fourier_phases(j: int, n: int) -> list[float]:
    """
    Per-wire angles of QFT|j>: wire q carries 2*pi * (j mod 2**(q+1)) / 2**(q+1).

    The least significant wire (q = n-1) gets 2*pi*j/2**n, e.g. 6*pi/4 for j=6, n=3.
    """
    _check_basis(j, n)
    out = []
    for q in range(n):
        period = 1 << (q + 1)
        out.append(2.0 * math.pi * (j % period) / period)
    return out


def fourier_prep_circuit(j: int, n: int) -> Circuit:
    """H on every wire followed by the phase layer that rotates |0...0> into QFT|j>."""
    gates: list[Gate] = [Hadamard(q) for q in range(n)]
    gates.extend(Phase(q, theta) for q, theta in enumerate(fourier_phases(j, n)) if theta)
    return Circuit(n, tuple(gates))


def prepare_fourier_state(j: int, n: int) -> StateVector:
    """Product state (1/sqrt(2**n)) * tensor_q (|0> + exp(i*phase_q)|1>) equal to QFT|j>."""
    return apply_circuit(basis_state(n, 0), fourier_prep_circuit(j, n))


def relative_phase_demo(n: int = 2) -> tuple[StateVector, StateVector]:
    """
    QFT of the uniform superposition and of the phase ramp exp(-2*pi*i*k/N)/sqrt(N).

    Both inputs have identical magnitudes. The transform separates them into |0> and |1>.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise FourierError(f"relative_phase_demo needs n >= 1 (got {n!r})")
    size = 1 << n
    qft = qft_circuit(n)
    uniform = StateVector(n, np.full(size, 1.0 / math.sqrt(size), dtype=np.complex128))
    ramp_amps = np.array(roots_of_unity(size, -1), dtype=np.complex128) / math.sqrt(size)
    ramp = StateVector(n, ramp_amps)
    return apply_circuit(uniform, qft), apply_circuit(ramp, qft)


def _check_basis(j: int, n: int) -> None:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise FourierError(f"n must be a positive qubit count (got {n!r})")
    if isinstance(j, bool) or not isinstance(j, int) or not 0 <= j < (1 << n):
        raise FourierError(f"basis index {j!r} out of range for {n} qubits (0..{(1 << n) - 1})")


# -----------------------------------------------------------------------------
# Operator strings
# -----------------------------------------------------------------------------
_PI = Fraction(math.pi)


def angle_text(theta: float) -> str:
    """
    theta/pi as the fraction with the smallest denominator (searched in powers of 16)
    that maps back to exactly this float. Parsing multiplies by pi in exact rational
    arithmetic and rounds once, so render -> parse returns the same theta bit for bit.
    """
    exact = Fraction(theta) / _PI
    max_den = 1
    while True:
        frac = exact.limit_denominator(max_den)
        if frac == exact or float(frac * _PI) == theta:
            return str(frac)
        max_den <<= 4


def _angle_value(text: str) -> float:
    try:
        return float(Fraction(text) * _PI)
    except (ValueError, ZeroDivisionError) as e:
        raise FourierError(f"bad angle exponent {text!r}") from e


def _gate_token(gate: Gate) -> str:
    if isinstance(gate, Hadamard):
        return f"H_{{{gate.target}}}"
    if isinstance(gate, PauliX):
        return f"X_{{{gate.target}}}"
    if isinstance(gate, Phase):
        return f"P_{{{gate.target}}}^{{{angle_text(gate.theta)}}}"
    if isinstance(gate, ControlledPhase):
        return f"C_{{{gate.control}}}(P_{{{gate.target}}}^{{{angle_text(gate.theta)}}})"
    return f"SWAP_{{{gate.a},{gate.b}}}"


def render_decomposition(circuit: Circuit) -> str:
    """Operator product, last-applied gate leftmost: 'SWAP_{0,1} H_{1} C_{1}(P_{0}^{1/2}) H_{0}'."""
    if not circuit.gates:
        return "I"
    return " ".join(_gate_token(g) for g in reversed(circuit.gates))


_TOKEN_PATTERNS: tuple[tuple[re.Pattern[str], str], ...] = (
    (re.compile(r"^H_\{(\d+)\}$"), "H"),
    (re.compile(r"^X_\{(\d+)\}$"), "X"),
    (re.compile(r"^P_\{(\d+)\}\^\{([^{}]+)\}$"), "P"),
    (re.compile(r"^C_\{(\d+)\}\(P_\{(\d+)\}\^\{([^{}]+)\}\)$"), "CP"),
    (re.compile(r"^SWAP_\{(\d+),(\d+)\}$"), "SWAP"),
)


def _parse_token(token: str) -> Gate:
    for pattern, kind in _TOKEN_PATTERNS:
        m = pattern.match(token)
        if not m:
            continue
        g = m.groups()
        if kind == "H":
            return Hadamard(int(g[0]))
        if kind == "X":
            return PauliX(int(g[0]))
        if kind == "P":
            return Phase(int(g[0]), _angle_value(g[1]))
        if kind == "CP":
            return ControlledPhase(int(g[0]), int(g[1]), _angle_value(g[2]))
        return Swap(int(g[0]), int(g[1]))
    raise FourierError(f"unrecognised operator token {token!r}")


def parse_decomposition(text: str, n_qubits: int) -> Circuit:
    """Inverse of render_decomposition."""
    tokens = text.split()
    if tokens == ["I"]:
        return Circuit(n_qubits)
    if not tokens:
        raise FourierError("empty operator string (use 'I' for the identity)")
    gates = [_parse_token(t) for t in tokens]
    return Circuit(n_qubits, tuple(reversed(gates)))
