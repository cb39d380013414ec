from __future__ import annotations

import numpy as np

from .detect import DetectionReport
from .qcore import Circuit, ControlledPhase, Gate, Hadamard, PauliX, Phase, StateVector, Swap
from .qft import angle_text


def format_complex(z: complex) -> str:
    """'a+bi' with 6 decimals; -0.000000 is printed as 0.000000."""
    re = round(float(z.real), 6) + 0.0
    im = round(float(z.imag), 6) + 0.0
    return f"{re:.6f}{im:+.6f}i"


def format_matrix(elements: np.ndarray) -> str:
    """
    Rows of `a+bi` cells, right-aligned to the widest cell so goldens diff cleanly.
    """
    cells = [[format_complex(z) for z in row] for row in np.asarray(elements)]
    width = max((len(c) for row in cells for c in row), default=0)
    return "\n".join("  ".join(c.rjust(width) for c in row) for row in cells)


def format_state(state: StateVector) -> str:
    """One line per basis state, MSB-first label."""
    return "\n".join(f"|{state.bitstring(i)}>  {format_complex(a)}" for i, a in enumerate(state.amps))


def gate_label(gate: Gate) -> str:
    if isinstance(gate, Hadamard):
        return f"H({gate.target})"
    if isinstance(gate, PauliX):
        return f"X({gate.target})"
    if isinstance(gate, Phase):
        return f"P({gate.target}, {angle_text(gate.theta)}*pi)"
    if isinstance(gate, ControlledPhase):
        return f"CP({gate.control}, {gate.target}, {angle_text(gate.theta)}*pi)"
    if isinstance(gate, Swap):
        return f"SWAP({gate.a}, {gate.b})"
    raise TypeError(f"not a gate: {gate!r}")


def format_gate_list(circuit: Circuit) -> str:
    """Numbered gates in application order, preceded by a count line."""
    lines = [f"{circuit.n_qubits} qubits, {len(circuit)} gates"]
    lines.extend(f"{i:>4}  {gate_label(g)}" for i, g in enumerate(circuit.gates))
    return "\n".join(lines)


def format_report(report: DetectionReport, fmt: str = "text") -> str:
    if fmt == "json":
        return report.to_json() + "\n"
    return report.to_text()

