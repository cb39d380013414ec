# tests/test_render.py
import json
import math

import numpy as np
import pytest

from modules.qft_tones.lib import render
from modules.qft_tones.lib.detect import detect_pipeline
from modules.qft_tones.lib.qcore import ControlledPhase, Hadamard, PauliX, Phase, Swap, basis_state
from modules.qft_tones.lib.qft import qft_circuit


@pytest.mark.parametrize(
    "z,text",
    [
        (0j, "0.000000+0.000000i"),
        (complex(-0.0, -0.0), "0.000000+0.000000i"),
        (complex(-1e-9, 2e-9), "0.000000+0.000000i"),
        (0.5 - 0.25j, "0.500000-0.250000i"),
        (-1 + 1j, "-1.000000+1.000000i"),
    ],
)
def test_format_complex(z, text):
    assert render.format_complex(z) == text


def test_format_matrix_aligns_columns():
    text = render.format_matrix(np.array([[1, -1], [0.5j, 2]]))
    rows = text.splitlines()
    assert rows[0] == " 1.000000+0.000000i  -1.000000+0.000000i"
    assert len({len(r) for r in rows}) == 1


def test_format_state_uses_msb_first_labels():
    lines = render.format_state(basis_state(2, 2)).splitlines()
    assert lines[2] == "|10>  1.000000+0.000000i"


@pytest.mark.parametrize(
    "gate,label",
    [
        (Hadamard(0), "H(0)"),
        (PauliX(2), "X(2)"),
        (Phase(1, math.pi / 4), "P(1, 1/4*pi)"),
        (ControlledPhase(2, 0, -math.pi / 2), "CP(2, 0, -1/2*pi)"),
        (Swap(0, 3), "SWAP(0, 3)"),
    ],
)
def test_gate_label(gate, label):
    assert render.gate_label(gate) == label


def test_gate_list():
    lines = render.format_gate_list(qft_circuit(3)).splitlines()
    assert lines[0] == "3 qubits, 7 gates"
    assert lines[1] == "   0  H(0)"
    assert lines[-1] == "   6  SWAP(0, 2)"


def test_format_report_text_and_json(a440):
    report = detect_pipeline(a440)
    text = render.format_report(report)
    assert text.startswith("mode: note  rate: 44100 Hz  n_qubits: 10")
    assert "note A4" in text
    assert json.loads(render.format_report(report, "json")) == report.to_dict()
