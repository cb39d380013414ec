# tests/test_qft.py
import math

import numpy as np
import pytest

from modules.qft_tones.lib import qft
from modules.qft_tones.lib.detect import measure_exact
from modules.qft_tones.lib.models import CLASSICAL, QUANTUM
from modules.qft_tones.lib.qcore import (
    Circuit,
    ControlledPhase,
    Hadamard,
    Phase,
    StateVector,
    Swap,
    apply_circuit,
    basis_state,
    circuit_to_unitary,
)
from modules.qft_tones.lib.qft import FourierError, QftCircuitSpec
from modules.qft_tones.lib.verify import random_circuit

H = 1 / math.sqrt(2)


# ----------------------------------------------------------------------
# 1. Circuit vs Fourier matrix
# ----------------------------------------------------------------------
@pytest.mark.parametrize("n", range(1, 9))
def test_qft_circuit_equals_fourier_matrix(n):
    u = circuit_to_unitary(qft.qft_circuit(n))
    assert u.max_abs_diff(qft.dft_matrix(1 << n, QUANTUM)) < 1e-10


def test_one_qubit_qft_is_hadamard():
    u = circuit_to_unitary(qft.qft_circuit(1))
    np.testing.assert_allclose(u.elements, [[H, H], [H, -H]], atol=1e-15)


def test_two_qubit_worked_example():
    out = apply_circuit(basis_state(2, 1), qft.qft_circuit(2))
    np.testing.assert_allclose(out.amps, [0.5, 0.5j, -0.5, -0.5j], atol=1e-12)


def test_build_from_spec_matches_helper():
    spec = QftCircuitSpec(4, inverse=True, include_final_swaps=False)
    built = qft.build_qft_circuit(spec)
    assert built.gates == qft.qft_circuit(4, inverse=True, include_final_swaps=False).gates
    assert built.gates == qft.qft_circuit(4, include_final_swaps=False).inverse().gates
    assert built.count(Swap) == 0


def test_inverse_circuit_is_conjugate_transpose():
    fwd = circuit_to_unitary(qft.qft_circuit(4)).elements
    inv = circuit_to_unitary(qft.qft_circuit(4, inverse=True)).elements
    assert np.max(np.abs(inv - fwd.conj().T)) < 1e-12
    assert qft.qft_circuit(4, inverse=True) == qft.qft_circuit(4).inverse()


def test_inverse_qft_undoes_forward_on_random_states():
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(23)))
    circuits = {n: (qft.qft_circuit(n), qft.qft_circuit(n, inverse=True)) for n in range(1, 11)}
    for _ in range(100):
        n = int(rng.integers(1, 11))
        amps = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
        psi = StateVector(n, amps / np.linalg.norm(amps))
        fwd, inv = circuits[n]
        assert apply_circuit(apply_circuit(psi, fwd), inv).allclose(psi, atol=1e-10)


def test_without_swaps_output_is_bit_reversed():
    n = 4
    full = circuit_to_unitary(qft.qft_circuit(n)).elements
    bare = circuit_to_unitary(qft.qft_circuit(n, include_final_swaps=False)).elements
    perm = qft.bit_reverse_permutation(n)
    assert np.max(np.abs(bare - full[perm, :])) < 1e-12


# ----------------------------------------------------------------------
# 2. Structure
# ----------------------------------------------------------------------
@pytest.mark.parametrize("n", range(1, 17))
def test_gate_count_formula(n):
    c = qft.qft_circuit(n)
    assert len(c) == n + n * (n - 1) // 2 + n // 2 == QftCircuitSpec(n).expected_gate_count
    assert c.count(Hadamard) == n
    assert c.count(ControlledPhase) == n * (n - 1) // 2
    assert c.count(Swap) == n // 2


def test_controlled_phase_angles():
    gates = list(qft.qft_circuit(3, include_final_swaps=False))
    assert gates[1] == ControlledPhase(1, 0, math.pi / 2)
    assert gates[2] == ControlledPhase(2, 0, math.pi / 4)
    assert gates[4] == ControlledPhase(2, 1, math.pi / 2)


def test_spec_rejects_zero_qubits():
    with pytest.raises(FourierError):
        QftCircuitSpec(0)
    with pytest.raises(FourierError):
        qft.qft_circuit(0)


# ----------------------------------------------------------------------
# 3. Roots of unity and matrices
# ----------------------------------------------------------------------
def test_roots_of_unity_signs():
    np.testing.assert_allclose(qft.roots_of_unity(4, 1), [1, 1j, -1, -1j], atol=1e-15)
    np.testing.assert_allclose(qft.roots_of_unity(4), [1, -1j, -1, 1j], atol=1e-15)
    with pytest.raises(FourierError):
        qft.roots_of_unity(0)


def test_plain_dft_matrix_is_scaled_unitary():
    m = qft.dft_matrix(8, CLASSICAL)
    assert m.gram_scale == 8
    assert m.elements[1, 1] == pytest.approx(np.exp(-2j * np.pi / 8))


def test_bit_reverse_permutation():
    assert qft.bit_reverse_permutation(3).tolist() == [0, 4, 2, 6, 1, 5, 3, 7]


# ----------------------------------------------------------------------
# 4. Fourier-basis preparation
# ----------------------------------------------------------------------
def test_fourier_phases_for_six_on_three_qubits():
    np.testing.assert_allclose(qft.fourier_phases(6, 3), [0.0, math.pi, 6 * math.pi / 4])


def test_fourier_prep_circuit_layers():
    c = qft.fourier_prep_circuit(6, 3)
    assert [type(g) for g in c] == [Hadamard, Hadamard, Hadamard, Phase, Phase]
    assert [g.target for g in c.gates[3:]] == [1, 2]
    np.testing.assert_allclose([g.theta for g in c.gates[3:]], [math.pi, 6 * math.pi / 4])


@pytest.mark.parametrize("j,n", [(0, 1), (1, 2), (6, 3), (10, 4), (20, 5)])
def test_prepared_state_matches_qft_of_basis(j, n):
    expected = apply_circuit(basis_state(n, j), qft.qft_circuit(n))
    assert qft.prepare_fourier_state(j, n).allclose(expected, atol=1e-12)


@pytest.mark.parametrize("j,n", [(6, 3), (10, 4), (20, 5)])
def test_inverse_qft_recovers_index(j, n):
    state = apply_circuit(qft.prepare_fourier_state(j, n), qft.qft_circuit(n, inverse=True))
    weights = measure_exact(state).weights
    assert int(np.argmax(weights)) == j
    assert weights[j] > 0.999


@pytest.mark.parametrize("j,n", [(8, 3), (-1, 2), (0, 0)])
def test_fourier_index_out_of_range(j, n):
    with pytest.raises(FourierError):
        qft.fourier_phases(j, n)


def test_relative_phase_demo_separates_equal_magnitudes():
    uniform, ramp = qft.relative_phase_demo(2)
    np.testing.assert_allclose(uniform.amps, [1, 0, 0, 0], atol=1e-12)
    np.testing.assert_allclose(ramp.amps, [0, 1, 0, 0], atol=1e-12)


# ----------------------------------------------------------------------
# 5. Operator strings
# ----------------------------------------------------------------------
def test_render_two_qubit_decomposition():
    assert qft.render_decomposition(qft.qft_circuit(2)) == "SWAP_{0,1} H_{1} C_{1}(P_{0}^{1/2}) H_{0}"
    assert qft.render_decomposition(Circuit(2)) == "I"


def test_angle_text():
    assert qft.angle_text(math.pi / 2) == "1/2"
    assert qft.angle_text(-math.pi / 4) == "-1/4"
    assert qft.angle_text(math.pi) == "1"
    assert qft.angle_text(0.0) == "0"
    assert qft.angle_text(math.pi / 3) == "1/3"


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("inverse", [False, True])
def test_qft_decomposition_parses_back(n, inverse):
    c = qft.qft_circuit(n, inverse=inverse)
    assert qft.parse_decomposition(qft.render_decomposition(c), n) == c


def test_arbitrary_angles_parse_back_to_identical_gates():
    c = random_circuit(np.random.Generator(np.random.PCG64(np.random.SeedSequence(2))), 3, 25)
    assert qft.parse_decomposition(qft.render_decomposition(c), 3) == c


def test_random_phase_angles_survive_the_text_form_bit_for_bit():
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(17)))
    gates = tuple(Phase(0, float(theta)) for theta in rng.uniform(-6.0, 6.0, 2000))
    c = Circuit(1, gates)
    back = qft.parse_decomposition(qft.render_decomposition(c), 1)
    assert [g.theta for g in back] == [g.theta for g in c]


@pytest.mark.parametrize(
    "theta", [0.0, 1e-300, -5e-324, 0.1, math.pi / 3, -2 * math.pi / 7, math.nextafter(math.pi, 0)]
)
def test_angle_text_is_exact_at_the_edges(theta):
    back = qft.parse_decomposition(qft.render_decomposition(Circuit(1, (Phase(0, theta),))), 1)
    assert back.gates[0].theta == theta


@pytest.mark.parametrize("text", ["", "Q_{0}", "H_{0} P_{0}^{x}", "C_{0}(H_{1})"])
def test_parse_rejects_garbage(text):
    with pytest.raises(FourierError):
        qft.parse_decomposition(text, 2)


def test_parse_identity():
    assert len(qft.parse_decomposition("I", 3)) == 0
