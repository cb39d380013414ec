"""
Acceptance suite behind `qft-tones verify`.

Every check compares the simulated quantum path against the classical oracle in
`spectral` or against exactly known values, and reports the measured error next to
its tolerance. The circuit builder is injectable so a deliberately broken builder can
be shown to fail the suite.
"""

from __future__ import annotations

import math
import time
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from . import logging_bridge
from .audio import SampledSignal, read_wav, synth_dtmf, synth_tone, write_wav
from .detect import (
    MeasurementSpec,
    amplitude_encode,
    decode_frequencies,
    detect_pipeline,
    measure_exact,
    sample_shots,
)
from .models import QUANTUM, FourierConvention, Normalization
from .qcore import (
    Circuit,
    ControlledPhase,
    Gate,
    Hadamard,
    PauliX,
    Phase,
    Swap,
    apply_circuit,
    basis_state,
    circuit_to_unitary,
)
from .qft import QftCircuitSpec, dft_matrix, prepare_fourier_state, qft_circuit, relative_phase_demo
from .spectral import dft, fft, sparse_factorization_check

A440_PEAKS = (430.6640625, 473.73046875)
F_MAJOR = (130.81, 174.61, 440.0)
F_MAJOR_PEAKS = (129.19921875, 172.265625, 441.43066406)
F_MAJOR_NOTES = ("C3", "F3", "A4")
DTMF_ONE_PEAKS = (695.3125, 1210.9375)
DTMF_KEYS = "123456789*0#"

CircuitBuilder = Callable[[int], Circuit]


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    measured: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        head = f"{status}  {self.name:<26} error={self.measured:.3e}  tol={self.tolerance:.1e}"
        return f"{head}  {self.detail}" if self.detail else head


@dataclass
class VerifyReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(c.ok for c in self.checks)

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def to_text(self) -> str:
        lines = [c.line() for c in self.checks]
        lines.append(f"{len(self.checks) - len(self.failed)}/{len(self.checks)} checks passed")
        return "\n".join(lines) + "\n"


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def random_circuit(rng: np.random.Generator, n_qubits: int, n_gates: int) -> Circuit:
    """Uniform mix of every gate kind on random wires."""
    gates: list[Gate] = []
    for _ in range(n_gates):
        kind = int(rng.integers(0, 5 if n_qubits > 1 else 3))
        q = int(rng.integers(0, n_qubits))
        theta = float(rng.uniform(-2 * math.pi, 2 * math.pi))
        if kind == 0:
            gates.append(Hadamard(q))
        elif kind == 1:
            gates.append(PauliX(q))
        elif kind == 2:
            gates.append(Phase(q, theta))
        else:
            other = int((q + 1 + rng.integers(0, n_qubits - 1)) % n_qubits)
            gates.append(ControlledPhase(q, other, theta) if kind == 3 else Swap(q, other))
    return Circuit(n_qubits, tuple(gates))


def _max_err(a: np.ndarray, b: np.ndarray | list) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


# -----------------------------------------------------------------------------
# Checks
# -----------------------------------------------------------------------------
def check_qft_equivalence(build: CircuitBuilder) -> Check:
    worst = max(
        circuit_to_unitary(build(n)).max_abs_diff(dft_matrix(1 << n, QUANTUM)) for n in range(1, 9)
    )
    return Check("qft_dft_equivalence", worst < 1e-10, worst, 1e-10, "n=1..8 vs dft_matrix(sign=+1, unitary)")


def check_worked_examples(build: CircuitBuilder) -> Check:
    h = 1 / math.sqrt(2)
    plain = FourierConvention(sign=-1, normalization=Normalization.PLAIN)
    errs = [
        _max_err(apply_circuit(basis_state(2, 1), build(2)).amps, [0.5, 0.5j, -0.5, -0.5j]),
        _max_err(apply_circuit(basis_state(1, 0), build(1)).amps, [h, h]),
        _max_err(apply_circuit(basis_state(1, 1), build(1)).amps, [h, -h]),
        _max_err(dft([1, 2], plain).values, [3, -1]),
        _max_err(dft([1, 2, 0, 0], plain).values, [3, 1 - 2j, -1, 1 + 2j]),
        _max_err(fft([0, 1, 0, 0], plain).values, [1, -1j, -1, 1j]),
    ]
    uniform, ramp = relative_phase_demo(2)
    errs.append(_max_err(uniform.amps, [1, 0, 0, 0]))
    errs.append(_max_err(ramp.amps, [0, 1, 0, 0]))
    worst = max(errs)
    return Check("worked_examples", worst < 1e-12, worst, 1e-12, "F4|01>, QFT|0>, QFT|1>, DFT, FFT, phase demo")


def check_inverse_roundtrip(build: CircuitBuilder) -> Check:
    worst = 0.0
    hits = []
    for j, n in ((6, 3), (10, 4), (20, 5)):
        weights = measure_exact(apply_circuit(prepare_fourier_state(j, n), build(n).inverse())).weights
        hits.append(int(np.argmax(weights)) == j)
        worst = max(worst, 1.0 - float(weights[j]))
    ok = all(hits) and worst < 1e-3
    return Check("inverse_qft_roundtrip", ok, worst, 1e-3, "(6,3) (10,4) (20,5): 1 - P(j)")


def check_a440(build: CircuitBuilder) -> Check:
    report = detect_pipeline(synth_tone([440.0], 44100, 1024), 10, "note", build_circuit=build)
    err = _max_err(sorted(report.frequencies), sorted(A440_PEAKS)) if len(report.peaks) == 2 else math.inf
    return Check("a440_detection", err < 1e-9, err, 1e-9, f"peaks {report.frequencies}")


def check_f_major(build: CircuitBuilder) -> Check:
    report = detect_pipeline(synth_tone(F_MAJOR, 44100, 4096), 12, "chord", build_circuit=build)
    tol = 44100 / 4096
    if len(report.peaks) != 3:
        return Check("f_major_chord", False, math.inf, tol, f"peaks {report.frequencies}")
    err = _max_err(sorted(report.frequencies), sorted(F_MAJOR_PEAKS))
    labels = sorted(n.label for n in report.notes if n is not None)
    ok = err <= tol and labels == sorted(F_MAJOR_NOTES)
    return Check("f_major_chord", ok, err, tol, f"notes {labels}")


def check_dtmf(build: CircuitBuilder) -> Check:
    report = detect_pipeline(synth_dtmf("1", 8000, 1024), 10, "dtmf", build_circuit=build)
    err = _max_err(sorted(report.frequencies), sorted(DTMF_ONE_PEAKS)) if len(report.peaks) == 2 else math.inf
    wrong = []
    for key in DTMF_KEYS:
        try:
            got = detect_pipeline(synth_dtmf(key, 8000, 1024), 10, "dtmf", build_circuit=build).dtmf_key
        except Exception:
            got = None
        if got != key:
            wrong.append(key)
    ok = err < 1e-9 and report.dtmf_key == "1" and not wrong
    detail = f"key '1' -> {report.dtmf_key!r}; misdecoded {''.join(wrong) or 'none'}"
    return Check("dtmf_keys", ok, err, 1e-9, detail)


def check_oracle(build: CircuitBuilder, seed: int = 0) -> Check:
    rng = _rng(seed)
    worst = 0.0
    for i in range(100):
        n = 1 + i % 10
        x = rng.uniform(-1.0, 1.0, 1 << n)
        reg = amplitude_encode(SampledSignal(8000, x), n)
        quantum = measure_exact(apply_circuit(reg.state, build(n))).weights
        classical = np.abs(fft(reg.state.amps, QUANTUM).values) ** 2
        worst = max(worst, _max_err(quantum, classical))
    return Check("oracle_equivalence", worst < 1e-9, worst, 1e-9, "100 random signals, n=1..10")


def check_sparse_factorization() -> Check:
    rep = sparse_factorization_check()
    return Check("sparse_factorization", rep.ok and rep.u2_u1_holds, 0.0 if rep.ok else 1.0, 0.0, rep.summary())


def check_shots(build: CircuitBuilder, seed: int = 0) -> Check:
    reg = amplitude_encode(synth_tone([440.0], 44100, 1024), 10)
    state = apply_circuit(reg.state, build(10))
    exact = measure_exact(state)
    shots = sample_shots(state, 8192, seed)
    tv = 0.5 * float(np.sum(np.abs(shots.probabilities() - exact.weights)))
    top_exact = decode_frequencies(exact, 44100, 10, 1).peaks[0].bin
    top_shots = decode_frequencies(shots, 44100, 10, 1).peaks[0].bin
    ok = tv < 0.05 and top_exact == top_shots
    return Check("shot_sampling", ok, tv, 0.05, f"argmax exact {top_exact} shots {top_shots}, seed {seed}")


def check_three_qubit_example(build: CircuitBuilder) -> Check:
    report = detect_pipeline(
        synth_tone([440.0], 1764, 8), 3, "raw", MeasurementSpec(), top_k=1, build_circuit=build
    )
    err = abs(report.frequencies[0] - 441.0)
    return Check("three_qubit_a440", err == 0.0, err, 0.0, f"peaks {report.frequencies}")


def check_properties(build: CircuitBuilder, seed: int = 0) -> Check:
    rng = _rng(seed)
    problems: list[str] = []
    worst = 0.0

    for _ in range(50):
        n = int(rng.integers(1, 9))
        out = apply_circuit(basis_state(n, int(rng.integers(0, 1 << n))), random_circuit(rng, n, 50))
        worst = max(worst, abs(out.norm_squared() - 1.0))
    if worst >= 1e-9:
        problems.append("norm")

    if any(len(build(n)) != QftCircuitSpec(n).expected_gate_count for n in range(1, 17)):
        problems.append("gate_count")

    unitary_minus = FourierConvention(sign=-1, normalization=Normalization.UNITARY)
    for size in (2, 64, 4096):
        x = rng.standard_normal(size) + 1j * rng.standard_normal(size)
        e = abs(float(np.vdot(x, x).real) - float(np.sum(np.abs(fft(x, unitary_minus).values) ** 2)))
        rel = e / float(np.vdot(x, x).real)
        worst = max(worst, rel)
        if rel >= 1e-9:
            problems.append("parseval")

    reg = amplitude_encode(SampledSignal(8000, rng.uniform(-1, 1, 64)), 6)
    w = measure_exact(apply_circuit(reg.state, build(6))).weights
    fold = _max_err(w[1:32], w[63:32:-1])
    worst = max(worst, fold)
    if fold >= 1e-9:
        problems.append("fold")

    for _ in range(20):
        sig = SampledSignal(8000, rng.uniform(-1, 1, int(rng.integers(0, 512))))
        back, _meta = read_wav(write_wav(sig))
        e = _max_err(back.samples, sig.samples) if len(sig) else 0.0
        if len(back) != len(sig) or e > 1.0 / 32768 + 1e-12:
            problems.append("wav_roundtrip")
            break

    detail = "norm, gate count, Parseval, fold, WAV round trip"
    if problems:
        detail += f"; failing: {', '.join(sorted(set(problems)))}"
    return Check("property_suites", not problems, worst, 1e-9, detail)


# -----------------------------------------------------------------------------
# Entry point
# -----------------------------------------------------------------------------
def run_all(build_circuit: CircuitBuilder | None = None, *, seed: int = 0) -> VerifyReport:
    """Run every acceptance check. A crashing check is reported as a failure, not raised."""
    build = build_circuit or qft_circuit
    started = time.perf_counter_ns()
    plan: list[tuple[str, Callable[[], Check]]] = [
        ("qft_dft_equivalence", lambda: check_qft_equivalence(build)),
        ("worked_examples", lambda: check_worked_examples(build)),
        ("inverse_qft_roundtrip", lambda: check_inverse_roundtrip(build)),
        ("a440_detection", lambda: check_a440(build)),
        ("f_major_chord", lambda: check_f_major(build)),
        ("dtmf_keys", lambda: check_dtmf(build)),
        ("oracle_equivalence", lambda: check_oracle(build, seed)),
        ("sparse_factorization", check_sparse_factorization),
        ("shot_sampling", lambda: check_shots(build, seed)),
        ("three_qubit_a440", lambda: check_three_qubit_example(build)),
        ("property_suites", lambda: check_properties(build, seed)),
    ]
    report = VerifyReport()
    durations_us: dict[str, int] = {}
    for name, fn in plan:
        t0 = time.perf_counter_ns()
        try:
            report.checks.append(fn())
        except Exception as e:
            report.checks.append(Check(name, False, math.inf, 0.0, f"raised {type(e).__name__}: {e}"))
            logging_bridge.error("verify", name, e)
        durations_us[name] = logging_bridge.elapsed_us(t0)

    logging_bridge.activity(
        "verify",
        "summary",
        passed=len(report.checks) - len(report.failed),
        failed=[c.name for c in report.failed],
        durations_us=durations_us,
        total_us=logging_bridge.elapsed_us(started),
    )
    return report


__all__ = ["Check", "VerifyReport", "random_circuit", "run_all"]
