"""
Spectral detection pipeline on the simulated register.

Stages:
  encode    -> amplitude_encode: first 2**n samples, L2-normalized into a state vector
  qft       -> forward QFT circuit applied by the state-vector kernels
  measure   -> exact Born probabilities or seeded multinomial shots
  decode    -> fold to bins 0..2**(n-1)-1, rank, bin * rate / 2**n
  interpret -> note names (note/chord), keypad symbol (dtmf), nothing (raw)

Features:
  - Deterministic shot sampling via PCG64(SeedSequence(seed))
  - Stage failures wrapped in PipelineError naming the stage
  - Dependency injection of the circuit builder for testability
  - Summary record via `logging_bridge`
"""

from __future__ import annotations

import json
import math
import time
from collections.abc import Callable, Iterator, Sequence
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from . import logging_bridge
from .audio import DTMF_COLUMNS, DTMF_EXTENDED_COLUMN, DTMF_ROWS, SampledSignal, dtmf_key_for
from .qcore import Circuit, StateVector, apply_circuit
from .qft import qft_circuit

NOTE_NAMES = ("A", "A#", "B", "C", "C#", "D", "D#", "E", "F", "F#", "G", "G#")
A4_HZ = 440.0
DTMF_TOLERANCE = 0.02
EXACT_SUM_TOL = 1e-9
MAX_SEED = (1 << 64) - 1

STAGES = ("encode", "qft", "measure", "decode", "interpret")


# =============================================================================
# EXCEPTIONS
# =============================================================================
class EncodingError(ValueError):
    """Signal cannot be loaded into a register (too short, all zero)."""


class DetectionError(ValueError):
    """Histogram or peak list cannot be decoded."""


class DtmfDecodeError(DetectionError):
    """No keypad symbol matches the peaks. Carries the per-peak classification."""

    def __init__(self, message: str, *, peaks: Sequence[float] = (), groups: Sequence[str] = ()) -> None:
        super().__init__(message)
        self.peaks = tuple(peaks)
        self.groups = tuple(groups)


class PipelineError(RuntimeError):
    """A detection stage failed. `stage` is one of STAGES; the cause is chained."""

    def __init__(self, stage: str, cause: BaseException) -> None:
        super().__init__(f"{stage} stage failed: {cause}")
        self.stage = stage
        self.cause = cause


# =============================================================================
# MODELS
# =============================================================================
class DetectMode(str, Enum):
    NOTE = "note"
    CHORD = "chord"
    DTMF = "dtmf"
    RAW = "raw"

    @property
    def default_top_k(self) -> int:
        return _DEFAULT_TOP_K[self]


_DEFAULT_TOP_K = {DetectMode.NOTE: 2, DetectMode.CHORD: 3, DetectMode.DTMF: 2, DetectMode.RAW: 5}


class MeasurementMode(str, Enum):
    EXACT = "exact"
    SHOTS = "shots"


@dataclass(frozen=True)
class MeasurementSpec:
    """Exact probabilities when `shots` is None, otherwise `shots` seeded draws."""

    shots: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.shots is not None and (isinstance(self.shots, bool) or int(self.shots) < 1):
            raise ValueError(f"shots must be >= 1 (got {self.shots!r})")
        _check_seed(self.seed)

    @property
    def mode(self) -> MeasurementMode:
        return MeasurementMode.EXACT if self.shots is None else MeasurementMode.SHOTS


@dataclass(frozen=True, eq=False)
class EncodedRegister:
    state: StateVector
    sample_rate: int
    n_samples: int

    def __post_init__(self) -> None:
        if self.n_samples != 1 << self.state.n_qubits:
            raise EncodingError(f"n_samples {self.n_samples} != 2**{self.state.n_qubits}")

    @property
    def n_qubits(self) -> int:
        return self.state.n_qubits


@dataclass(frozen=True, eq=False)
class MeasurementHistogram:
    """
    Outcome weights indexed by basis state.

    exact: probabilities summing to 1. shots: integer counts summing to `shots`.
    """

    mode: MeasurementMode
    weights: np.ndarray
    n_qubits: int
    shots: int = 0
    seed: int | None = None

    def __post_init__(self) -> None:
        mode = MeasurementMode(self.mode)
        object.__setattr__(self, "mode", mode)
        if mode is MeasurementMode.EXACT:
            w = np.array(self.weights, dtype=np.float64, copy=True).reshape(-1)
            if abs(float(w.sum()) - 1.0) > EXACT_SUM_TOL:
                raise DetectionError(f"exact weights sum to {float(w.sum())!r}, expected 1")
        else:
            w = np.array(self.weights, dtype=np.int64, copy=True).reshape(-1)
            if int(w.sum()) != self.shots:
                raise DetectionError(f"shot counts sum to {int(w.sum())}, expected {self.shots}")
        if w.size != 1 << self.n_qubits:
            raise DetectionError(f"{w.size} weights for a {self.n_qubits}-qubit register")
        if np.any(w < 0):
            raise DetectionError("negative measurement weight")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def entries(self) -> dict[int, float]:
        """Non-zero outcomes only."""
        return {int(i): self.weights[i].item() for i in np.flatnonzero(self.weights)}

    def probabilities(self) -> np.ndarray:
        if self.mode is MeasurementMode.EXACT:
            return self.weights
        return self.weights / float(self.shots)

    def to_csv(self) -> str:
        lines = ["bin,weight"]
        for i, w in enumerate(self.weights.tolist()):
            lines.append(f"{i},{w!r}" if isinstance(w, float) else f"{i},{w}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Peak:
    bin: int
    frequency_hz: float
    weight: float


@dataclass(frozen=True)
class NotePeak:
    name: str
    octave: int
    cents: float
    frequency_hz: float

    @property
    def label(self) -> str:
        return f"{self.name}{self.octave}"

    @property
    def reference_hz(self) -> float:
        return self.frequency_hz / 2.0 ** (self.cents / 1200.0)


@dataclass(frozen=True, eq=False)
class DetectionReport:
    peaks: tuple[Peak, ...]
    bin_resolution: float
    sample_rate: int
    n_qubits: int
    mode: DetectMode = DetectMode.RAW
    notes: tuple[NotePeak | None, ...] = ()
    dtmf_key: str | None = None
    measurement: MeasurementMode = MeasurementMode.EXACT
    shots: int = 0
    seed: int | None = None
    histogram: MeasurementHistogram | None = field(default=None, repr=False)

    @property
    def frequencies(self) -> list[float]:
        return [p.frequency_hz for p in self.peaks]

    def to_dict(self) -> dict[str, Any]:
        peaks = []
        for i, p in enumerate(self.peaks):
            note = self.notes[i] if i < len(self.notes) else None
            peaks.append({
                "bin": p.bin,
                "frequency_hz": p.frequency_hz,
                "weight": p.weight,
                "note": note.label if note else None,
                "cents": round(note.cents, 6) if note else None,
            })
        return {
            "mode": self.mode.value,
            "sample_rate": self.sample_rate,
            "n_qubits": self.n_qubits,
            "bin_resolution": self.bin_resolution,
            "measurement": self.measurement.value,
            "shots": self.shots,
            "seed": self.seed,
            "peaks": peaks,
            "dtmf_key": self.dtmf_key,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def to_text(self) -> str:
        head = (
            f"mode: {self.mode.value}  rate: {self.sample_rate} Hz  n_qubits: {self.n_qubits}  "
            f"bin_resolution: {self.bin_resolution!r} Hz  measurement: {self.measurement.value}"
        )
        if self.measurement is MeasurementMode.SHOTS:
            head += f" ({self.shots} shots, seed {self.seed})"
        lines = [head]
        for row in self.to_dict()["peaks"]:
            line = f"bin {row['bin']:>5}  frequency_hz {row['frequency_hz']!r:>16}  weight {row['weight']:.9f}"
            if row["note"]:
                line += f"  note {row['note']:<4} cents {row['cents']:+.2f}"
            lines.append(line)
        if self.mode is DetectMode.DTMF:
            lines.append(f"dtmf_key: {self.dtmf_key}")
        return "\n".join(lines) + "\n"


# =============================================================================
# STAGES
# =============================================================================
def _check_seed(seed: int) -> None:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be an integer in [0, 2**64) (got {seed!r})")


def amplitude_encode(signal: SampledSignal, n_qubits: int, *, zero_pad: bool = False) -> EncodedRegister:
    """amps_i = x_i / ||x||_2 over the first 2**n samples."""
    if isinstance(n_qubits, bool) or not isinstance(n_qubits, int) or n_qubits < 1:
        raise EncodingError(f"n_qubits must be a positive integer (got {n_qubits!r})")
    size = 1 << n_qubits
    x = signal.samples[:size]
    if x.size < size:
        if not zero_pad:
            raise EncodingError(
                f"{n_qubits} qubits need {size} samples but the signal has {x.size}; "
                "use fewer qubits or enable zero padding"
            )
        x = np.concatenate([x, np.zeros(size - x.size)])
    norm = float(np.linalg.norm(x))
    if norm == 0.0:
        raise EncodingError("signal is all zeros over the encoded window and cannot be normalized")
    return EncodedRegister(StateVector(n_qubits, x / norm), signal.sample_rate, size)


def measure_exact(state: StateVector) -> MeasurementHistogram:
    return MeasurementHistogram(MeasurementMode.EXACT, state.probabilities(), state.n_qubits)


def sample_shots(state: StateVector, shots: int, seed: int = 0) -> MeasurementHistogram:
    """`shots` i.i.d. draws; numpy PCG64 seeded through SeedSequence(seed)."""
    if isinstance(shots, bool) or not isinstance(shots, (int, np.integer)) or shots < 1:
        raise ValueError(f"shots must be an integer >= 1 (got {shots!r})")
    _check_seed(seed)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))
    p = state.probabilities()
    counts = rng.multinomial(int(shots), p / p.sum())
    return MeasurementHistogram(MeasurementMode.SHOTS, counts, state.n_qubits, shots=int(shots), seed=int(seed))


def decode_frequencies(
    hist: MeasurementHistogram,
    sample_rate: int,
    n_qubits: int,
    top_k: int,
    exclude_dc: bool = False,
) -> DetectionReport:
    """Rank the folded half-spectrum. Equal weights rank the lower bin first."""
    if isinstance(top_k, bool) or not isinstance(top_k, int) or top_k < 1:
        raise DetectionError(f"top_k must be >= 1 (got {top_k!r})")
    if hist.n_qubits != n_qubits:
        raise DetectionError(f"histogram covers {hist.n_qubits} qubits, decoder asked for {n_qubits}")
    size = 1 << n_qubits
    half = max(1, size // 2)
    weights = hist.weights[:half]
    bins = np.arange(half)
    # lexsort: last key is primary
    order = np.lexsort((bins, -weights.astype(np.float64)))
    peaks: list[Peak] = []
    for b in order.tolist():
        if exclude_dc and b == 0:
            continue
        w = weights[b].item()
        if w <= 0:
            continue
        peaks.append(Peak(bin=b, frequency_hz=(b * sample_rate) / size, weight=w))
        if len(peaks) == top_k:
            break
    if not peaks:
        raise DetectionError("empty histogram: no weight in the folded spectrum")
    return DetectionReport(
        peaks=tuple(peaks),
        bin_resolution=sample_rate / size,
        sample_rate=sample_rate,
        n_qubits=n_qubits,
        measurement=hist.mode,
        shots=hist.shots,
        seed=hist.seed,
        histogram=hist,
    )


def map_note(freq: float) -> NotePeak:
    """Nearest 12-TET note against A4 = 440 Hz."""
    if not math.isfinite(freq) or freq <= 0:
        raise DetectionError(f"note mapping needs a positive frequency (got {freq!r})")
    n = round(12.0 * math.log2(freq / A4_HZ))
    nearest = A4_HZ * 2.0 ** (n / 12.0)
    return NotePeak(
        name=NOTE_NAMES[n % 12],
        octave=4 + (n + 9) // 12,
        cents=1200.0 * math.log2(freq / nearest),
        frequency_hz=float(freq),
    )


def _match(freq: float, table: Sequence[float], tolerance: float) -> float | None:
    for ref in table:
        if abs(freq - ref) <= tolerance * ref:
            return ref
    return None


def decode_dtmf(peaks: Sequence[float], *, extended: bool = False, tolerance: float = DTMF_TOLERANCE) -> str:
    """Classify the two strongest peaks as one row and one column tone."""
    top = [float(f) for f in peaks[:2]]
    if len(top) < 2:
        raise DtmfDecodeError(f"DTMF needs two peaks (got {len(top)})", peaks=top)
    columns = (*DTMF_COLUMNS, DTMF_EXTENDED_COLUMN) if extended else DTMF_COLUMNS
    row = col = None
    groups: list[str] = []
    for f in top:
        r, c = _match(f, DTMF_ROWS, tolerance), _match(f, columns, tolerance)
        if r is not None:
            groups.append("row")
            if row is not None:
                raise DtmfDecodeError(f"two row tones {top}; no key", peaks=top, groups=groups)
            row = r
        elif c is not None:
            groups.append("column")
            if col is not None:
                raise DtmfDecodeError(f"two column tones {top}; no key", peaks=top, groups=groups)
            col = c
        else:
            groups.append("none")
    if row is None or col is None:
        missing = "row" if row is None else "column"
        raise DtmfDecodeError(
            f"no {missing} tone within {tolerance:.0%} among peaks {top} (classified {groups})",
            peaks=top,
            groups=groups,
        )
    return dtmf_key_for(row, col)


# =============================================================================
# PIPELINE
# =============================================================================
@contextmanager
def _stage(name: str, durations_us: dict[str, int]) -> Iterator[None]:
    t0 = time.perf_counter_ns()
    try:
        yield
    except PipelineError:
        raise
    except Exception as e:
        raise PipelineError(name, e) from e
    finally:
        durations_us[name] = logging_bridge.elapsed_us(t0)


def detect_pipeline(
    signal: SampledSignal,
    n_qubits: int = 10,
    mode: DetectMode | str = DetectMode.NOTE,
    measurement: MeasurementSpec | None = None,
    top_k: int | None = None,
    *,
    exclude_dc: bool = False,
    zero_pad: bool = False,
    extended_dtmf: bool = False,
    build_circuit: Callable[[int], Circuit] | None = None,
) -> DetectionReport:
    """
    encode -> QFT -> measure -> decode -> interpret.

    Args:
        build_circuit: Optional override of the forward QFT builder (for testing).
    """
    start_ns = time.perf_counter_ns()
    durations_us: dict[str, int] = {}
    mode = DetectMode(mode)
    measurement = measurement or MeasurementSpec()
    k = top_k if top_k is not None else mode.default_top_k
    builder = build_circuit or qft_circuit

    try:
        with _stage("encode", durations_us):
            register = amplitude_encode(signal, n_qubits, zero_pad=zero_pad)
        with _stage("qft", durations_us):
            transformed = apply_circuit(register.state, builder(n_qubits))
        with _stage("measure", durations_us):
            if measurement.shots is None:
                hist = measure_exact(transformed)
            else:
                hist = sample_shots(transformed, measurement.shots, measurement.seed)
        with _stage("decode", durations_us):
            report = decode_frequencies(hist, signal.sample_rate, n_qubits, k, exclude_dc)
        with _stage("interpret", durations_us):
            notes: tuple[NotePeak | None, ...] = ()
            key = None
            if mode in (DetectMode.NOTE, DetectMode.CHORD):
                notes = tuple(map_note(p.frequency_hz) if p.frequency_hz > 0 else None for p in report.peaks)
            elif mode is DetectMode.DTMF:
                key = decode_dtmf(report.frequencies, extended=extended_dtmf)
    except PipelineError as e:
        logging_bridge.error("detect", "pipeline", e.cause, stage=e.stage, durations_us=durations_us)
        raise

    report = DetectionReport(
        peaks=report.peaks,
        bin_resolution=report.bin_resolution,
        sample_rate=report.sample_rate,
        n_qubits=n_qubits,
        mode=mode,
        notes=notes,
        dtmf_key=key,
        measurement=hist.mode,
        shots=hist.shots,
        seed=hist.seed,
        histogram=hist,
    )

    logging_bridge.activity(
        "detect",
        "summary",
        mode=mode.value,
        n_qubits=n_qubits,
        sample_rate=signal.sample_rate,
        measurement=hist.mode.value,
        shots=hist.shots,
        peaks=[p.bin for p in report.peaks],
        dtmf_key=key,
        durations_us=durations_us,
        total_us=logging_bridge.elapsed_us(start_ns),
    )
    return report
