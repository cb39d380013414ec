"""
WAV ingestion/emission, linear resampling and tone/chord/DTMF synthesis.

WAV support is deliberately narrow: RIFF little-endian, PCM (format code 1), 16-bit,
mono or stereo. Extra chunks between `fmt ` and `data` are skipped.
"""

from __future__ import annotations

import logging
import math
import os
import struct
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)

PCM_FORMAT = 1
BITS_PER_SAMPLE = 16
FULL_SCALE = 32768
HEADER_BYTES = 44
SAMPLE_TOL = 1e-9

DTMF_ROWS = (697.0, 770.0, 852.0, 941.0)
DTMF_COLUMNS = (1209.0, 1336.0, 1477.0)
DTMF_EXTENDED_COLUMN = 1633.0

_KEYPAD = ("123", "456", "789", "*0#")
_EXTENDED_KEYS = "ABCD"


class WavError(ValueError):
    """Base class for WAV container problems."""


class MalformedWavError(WavError):
    """Not a RIFF/WAVE file, or required chunks are missing or inconsistent."""


class UnsupportedCodecError(WavError):
    """Valid container, but not 16-bit PCM with 1-2 channels."""


class TruncatedWavError(WavError):
    """The data chunk is shorter than its header claims or ends mid-frame."""


class ClippingError(WavError):
    """Sample magnitude exceeds full scale; nothing is clipped silently."""


class AliasingError(ValueError):
    """Frequency at or above the Nyquist limit of the sample rate."""


class UnknownKeyError(KeyError):
    """Symbol is not on the DTMF keypad."""


# -----------------------------------------------------------------------------
# Types
# -----------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class SampledSignal:
    """Real samples normalized to [-1, 1] plus their sample rate in Hz."""

    sample_rate: int
    samples: np.ndarray

    def __post_init__(self) -> None:
        if isinstance(self.sample_rate, bool) or not isinstance(self.sample_rate, (int, np.integer)):
            raise ValueError(f"sample_rate must be an integer number of Hz (got {self.sample_rate!r})")
        if self.sample_rate < 1:
            raise ValueError(f"sample_rate must be >= 1 Hz (got {self.sample_rate})")
        arr = np.array(self.samples, dtype=np.float64, copy=True).reshape(-1)
        if not np.all(np.isfinite(arr)):
            raise ValueError("samples contain NaN or Inf")
        if arr.size and float(np.max(np.abs(arr))) > 1.0 + SAMPLE_TOL:
            worst = int(np.argmax(np.abs(arr)))
            raise ClippingError(f"sample #{worst} = {arr[worst]!r} exceeds full scale [-1, 1]")
        arr.flags.writeable = False
        object.__setattr__(self, "sample_rate", int(self.sample_rate))
        object.__setattr__(self, "samples", arr)

    def __len__(self) -> int:
        return int(self.samples.size)

    @property
    def duration_s(self) -> float:
        return len(self) / self.sample_rate

    @property
    def nyquist(self) -> float:
        return self.sample_rate / 2.0


@dataclass(frozen=True)
class WavMeta:
    channels: int
    bits_per_sample: int
    sample_rate: int
    data_length: int

    @property
    def frame_count(self) -> int:
        return self.data_length // (self.channels * self.bits_per_sample // 8)


# -----------------------------------------------------------------------------
# WAV codec
# -----------------------------------------------------------------------------
_FMT_STRUCT = struct.Struct("<HHIIHH")
_CHUNK_HEADER = struct.Struct("<4sI")


def read_wav(data: bytes) -> tuple[SampledSignal, WavMeta]:
    """Decode 16-bit PCM. Stereo is downmixed by averaging; samples are scaled by 1/32768."""
    if len(data) < 12:
        raise MalformedWavError(f"file is {len(data)} bytes; too short for a RIFF header")
    riff, _riff_size, wave = struct.unpack_from("<4sI4s", data, 0)
    if riff != b"RIFF" or wave != b"WAVE":
        raise MalformedWavError(f"not a RIFF/WAVE container (magic {riff!r}/{wave!r})")

    fmt: tuple[int, int, int, int, int, int] | None = None
    payload: bytes | None = None
    declared = 0
    offset = 12
    while offset + _CHUNK_HEADER.size <= len(data):
        chunk_id, size = _CHUNK_HEADER.unpack_from(data, offset)
        body = offset + _CHUNK_HEADER.size
        if chunk_id == b"fmt ":
            if size < _FMT_STRUCT.size or body + _FMT_STRUCT.size > len(data):
                raise MalformedWavError(f"fmt chunk too short ({size} bytes)")
            fmt = _FMT_STRUCT.unpack_from(data, body)
        elif chunk_id == b"data":
            if fmt is None:
                raise MalformedWavError("data chunk precedes fmt chunk")
            available = len(data) - body
            if size > available:
                raise TruncatedWavError(f"data chunk declares {size} bytes but only {available} remain")
            payload = data[body : body + size]
            declared = size
            break
        offset = body + size + (size & 1)  # chunks are word aligned

    if fmt is None:
        raise MalformedWavError("missing fmt chunk")
    audio_format, channels, sample_rate, byte_rate, block_align, bits = fmt
    if audio_format != PCM_FORMAT:
        raise UnsupportedCodecError(f"format code {audio_format} is not PCM ({PCM_FORMAT})")
    if bits != BITS_PER_SAMPLE:
        raise UnsupportedCodecError(f"{bits}-bit samples are not supported (16-bit only)")
    if channels not in (1, 2):
        raise UnsupportedCodecError(f"{channels} channels are not supported (mono or stereo only)")
    if sample_rate < 1 or block_align != channels * 2 or byte_rate != sample_rate * block_align:
        raise MalformedWavError(
            f"inconsistent fmt chunk (rate={sample_rate}, block_align={block_align}, byte_rate={byte_rate})"
        )
    if payload is None:
        raise MalformedWavError("missing data chunk")
    if declared % block_align:
        raise TruncatedWavError(f"data length {declared} is not a whole number of {block_align}-byte frames")

    frames = np.frombuffer(payload, dtype="<i2").reshape(-1, channels).astype(np.float64)
    mono = frames.mean(axis=1) / FULL_SCALE
    meta = WavMeta(channels=channels, bits_per_sample=bits, sample_rate=sample_rate, data_length=declared)
    return SampledSignal(sample_rate, mono), meta


def _quantize(samples: np.ndarray) -> np.ndarray:
    """Round half away from zero at 1/32768 steps; +1.0 lands on 32767."""
    scaled = samples * FULL_SCALE
    q = np.sign(scaled) * np.floor(np.abs(scaled) + 0.5)
    return np.clip(q, -FULL_SCALE, FULL_SCALE - 1).astype("<i2")


def write_wav(signal: SampledSignal) -> bytes:
    """Canonical 44-byte header + 16-bit PCM mono, little-endian."""
    samples = signal.samples
    if samples.size and float(np.max(np.abs(samples))) > 1.0 + SAMPLE_TOL:
        raise ClippingError("samples exceed full scale [-1, 1]")
    pcm = _quantize(samples).tobytes()
    block_align = 2
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF",
        36 + len(pcm),
        b"WAVE",
        b"fmt ",
        16,
        PCM_FORMAT,
        1,
        signal.sample_rate,
        signal.sample_rate * block_align,
        block_align,
        BITS_PER_SAMPLE,
        b"data",
        len(pcm),
    )
    return header + pcm


def read_wav_file(path: str | os.PathLike[str]) -> tuple[SampledSignal, WavMeta]:
    with open(path, "rb") as f:
        return read_wav(f.read())


def write_wav_file(path: str | os.PathLike[str], signal: SampledSignal) -> int:
    """Write `signal` to `path`; returns the byte count."""
    blob = write_wav(signal)
    with open(path, "wb") as f:
        f.write(blob)
    return len(blob)


# -----------------------------------------------------------------------------
# Synthesis
# -----------------------------------------------------------------------------
def synth_tone(
    freqs: Sequence[float],
    sample_rate: int,
    n_samples: int,
    amplitude: float = 0.9,
    weights: Sequence[float] | None = None,
) -> SampledSignal:
    """
    x[t] = amplitude * sum_i w_i * sin(2*pi*f_i*t / rate) / sum_i w_i

    Equal weights when `weights` is None. Every frequency must sit below Nyquist.
    """
    freqs = [float(f) for f in freqs]
    if not freqs:
        raise ValueError("synth_tone needs at least one frequency")
    if n_samples < 0:
        raise ValueError(f"n_samples must be >= 0 (got {n_samples})")
    if not 0.0 <= amplitude <= 1.0:
        raise ValueError(f"amplitude must be within [0, 1] (got {amplitude})")
    w = [1.0] * len(freqs) if weights is None else [float(x) for x in weights]
    if len(w) != len(freqs):
        raise ValueError(f"{len(freqs)} frequencies but {len(w)} weights")
    if any(x < 0 or not math.isfinite(x) for x in w) or sum(w) <= 0:
        raise ValueError(f"weights must be non-negative with a positive sum (got {w})")

    nyquist = sample_rate / 2.0
    for f in freqs:
        if not math.isfinite(f) or f < 0:
            raise ValueError(f"frequency must be a non-negative number of Hz (got {f})")
        if f >= nyquist:
            raise AliasingError(f"{f} Hz is at or above the Nyquist limit {nyquist} Hz for rate {sample_rate}")

    t = np.arange(n_samples, dtype=np.float64)
    mix = np.zeros(n_samples, dtype=np.float64)
    for f, wi in zip(freqs, w):
        mix += wi * np.sin(2.0 * np.pi * f * t / sample_rate)
    return SampledSignal(sample_rate, amplitude * mix / sum(w))


def dtmf_tones(key: str, *, extended: bool = False) -> tuple[float, float]:
    """(row Hz, column Hz) for a keypad symbol."""
    symbol = str(key).strip().upper()
    for r, row in enumerate(_KEYPAD):
        col = row.find(symbol) if len(symbol) == 1 else -1
        if col >= 0:
            return DTMF_ROWS[r], DTMF_COLUMNS[col]
    if extended and len(symbol) == 1 and symbol in _EXTENDED_KEYS:
        return DTMF_ROWS[_EXTENDED_KEYS.index(symbol)], DTMF_EXTENDED_COLUMN
    raise UnknownKeyError(f"{key!r} is not a DTMF key")


def dtmf_key_for(row: float, column: float) -> str:
    """Inverse of dtmf_tones over exact table frequencies."""
    r = DTMF_ROWS.index(row)
    if column == DTMF_EXTENDED_COLUMN:
        return _EXTENDED_KEYS[r]
    return _KEYPAD[r][DTMF_COLUMNS.index(column)]


def synth_dtmf(
    key: str,
    sample_rate: int,
    n_samples: int,
    amplitude: float = 0.9,
    *,
    extended: bool = False,
) -> SampledSignal:
    """Equal-weight row + column tone for one key press."""
    row, col = dtmf_tones(key, extended=extended)
    return synth_tone([row, col], sample_rate, n_samples, amplitude=amplitude)


# -----------------------------------------------------------------------------
# Resampling
# -----------------------------------------------------------------------------
def resample(signal: SampledSignal, target_rate: int) -> SampledSignal:
    """
    Linear interpolation onto the target grid, no anti-alias filter.
    Output length is floor(len * target / source).
    """
    if isinstance(target_rate, bool) or not isinstance(target_rate, (int, np.integer)) or target_rate < 1:
        raise ValueError(f"target_rate must be an integer >= 1 Hz (got {target_rate!r})")
    source_rate = signal.sample_rate
    if target_rate == source_rate:
        return signal
    if target_rate < source_rate:
        log.warning(
            "resampling %d Hz -> %d Hz without anti-alias filtering; content above %.1f Hz will alias",
            source_rate,
            target_rate,
            target_rate / 2.0,
        )
    n_out = len(signal) * int(target_rate) // source_rate
    if n_out == 0 or len(signal) == 0:
        return SampledSignal(int(target_rate), np.zeros(0))
    positions = np.arange(n_out, dtype=np.float64) * source_rate / target_rate
    out = np.interp(positions, np.arange(len(signal), dtype=np.float64), signal.samples)
    return SampledSignal(int(target_rate), out)
