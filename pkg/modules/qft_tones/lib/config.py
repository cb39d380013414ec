from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from typing import Any

from .detect import MAX_SEED, DetectMode, MeasurementSpec
from .utils import getenv_int, truthy

MAX_DETECT_QUBITS = 16
FORMATS = ("text", "json")
SEED_ENV = "QFT_TONES_SEED"


# -----------------------------
# Exceptions
# -----------------------------
class ConfigError(ValueError):
    """Raised when provided kwargs/env cannot form a valid Settings."""


# -----------------------------
# Models
# -----------------------------
@dataclass(frozen=True)
class Settings:
    """
    Canonical configuration for one 'qft_tones' detection run.

    `path` names a 16-bit PCM WAV file. Everything else has a default:
    10 qubits, exact measurement, top_k chosen by mode.
    """

    path: str
    n_qubits: int = 10
    mode: DetectMode = DetectMode.NOTE
    shots: int | None = None
    seed: int = 0
    top_k: int | None = None
    exclude_dc: bool = False
    zero_pad: bool = False
    extended_dtmf: bool = False
    resample_rate: int | None = None
    output_format: str = "text"
    dump_histogram: str | None = None

    @property
    def measurement(self) -> MeasurementSpec:
        return MeasurementSpec(shots=self.shots, seed=self.seed)

    @property
    def effective_top_k(self) -> int:
        return self.top_k if self.top_k is not None else self.mode.default_top_k

    # ------------- constructors -------------
    @classmethod
    def from_env_and_kwargs(cls, kwargs: Mapping[str, Any] | None) -> Settings:
        """
        Build Settings from kwargs with validation.

        Expected kwargs (all optional unless stated otherwise):

            path: str              # required, WAV input
            n_qubits: int = 10
            mode: str = "note"     # note | chord | dtmf | raw
            shots: int | None      # None -> exact probabilities
            seed: int              # falls back to $QFT_TONES_SEED, then 0
            top_k: int | None      # None -> mode default
            exclude_dc, zero_pad, extended_dtmf: bool = false
            resample_rate: int | None
            format: str = "text"   # text | json
            dump_histogram: str | None
        """
        kw = dict(kwargs or {})

        path = str(kw.get("path") or "").strip()
        if not path:
            raise ConfigError("Missing input 'path' (a WAV file).")

        try:
            mode = DetectMode(str(kw.get("mode") or "note").strip().lower())
        except ValueError as e:
            raise ConfigError(f"Unknown mode {kw.get('mode')!r}; expected one of note, chord, dtmf, raw.") from e

        seed_raw = kw.get("seed")
        if seed_raw is None:
            try:
                seed_raw = getenv_int(SEED_ENV, 0)
            except ValueError as e:
                raise ConfigError(str(e)) from e

        settings = cls(
            path=path,
            n_qubits=_as_int("n_qubits", kw.get("n_qubits"), 10),
            mode=mode,
            shots=_as_int("shots", kw.get("shots"), None),
            seed=_as_int("seed", seed_raw, 0),
            top_k=_as_int("top_k", kw.get("top_k"), None),
            exclude_dc=truthy(kw.get("exclude_dc")),
            zero_pad=truthy(kw.get("zero_pad")),
            extended_dtmf=truthy(kw.get("extended_dtmf")),
            resample_rate=_as_int("resample_rate", kw.get("resample_rate"), None),
            output_format=str(kw.get("format") or "text").strip().lower(),
            dump_histogram=(str(kw.get("dump_histogram")).strip() or None) if kw.get("dump_histogram") else None,
        )
        _validate_settings(settings)
        return settings


# -----------------------------
# Helpers
# -----------------------------
def _as_int(name: str, value: Any, default: int | None) -> int | None:
    if value is None or (isinstance(value, str) and not value.strip()):
        return default
    if isinstance(value, bool):
        raise ConfigError(f"'{name}' must be an integer (got {value!r}).")
    try:
        return int(str(value).strip()) if isinstance(value, str) else int(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"'{name}' must be an integer (got {value!r}).") from e


def _validate_settings(s: Settings) -> None:
    if not 1 <= s.n_qubits <= MAX_DETECT_QUBITS:
        raise ConfigError(f"'n_qubits' must be within 1..{MAX_DETECT_QUBITS} (got {s.n_qubits}).")
    if s.shots is not None and s.shots < 1:
        raise ConfigError(f"'shots' must be >= 1 (got {s.shots}).")
    if not 0 <= s.seed <= MAX_SEED:
        raise ConfigError(f"'seed' must be a non-negative 64-bit integer (got {s.seed}).")
    if s.top_k is not None and s.top_k < 1:
        raise ConfigError(f"'top_k' must be >= 1 (got {s.top_k}).")
    if s.resample_rate is not None and s.resample_rate < 1:
        raise ConfigError(f"'resample_rate' must be >= 1 Hz (got {s.resample_rate}).")
    if s.output_format not in FORMATS:
        raise ConfigError(f"'format' must be one of {', '.join(FORMATS)} (got {s.output_format!r}).")
