# service/config_schema.py
"""
Command-line configuration: optional defaults file + environment + flags -> CliConfig.

Defaults file (JSON, or YAML with PyYAML installed) maps subcommand names to flag
defaults, e.g.

    {"detect": {"n_qubits": 12, "mode": "chord"}, "synth": {"rate": 8000}}

Precedence, lowest first: built-in defaults, defaults file, environment, flags.
Every combination is validated here, before any computation starts.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Any

logger = logging.getLogger(__name__)

try:
    import yaml  # type: ignore
except Exception:  # pragma: no cover
    yaml = None  # YAML optional


class ConfigError(ValueError):
    """Raised when the config or a flag combination is invalid."""


@dataclass
class _LoadResult:
    cfg: dict[str, Any]
    source: str


CONFIG_ENV = "QFT_TONES_CONFIG"
SEED_ENV = "QFT_TONES_SEED"

MAX_SEED = (1 << 64) - 1
MAX_DETECT_QUBITS = 16
MAX_UNITARY_QUBITS = 10
MODES = ("note", "chord", "dtmf", "raw")
FORMATS = ("text", "json")
SYNTH_KINDS = ("tone", "chord", "dtmf")
F_MAJOR = (130.81, 174.61, 440.0)

_ALLOWED_KEYS: dict[str, frozenset[str]] = {
    "detect": frozenset({
        "n_qubits",
        "mode",
        "shots",
        "seed",
        "top_k",
        "format",
        "exclude_dc",
        "zero_pad",
        "extended_dtmf",
        "workers",
        "resample_rate",
    }),
    "synth": frozenset({"rate", "samples", "amplitude", "freq", "weight", "key", "extended"}),
    "qft": frozenset({"n", "inverse", "unitary", "decompose", "no_swaps"}),
    "verify": frozenset({"seed"}),
}

_BUILTIN: dict[str, dict[str, Any]] = {
    "detect": {
        "n_qubits": 10,
        "mode": "note",
        "shots": None,
        "seed": 0,
        "top_k": None,
        "format": "text",
        "exclude_dc": False,
        "zero_pad": False,
        "extended_dtmf": False,
        "workers": 4,
        "resample_rate": None,
    },
    "synth": {
        "rate": 44100,
        "samples": 1024,
        "amplitude": 0.9,
        "freq": None,
        "weight": None,
        "key": None,
        "extended": False,
    },
    "qft": {"n": None, "inverse": False, "unitary": False, "decompose": False, "no_swaps": False},
    "verify": {"seed": 0},
}


# -----------------------------------------------------------------------------
# Defaults file
# -----------------------------------------------------------------------------
def load_config(path: str | None = None) -> dict[str, Any]:
    """
    Load the defaults file.

    Resolution order:
      1) Explicit `path` argument (if provided)
      2) os.environ['QFT_TONES_CONFIG'] (if set)
      3) Empty config (built-in defaults only)
    """
    resolved_path = path or os.environ.get(CONFIG_ENV)
    if not resolved_path:
        logger.debug("%s not provided; using built-in defaults.", CONFIG_ENV)
        return {}
    cfg = _read_any(resolved_path).cfg
    validate(cfg)
    return cfg


def validate(cfg: dict[str, Any]) -> None:
    """
    Validate a defaults file. Raise ConfigError on any problem.
    No prints, no sys.exit().
    """
    if not isinstance(cfg, dict):
        raise ConfigError("Config must be a mapping of subcommand -> defaults.")
    for section, values in cfg.items():
        if section not in _ALLOWED_KEYS:
            raise ConfigError(f"Unknown config section {section!r}; expected one of {', '.join(_ALLOWED_KEYS)}.")
        if not isinstance(values, dict):
            raise ConfigError(f"Config section {section!r} must be an object.")
        unknown = sorted(set(values) - _ALLOWED_KEYS[section])
        if unknown:
            raise ConfigError(f"Unknown key(s) in {section!r}: {', '.join(unknown)}.")


def _read_any(path: str) -> _LoadResult:
    lower = path.lower()
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except FileNotFoundError as e:
        raise ConfigError(f"Config file not found: {path}") from e
    except OSError as e:
        raise ConfigError(f"Failed to read config file: {path}: {e}") from e

    if lower.endswith((".yml", ".yaml")):
        if yaml is None:
            raise ConfigError("YAML config requested but PyYAML is not installed.")
        try:
            data = yaml.safe_load(text)
        except Exception as e:
            raise ConfigError(f"Invalid YAML in {path}: {e}") from e
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigError("Top-level YAML must be a mapping/object.")
        return _LoadResult(cfg=data, source=path)

    try:
        data = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as e:
        raise ConfigError(f"Invalid JSON in {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError("Top-level JSON must be an object.")
    return _LoadResult(cfg=data, source=path)


# -----------------------------------------------------------------------------
# CliConfig
# -----------------------------------------------------------------------------
@dataclass(frozen=True)
class CliConfig:
    """Fully resolved, validated invocation. Handlers read only from this."""

    subcommand: str
    # detect
    inputs: tuple[str, ...] = ()
    n_qubits: int = 10
    mode: str = "note"
    shots: int | None = None
    seed: int = 0
    top_k: int | None = None
    output_format: str = "text"
    exclude_dc: bool = False
    zero_pad: bool = False
    extended_dtmf: bool = False
    dump_histogram: str | None = None
    workers: int = 4
    resample_rate: int | None = None
    # synth
    synth_kind: str | None = None
    output: str | None = None
    sample_rate: int = 44100
    n_samples: int = 1024
    amplitude: float = 0.9
    freqs: tuple[float, ...] = ()
    weights: tuple[float, ...] | None = None
    key: str | None = None
    # qft
    qft_n: int = 1
    inverse: bool = False
    unitary: bool = False
    decompose: bool = False
    no_swaps: bool = False

    def detect_kwargs(self, path: str) -> dict[str, Any]:
        """kwargs for modules.qft_tones.run on one input."""
        return {
            "path": path,
            "n_qubits": self.n_qubits,
            "mode": self.mode,
            "shots": self.shots,
            "seed": self.seed,
            "top_k": self.top_k,
            "exclude_dc": self.exclude_dc,
            "zero_pad": self.zero_pad,
            "extended_dtmf": self.extended_dtmf,
            "resample_rate": self.resample_rate,
            "format": self.output_format,
            "dump_histogram": self.dump_histogram,
        }


def _layered(section: str, args: argparse.Namespace, file_cfg: Mapping[str, Any]) -> dict[str, Any]:
    """built-in < file < flag, per key of `section`."""
    merged = dict(_BUILTIN[section])
    merged.update(file_cfg.get(section) or {})
    for k in _BUILTIN[section]:
        v = getattr(args, k, None)
        if v is not None:
            merged[k] = v
    return merged


def _int(name: str, value: Any) -> int:
    if isinstance(value, bool):
        raise ConfigError(f"{name} must be an integer (got {value!r}).")
    try:
        if isinstance(value, float) and not value.is_integer():
            raise ValueError
        return int(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{name} must be an integer (got {value!r}).") from e


def _opt_int(name: str, value: Any) -> int | None:
    return None if value is None else _int(name, value)


def _float(name: str, value: Any) -> float:
    try:
        return float(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{name} must be a number (got {value!r}).") from e


def _bool(name: str, value: Any) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.strip().lower() in {"1", "true", "yes", "on", "0", "false", "no", "off"}:
        return value.strip().lower() in {"1", "true", "yes", "on"}
    raise ConfigError(f"{name} must be a boolean (got {value!r}).")


def _float_list(name: str, value: Any) -> tuple[float, ...] | None:
    if value is None:
        return None
    items = value if isinstance(value, (list, tuple)) else [value]
    return tuple(_float(name, v) for v in items)


def _resolve_seed(flag_or_file: Any, args: argparse.Namespace, env: Mapping[str, str]) -> int:
    """--seed beats $QFT_TONES_SEED beats the defaults file."""
    if getattr(args, "seed", None) is not None:
        raw: Any = args.seed
        source = "--seed"
    elif (env.get(SEED_ENV) or "").strip():
        raw = env[SEED_ENV].strip()
        source = SEED_ENV
    else:
        raw = flag_or_file
        source = "seed"
    try:
        seed = int(raw) if not isinstance(raw, bool) else None
    except (TypeError, ValueError):
        seed = None
    if seed is None:
        raise ConfigError(f"{source} must be an integer (got {raw!r}).")
    if not 0 <= seed <= MAX_SEED:
        raise ConfigError(f"{source} must be within 0..2**64-1 (got {seed}).")
    return seed


def build_cli_config(
    args: argparse.Namespace,
    file_cfg: Mapping[str, Any] | None = None,
    env: Mapping[str, str] | None = None,
) -> CliConfig:
    """Resolve and validate one invocation. Raises ConfigError; performs no I/O."""
    file_cfg = file_cfg or {}
    env = os.environ if env is None else env
    cmd = args.cmd

    if cmd == "detect":
        m = _layered("detect", args, file_cfg)
        inputs = tuple(getattr(args, "inputs", None) or ())
        if not inputs:
            raise ConfigError("detect needs at least one input WAV file.")
        n_qubits = _int("--n-qubits", m["n_qubits"])
        if not 1 <= n_qubits <= MAX_DETECT_QUBITS:
            raise ConfigError(f"--n-qubits must be within 1..{MAX_DETECT_QUBITS} (got {n_qubits}).")
        shots = _opt_int("--shots", m["shots"])
        if shots is not None and shots < 1:
            raise ConfigError(f"--shots must be >= 1 (got {shots}).")
        top_k = _opt_int("--top-k", m["top_k"])
        if top_k is not None and top_k < 1:
            raise ConfigError(f"--top-k must be >= 1 (got {top_k}).")
        mode = str(m["mode"]).lower()
        if mode not in MODES:
            raise ConfigError(f"--mode must be one of {', '.join(MODES)} (got {mode!r}).")
        fmt = str(m["format"]).lower()
        if fmt not in FORMATS:
            raise ConfigError(f"--format must be one of {', '.join(FORMATS)} (got {fmt!r}).")
        workers = _int("--workers", m["workers"])
        if workers < 1:
            raise ConfigError(f"--workers must be >= 1 (got {workers}).")
        resample_rate = _opt_int("--resample", m["resample_rate"])
        if resample_rate is not None and resample_rate < 1:
            raise ConfigError(f"--resample must be >= 1 Hz (got {resample_rate}).")
        dump = getattr(args, "dump_histogram", None)
        if dump and len(inputs) > 1:
            raise ConfigError("--dump-histogram takes a single input file.")
        return CliConfig(
            subcommand=cmd,
            inputs=inputs,
            n_qubits=n_qubits,
            mode=mode,
            shots=shots,
            seed=_resolve_seed(m["seed"], args, env),
            top_k=top_k,
            output_format=fmt,
            exclude_dc=_bool("--exclude-dc", m["exclude_dc"]),
            zero_pad=_bool("--zero-pad", m["zero_pad"]),
            extended_dtmf=_bool("--extended", m["extended_dtmf"]),
            dump_histogram=dump,
            workers=workers,
            resample_rate=resample_rate,
        )

    if cmd == "synth":
        m = _layered("synth", args, file_cfg)
        kind = getattr(args, "kind", None)
        if kind not in SYNTH_KINDS:
            raise ConfigError(f"synth kind must be one of {', '.join(SYNTH_KINDS)} (got {kind!r}).")
        output = getattr(args, "out", None)
        if not output:
            raise ConfigError("synth needs --out PATH.")
        rate = _int("--rate", m["rate"])
        if rate < 1:
            raise ConfigError(f"--rate must be >= 1 Hz (got {rate}).")
        samples = _int("--samples", m["samples"])
        if samples < 0:
            raise ConfigError(f"--samples must be >= 0 (got {samples}).")
        amplitude = _float("--amplitude", m["amplitude"])
        if not 0.0 <= amplitude <= 1.0:
            raise ConfigError(f"--amplitude must be within [0, 1] (got {amplitude}).")
        freqs = _float_list("--freq", m["freq"])
        weights = _float_list("--weight", m["weight"])
        key = m["key"]
        if kind == "tone":
            freqs = freqs or (440.0,)
        elif kind == "chord":
            freqs = freqs or F_MAJOR
        else:
            if key is None or not str(key).strip():
                raise ConfigError("synth dtmf needs --key.")
            if freqs:
                raise ConfigError("synth dtmf takes --key, not --freq.")
            freqs = ()
        if weights is not None and len(weights) != len(freqs):
            raise ConfigError(f"{len(freqs)} --freq value(s) but {len(weights)} --weight value(s).")
        if any(f < 0 for f in freqs):
            raise ConfigError(f"--freq values must be >= 0 Hz (got {list(freqs)}).")
        return CliConfig(
            subcommand=cmd,
            synth_kind=kind,
            output=output,
            sample_rate=rate,
            n_samples=samples,
            amplitude=amplitude,
            freqs=tuple(freqs),
            weights=weights,
            key=str(key).strip() if key is not None else None,
            extended_dtmf=_bool("--extended", m["extended"]),
        )

    if cmd == "qft":
        m = _layered("qft", args, file_cfg)
        if m["n"] is None:
            raise ConfigError("qft needs --n.")
        n = _int("--n", m["n"])
        if n < 1:
            raise ConfigError(f"--n must be >= 1 (got {n}).")
        unitary = _bool("--unitary", m["unitary"])
        if unitary and n > MAX_UNITARY_QUBITS:
            raise ConfigError(f"--unitary is limited to n <= {MAX_UNITARY_QUBITS} (got {n}).")
        return CliConfig(
            subcommand=cmd,
            qft_n=n,
            inverse=_bool("--inverse", m["inverse"]),
            unitary=unitary,
            decompose=_bool("--decompose", m["decompose"]),
            no_swaps=_bool("--no-swaps", m["no_swaps"]),
        )

    if cmd == "verify":
        m = _layered("verify", args, file_cfg)
        return CliConfig(subcommand=cmd, seed=_resolve_seed(m["seed"], args, env))

    raise ConfigError(f"Unknown subcommand {cmd!r}.")
