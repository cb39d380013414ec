# service/logging_utils.py
"""
Structured JSONL audit trail for CLI runs and detection pipelines.

One JSON object per line in $LOG_DIR/{prefix}-YYYY-MM-DD.jsonl. Environment is read on
every call so tests (and long-lived processes) can redirect or disable the sinks:

  LOG_DIR                  directory for the files (default ./local/logs)
  ACTIVITY_LOG_PREFIX      activity file prefix (default "activity")
  ERROR_LOG_PREFIX         error file prefix (default "error")
  ACTIVITY_LOG_MAX_BYTES   size-based rotation threshold; <= 0 disables it
  LOG_DISABLE              truthy -> records are dropped
"""

from __future__ import annotations

import contextlib
import datetime as _dt
import json
import os
import socket
from collections.abc import Iterable
from typing import Any

import numpy as np

_REDACTED = "***REDACTED***"

# Case-insensitive substrings; any matching key has its value replaced
_DEFAULT_REDACT_KEYS = {"password", "token", "apikey", "api_key", "secret", "authorization", "cookie"}

_HOSTNAME = socket.gethostname()
_PID = os.getpid()


# ---- Environment -------------------------------------------------------------
def _log_dir() -> str:
    return os.getenv("LOG_DIR", os.path.join("local", "logs"))


def _activity_prefix() -> str:
    return os.getenv("ACTIVITY_LOG_PREFIX", "activity")


def _error_prefix() -> str:
    return os.getenv("ERROR_LOG_PREFIX", "error")


def _max_bytes() -> int:
    try:
        return int(os.getenv("ACTIVITY_LOG_MAX_BYTES", "0"))
    except ValueError:
        return 0


def logging_disabled() -> bool:
    return os.getenv("LOG_DISABLE", "").strip().lower() in {"1", "true", "yes", "on"}


# ---- Public API --------------------------------------------------------------
def write_activity_log(record: dict[str, Any]) -> None:
    """
    Append one activity record. Never mutates `record`.
    May raise on unrecoverable I/O; callers in lib/ fall back to stdlib logging.
    """
    if logging_disabled():
        return
    _write_jsonl(_log_path_for_today(_activity_prefix()), record)


def write_error_log(record: dict[str, Any]) -> None:
    """Append one error record, parallel to the activity log."""
    if logging_disabled():
        return
    _write_jsonl(_log_path_for_today(_error_prefix()), record)


def get_activity_log_path() -> str:
    return _log_path_for_today(_activity_prefix())


def get_error_log_path() -> str:
    return _log_path_for_today(_error_prefix())


def redact(record: dict[str, Any], keys: set[str] | None = None) -> dict[str, Any]:
    """Redacted deep copy of `record`; keys containing any of `keys` are masked."""
    return _redact_deep(record, keys or _DEFAULT_REDACT_KEYS)


# ---- Internal helpers --------------------------------------------------------
def _log_path_for_today(prefix: str) -> str:
    return os.path.join(_log_dir(), f"{prefix}-{_dt.date.today().isoformat()}.jsonl")


def _rotate_file_if_needed(path: str) -> None:
    """Size rotation only; the date in the filename already rotates daily."""
    limit = _max_bytes()
    if limit <= 0:
        return
    try:
        if os.path.getsize(path) < limit:
            return
    except FileNotFoundError:
        return
    stamp = _dt.datetime.now().strftime("%Y%m%d-%H%M%S")
    with contextlib.suppress(FileNotFoundError):
        os.replace(path, f"{path}.{stamp}")


def _json_default(obj: Any) -> Any:
    # numpy scalars and small arrays show up in pipeline records
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return repr(obj)


def _key_matches(name: str, patterns: Iterable[str]) -> bool:
    n = name.lower()
    return any(pat in n for pat in patterns)


def _redact_deep(value: Any, patterns: Iterable[str]) -> Any:
    if isinstance(value, dict):
        return {
            k: (_REDACTED if isinstance(k, str) and _key_matches(k, patterns) else _redact_deep(v, patterns))
            for k, v in value.items()
        }
    if isinstance(value, (list, tuple)):
        return [_redact_deep(v, patterns) for v in value]
    return value


def _with_metadata(record: dict[str, Any]) -> dict[str, Any]:
    meta = record.get("_meta")
    meta = dict(meta) if isinstance(meta, dict) else {}
    meta.update({"host": _HOSTNAME, "pid": _PID})
    return {**record, "_meta": meta}


def _write_jsonl(path: str, record: dict[str, Any]) -> None:
    """
    Redact, add host/pid, serialize, then append with a single O_APPEND write.
    One retry on OSError after re-creating the directory.
    """
    payload = _with_metadata(_redact_deep(record, _DEFAULT_REDACT_KEYS))
    # Serialize before touching the filesystem so a bad record leaves no partial line.
    data = (json.dumps(payload, ensure_ascii=False, separators=(",", ":"), default=_json_default) + "\n").encode(
        "utf-8"
    )

    def _append_once() -> None:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        _rotate_file_if_needed(path)
        fd = os.open(path, os.O_CREAT | os.O_APPEND | os.O_WRONLY, 0o644)
        try:
            os.write(fd, data)
        finally:
            os.close(fd)

    try:
        _append_once()
    except OSError:
        _append_once()
