from __future__ import annotations

import logging
import time
from typing import Any

# Prefer the service JSONL sink; fall back to stdlib logging. Silent on import.
_logging_backend = None
try:
    from service import logging_utils as _svc_logging  # type: ignore

    _logging_backend = _svc_logging
except Exception:
    _logging_backend = None

_SECRET_KEYS = {"password", "token", "apikey", "api_key", "secret", "authorization"}


def _redact(record: dict[str, Any]) -> dict[str, Any]:
    if _logging_backend is not None and hasattr(_logging_backend, "redact"):
        return _logging_backend.redact(record)  # type: ignore[no-any-return]
    return {k: "***REDACTED***" if str(k).lower() in _SECRET_KEYS else v for k, v in record.items()}


def _record(component: str, op: str, fields: dict[str, Any]) -> dict[str, Any]:
    rec: dict[str, Any] = {"component": f"qft_tones.{component}", "op": op}
    rec.update(fields)
    return _redact(rec)


def elapsed_us(start_ns: int) -> int:
    """Microseconds since a `time.perf_counter_ns()` reading."""
    return int((time.perf_counter_ns() - start_ns) // 1000)


def activity(component: str, op: str, **fields: Any) -> None:
    """
    One activity record `{component: "qft_tones.<component>", op, **fields}`.
    Written to the service sink, or logged at INFO on `qft_tones.<component>`.
    """
    payload = _record(component, op, fields)
    if _logging_backend is not None:
        try:
            _logging_backend.write_activity_log(payload)
            return
        except Exception:
            pass
    logging.getLogger(f"qft_tones.{component}").info("%s", payload)


def error(component: str, op: str, exc: BaseException | None = None, **fields: Any) -> None:
    """Error record; `exc` lands under `error` as its repr."""
    if exc is not None:
        fields = {"error": repr(exc), **fields}
    payload = _record(component, op, fields)
    if _logging_backend is not None:
        try:
            _logging_backend.write_error_log(payload)
            return
        except Exception:
            pass
    logging.getLogger(f"qft_tones.{component}").error("%s", payload)
