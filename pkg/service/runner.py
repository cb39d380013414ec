# service/runner.py
"""
Module execution for the CLI.

run_module_once() imports `<module>.run`, calls it with normalized kwargs and writes one
activity record per call. run_batch() fans a list of kwargs sets (one per input file)
out over a thread pool and hands the outcomes back in input order.
"""

from __future__ import annotations

import importlib
import json
import logging
import time
import uuid
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any

_write_activity_log = None
try:
    _write_activity_log = importlib.import_module("service.logging_utils").write_activity_log
except Exception:
    _write_activity_log = None

log = logging.getLogger(__name__)

_TRUE = frozenset({"true", "t", "yes", "y"})
_FALSE = frozenset({"false", "f", "no", "n"})
# Values under these keys are file names; "440.wav" or "007" must stay strings.
_PATH_KEYS = ("path", "dump_histogram")


def now_iso() -> str:
    return datetime.now(timezone.utc).astimezone().isoformat(timespec="seconds")


def _coerce_scalar(text: str) -> Any:
    s = text.strip()
    low = s.lower()
    if low in _TRUE:
        return True
    if low in _FALSE:
        return False
    if (s.startswith("[") and s.endswith("]")) or (s.startswith("{") and s.endswith("}")):
        try:
            return json.loads(s)
        except json.JSONDecodeError:
            return s
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def _normalize_kwargs_types(kwargs: dict[str, object] | None) -> dict[str, object]:
    """
    String kwargs (from a defaults file or the environment) become bools, numbers or
    JSON lists/objects. Path-valued keys and non-strings pass through.
    """
    if not kwargs:
        return {}
    return {
        k: v if not isinstance(v, str) or k in _PATH_KEYS or k.endswith("_path") else _coerce_scalar(v)
        for k, v in kwargs.items()
    }


def _resolve_callable(module_path: str) -> Callable[..., Any]:
    mod = importlib.import_module(module_path)
    run = getattr(mod, "run", None)
    if not callable(run):
        raise AttributeError(f"Module {module_path!r} does not define a callable `run(**kwargs)`.")
    return run  # type: ignore[no-any-return]


def _emit_activity_jsonl(record: dict[str, Any]) -> None:
    if _write_activity_log:
        try:
            _write_activity_log(record)  # type: ignore[misc]
            return
        except Exception as e:
            log.warning("activity sink failed: %s", e)
    log.info("activity %s", record)


@dataclass
class RunResult:
    ok: bool
    message: str
    text: str | None = None
    meta: dict[str, Any] = field(default_factory=dict)


def _coerce_result(value: Any) -> RunResult:
    """`run()` may return None, text, a meta dict, or (text, meta)."""
    match value:
        case None:
            return RunResult(ok=True, message="OK")
        case str():
            return RunResult(ok=True, message="OK", text=value)
        case dict():
            return RunResult(ok=True, message=str(value.get("message", "OK")), meta=value)
        case (str() as text, dict() as meta):
            return RunResult(ok=True, message=str(meta.get("message", "OK")), text=text, meta=meta)
    raise TypeError(f"run() returned {type(value).__name__}; expected str, None, dict or (str, dict)")


def _report_digest(meta: dict[str, Any]) -> dict[str, Any]:
    report = meta.get("report")
    if not isinstance(report, dict):
        return {}
    return {
        "mode": report.get("mode"),
        "peaks": [p.get("bin") for p in report.get("peaks", [])],
        "dtmf_key": report.get("dtmf_key"),
    }


def run_module_once(
    module: str,
    kwargs: dict[str, object] | None = None,
    trigger_type: str = "cli",
    job_context: dict[str, object] | None = None,
) -> tuple[RunResult, str]:
    """
    Call `<module>.run(**kwargs)` once and log the outcome.

    Returns (RunResult, run_id). Exceptions from the module are re-raised after the
    activity record is written so the CLI can map them to exit codes.
    """
    run_id = uuid.uuid4().hex
    kw = _normalize_kwargs_types(kwargs)
    run_callable = _resolve_callable(module)

    record: dict[str, Any] = {
        "ts": now_iso(),
        "run_id": run_id,
        "module": module,
        "trigger_type": trigger_type,
        "kwargs": kw,
    }
    if job_context:
        record["context"] = dict(job_context)

    t0 = time.perf_counter()
    try:
        result = _coerce_result(run_callable(**kw))
    except Exception as e:
        record.update(
            ok=False,
            message=str(e),
            exception_type=type(e).__name__,
            duration_ms=int((time.perf_counter() - t0) * 1000),
        )
        _emit_activity_jsonl(record)
        raise

    record.update(
        ok=result.ok,
        message=result.message,
        duration_ms=int((time.perf_counter() - t0) * 1000),
        **_report_digest(result.meta),
    )
    _emit_activity_jsonl(record)
    return result, run_id


@dataclass
class BatchItem:
    """One input of a batch: either `result` or `error` is set."""

    index: int
    kwargs: dict[str, object]
    result: RunResult | None = None
    run_id: str | None = None
    error: BaseException | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and self.result is not None and self.result.ok


def run_batch(
    module: str,
    kwargs_list: Sequence[dict[str, object]],
    workers: int = 4,
    trigger_type: str = "cli",
) -> list[BatchItem]:
    """
    Run the module once per kwargs set on a thread pool. Items come back in input
    order; a failing input does not stop the others.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1 (got {workers})")

    def _one(index: int, kw: dict[str, object]) -> BatchItem:
        try:
            result, run_id = run_module_once(
                module, kw, trigger_type=trigger_type, job_context={"batch_index": index}
            )
            return BatchItem(index=index, kwargs=kw, result=result, run_id=run_id)
        except Exception as e:
            return BatchItem(index=index, kwargs=kw, error=e)

    pool_size = min(workers, max(1, len(kwargs_list)))
    with ThreadPoolExecutor(max_workers=pool_size, thread_name_prefix="batch") as pool:
        futures = [pool.submit(_one, i, dict(kw)) for i, kw in enumerate(kwargs_list)]
        return [f.result() for f in futures]
