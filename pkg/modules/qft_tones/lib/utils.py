from __future__ import annotations

import os
from datetime import datetime, timezone
from typing import Any

import numpy as np

_TRUE_WORDS = frozenset({"1", "true", "yes", "on", "y", "t"})


def truthy(v: Any) -> bool:
    """Flag value from kwargs or env: bools, numbers (numpy included) and '1'/'true'/'yes'/'on'."""
    if v is None:
        return False
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, float, np.number)):
        return bool(v != 0)
    return str(v).strip().lower() in _TRUE_WORDS


def now_iso() -> str:
    """UTC timestamp, 'Z' suffix, millisecond precision."""
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds").replace("+00:00", "Z")


def getenv_int(name: str, default: int | None = None) -> int | None:
    """Integer env var; blank counts as unset. Junk raises ValueError naming the variable."""
    raw = os.getenv(name, "").strip()
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError as e:
        raise ValueError(f"{name} must be an integer (got {raw!r})") from e
