# tests/test_logging_utils.py
import json
import logging
import os

import numpy as np

from modules.qft_tones.lib import logging_bridge
from service import logging_utils as L


def _read(path):
    with open(path, encoding="utf-8") as f:
        return [json.loads(line) for line in f]


def test_paths_carry_prefix_and_date(frozen_utc, log_dir):
    assert L.get_activity_log_path() == os.path.join(log_dir, "activity-test-2025-01-01.jsonl")
    assert L.get_error_log_path() == os.path.join(log_dir, "error-test-2025-01-01.jsonl")


def test_activity_record_gets_metadata_and_numpy_values(log_dir):
    L.write_activity_log({"op": "x", "bins": np.arange(3), "w": np.float64(0.5), "z": 1 + 2j})
    (rec,) = _read(L.get_activity_log_path())
    assert rec["bins"] == [0, 1, 2] and rec["w"] == 0.5 and rec["z"] == [1.0, 2.0]
    assert set(rec["_meta"]) == {"host", "pid"}


def test_secrets_are_redacted_deeply(log_dir):
    L.write_error_log({"where": "t", "nested": {"api_key": "abc", "items": [{"password": "p"}]}})
    (rec,) = _read(L.get_error_log_path())
    assert rec["nested"]["api_key"] == "***REDACTED***"
    assert rec["nested"]["items"][0]["password"] == "***REDACTED***"
    assert L.redact({"Token": 1, "ok": 2}) == {"Token": "***REDACTED***", "ok": 2}


def test_log_disable(monkeypatch, log_dir):
    monkeypatch.setenv("LOG_DISABLE", "1")
    L.write_activity_log({"op": "x"})
    assert not os.path.exists(L.get_activity_log_path())


def test_size_rotation(monkeypatch, log_dir):
    monkeypatch.setenv("ACTIVITY_LOG_MAX_BYTES", "10")
    L.write_activity_log({"op": "first"})
    L.write_activity_log({"op": "second"})
    rotated = [n for n in os.listdir(log_dir) if n.startswith("activity-test-") and not n.endswith(".jsonl")]
    assert len(rotated) == 1
    assert [r["op"] for r in _read(L.get_activity_log_path())] == ["second"]


def test_bridge_falls_back_to_stdlib_logging(monkeypatch, caplog):
    def boom(record):
        raise OSError("disk full")

    monkeypatch.setattr(L, "write_error_log", boom)
    with caplog.at_level(logging.ERROR, logger="qft_tones.detect"):
        logging_bridge.error("detect", "x", ValueError("bad stage"), secret="s")
    assert "disk full" not in caplog.text
    assert "'component': 'qft_tones.detect'" in caplog.text
    assert "'op': 'x'" in caplog.text
    assert "bad stage" in caplog.text
    assert "'secret': '***REDACTED***'" in caplog.text
