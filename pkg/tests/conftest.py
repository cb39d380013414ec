# tests/conftest.py
import os
import tempfile

import pytest
from freezegun import freeze_time

from modules.qft_tones.lib import audio


def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line("markers", "slow: oracle sweeps and full acceptance runs")


# ---------------------------------------------------------------------
# Test-wide env defaults (autouse, function-scoped)
# Keeps JSONL logs out of ./local/logs and the seed out of the shell env.
# ---------------------------------------------------------------------
@pytest.fixture(autouse=True)
def _env_defaults(monkeypatch):
    tmp_logs = tempfile.mkdtemp(prefix="qft-pytest-logs-")
    monkeypatch.setenv("LOG_DIR", tmp_logs)
    monkeypatch.setenv("ACTIVITY_LOG_PREFIX", "activity-test")
    monkeypatch.setenv("ERROR_LOG_PREFIX", "error-test")
    monkeypatch.delenv("LOG_DISABLE", raising=False)
    monkeypatch.delenv("ACTIVITY_LOG_MAX_BYTES", raising=False)
    monkeypatch.delenv("QFT_TONES_SEED", raising=False)
    monkeypatch.delenv("QFT_TONES_CONFIG", raising=False)
    yield


@pytest.fixture
def log_dir():
    return os.environ["LOG_DIR"]


@pytest.fixture
def frozen_utc():
    with freeze_time("2025-01-01T00:00:00Z"):
        yield


# ---------------------------------------------------------------------
# Signals
# ---------------------------------------------------------------------
@pytest.fixture
def a440():
    return audio.synth_tone([440.0], 44100, 1024)


@pytest.fixture
def f_major():
    return audio.synth_tone([130.81, 174.61, 440.0], 44100, 4096)


@pytest.fixture
def dtmf_one():
    return audio.synth_dtmf("1", 8000, 1024)


# ---------------------------------------------------------------------
# WAV files in tmp_path
# ---------------------------------------------------------------------
@pytest.fixture
def write_wav(tmp_path):
    """Return a writer: write_wav(name, signal) -> str path under tmp_path."""

    def _write(name, signal):
        path = tmp_path / name
        audio.write_wav_file(path, signal)
        return str(path)

    return _write


@pytest.fixture
def a440_wav(write_wav, a440):
    return write_wav("a440.wav", a440)


@pytest.fixture
def dtmf_one_wav(write_wav, dtmf_one):
    return write_wav("dtmf1.wav", dtmf_one)
