# tests/test_qft_tones_module.py
import json

import pytest

import modules.qft_tones as qft_tones
from modules.qft_tones.lib import audio
from modules.qft_tones.lib.config import ConfigError
from modules.qft_tones.lib.detect import PipelineError


def test_run_returns_text_and_meta(a440_wav):
    text, meta = qft_tones.run(path=a440_wav)
    assert text.splitlines()[0].startswith("mode: note")
    assert meta["path"] == a440_wav
    assert meta["report"]["peaks"][0]["frequency_hz"] == 430.6640625


def test_run_json_format(dtmf_one_wav):
    text, meta = qft_tones.run(path=dtmf_one_wav, mode="dtmf", format="json")
    assert json.loads(text)["dtmf_key"] == "1"
    assert meta["report"]["dtmf_key"] == "1"


def test_run_resamples_before_encoding(write_wav):
    path = write_wav("t.wav", audio.synth_tone([440.0], 44100, 1280))
    _, meta = qft_tones.run(path=path, n_qubits=8, mode="raw", top_k=1, resample_rate=8820)
    report = meta["report"]
    assert report["sample_rate"] == 8820
    assert report["peaks"][0]["bin"] == 13
    assert meta["source_rate"] == 44100


def test_run_dumps_histogram(a440_wav, tmp_path):
    dump = tmp_path / "nested" / "h.csv"
    qft_tones.run(path=a440_wav, shots=64, seed=1, dump_histogram=str(dump))
    lines = dump.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "bin,weight"
    assert sum(int(line.split(",")[1]) for line in lines[1:]) == 64


def test_run_zero_pad_short_file(write_wav):
    path = write_wav("short.wav", audio.synth_tone([1000.0], 8000, 100))
    with pytest.raises(PipelineError):
        qft_tones.run(path=path, n_qubits=7)
    _, meta = qft_tones.run(path=path, n_qubits=7, zero_pad=True, mode="raw", top_k=1)
    assert meta["report"]["peaks"][0]["bin"] == 16


def test_run_validates_kwargs():
    with pytest.raises(ConfigError):
        qft_tones.run(mode="note")
