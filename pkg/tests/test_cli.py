# tests/test_cli.py
import json
import os

import pytest

from service import cli


def _run(capsys, *argv):
    rc = cli.main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


# ----------------------------------------------------------------------
# 1. synth
# ----------------------------------------------------------------------
def test_synth_tone_writes_expected_size(tmp_path, capsys):
    out_path = tmp_path / "a440.wav"
    rc, out, _ = _run(
        capsys, "synth", "tone", "--freq", "440", "--rate", "44100", "--samples", "1024", "--out", str(out_path)
    )
    assert rc == 0
    assert os.path.getsize(out_path) == 2092
    assert "2092 bytes" in out


def test_synth_dtmf_and_chord(tmp_path, capsys):
    rc, _, _ = _run(capsys, "synth", "dtmf", "--key", "1", "--rate", "8000", "--out", str(tmp_path / "k.wav"))
    assert rc == 0
    rc, _, _ = _run(capsys, "synth", "chord", "--samples", "4096", "--out", str(tmp_path / "f.wav"))
    assert rc == 0
    assert os.path.getsize(tmp_path / "f.wav") == 44 + 2 * 4096


def test_synth_above_nyquist_fails(tmp_path, capsys):
    out_path = tmp_path / "x.wav"
    rc, _, err = _run(capsys, "synth", "tone", "--freq", "5000", "--rate", "8000", "--out", str(out_path))
    assert rc == 1
    assert "Nyquist" in err
    assert not out_path.exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["synth", "dtmf", "--out", "x.wav"],
        ["synth", "dtmf", "--key", "1", "--freq", "697", "--out", "x.wav"],
        ["synth", "tone", "--freq", "440", "--weight", "1", "--weight", "2", "--out", "x.wav"],
        ["synth", "tone", "--amplitude", "2", "--out", "x.wav"],
    ],
)
def test_synth_usage_errors(argv, capsys):
    rc, _, err = _run(capsys, *argv)
    assert rc == 2
    assert err.startswith("ERROR:")


# ----------------------------------------------------------------------
# 2. detect
# ----------------------------------------------------------------------
def test_detect_a440(a440_wav, capsys):
    rc, out, _ = _run(capsys, "detect", a440_wav)
    assert rc == 0
    first_peak = out.splitlines()[1]
    assert "430.6640625" in first_peak
    assert "A4" in first_peak


def test_detect_dtmf_key(dtmf_one_wav, capsys):
    rc, out, _ = _run(capsys, "detect", dtmf_one_wav, "--mode", "dtmf")
    assert rc == 0
    assert "dtmf_key: 1" in out


def test_detect_json(a440_wav, capsys):
    rc, out, _ = _run(capsys, "detect", a440_wav, "--format", "json")
    assert rc == 0
    report = json.loads(out)
    assert report["peaks"][0]["frequency_hz"] == 430.6640625
    assert report["peaks"][0]["note"] == "A4"


def test_detect_empty_file_is_malformed(tmp_path, capsys):
    empty = tmp_path / "empty.wav"
    empty.write_bytes(b"")
    rc, _, err = _run(capsys, "detect", str(empty))
    assert rc == 1
    assert "FAILURE" in err and "MalformedWavError" in err


def test_detect_stage_is_named_on_failure(write_wav, capsys):
    from modules.qft_tones.lib import audio

    path = write_wav("tone.wav", audio.synth_tone([440.0], 8000, 1024))
    rc, _, err = _run(capsys, "detect", path, "--mode", "dtmf")
    assert rc == 1
    assert "interpret stage failed" in err


def test_detect_is_byte_identical_across_runs(a440_wav, capsys):
    argv = ["detect", a440_wav, "--shots", "1000", "--seed", "3", "--mode", "raw"]
    _, first, _ = _run(capsys, *argv)
    _, second, _ = _run(capsys, *argv)
    assert first == second
    assert "1000 shots, seed 3" in first


def test_detect_multiple_inputs_keep_input_order(a440_wav, dtmf_one_wav, tmp_path, capsys):
    empty = tmp_path / "empty.wav"
    empty.write_bytes(b"")
    rc, out, err = _run(capsys, "detect", dtmf_one_wav, str(empty), a440_wav, "--workers", "3")
    assert rc == 1
    assert out.index(f"== {dtmf_one_wav}") < out.index(f"== {a440_wav}")
    assert str(empty) not in out
    assert str(empty) in err


def test_detect_multiple_inputs_json(a440_wav, dtmf_one_wav, capsys):
    rc, out, _ = _run(capsys, "detect", a440_wav, dtmf_one_wav, "--format", "json", "--mode", "raw")
    assert rc == 0
    payload = json.loads(out)
    assert [p["path"] for p in payload] == [a440_wav, dtmf_one_wav]


def test_dump_histogram(a440_wav, tmp_path, capsys):
    dump = tmp_path / "out" / "hist.csv"
    rc, _, _ = _run(capsys, "detect", a440_wav, "--dump-histogram", str(dump))
    assert rc == 0
    lines = dump.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "bin,weight"
    assert len(lines) == 1 + 1024


@pytest.mark.parametrize(
    "extra",
    [
        ["--shots", "0"],
        ["--top-k", "0"],
        ["--n-qubits", "0"],
        ["--n-qubits", "17"],
        ["--seed", "-1"],
        ["--workers", "0"],
    ],
)
def test_detect_rejects_bad_flags_before_running(a440_wav, extra, capsys):
    rc, out, err = _run(capsys, "detect", a440_wav, *extra)
    assert rc == 2
    assert out == ""
    assert err.startswith("ERROR:")


def test_seed_env_and_flag_precedence(a440_wav, monkeypatch, capsys):
    monkeypatch.setenv("QFT_TONES_SEED", "5")
    _, out, _ = _run(capsys, "detect", a440_wav, "--shots", "100", "--format", "json")
    assert json.loads(out)["seed"] == 5
    _, out, _ = _run(capsys, "detect", a440_wav, "--shots", "100", "--format", "json", "--seed", "9")
    assert json.loads(out)["seed"] == 9
    monkeypatch.setenv("QFT_TONES_SEED", "abc")
    rc, _, _ = _run(capsys, "detect", a440_wav, "--shots", "100")
    assert rc == 2


def test_config_file_defaults(a440_wav, tmp_path, capsys):
    cfg = tmp_path / "defaults.json"
    cfg.write_text(json.dumps({"detect": {"mode": "raw", "format": "json"}}), encoding="utf-8")
    rc, out, _ = _run(capsys, "--config", str(cfg), "detect", a440_wav)
    assert rc == 0
    report = json.loads(out)
    assert report["mode"] == "raw" and len(report["peaks"]) == 5
    # flags still win
    _, out, _ = _run(capsys, "--config", str(cfg), "detect", a440_wav, "--format", "text")
    assert out.startswith("mode: raw")


def test_config_file_unknown_key(a440_wav, tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"detect": {"qubits": 3}}), encoding="utf-8")
    rc, _, err = _run(capsys, "--config", str(cfg), "detect", a440_wav)
    assert rc == 2
    assert "qubits" in err


# ----------------------------------------------------------------------
# 3. qft
# ----------------------------------------------------------------------
def test_qft_gate_list(capsys):
    rc, out, _ = _run(capsys, "qft", "--n", "2")
    assert rc == 0
    assert out.splitlines()[0] == "2 qubits, 4 gates"
    assert "CP(1, 0, 1/2*pi)" in out


def test_qft_decompose(capsys):
    rc, out, _ = _run(capsys, "qft", "--n", "2", "--decompose")
    assert rc == 0
    assert out == "SWAP_{0,1} H_{1} C_{1}(P_{0}^{1/2}) H_{0}\n"


def test_qft_one_qubit_unitary_is_hadamard(capsys):
    rc, out, _ = _run(capsys, "qft", "--n", "1", "--unitary")
    assert rc == 0
    rows = out.splitlines()
    assert rows == [" 0.707107+0.000000i  0.707107+0.000000i", " 0.707107+0.000000i  -0.707107+0.000000i"]


def test_qft_inverse_negates_phases(capsys):
    _, out, _ = _run(capsys, "qft", "--n", "2", "--inverse")
    assert "CP(1, 0, -1/2*pi)" in out


@pytest.mark.parametrize("argv", [["qft", "--n", "0"], ["qft", "--n", "11", "--unitary"], ["qft"]])
def test_qft_range_errors(argv, capsys):
    rc, _, _ = _run(capsys, *argv)
    assert rc == 2


# ----------------------------------------------------------------------
# 4. verify and usage
# ----------------------------------------------------------------------
@pytest.mark.slow
def test_verify_passes(capsys):
    rc, out, _ = _run(capsys, "verify")
    assert rc == 0
    assert out.rstrip().endswith("checks passed")
    assert "FAIL " not in out


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as ei:
        cli.main(["bogus"])
    assert ei.value.code == 2


def test_cli_writes_activity_record(a440_wav, capsys):
    from service import logging_utils

    _run(capsys, "detect", a440_wav)
    with open(logging_utils.get_activity_log_path(), encoding="utf-8") as f:
        events = [json.loads(line).get("event") for line in f]
    assert "cli_detect" in events
