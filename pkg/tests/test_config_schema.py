# tests/test_config_schema.py
import argparse
import json

import pytest

from service import config_schema
from service.cli import _build_parser
from service.config_schema import ConfigError, build_cli_config


def _cfg(argv, file_cfg=None, env=None):
    args = _build_parser().parse_args(argv)
    return build_cli_config(args, file_cfg or {}, env or {})


# ----------------------------------------------------------------------
# 1. Defaults file
# ----------------------------------------------------------------------
def test_load_config_without_path_is_empty():
    assert config_schema.load_config() == {}


def test_load_config_from_env(tmp_path, monkeypatch):
    p = tmp_path / "d.json"
    p.write_text(json.dumps({"detect": {"n_qubits": 12}}), encoding="utf-8")
    monkeypatch.setenv("QFT_TONES_CONFIG", str(p))
    assert config_schema.load_config() == {"detect": {"n_qubits": 12}}


def test_load_config_yaml(tmp_path):
    pytest.importorskip("yaml")
    p = tmp_path / "d.yaml"
    p.write_text("synth:\n  rate: 8000\n", encoding="utf-8")
    assert config_schema.load_config(str(p)) == {"synth": {"rate": 8000}}


@pytest.mark.parametrize(
    "content",
    ["{not json", "[1, 2]", json.dumps({"plot": {}}), json.dumps({"qft": []}), json.dumps({"qft": {"m": 1}})],
)
def test_load_config_rejects_bad_files(tmp_path, content):
    p = tmp_path / "bad.json"
    p.write_text(content, encoding="utf-8")
    with pytest.raises(ConfigError):
        config_schema.load_config(str(p))


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        config_schema.load_config(str(tmp_path / "nope.json"))


# ----------------------------------------------------------------------
# 2. detect
# ----------------------------------------------------------------------
def test_detect_defaults():
    cfg = _cfg(["detect", "a.wav"])
    assert cfg.inputs == ("a.wav",)
    assert (cfg.n_qubits, cfg.mode, cfg.shots, cfg.seed, cfg.top_k) == (10, "note", None, 0, None)
    assert cfg.output_format == "text" and cfg.workers == 4
    kw = cfg.detect_kwargs("a.wav")
    assert kw["path"] == "a.wav" and kw["format"] == "text" and kw["dump_histogram"] is None


def test_precedence_builtin_file_env_flag():
    file_cfg = {"detect": {"n_qubits": 12, "seed": 1, "mode": "chord"}}
    cfg = _cfg(["detect", "a.wav"], file_cfg)
    assert (cfg.n_qubits, cfg.seed, cfg.mode) == (12, 1, "chord")
    cfg = _cfg(["detect", "a.wav"], file_cfg, {"QFT_TONES_SEED": "7"})
    assert cfg.seed == 7
    cfg = _cfg(["detect", "a.wav", "--seed", "9", "--n-qubits", "8"], file_cfg, {"QFT_TONES_SEED": "7"})
    assert (cfg.n_qubits, cfg.seed) == (8, 9)


def test_seed_upper_bound():
    assert _cfg(["verify", "--seed", str((1 << 64) - 1)]).seed == (1 << 64) - 1
    with pytest.raises(ConfigError):
        _cfg(["verify", "--seed", str(1 << 64)])


def test_dump_histogram_needs_single_input():
    with pytest.raises(ConfigError):
        _cfg(["detect", "a.wav", "b.wav", "--dump-histogram", "h.csv"])


@pytest.mark.parametrize(
    "file_cfg",
    [{"detect": {"mode": "loud"}}, {"detect": {"format": "xml"}}, {"detect": {"exclude_dc": "maybe"}}],
)
def test_detect_bad_file_values(file_cfg):
    with pytest.raises(ConfigError):
        _cfg(["detect", "a.wav"], file_cfg)


def test_detect_without_inputs():
    args = argparse.Namespace(cmd="detect", inputs=[])
    with pytest.raises(ConfigError):
        build_cli_config(args, {}, {})


# ----------------------------------------------------------------------
# 3. synth / qft / verify
# ----------------------------------------------------------------------
def test_synth_defaults_per_kind():
    assert _cfg(["synth", "tone", "--out", "t.wav"]).freqs == (440.0,)
    assert _cfg(["synth", "chord", "--out", "c.wav"]).freqs == (130.81, 174.61, 440.0)
    dtmf = _cfg(["synth", "dtmf", "--key", "#", "--out", "d.wav", "--extended"])
    assert dtmf.key == "#" and dtmf.freqs == () and dtmf.extended_dtmf is True


def test_synth_file_defaults():
    cfg = _cfg(["synth", "tone", "--out", "t.wav"], {"synth": {"rate": 8000, "samples": 256}})
    assert (cfg.sample_rate, cfg.n_samples) == (8000, 256)


@pytest.mark.parametrize(
    "argv",
    [
        ["synth", "tone", "--out", "t.wav", "--rate", "0"],
        ["synth", "tone", "--out", "t.wav", "--samples", "-1"],
        ["synth", "tone", "--out", "t.wav", "--freq", "-5"],
    ],
)
def test_synth_rejections(argv):
    with pytest.raises(ConfigError):
        _cfg(argv)


def test_qft_flags():
    cfg = _cfg(["qft", "--n", "3", "--inverse", "--no-swaps", "--decompose"])
    assert (cfg.qft_n, cfg.inverse, cfg.no_swaps, cfg.decompose, cfg.unitary) == (3, True, True, True, False)
    assert _cfg(["qft", "--n", "10", "--unitary"]).unitary


def test_qft_unitary_limit():
    with pytest.raises(ConfigError, match="--unitary"):
        _cfg(["qft", "--n", "11", "--unitary"])


def test_non_integer_env_seed():
    with pytest.raises(ConfigError, match="QFT_TONES_SEED"):
        _cfg(["verify"], env={"QFT_TONES_SEED": "1.5"})
