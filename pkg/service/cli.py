# service/cli.py
"""
Command-line entrypoint (`qft-tones` / `python -m service.cli`).

Subcommands
-----------
synth {tone,chord,dtmf} --out PATH [--freq HZ ...] [--weight W ...] [--key K]
    - Writes a 16-bit PCM mono WAV of a synthesized tone, chord or DTMF key

detect WAV [WAV ...] [--n-qubits N] [--mode note|chord|dtmf|raw] [--shots S] [--seed X]
    - Runs the QFT detection pipeline once per file via runner.run_batch(...)
    - Prints reports in input order (text or --format json)

qft --n N [--inverse] [--no-swaps] [--decompose] [--unitary]
    - Prints the QFT gate list, its operator string, or its matrix (6 decimals)

verify
    - Runs the acceptance suite; exit 1 if any check fails

Exit codes: 0 success, 1 failure, 2 usage/config error, 130 interrupted.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
import uuid
from collections.abc import Callable, Iterable
from datetime import datetime
from typing import Any

from modules.qft_tones.lib import audio, render, verify
from modules.qft_tones.lib.detect import PipelineError
from modules.qft_tones.lib.qcore import circuit_to_unitary
from modules.qft_tones.lib.qft import qft_circuit, render_decomposition
from service import logging_utils as L
from service import runner as _runner
from service.config_schema import CliConfig, ConfigError, build_cli_config, load_config

LOG = logging.getLogger("service.cli")

MODULE = "modules.qft_tones"


# ----------------------------- Logging setup ---------------------------------
def _ensure_logging() -> None:
    """Initialize a reasonable logging setup if none exists yet (stderr only)."""
    root = logging.getLogger()
    if not root.handlers:
        level = os.getenv("LOG_LEVEL", "INFO").upper()
        logging.basicConfig(
            level=getattr(logging, level, logging.INFO),
            format="%(asctime)s %(levelname)s [%(name)s] %(message)s",
            stream=sys.stderr,
        )


def _now_iso() -> str:
    return datetime.now().astimezone().isoformat()


def _safe_log(writer: Callable[[dict[str, Any]], None], record: dict[str, Any]) -> None:
    """Audit logging never changes an exit code."""
    try:
        writer(record)
    except Exception as e:  # pragma: no cover
        LOG.warning("structured log write failed: %s", e)


def _describe(e: BaseException) -> str:
    if isinstance(e, PipelineError):
        return f"{e.stage} stage failed: {type(e.cause).__name__}: {e.cause}"
    return f"{type(e).__name__}: {e}"


# ------------------------------ Subcommands ----------------------------------
def cmd_synth(cfg: CliConfig) -> int:
    run_id = uuid.uuid4().hex
    start = time.monotonic()
    try:
        if cfg.synth_kind == "dtmf":
            signal = audio.synth_dtmf(
                cfg.key or "", cfg.sample_rate, cfg.n_samples, cfg.amplitude, extended=cfg.extended_dtmf
            )
        else:
            signal = audio.synth_tone(cfg.freqs, cfg.sample_rate, cfg.n_samples, cfg.amplitude, cfg.weights)
        size = audio.write_wav_file(cfg.output or "", signal)
        _safe_log(L.write_activity_log, {
            "ts": _now_iso(),
            "event": "cli_synth",
            "run_id": run_id,
            "kind": cfg.synth_kind,
            "out": cfg.output,
            "bytes": size,
            "duration_ms": int((time.monotonic() - start) * 1000),
        })
        print(f"wrote {cfg.output} ({size} bytes, {len(signal)} samples at {cfg.sample_rate} Hz)")
        return 0
    except KeyboardInterrupt:
        return 130
    except (ValueError, KeyError, OSError) as e:
        print(f"ERROR: {_describe(e)}", file=sys.stderr)
        _safe_log(L.write_error_log, {
            "ts": _now_iso(),
            "where": "cli.synth",
            "run_id": run_id,
            "kind": cfg.synth_kind,
            "error": repr(e),
            "duration_ms": int((time.monotonic() - start) * 1000),
        })
        return 1


def cmd_detect(cfg: CliConfig) -> int:
    run_id = uuid.uuid4().hex
    start = time.monotonic()
    try:
        items = _runner.run_batch(MODULE, [cfg.detect_kwargs(p) for p in cfg.inputs], workers=cfg.workers)
    except KeyboardInterrupt:
        return 130

    failures = 0
    reports: list[dict] = []
    for path, item in zip(cfg.inputs, items):
        if item.error is not None or item.result is None:
            failures += 1
            err = item.error or RuntimeError("no result")
            print(f"FAILURE: {path}: {_describe(err)}", file=sys.stderr)
            _safe_log(L.write_error_log, {
                "ts": _now_iso(),
                "where": "cli.detect",
                "run_id": run_id,
                "path": path,
                "stage": getattr(err, "stage", "read"),
                "error": repr(err),
            })
            continue
        if cfg.output_format == "json":
            reports.append({"path": path, "report": item.result.meta.get("report")})
        elif len(cfg.inputs) == 1:
            sys.stdout.write(item.result.text or "")
        else:
            sys.stdout.write(f"== {path}\n{item.result.text or ''}")

    if cfg.output_format == "json" and reports:
        payload = reports[0]["report"] if len(cfg.inputs) == 1 else reports
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")

    _safe_log(L.write_activity_log, {
        "ts": _now_iso(),
        "event": "cli_detect",
        "run_id": run_id,
        "inputs": list(cfg.inputs),
        "failed": failures,
        "duration_ms": int((time.monotonic() - start) * 1000),
    })
    return 1 if failures else 0


def cmd_qft(cfg: CliConfig) -> int:
    run_id = uuid.uuid4().hex
    start = time.monotonic()
    try:
        circuit = qft_circuit(cfg.qft_n, inverse=cfg.inverse, include_final_swaps=not cfg.no_swaps)
        sections: list[str] = []
        if cfg.decompose:
            sections.append(render_decomposition(circuit))
        if cfg.unitary:
            sections.append(render.format_matrix(circuit_to_unitary(circuit).elements))
        if not sections:
            sections.append(render.format_gate_list(circuit))
        print("\n\n".join(sections))
        _safe_log(L.write_activity_log, {
            "ts": _now_iso(),
            "event": "cli_qft",
            "run_id": run_id,
            "n": cfg.qft_n,
            "inverse": cfg.inverse,
            "gates": len(circuit),
            "duration_ms": int((time.monotonic() - start) * 1000),
        })
        return 0
    except KeyboardInterrupt:
        return 130
    except ValueError as e:
        print(f"ERROR: {_describe(e)}", file=sys.stderr)
        _safe_log(L.write_error_log, {"ts": _now_iso(), "where": "cli.qft", "run_id": run_id, "error": repr(e)})
        return 1


def cmd_verify(cfg: CliConfig) -> int:
    run_id = uuid.uuid4().hex
    start = time.monotonic()
    try:
        report = verify.run_all(seed=cfg.seed)
    except KeyboardInterrupt:
        return 130
    sys.stdout.write(report.to_text())
    _safe_log(L.write_activity_log, {
        "ts": _now_iso(),
        "event": "cli_verify",
        "run_id": run_id,
        "ok": report.ok,
        "failed": [c.name for c in report.failed],
        "duration_ms": int((time.monotonic() - start) * 1000),
    })
    if not report.ok:
        print(f"FAILURE: {len(report.failed)} check(s) failed", file=sys.stderr)
        return 1
    return 0


_HANDLERS = {"synth": cmd_synth, "detect": cmd_detect, "qft": cmd_qft, "verify": cmd_verify}


# ------------------------------- Argparse ------------------------------------
def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qft-tones",
        description="QFT state-vector simulator and spectral note/chord/DTMF detector",
    )
    p.add_argument(
        "--config",
        help="Defaults file (JSON or YAML); falls back to QFT_TONES_CONFIG.",
    )
    sub = p.add_subparsers(dest="cmd", required=True)

    # synth
    sp = sub.add_parser("synth", help="Write a synthesized WAV file.")
    sp.add_argument("kind", choices=("tone", "chord", "dtmf"))
    sp.add_argument("--out", required=True, help="Output WAV path.")
    sp.add_argument("--freq", type=float, action="append", help="Frequency in Hz (repeat for chords).")
    sp.add_argument("--weight", type=float, action="append", help="Weight per --freq, in the same order.")
    sp.add_argument("--key", help="DTMF keypad symbol (0-9, *, #; A-D with --extended).")
    sp.add_argument("--rate", type=int, help="Sample rate in Hz (default 44100).")
    sp.add_argument("--samples", type=int, help="Number of samples (default 1024).")
    sp.add_argument("--amplitude", type=float, help="Peak amplitude in [0, 1] (default 0.9).")
    sp.add_argument("--extended", action="store_true", default=None, help="Allow the A-D keys (1633 Hz).")

    # detect
    sp = sub.add_parser("detect", help="Detect peaks, notes or a DTMF key in WAV files.")
    sp.add_argument("inputs", nargs="+", metavar="WAV")
    sp.add_argument("--n-qubits", dest="n_qubits", type=int, help="Register width (default 10).")
    sp.add_argument("--mode", choices=("note", "chord", "dtmf", "raw"), help="Interpretation (default note).")
    sp.add_argument("--shots", type=int, help="Sample this many shots instead of exact probabilities.")
    sp.add_argument("--seed", type=int, help="Shot sampling seed (default 0; QFT_TONES_SEED).")
    sp.add_argument("--top-k", dest="top_k", type=int, help="Peaks to report (default by mode: 2/3/2/5).")
    sp.add_argument("--format", choices=("text", "json"), help="Report format (default text).")
    sp.add_argument("--exclude-dc", dest="exclude_dc", action="store_true", default=None)
    sp.add_argument("--zero-pad", dest="zero_pad", action="store_true", default=None)
    sp.add_argument("--extended", dest="extended_dtmf", action="store_true", default=None)
    sp.add_argument("--resample", dest="resample_rate", type=int, help="Resample to this rate before encoding.")
    sp.add_argument("--dump-histogram", dest="dump_histogram", help="Write bin,weight CSV here.")
    sp.add_argument("--workers", type=int, help="Files processed in parallel (default 4).")

    # qft
    sp = sub.add_parser("qft", help="Show the QFT circuit, operator string or unitary.")
    sp.add_argument("--n", type=int, help="Number of qubits.")
    sp.add_argument("--inverse", action="store_true", default=None)
    sp.add_argument("--no-swaps", dest="no_swaps", action="store_true", default=None)
    sp.add_argument("--decompose", action="store_true", default=None)
    sp.add_argument("--unitary", action="store_true", default=None)

    # verify
    sp = sub.add_parser("verify", help="Run the acceptance suite.")
    sp.add_argument("--seed", type=int)

    return p


# --------------------------------- Main --------------------------------------
def main(argv: Iterable[str] | None = None) -> int:
    _ensure_logging()
    parser = _build_parser()
    args = parser.parse_args(args=list(argv) if argv is not None else None)
    try:
        cfg = build_cli_config(args, load_config(args.config), os.environ)
    except ConfigError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return 2
    return _HANDLERS[cfg.subcommand](cfg)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
