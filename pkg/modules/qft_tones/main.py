from __future__ import annotations

import os
from typing import Any

from .lib import audio, render
from .lib.config import Settings
from .lib.detect import detect_pipeline
from .lib.logging_bridge import activity as log_activity
from .lib.utils import now_iso


def run(**kwargs: Any) -> tuple[str, dict]:
    """
    Entry point for the 'qft_tones' module: one WAV file in, one detection report out.

    Accepts kwargs (from the CLI/runner), including:
      path: str                  # required
      n_qubits: int = 10
      mode: str = "note"         # note | chord | dtmf | raw
      shots: int | None = None   # None -> exact probabilities
      seed: int = 0              # $QFT_TONES_SEED when absent
      top_k: int | None = None   # None -> mode default (2/3/2/5)
      exclude_dc, zero_pad, extended_dtmf: bool = False
      resample_rate: int | None = None
      format: str = "text"       # text | json
      dump_histogram: str | None = None  # CSV path, bin,weight

    Returns:
      (rendered_report: str, meta: dict)
    """
    settings = Settings.from_env_and_kwargs(kwargs)

    log_activity(
        "main",
        "start",
        ts=now_iso(),
        path=settings.path,
        mode=settings.mode.value,
        n_qubits=settings.n_qubits,
        shots=settings.shots,
        seed=settings.seed,
    )

    signal, meta = audio.read_wav_file(settings.path)
    if settings.resample_rate is not None:
        signal = audio.resample(signal, settings.resample_rate)

    report = detect_pipeline(
        signal,
        settings.n_qubits,
        settings.mode,
        settings.measurement,
        settings.top_k,
        exclude_dc=settings.exclude_dc,
        zero_pad=settings.zero_pad,
        extended_dtmf=settings.extended_dtmf,
    )

    if settings.dump_histogram and report.histogram is not None:
        parent = os.path.dirname(settings.dump_histogram)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(settings.dump_histogram, "w", encoding="utf-8", newline="") as f:
            f.write(report.histogram.to_csv())

    rendered = render.format_report(report, settings.output_format)
    return rendered, {
        "path": settings.path,
        "channels": meta.channels,
        "source_rate": meta.sample_rate,
        "report": report.to_dict(),
    }
