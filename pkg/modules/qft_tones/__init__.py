from __future__ import annotations

# Expose run at the package level so the runner can import "modules.qft_tones"
from .main import run

__all__ = ["run"]
