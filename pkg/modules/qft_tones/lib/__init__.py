# modules/qft_tones/lib/__init__.py
from __future__ import annotations

# Re-export commonly-used types for convenience
from .audio import SampledSignal, WavError, WavMeta
from .config import ConfigError, Settings
from .detect import DetectionReport, DetectMode, MeasurementSpec, PipelineError, detect_pipeline
from .models import CLASSICAL, QUANTUM, FourierConvention, Normalization
from .qcore import Circuit, StateVector, UnitaryMatrix
