"""PCA models of normal daily sensor behaviour and day-level event detection."""

__version__ = "0.1.0"

from .detectors import DayScore, DetectionResult, Method, detect
from .evaluation import EvalReport, calibrate_threshold, confusion, pr_curve
from .ingest import Measurement, MeasurementTable, Modality, parse_measurements
from .kernels import BACKEND
from .pca import PcaBasis, build_basis, project, reconstruct
from .pipeline import PipelineConfig, run
from .synthgen import SynthConfig, generate

__all__ = [
    "BACKEND",
    "DayScore",
    "DetectionResult",
    "EvalReport",
    "Measurement",
    "MeasurementTable",
    "Method",
    "Modality",
    "PcaBasis",
    "PipelineConfig",
    "SynthConfig",
    "__version__",
    "build_basis",
    "calibrate_threshold",
    "confusion",
    "detect",
    "generate",
    "parse_measurements",
    "pr_curve",
    "project",
    "reconstruct",
    "run",
]
