"""Bottleneck detection for SPMD program profiles."""

import json

from ._core import (
    AnalysisError,
    Error,
    ParseError,
    ValidationError,
    density_cluster,
    dissimilarity_severity,
    generate,
    report,
    severity_classify,
)
from ._core import analyze_json


def analyze(document, threshold_fraction=0.10, count_threshold=2):
    """Result document of `analyze_json`, decoded."""
    return json.loads(analyze_json(document, threshold_fraction, count_threshold))


__all__ = [
    "AnalysisError",
    "Error",
    "ParseError",
    "ValidationError",
    "analyze",
    "analyze_json",
    "density_cluster",
    "dissimilarity_severity",
    "generate",
    "report",
    "severity_classify",
]
