"""Python access to the snapcheck simulator, detectors and sweep runner.

Configs and specs are plain dicts using the same keys as the JSON files the
command-line tool reads. Traces are JSON Lines text.
"""

import json

from . import _snapcheck
from ._snapcheck import CsvError, TraceFormatError

__version__ = _snapcheck.__version__
DETECTORS = ("SECA", "CEDA", "PCA")


def _pairs(raw):
    return {tuple(tuple(e) for e in pair) for pair in raw}


def generate_trace(config=None):
    """Generate a trace from a config dict; missing keys take the defaults."""
    return _snapcheck.generate_trace(json.dumps(config or {}))


def run_detector(trace, detector="SECA"):
    """Replay a trace through one detector and score it against the truth."""
    result = json.loads(_snapcheck.run_detector(trace, detector))
    result["detected"] = _pairs(result["detected"])
    return result


def ground_truth(trace):
    """Pairs of events whose wall-clock lifespans overlap."""
    return _pairs(json.loads(_snapcheck.ground_truth(trace)))


def run_sweep(spec, jobs=1):
    """Run a sweep spec dict and return the results CSV text."""
    return _snapcheck.run_sweep(json.dumps(spec), jobs)


def summarize(csv_text):
    return json.loads(_snapcheck.summarize(csv_text))


def run_scenario(fixtures_dir, name):
    result = json.loads(_snapcheck.run_scenario(str(fixtures_dir), name))
    result["seca"] = _pairs(result["seca"])
    result["ceda"] = _pairs(result["ceda"])
    return result


__all__ = [
    "CsvError",
    "DETECTORS",
    "TraceFormatError",
    "generate_trace",
    "ground_truth",
    "run_detector",
    "run_scenario",
    "run_sweep",
    "summarize",
]
