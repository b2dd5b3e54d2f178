"""JSON and CSV renderings of spectra, selections, schedules and results.

Floats are written with Python's shortest round-trip repr, so reading a file
back yields the identical doubles.
"""

from __future__ import annotations

import json

import numpy as np

from .activation import ActivationSchedule
from .errors import FormatError
from .ingest import UniformSeries, format_csv
from .pipeline import PipelineResult
from .selection import HarmonicSelection, Metrics
from .spectral import Spectrum


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def spectrum_to_dict(spectrum: Spectrum) -> dict:
    return {
        "n": spectrum.size,
        "start": int(spectrum.start),
        "interval_s": int(spectrum.interval),
        "coefficients": [[float(c.real), float(c.imag)] for c in spectrum.coefficients],
    }


def spectrum_from_dict(doc: dict) -> Spectrum:
    try:
        coeffs = [complex(float(re), float(im)) for re, im in doc["coefficients"]]
        n = int(doc["n"])
        spectrum = Spectrum(np.array(coeffs), int(doc["start"]), int(doc["interval_s"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed spectrum document: {exc}") from None
    if spectrum.size != n:
        raise FormatError(f"spectrum declares n={n} but has {spectrum.size} coefficients")
    return spectrum


def selection_to_dict(selection: HarmonicSelection, metrics: Metrics) -> dict:
    return {
        "threshold": selection.threshold,
        "retained_bins": list(selection.retained),
        "retained_units": selection.k_opt,
        "energy_fraction": selection.energy_fraction,
        "rmse": metrics.rmse,
        "compression_ratio": metrics.compression_ratio,
        "units": [list(u.bins) for u in selection.units],
    }


def metrics_to_dict(metrics: Metrics) -> dict:
    return {
        "rmse": metrics.rmse,
        "energy_fraction": metrics.energy_fraction,
        "compression_ratio": metrics.compression_ratio,
        "retained_bins": metrics.retained_bins,
        "retained_units": metrics.retained_units,
        "stored_reals": metrics.stored_reals,
    }


def schedule_to_dict(schedule: ActivationSchedule) -> dict:
    return {
        "channel": schedule.channel,
        "k_sigma": schedule.k_sigma,
        "interval_s": schedule.interval,
        "activations": [
            {"index": i, "timestamp": t} for i, t in zip(schedule.indices, schedule.timestamps)
        ],
    }


def result_to_dict(result: PipelineResult) -> dict:
    series = result.series
    return {
        "channel": result.config.channel,
        "n": len(series),
        "start": series.start,
        "interval_s": series.interval,
        "signal_std": float(np.std(series.values)),
        "selection": selection_to_dict(result.selection, result.metrics),
        "metrics": metrics_to_dict(result.metrics),
        "schedule": schedule_to_dict(result.schedule),
    }


def reconstruction_csv(original: UniformSeries, reconstructed: UniformSeries) -> str:
    rows = [
        [int(t), repr(float(a)), repr(float(b))]
        for t, a, b in zip(original.timestamps(), original.values, reconstructed.values)
    ]
    return format_csv(rows, ["timestamp", "original", "reconstructed"])


def load_json(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise FormatError("expected a JSON object")
    return doc

