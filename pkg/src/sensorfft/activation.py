"""Sensor wake-up moments from sharp changes in a (reconstructed) signal."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .ingest import UniformSeries

DEFAULT_K_SIGMA = 2.0


@dataclass(frozen=True)
class ActivationSchedule:
    indices: tuple[int, ...]
    timestamps: tuple[int, ...]
    k_sigma: float
    channel: str
    interval: int

    def __len__(self) -> int:
        return len(self.indices)


def derivative(series: UniformSeries) -> np.ndarray:
    """Forward difference per second: ``(x[i+1] - x[i]) / interval``, length N-1."""
    return np.diff(series.values) / series.interval


def detect_activations(deriv, k_sigma: float = DEFAULT_K_SIGMA, *, floor: float = 0.0) -> list[int]:
    """Indices where the signal starts changing sharply.

    A sample is flagged when ``|deriv|`` exceeds ``mean + k_sigma * std`` of
    ``|deriv|`` (population std). Each run of consecutive flags keeps only
    its first index, and index 0 is always included.

    ``floor`` treats slopes with magnitude at or below it as exactly flat,
    which keeps floating-point ripple in a reconstruction from registering.
    """
    if k_sigma < 0:
        raise ParameterError(f"k_sigma must be >= 0, got {k_sigma}")
    mag = np.abs(np.asarray(deriv, dtype=np.float64))
    if mag.size == 0:
        raise ParameterError("derivative is empty")
    if floor > 0:
        mag = np.where(mag <= floor, 0.0, mag)
    sigma = float(np.std(mag))
    if sigma == 0.0:
        return [0]
    flagged = mag > float(np.mean(mag)) + k_sigma * sigma
    starts = flagged & ~np.concatenate(([False], flagged[:-1]))
    indices = np.flatnonzero(starts).tolist()
    if not indices or indices[0] != 0:
        indices.insert(0, 0)
    return indices


def build_schedule(
    indices,
    start: int,
    interval: int,
    n: int,
    channel: str = "",
    k_sigma: float = DEFAULT_K_SIGMA,
) -> ActivationSchedule:
    indices = [int(i) for i in indices]
    if not indices:
        raise ParameterError("a schedule needs at least the baseline index 0")
    if any(i < 0 or i >= n for i in indices):
        raise ParameterError(f"activation index outside 0..{n - 1}")
    if any(b <= a for a, b in zip(indices, indices[1:])):
        raise ParameterError("activation indices must be strictly increasing")
    if indices[0] != 0:
        raise ParameterError("activation schedule must start at index 0")
    timestamps = tuple(int(start) + i * int(interval) for i in indices)
    return ActivationSchedule(tuple(indices), timestamps, float(k_sigma), channel, int(interval))


def schedule_for(series: UniformSeries, k_sigma: float = DEFAULT_K_SIGMA) -> ActivationSchedule:
    """Derivative, detection and schedule in one call, with a round-off floor."""
    scale = 1.0 + float(np.max(np.abs(series.values)))
    floor = 1e-10 * scale / series.interval
    indices = detect_activations(derivative(series), k_sigma, floor=floor)
    return build_schedule(indices, series.start, series.interval, len(series), series.channel, k_sigma)
