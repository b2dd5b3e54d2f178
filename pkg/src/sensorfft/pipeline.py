"""End-to-end run: clean, grid, transform, select, reconstruct, schedule."""

from __future__ import annotations

import contextlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import activation, ingest, selection, spectral
from .activation import ActivationSchedule
from .errors import ParameterError, SensorFFTError, VerificationError
from .ingest import SampleRecord, UniformSeries
from .selection import HarmonicSelection, Metrics
from .spectral import Spectrum

ORACLE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PipelineConfig:
    channel: str = "co2_ppm"
    interval: int = 900
    threshold: float = selection.DEFAULT_THRESHOLD
    k_sigma: float = activation.DEFAULT_K_SIGMA
    verify: bool = False

    def validate(self) -> None:
        if not 0.0 < self.threshold <= 1.0:
            raise ParameterError(f"threshold must be in (0, 1], got {self.threshold}")
        if not self.k_sigma >= 0:
            raise ParameterError(f"k_sigma must be >= 0, got {self.k_sigma}")
        if int(self.interval) != self.interval or self.interval <= 0:
            raise ParameterError(f"interval must be a positive integer, got {self.interval}")


@dataclass(frozen=True)
class PipelineResult:
    config: PipelineConfig
    series: UniformSeries
    spectrum: Spectrum
    selection: HarmonicSelection
    metrics: Metrics
    schedule: ActivationSchedule
    reconstructed: UniformSeries


@contextlib.contextmanager
def _stage(name: str):
    try:
        yield
    except SensorFFTError as exc:
        if exc.stage is None:
            exc.stage = name
        raise


def oracle_deviation(values, spectrum: Spectrum) -> float:
    """Largest coefficient gap between ``spectrum`` and the naive DFT of ``values``."""
    reference = spectral.naive_dft(values).coefficients
    if reference.size != spectrum.size:
        return float("inf")
    return float(np.max(np.abs(reference - spectrum.coefficients)))


def oracle_tolerance(values) -> float:
    return ORACLE_TOLERANCE * (1.0 + float(np.sum(np.abs(values))))


def prepare_series(records: list[SampleRecord], config: PipelineConfig) -> UniformSeries:
    with _stage("clean_sort"):
        cleaned = ingest.clean_sort(records, config.channel)
    with _stage("resample_uniform"):
        return ingest.resample_uniform(cleaned, config.interval, config.channel)


def run(data: list[SampleRecord] | UniformSeries, config: PipelineConfig = PipelineConfig()) -> PipelineResult:
    """Run every stage in order. Errors carry the failing stage in ``.stage``."""
    with _stage("config"):
        config.validate()
    series = data if isinstance(data, UniformSeries) else prepare_series(data, config)

    with _stage("forward_dft"):
        spectrum = spectral.forward_dft(series)
    if config.verify:
        with _stage("verify"):
            gap = oracle_deviation(series.values, spectrum)
            if not gap < oracle_tolerance(series.values):
                raise VerificationError(
                    f"fast transform differs from the naive DFT by {gap:.3g}"
                )
    with _stage("select_by_energy"):
        chosen = selection.select_by_energy(spectrum, config.threshold)
    with _stage("reconstruct"):
        rebuilt = selection.reconstruct(spectrum, chosen, series.channel)
        metrics = selection.selection_metrics(series, rebuilt, chosen)
    with _stage("activation"):
        schedule = activation.schedule_for(rebuilt, config.k_sigma)

    return PipelineResult(config, series, spectrum, chosen, metrics, schedule, rebuilt)


def run_channels(
    records: list[SampleRecord], channels: list[str], config: PipelineConfig = PipelineConfig(), workers: int = 4
) -> dict[str, PipelineResult]:
    """Run each channel independently, possibly in parallel threads."""
    configs = [
        PipelineConfig(ch, config.interval, config.threshold, config.k_sigma, config.verify)
        for ch in channels
    ]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda c: run(records, c), configs))
    return dict(zip(channels, results))


@dataclass(frozen=True, slots=True)
class Check:
    name: str
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.deviation < self.tolerance


def transform_checks(series: UniformSeries, spectrum: Spectrum | None = None) -> list[Check]:
    """Oracle agreement, Parseval and round trip for one series.

    ``spectrum`` defaults to the fast transform of ``series``; pass a stored
    spectrum to audit it against the data it claims to describe.
    """
    x = series.values
    if spectrum is None:
        spectrum = spectral.forward_dft(series)
    scale = 1.0 + float(np.max(np.abs(x)))

    oracle = Check("oracle", oracle_deviation(x, spectrum), oracle_tolerance(x))

    if spectrum.size == x.size:
        time_energy = float(np.sum(x * x))
        freq_energy = float(np.sum(spectral.amplitude_spectrum(spectrum).energy)) / spectrum.size
        parseval_gap = abs(time_energy - freq_energy) / max(time_energy, np.finfo(float).tiny)
        round_trip = float(np.max(np.abs(spectral.ifft(spectrum.coefficients) - x)))
    else:
        parseval_gap = round_trip = float("inf")
    return [
        oracle,
        Check("parseval", parseval_gap, 1e-9),
        Check("round_trip", round_trip, 1e-9 * scale),
    ]
