"""Energy-ranked harmonic selection and reduced reconstruction.

A real signal's spectrum is grouped into units that must be kept or dropped
together so the reconstruction stays real: the DC bin, each conjugate pair
``{k, N-k}``, and for even ``N`` the self-conjugate Nyquist bin ``N/2``.
Units are ranked by energy and the shortest leading run whose energy reaches
the requested fraction of the total is kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, SelectionError
from .ingest import UniformSeries
from .spectral import AmplitudeSpectrum, Spectrum, amplitude_spectrum, inverse_dft

DEFAULT_THRESHOLD = 0.5
# the constant used by the reference algorithm listing
THRESHOLD_PRESET_90 = 0.9


@dataclass(frozen=True, slots=True)
class Unit:
    kind: str  # "dc", "pair" or "nyquist"
    bins: tuple[int, ...]
    energy: float

    @property
    def index(self) -> int:
        return self.bins[0]


@dataclass(frozen=True)
class HarmonicSelection:
    size: int
    retained: tuple[int, ...]
    units: tuple[Unit, ...]
    energy_fraction: float
    threshold: float

    @property
    def k_opt(self) -> int:
        """Number of retained units."""
        return len(self.units)

    @property
    def stored_reals(self) -> int:
        return sum(2 if u.kind == "pair" else 1 for u in self.units)


@dataclass(frozen=True, slots=True)
class Metrics:
    rmse: float
    energy_fraction: float
    compression_ratio: float
    retained_bins: int
    retained_units: int
    stored_reals: int


def _units(n: int) -> list[tuple[str, tuple[int, ...]]]:
    units = [("dc", (0,))]
    units += [("pair", (k, n - k)) for k in range(1, (n + 1) // 2)]
    if n % 2 == 0 and n > 1:
        units.append(("nyquist", (n // 2,)))
    return units


def rank_harmonics(amplitudes: AmplitudeSpectrum) -> list[Unit]:
    """Units sorted by energy, largest first; equal energies go to the lower bin."""
    energy = np.asarray(amplitudes.amplitudes, dtype=np.float64) ** 2
    units = [
        Unit(kind, bins, math.fsum(float(energy[b]) for b in bins))
        for kind, bins in _units(energy.size)
    ]
    units.sort(key=lambda u: (-u.energy, u.index))
    return units


def _check_threshold(threshold: float) -> float:
    threshold = float(threshold)
    if not 0.0 < threshold <= 1.0:
        raise ParameterError(f"threshold must be in (0, 1], got {threshold}")
    return threshold


def select_by_energy(spectrum: Spectrum, threshold: float = DEFAULT_THRESHOLD) -> HarmonicSelection:
    threshold = _check_threshold(threshold)
    ranked = rank_harmonics(amplitude_spectrum(spectrum))
    # running sums in rank order, so keeping every unit gives exactly 1.0
    cumulative = np.cumsum([u.energy for u in ranked])
    total = float(cumulative[-1])
    if total == 0.0:
        dc = next(u for u in ranked if u.kind == "dc")
        return HarmonicSelection(spectrum.size, (0,), (dc,), 1.0, threshold)
    fractions = cumulative / total
    count = int(np.argmax(fractions >= threshold)) + 1
    chosen = tuple(ranked[:count])
    retained = tuple(sorted(b for u in chosen for b in u.bins))
    return HarmonicSelection(spectrum.size, retained, chosen, float(fractions[count - 1]), threshold)


def truncate_spectrum(spectrum: Spectrum, selection: HarmonicSelection) -> Spectrum:
    """Zero every coefficient outside the selection."""
    idx = np.asarray(selection.retained, dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= spectrum.size):
        raise SelectionError(
            f"selection refers to bins outside 0..{spectrum.size - 1}"
        )
    out = np.zeros(spectrum.size, dtype=np.complex128)
    out[idx] = spectrum.coefficients[idx]
    return Spectrum(out, spectrum.start, spectrum.interval)


def reconstruct(spectrum: Spectrum, selection: HarmonicSelection, channel: str = "") -> UniformSeries:
    values = inverse_dft(truncate_spectrum(spectrum, selection))
    return UniformSeries(spectrum.start, spectrum.interval, values, channel)


def selection_metrics(
    original: UniformSeries, reconstructed: UniformSeries, selection: HarmonicSelection
) -> Metrics:
    """Error and storage cost of a reduced representation.

    ``compression_ratio`` counts the reals needed to store the kept
    coefficients (one for DC or Nyquist, two per conjugate pair) over the
    original sample count. The start time and interval are not counted.
    """
    if len(original) != len(reconstructed):
        raise ParameterError(
            f"length mismatch: {len(original)} original vs {len(reconstructed)} reconstructed"
        )
    diff = original.values - reconstructed.values
    rmse = math.sqrt(float(np.mean(diff * diff)))
    stored = selection.stored_reals
    return Metrics(
        rmse=rmse,
        energy_fraction=selection.energy_fraction,
        compression_ratio=stored / len(original),
        retained_bins=len(selection.retained),
        retained_units=selection.k_opt,
        stored_reals=stored,
    )
