"""Synthetic indoor CO2 day for running the pipeline without field data.

The model is a stand-in, not a calibrated CO2 simulation::

    x(t) = baseline
         + diurnal_amplitude * sin(2*pi*t / 24h - pi/2)    # minimum at midnight
         + sum of occupancy pulses active at t
         + gaussian noise(0, noise_std)

A pulse ``(start_hour, duration_hours, magnitude)`` rises with a half-cosine
ramp over the first half of its duration and falls symmetrically over the
second, i.e. ``magnitude * (1 - cos(2*pi*u)) / 2`` for ``u`` in [0, 1].

Noise comes from :class:`SplitMix64`, specified below in full so that the
same seed gives bit-identical series on every platform and Python version.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .ingest import UniformSeries

_MASK64 = (1 << 64) - 1

DEFAULT_PULSES = ((8.0, 4.0, 350.0), (13.0, 4.0, 300.0))


class SplitMix64:
    """SplitMix64 (Steele, Lea, Flood 2014).

    State: one unsigned 64-bit integer, initialised to the seed. Each call
    to :meth:`next_u64` does, modulo 2**64::

        state += 0x9E3779B97F4A7C15
        z = state
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        return z ^ (z >> 31)

    Uniforms take the top 53 bits: ``(u64 >> 11) * 2**-53``, in [0, 1).
    Normals use the Box-Muller transform on two uniforms ``u1, u2``:
    ``r = sqrt(-2 ln(1 - u1))`` and the pair ``r cos(2 pi u2), r sin(2 pi u2)``
    is returned cosine first.
    """

    def __init__(self, seed: int):
        if seed < 0:
            raise ParameterError("seed must be an unsigned integer")
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def normals(self, count: int) -> list[float]:
        out = []
        while len(out) < count:
            u1, u2 = self.uniform(), self.uniform()
            r = math.sqrt(-2.0 * math.log(1.0 - u1))
            out.append(r * math.cos(2.0 * math.pi * u2))
            out.append(r * math.sin(2.0 * math.pi * u2))
        return out[:count]


@dataclass(frozen=True)
class SynthConfig:
    duration_hours: float = 24.0
    interval_minutes: float = 15.0
    baseline: float = 420.0
    diurnal_amplitude: float = 80.0
    occupancy_pulses: tuple[tuple[float, float, float], ...] = DEFAULT_PULSES
    noise_std: float = 5.0
    seed: int = 0
    start: int = 0
    channel: str = field(default="co2_ppm")

    @property
    def interval_seconds(self) -> int:
        return int(round(self.interval_minutes * 60))

    @property
    def n(self) -> int:
        return math.floor(self.duration_hours * 60 / self.interval_minutes) + 1

    def validate(self) -> None:
        if not self.duration_hours > 0:
            raise ParameterError("duration must be positive")
        if not self.interval_minutes > 0:
            raise ParameterError("interval must be positive")
        if abs(self.interval_minutes * 60 - self.interval_seconds) > 1e-9:
            raise ParameterError("interval must be a whole number of seconds")
        if not self.noise_std >= 0:
            raise ParameterError("noise_std must be >= 0")
        if self.seed < 0 or int(self.seed) != self.seed:
            raise ParameterError("seed must be an unsigned integer")
        if self.start < 0:
            raise ParameterError("start must be >= 0")
        for start_h, dur_h, _ in self.occupancy_pulses:
            if not dur_h > 0:
                raise ParameterError(f"pulse at {start_h} h has non-positive duration")
        if self.n < 2:
            raise ParameterError("configuration yields fewer than 2 samples")


def pulse_shape(hours: np.ndarray, start_hour: float, duration_hours: float) -> np.ndarray:
    u = (hours - start_hour) / duration_hours
    inside = (u >= 0.0) & (u <= 1.0)
    return np.where(inside, 0.5 * (1.0 - np.cos(2.0 * np.pi * u)), 0.0)


def generate(config: SynthConfig = SynthConfig()) -> UniformSeries:
    config.validate()
    n = config.n
    seconds = np.arange(n, dtype=np.float64) * config.interval_seconds
    hours = seconds / 3600.0
    values = config.baseline + config.diurnal_amplitude * np.sin(
        2.0 * np.pi * seconds / 86400.0 - np.pi / 2.0
    )
    for start_h, dur_h, magnitude in config.occupancy_pulses:
        values = values + magnitude * pulse_shape(hours, start_h, dur_h)
    if config.noise_std > 0:
        noise = np.array(SplitMix64(int(config.seed)).normals(n))
        values = values + config.noise_std * noise
    return UniformSeries(config.start, config.interval_seconds, values, config.channel)
