"""Discrete Fourier transforms for arbitrary lengths.

Convention: the forward transform is unscaled and the inverse carries the
``1/N`` factor, so for a real signal ``sum(x**2) == sum(abs(X)**2) / N``.

``forward_dft`` is a mixed-radix Cooley-Tukey transform. Lengths are split
by their smallest prime factor; prime lengths up to ``_DIRECT_PRIME_LIMIT``
are evaluated as a small dense DFT and larger primes go through Bluestein's
chirp-z identity on a power-of-two grid. ``naive_dft`` is a deliberately
independent O(N^2) double loop used only to check the fast path.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ParameterError
from .ingest import UniformSeries

_DIRECT_PRIME_LIMIT = 64


@dataclass(frozen=True)
class Spectrum:
    coefficients: np.ndarray
    start: int = 0
    interval: int = 1

    def __post_init__(self):
        coeffs = np.array(self.coefficients, dtype=np.complex128)
        if coeffs.ndim != 1 or coeffs.size < 1:
            raise ParameterError("spectrum needs at least one coefficient")
        if not np.all(np.isfinite(coeffs)):
            raise ParameterError("spectrum coefficients must be finite")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def size(self) -> int:
        return self.coefficients.size

    def __len__(self) -> int:
        return self.coefficients.size


@dataclass(frozen=True)
class AmplitudeSpectrum:
    amplitudes: np.ndarray

    def __len__(self) -> int:
        return self.amplitudes.size

    @property
    def energy(self) -> np.ndarray:
        return self.amplitudes**2


@lru_cache(maxsize=None)
def _smallest_factor(n: int) -> int:
    if n % 2 == 0:
        return 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return f
        f += 2
    return n


@lru_cache(maxsize=256)
def _roots(n: int, rows: int, cols: int) -> np.ndarray:
    """exp(-2*pi*i*r*c/n) for r < rows, c < cols, with exact integer phase reduction."""
    phase = np.outer(np.arange(rows), np.arange(cols)) % n
    out = np.exp(-2j * np.pi * phase / n)
    out.setflags(write=False)
    return out


def _fft(a: np.ndarray) -> np.ndarray:
    """Transform along the last axis of a complex array."""
    n = a.shape[-1]
    if n == 1:
        return a.copy()
    p = _smallest_factor(n)
    if p == n:
        return _prime_dft(a)
    m = n // p
    # sample q*p + r goes to sub-sequence r, position q
    sub = np.swapaxes(a.reshape(a.shape[:-1] + (m, p)), -1, -2)
    sub = _fft(np.ascontiguousarray(sub)) * _roots(n, p, m)
    out = np.einsum("qr,...rk->...qk", _roots(p, p, p), sub)
    return out.reshape(a.shape)


def _prime_dft(a: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    if n <= _DIRECT_PRIME_LIMIT:
        return a @ _roots(n, n, n).T
    return _bluestein(a)


@lru_cache(maxsize=64)
def _chirp(n: int) -> tuple[np.ndarray, np.ndarray, int]:
    m = 1 << (2 * n - 2).bit_length()
    k = np.arange(n)
    w = np.exp(-1j * np.pi * ((k * k) % (2 * n)) / n)
    b = np.zeros(m, dtype=np.complex128)
    b[:n] = np.conj(w)
    b[m - n + 1:] = np.conj(w[1:])[::-1]
    fb = _fft(b)
    w.setflags(write=False)
    fb.setflags(write=False)
    return w, fb, m


def _bluestein(a: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    w, fb, m = _chirp(n)
    padded = np.zeros(a.shape[:-1] + (m,), dtype=np.complex128)
    padded[..., :n] = a * w
    conv = np.conj(_fft(np.conj(_fft(padded) * fb))) / m
    return conv[..., :n] * w


def fft(values) -> np.ndarray:
    """Unscaled forward transform of a 1-D sequence of any length."""
    a = np.asarray(values, dtype=np.complex128)
    if a.ndim != 1 or a.size < 1:
        raise ParameterError("fft expects a non-empty 1-D sequence")
    return _fft(a)


def ifft(coefficients) -> np.ndarray:
    """Inverse transform with the 1/N factor; complex output."""
    c = np.asarray(coefficients, dtype=np.complex128)
    return np.conj(fft(np.conj(c))) / c.size


def forward_dft(series: UniformSeries) -> Spectrum:
    return Spectrum(fft(series.values), series.start, series.interval)


def naive_dft(values) -> Spectrum:
    """Term-by-term evaluation of the DFT sum. Reference only: O(N^2)."""
    xs = [float(v) for v in values]
    n = len(xs)
    if n < 1:
        raise ParameterError("naive_dft expects at least one value")
    out = []
    for k in range(n):
        acc = 0j
        for j, x in enumerate(xs):
            acc += x * cmath.exp(-2j * math.pi * ((k * j) % n) / n)
        out.append(acc)
    return Spectrum(np.array(out))


def amplitude_spectrum(spectrum: Spectrum) -> AmplitudeSpectrum:
    c = spectrum.coefficients
    amps = np.hypot(c.real, c.imag)
    amps.setflags(write=False)
    return AmplitudeSpectrum(amps)


def conjugate_asymmetry(spectrum: Spectrum) -> float:
    """max |X[N-k] - conj(X[k])| over k = 1..N-1; zero for the spectrum of a real signal."""
    c = spectrum.coefficients
    if c.size < 2:
        return 0.0
    return float(np.max(np.abs(c[:0:-1] - np.conj(c[1:]))))


def inverse_dft(spectrum: Spectrum) -> np.ndarray:
    """Real part of the inverse transform.

    When the spectrum is conjugate-symmetric the discarded imaginary part is
    checked to be round-off (< 1e-9 relative to the output scale).
    """
    x = ifft(spectrum.coefficients)
    if __debug__:
        scale = 1.0 + float(np.max(np.abs(spectrum.coefficients)))
        if conjugate_asymmetry(spectrum) <= 1e-12 * scale:
            residue = float(np.max(np.abs(x.imag)))
            assert residue < 1e-9 * (1.0 + float(np.max(np.abs(x.real)))), (
                f"imaginary residue {residue:.3g} from a symmetric spectrum"
            )
    return np.ascontiguousarray(x.real)
