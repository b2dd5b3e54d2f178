import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sensorfft.errors import ParameterError, SelectionError
from sensorfft.ingest import UniformSeries
from sensorfft.selection import (
    HarmonicSelection,
    rank_harmonics,
    reconstruct,
    select_by_energy,
    selection_metrics,
    truncate_spectrum,
)
from sensorfft.spectral import AmplitudeSpectrum, Spectrum, forward_dft, naive_dft

X4 = Spectrum([4, 2, 0, 2])


def summary(units):
    return [(u.kind, u.bins, u.energy) for u in units]


def test_rank_example():
    # energies: DC 16, pair 2^2 + 2^2 = 8, Nyquist 0
    units = rank_harmonics(AmplitudeSpectrum(np.array([4.0, 2, 0, 2])))
    assert summary(units) == [("dc", (0,), 16.0), ("pair", (1, 3), 8.0), ("nyquist", (2,), 0.0)]


def test_rank_ties_lower_index_first():
    units = rank_harmonics(AmplitudeSpectrum(np.ones(4)))
    assert summary(units) == [("pair", (1, 3), 2.0), ("dc", (0,), 1.0), ("nyquist", (2,), 1.0)]


def test_rank_single_bin():
    assert summary(rank_harmonics(AmplitudeSpectrum(np.array([7.0])))) == [("dc", (0,), 49.0)]


def test_rank_odd_length_has_no_nyquist():
    kinds = [u.kind for u in rank_harmonics(AmplitudeSpectrum(np.ones(5)))]
    assert sorted(kinds) == ["dc", "pair", "pair"]


def test_select_half():
    sel = select_by_energy(X4, 0.5)
    assert sel.retained == (0,)
    assert sel.energy_fraction == pytest.approx(16 / 24)
    assert sel.k_opt == 1


def test_select_ninety():
    sel = select_by_energy(X4, 0.9)
    assert sel.retained == (0, 1, 3)
    assert sel.energy_fraction == 1.0


@pytest.mark.parametrize("theta", [0.01, 0.5, 0.9, 1.0])
def test_select_constant(theta):
    sel = select_by_energy(forward_dft(UniformSeries(0, 1, [3.0] * 10)), theta)
    assert sel.retained == (0,)
    assert sel.energy_fraction == pytest.approx(1.0)


def test_select_all_zero():
    sel = select_by_energy(Spectrum(np.zeros(6)), 0.9)
    assert sel.retained == (0,)
    assert sel.energy_fraction == 1.0


@pytest.mark.parametrize("theta", [0.0, -0.1, 1.5, float("nan")])
def test_select_bad_threshold(theta):
    with pytest.raises(ParameterError):
        select_by_energy(X4, theta)


def test_select_full_threshold_keeps_everything():
    x = np.random.default_rng(0).normal(size=12)
    sel = select_by_energy(forward_dft(UniformSeries(0, 1, x)), 1.0)
    assert sel.retained == tuple(range(12))
    assert sel.energy_fraction == 1.0


def test_truncate_examples():
    full = HarmonicSelection(4, (0, 1, 2, 3), (), 1.0, 1.0)
    assert truncate_spectrum(X4, full).coefficients.tolist() == X4.coefficients.tolist()
    dc = HarmonicSelection(4, (0,), (), 1.0, 0.5)
    assert truncate_spectrum(Spectrum([8, 0, 0, 0]), dc).coefficients.tolist() == [8, 0, 0, 0]
    assert truncate_spectrum(X4, dc).coefficients.tolist() == [4, 0, 0, 0]


def test_truncate_keeps_grid():
    spec = Spectrum([1, 2, 3], start=50, interval=7)
    out = truncate_spectrum(spec, HarmonicSelection(3, (0,), (), 1.0, 0.5))
    assert (out.start, out.interval) == (50, 7)


def test_truncate_out_of_range():
    with pytest.raises(SelectionError):
        truncate_spectrum(X4, HarmonicSelection(4, (0, 4), (), 1.0, 0.5))


def test_reconstruct_examples():
    dc = HarmonicSelection(4, (0,), (), 1.0, 0.5)
    sine = forward_dft(UniformSeries(0, 1, [0, 1, 0, -1]))
    np.testing.assert_allclose(reconstruct(sine, dc).values, [0, 0, 0, 0], atol=1e-12)
    const = forward_dft(UniformSeries(0, 1, [2, 2, 2, 2]))
    assert reconstruct(const, dc).values.tolist() == [2.0, 2.0, 2.0, 2.0]


def test_reconstruct_full_is_round_trip():
    x = np.random.default_rng(1).normal(size=96)
    spec = forward_dft(UniformSeries(10, 900, x))
    out = reconstruct(spec, select_by_energy(spec, 1.0), "co2")
    assert np.max(np.abs(out.values - x)) < 1e-9
    assert (out.start, out.interval, out.channel) == (10, 900, "co2")


def test_metrics_examples():
    a = UniformSeries(0, 1, [1.0, 2.0, 3.0])
    b = UniformSeries(0, 1, [4.0, 5.0, 6.0])
    sel = HarmonicSelection(3, (0,), (), 1.0, 0.5)
    assert selection_metrics(a, a, sel).rmse == 0.0
    assert selection_metrics(a, b, sel).rmse == pytest.approx(3.0)
    with pytest.raises(ParameterError):
        selection_metrics(a, UniformSeries(0, 1, [1.0, 2.0]), sel)


def test_metrics_storage_count():
    # DC + 12 pairs at N=96: 1 + 12 * 2 = 25 reals
    x = np.random.default_rng(2).normal(size=96)
    spec = forward_dft(UniformSeries(0, 1, x))
    units = rank_harmonics(AmplitudeSpectrum(np.abs(spec.coefficients)))
    chosen = [u for u in units if u.kind == "dc"] + [u for u in units if u.kind == "pair"][:12]
    sel = HarmonicSelection(96, tuple(sorted(b for u in chosen for b in u.bins)), tuple(chosen), 0.5, 0.5)
    m = selection_metrics(UniformSeries(0, 1, x), reconstruct(spec, sel), sel)
    assert (m.stored_reals, m.retained_units, m.retained_bins) == (25, 13, 25)
    assert m.compression_ratio == pytest.approx(25 / 96)


# --- brute-force oracle, independent of rank_harmonics / select_by_energy ---

def brute_units(x):
    """Unit energies from the naive DFT, sorted by (-energy, lowest bin)."""
    n = len(x)
    energy = np.abs(naive_dft(x).coefficients) ** 2
    groups = [[0]] + [[k, n - k] for k in range(1, n) if k < n - k]
    if n % 2 == 0:
        groups.append([n // 2])
    scored = [(sum(energy[b] for b in g), g) for g in groups]
    return sorted(scored, key=lambda s: (-s[0], s[1][0])), float(energy.sum())


signals = st.integers(2, 64).flatmap(
    lambda n: st.lists(st.floats(-100, 100, allow_nan=False), min_size=n, max_size=n)
)


@settings(max_examples=150, deadline=None)
@given(signals, st.sampled_from([0.1, 0.5, 0.75, 0.9, 0.99]))
def test_minimality_against_brute_force(values, theta):
    x = np.array(values)
    ranked, total = brute_units(x)
    if total < 1e-9:
        return
    sel = select_by_energy(forward_dft(UniformSeries(0, 1, x)), theta)
    k = sel.k_opt
    kept = sum(e for e, _ in ranked[:k])
    assert sel.energy_fraction >= theta
    assert kept / total >= theta - 1e-9
    if k > 1:
        dropped = sum(e for e, _ in ranked[: k - 1])
        assert dropped / total < theta + 1e-9
        # every shorter prefix also falls short
        assert all(sum(e for e, _ in ranked[:j]) / total < theta + 1e-9 for j in range(1, k))


@settings(max_examples=100, deadline=None)
@given(signals, st.floats(0.01, 1.0), st.floats(0.01, 1.0))
def test_monotone_in_threshold(values, t1, t2):
    lo, hi = sorted((t1, t2))
    spec = forward_dft(UniformSeries(0, 1, values))
    assert set(select_by_energy(spec, lo).retained) <= set(select_by_energy(spec, hi).retained)


@settings(max_examples=100, deadline=None)
@given(signals, st.floats(0.01, 1.0))
def test_pairs_kept_whole_and_energy_accounting(values, theta):
    spec = forward_dft(UniformSeries(0, 1, values))
    sel = select_by_energy(spec, theta)
    n = spec.size
    kept = set(sel.retained)
    assert len(kept) == len(sel.retained)
    for k in kept:
        assert 0 <= k < n
        if k != 0 and 2 * k != n:
            assert n - k in kept
    energy = np.abs(spec.coefficients) ** 2
    total = math.fsum(energy)
    if total > 0:
        expected = math.fsum(energy[list(kept)]) / total
        assert sel.energy_fraction == pytest.approx(expected, rel=1e-12, abs=1e-15)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 96), st.integers(0, 2**32 - 1))
def test_rmse_decays_and_stays_real(n, seed):
    x = np.random.default_rng(seed).normal(size=n)
    spec = forward_dft(UniformSeries(0, 1, x))
    original = UniformSeries(0, 1, x)
    ranked = rank_harmonics(AmplitudeSpectrum(np.abs(spec.coefficients)))
    previous = math.inf
    for count in range(1, len(ranked) + 1):
        units = ranked[:count]
        sel = HarmonicSelection(n, tuple(sorted(b for u in units for b in u.bins)), tuple(units), 0.0, 1.0)
        rebuilt = reconstruct(spec, sel)
        rmse = selection_metrics(original, rebuilt, sel).rmse
        assert rmse <= previous + 1e-12
        previous = rmse
        masked = np.zeros(n, complex)
        masked[list(sel.retained)] = spec.coefficients[list(sel.retained)]
        assert np.max(np.abs(np.fft.ifft(masked).imag)) < 1e-9
