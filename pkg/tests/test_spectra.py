import numpy as np
import pytest

from specslope.energy import EnergyEstimator, mean_square_energy
from specslope.errors import DegenerateEnergyError, InputDataError
from specslope.spectra import WaveletSpectrum, default_fit_range, fit_slope, wavelet_spectrum
from specslope.synth import brownian_motion
from specslope.wavelet import WaveletDecomposition, daubechies_filter, dwt, idwt

DB6 = daubechies_filter(6)


def make_spectrum(levels, energies_log2):
    return WaveletSpectrum(
        levels=np.asarray(levels, dtype=np.int64),
        log2_energies=np.asarray(energies_log2, dtype=np.float64),
        estimator=EnergyEstimator.mean_square(),
        signal_length=2 ** (max(levels) + 1),
    )


def test_fit_recovers_exact_line():
    levels = [3, 4, 5, 6, 7]
    spec = make_spectrum(levels, [-2.0 * j + 3.0 for j in levels])
    fit = fit_slope(spec, 3, 7)
    assert fit.slope == pytest.approx(-2.0, abs=1e-12)
    assert fit.intercept == pytest.approx(3.0, abs=1e-12)
    assert fit.residual_sum_squares < 1e-12
    assert fit.level_range == (3, 7)


def test_fit_is_order_invariant(rng):
    levels = np.array([2, 3, 4, 5, 6])
    values = rng.standard_normal(5)
    forward = fit_slope(make_spectrum(levels, values))
    backward = fit_slope(make_spectrum(levels[::-1], values[::-1]))
    assert forward.slope == pytest.approx(backward.slope, abs=1e-14)
    assert forward.intercept == pytest.approx(backward.intercept, abs=1e-14)


def test_fit_matches_independent_two_pass_ols(rng):
    levels = np.arange(1, 10)
    values = -2.0 * levels + rng.standard_normal(9)
    fit = fit_slope(make_spectrum(levels, values))
    # independent oracle: numpy polyfit plus explicit residual computation
    coeffs = np.polyfit(levels.astype(float), values, 1)
    residuals = values - np.polyval(coeffs, levels)
    assert fit.slope == pytest.approx(coeffs[0], abs=1e-12)
    assert fit.intercept == pytest.approx(coeffs[1], abs=1e-12)
    assert fit.residual_sum_squares == pytest.approx(residuals @ residuals, abs=1e-12)


def test_fit_range_validation():
    spec = make_spectrum([2, 3, 4], [1.0, 2.0, 3.0])
    with pytest.raises(InputDataError):
        fit_slope(spec, 3, 3)
    with pytest.raises(InputDataError):
        fit_slope(spec, 5, 9)


def test_default_fit_range_drops_two_coarsest():
    assert default_fit_range([4, 5, 6, 7, 8, 9]) == (6, 9)
    assert default_fit_range([1, 2, 3]) == (1, 3)  # too few points to drop any
    with pytest.raises(InputDataError):
        default_fit_range([5])


def test_pure_atom_dominates_its_level():
    # build the signal from a one-hot detail coefficient, re-decompose, and
    # compare per-level mean-square energies
    target_level = 7
    details = {9: np.zeros(512), 8: np.zeros(256), 7: np.zeros(128), 6: np.zeros(64)}
    details[target_level][40] = 1.0
    decomp = WaveletDecomposition(
        smooth=np.zeros(64), details=details, signal_length=1024,
        filter=DB6, coarsest_level=6,
    )
    atom = idwt(decomp)
    redecomposed = dwt(atom, DB6, 4)
    energies = {j: mean_square_energy(redecomposed.details[j]) for j in redecomposed.levels}
    others = max(v for j, v in energies.items() if j != target_level)
    assert energies[target_level] >= 2**10 * max(others, 1e-300)


def test_scaling_shifts_log_energy_by_two_log2(rng):
    x = rng.standard_normal(1024)
    c = 7.5
    for estimator in (EnergyEstimator.mean_square(), EnergyEstimator.distance_variance()):
        base = wavelet_spectrum(dwt(x, DB6, 6), estimator)
        scaled = wavelet_spectrum(dwt(c * x, DB6, 6), estimator)
        shift = scaled.log2_energies - base.log2_energies
        assert np.allclose(shift, 2.0 * np.log2(c), atol=1e-9)
        base_fit = fit_slope(base)
        scaled_fit = fit_slope(scaled)
        assert scaled_fit.slope == pytest.approx(base_fit.slope, abs=1e-9)
        assert scaled_fit.intercept == pytest.approx(
            base_fit.intercept + 2.0 * np.log2(c), abs=1e-9
        )


def test_constant_shift_leaves_spectrum_unchanged(rng):
    # vanishing moments annihilate constants, so the dvar spectrum ignores
    # intensity offsets entirely
    x = rng.standard_normal(512)
    estimator = EnergyEstimator.distance_variance()
    base = wavelet_spectrum(dwt(x, DB6, 5), estimator)
    shifted = wavelet_spectrum(dwt(x + 100.0, DB6, 5), estimator)
    assert np.allclose(base.log2_energies, shifted.log2_energies, atol=1e-6)


def test_zero_and_constant_signals_are_degenerate():
    for signal in (np.zeros(256), np.full(256, 2.0)):
        decomp = dwt(signal, DB6, 4)
        with pytest.raises(DegenerateEnergyError):
            wavelet_spectrum(decomp, EnergyEstimator.mean_square())


def test_dvar_needs_two_coefficients_per_level():
    decomp = WaveletDecomposition(
        smooth=np.zeros(1), details={0: np.array([1.0])}, signal_length=2,
        filter=DB6, coarsest_level=0,
    )
    with pytest.raises(InputDataError):
        wavelet_spectrum(decomp, EnergyEstimator.distance_variance())


def test_brownian_motion_slope_smoke():
    # full acceptance run uses 500 paths; here a quick 60-path sanity check
    slopes = []
    estimator = EnergyEstimator.mean_square()
    for rep in range(60):
        path = brownian_motion(1024, seed=np.random.default_rng([17, rep]))
        spec = wavelet_spectrum(dwt(path, DB6, 9), estimator)
        slopes.append(fit_slope(spec).slope)
    assert -2.3 < float(np.mean(slopes)) < -1.7
