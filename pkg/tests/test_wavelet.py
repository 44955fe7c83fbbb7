import numpy as np
import pytest

from specslope.errors import InputDataError, ParameterError, StructureError
from specslope.wavelet import SUPPORTED_ORDERS, daubechies_filter, dwt, idwt

SQRT2 = np.sqrt(2.0)


@pytest.mark.parametrize("order", SUPPORTED_ORDERS)
def test_filter_tap_identities(order):
    pair = daubechies_filter(order)
    h = pair.low_pass
    g = pair.high_pass
    taps = h.size
    assert taps == 2 * order
    assert abs(h.sum() - SQRT2) < 1e-12
    assert abs(h @ h - 1.0) < 1e-12
    # quadrature mirror relation, exact by construction
    for k in range(taps):
        assert g[k] == (-1.0) ** k * h[taps - 1 - k]
    # double-shift orthonormality of h, and h-g orthogonality at even lags
    for lag in range(0, taps, 2):
        expected = 1.0 if lag == 0 else 0.0
        assert abs(h[lag:] @ h[: taps - lag] - expected) < 1e-12
        assert abs(h[lag:] @ g[: taps - lag]) < 1e-12
        if lag:
            assert abs(g[lag:] @ g[: taps - lag]) < 1e-12


def test_haar_is_analytically_forced():
    pair = daubechies_filter(1)
    assert np.allclose(pair.low_pass, [1 / SQRT2, 1 / SQRT2], atol=1e-15)
    assert np.allclose(pair.high_pass, [1 / SQRT2, -1 / SQRT2], atol=1e-15)


@pytest.mark.parametrize("order", [0, 11, -3])
def test_unsupported_order_rejected(order):
    with pytest.raises(ParameterError):
        daubechies_filter(order)


def test_db6_annihilates_quintic_away_from_wrap():
    # db6 has 6 vanishing moments, so interior detail coefficients of t**5
    # samples vanish; only coefficients whose support crosses the periodic
    # wrap see the artificial jump.
    n = 1024
    t = np.arange(n) / n
    x = t**5
    pair = daubechies_filter(6)
    decomp = dwt(x, pair, 3)
    norm = np.linalg.norm(x)
    taps = pair.low_pass.size
    j_top = 10
    for j in decomp.levels:
        depth = j_top - j
        support = (2**depth - 1) * (taps - 1) + 1
        keep = (n - support) // 2**depth
        interior = decomp.details[j][: max(keep, 0)]
        assert interior.size > 0
        assert np.abs(interior).max() < 1e-6 * norm


@pytest.mark.parametrize("order", [1, 4, 6])
def test_constant_signal_has_zero_details(order):
    decomp = dwt(np.ones(256), daubechies_filter(order), 5)
    for j in decomp.levels:
        assert np.abs(decomp.details[j]).max() < 1e-12


def test_decomposition_shape_invariants(rng):
    x = rng.standard_normal(1024)
    decomp = dwt(x, daubechies_filter(6), 6)
    assert decomp.coarsest_level == 4
    assert decomp.levels == (4, 5, 6, 7, 8, 9)
    total = decomp.smooth.size + sum(d.size for d in decomp.details.values())
    assert total == 1024
    for j in decomp.levels:
        assert decomp.details[j].size == 2**j
    assert decomp.smooth.size == 2**decomp.coarsest_level


@pytest.mark.parametrize("length", [64, 256, 1024, 4096])
def test_parseval_energy_equality(rng, length):
    x = rng.standard_normal(length)
    decomp = dwt(x, daubechies_filter(6), int(np.log2(length)) - 1)
    coeff_energy = decomp.smooth @ decomp.smooth
    coeff_energy += sum(d @ d for d in decomp.details.values())
    assert abs(coeff_energy - x @ x) < 1e-8 * (x @ x)


def test_roundtrip_db6_1024(rng):
    x = rng.standard_normal(1024)
    assert np.abs(idwt(dwt(x, daubechies_filter(6), 6)) - x).max() < 1e-10


def test_roundtrip_length_256_all_orders(rng):
    x = rng.standard_normal(256)
    for order in SUPPORTED_ORDERS:
        recon = idwt(dwt(x, daubechies_filter(order), 7))
        assert np.abs(recon - x).max() < 1e-10


def test_roundtrip_unit_impulse():
    x = np.zeros(256)
    x[100] = 1.0
    recon = idwt(dwt(x, daubechies_filter(6), 5))
    assert np.abs(recon - x).max() < 1e-10


def test_idwt_of_zero_is_zero():
    decomp = dwt(np.zeros(128), daubechies_filter(3), 4)
    assert np.abs(idwt(decomp)).max() == 0.0


def test_linearity_and_scale_equivariance(rng):
    pair = daubechies_filter(4)
    x = rng.standard_normal(512)
    y = rng.standard_normal(512)
    a, b = 1.7, -0.3
    combo = dwt(a * x + b * y, pair, 5)
    dx = dwt(x, pair, 5)
    dy = dwt(y, pair, 5)
    assert np.abs(combo.smooth - (a * dx.smooth + b * dy.smooth)).max() < 1e-10
    for j in combo.levels:
        assert np.abs(combo.details[j] - (a * dx.details[j] + b * dy.details[j])).max() < 1e-10
    scaled = dwt(3.0 * x, pair, 5)
    for j in scaled.levels:
        assert np.allclose(scaled.details[j], 3.0 * dx.details[j], rtol=1e-12, atol=1e-13)


def test_dwt_input_validation(rng):
    pair = daubechies_filter(2)
    with pytest.raises(InputDataError):
        dwt(rng.standard_normal(100), pair, 2)  # not a power of two
    with pytest.raises(ParameterError):
        dwt(rng.standard_normal(64), pair, 6)  # too many levels
    with pytest.raises(ParameterError):
        dwt(rng.standard_normal(64), pair, 0)


def test_idwt_rejects_inconsistent_levels(rng):
    decomp = dwt(rng.standard_normal(128), daubechies_filter(2), 3)
    decomp.details[6] = decomp.details[6][:-2]
    with pytest.raises(StructureError):
        idwt(decomp)
