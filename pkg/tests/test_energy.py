import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra import numpy as hnp

from specslope.energy import (
    DvarAlgorithm,
    EnergyEstimator,
    EstimatorKind,
    distance_variance_fast,
    distance_variance_naive,
    mean_square_energy,
)
from specslope.errors import InputDataError

finite_vectors = hnp.arrays(
    dtype=np.float64,
    shape=st.integers(min_value=2, max_value=200),
    elements=st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
)


def test_mean_square_forced_arithmetic():
    assert mean_square_energy([0.0, 0.0, 0.0, 0.0]) == 0.0
    assert mean_square_energy([1.0, -1.0, 1.0, -1.0]) == 1.0
    assert mean_square_energy([3.0, 4.0]) == 12.5


def test_mean_square_rejects_empty():
    with pytest.raises(InputDataError):
        mean_square_energy([])


@pytest.mark.parametrize("func", [distance_variance_naive, distance_variance_fast])
def test_dvar_two_point_hand_value(func):
    # Hand evaluation: a = [[0,1],[1,0]], double-centered entries are +-1/2,
    # so (1/4) * sum(A**2) = 0.25 exactly.
    assert func(np.array([0.0, 1.0])) == 0.25


@pytest.mark.parametrize("func", [distance_variance_naive, distance_variance_fast])
def test_dvar_constant_vector_is_zero(func):
    assert func(np.full(17, 3.25)) == 0.0


@pytest.mark.parametrize("func", [distance_variance_naive, distance_variance_fast])
def test_dvar_needs_two_points(func):
    with pytest.raises(InputDataError):
        func([1.0])


@given(finite_vectors)
def test_dvar_fast_matches_naive(x):
    fast = distance_variance_fast(x)
    naive = distance_variance_naive(x)
    assert fast == pytest.approx(naive, rel=1e-9, abs=1e-18)


@given(finite_vectors, st.floats(min_value=1e-3, max_value=1e3))
def test_dvar_scale_law(x, c):
    base = distance_variance_fast(x)
    scaled = distance_variance_fast(c * x)
    assert scaled == pytest.approx(c * c * base, rel=1e-10, abs=1e-20)


def test_mean_square_scale_law(rng):
    x = rng.standard_normal(64)
    assert mean_square_energy(5.0 * x) == pytest.approx(25.0 * mean_square_energy(x), rel=1e-12)


@given(finite_vectors, st.floats(min_value=-1e3, max_value=1e3))
def test_dvar_translation_invariance(x, shift):
    base = distance_variance_fast(x)
    shifted = distance_variance_fast(x + shift)
    assert shifted == pytest.approx(base, rel=1e-9, abs=1e-15)


@pytest.mark.parametrize("func", [distance_variance_naive, distance_variance_fast])
def test_dvar_permutation_invariance(rng, func):
    x = rng.standard_normal(101)
    shuffled = rng.permutation(x)
    assert func(shuffled) == pytest.approx(func(x), rel=1e-12)


@pytest.mark.parametrize("func", [distance_variance_naive, distance_variance_fast])
def test_dvar_nonnegative_on_awkward_inputs(rng, func):
    cases = [
        rng.standard_normal(33),
        rng.standard_t(2, 65) * 1e8,
        rng.integers(0, 3, 50).astype(float),
        np.full(20, 1.0) + np.concatenate([np.zeros(19), [1e-12]]),
    ]
    for x in cases:
        assert func(x) >= 0.0


def test_dvar_oracle_sweep_mixed_families(rng):
    # Gaussian, heavy-tailed and tied-value draws across a range of lengths.
    for trial in range(120):
        n = int(rng.integers(2, 1025))
        kind = trial % 3
        if kind == 0:
            x = rng.standard_normal(n)
        elif kind == 1:
            x = rng.standard_t(2, n) * 1e5
        else:
            x = rng.integers(0, 5, n).astype(float)
        fast = distance_variance_fast(x)
        naive = distance_variance_naive(x)
        assert fast == pytest.approx(naive, rel=1e-9, abs=1e-18)


def test_estimator_dispatch_and_labels(rng):
    x = rng.standard_normal(32)
    var = EnergyEstimator.mean_square()
    assert var.label == "var"
    assert var(x) == mean_square_energy(x)
    fast = EnergyEstimator.distance_variance()
    assert fast.kind is EstimatorKind.DISTANCE_VARIANCE
    assert fast.label == "dvar-fast"
    assert fast(x) == distance_variance_fast(x)
    naive = EnergyEstimator.distance_variance(DvarAlgorithm.NAIVE)
    assert naive.label == "dvar-naive"
    assert naive(x) == distance_variance_naive(x)
    assert fast(x) == pytest.approx(naive(x), rel=1e-9)
