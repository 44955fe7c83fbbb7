"""Level-wise energy estimators for detail coefficient vectors.

Two estimators: the classical mean square (detail coefficients are
zero-mean, so this is the uncentered sample variance) and the distance
variance, a robust dispersion measure built from double-centered pairwise
absolute differences. The distance variance comes in a naive O(n^2)
reference form and an exact O(n log n) form; the two agree to rounding
error and the fast one handles a million points in well under a second.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .errors import InputDataError


class EstimatorKind(str, Enum):
    MEAN_SQUARE = "var"
    DISTANCE_VARIANCE = "dvar"


class DvarAlgorithm(str, Enum):
    NAIVE = "naive"
    FAST = "fast"


def _as_vector(coeffs) -> np.ndarray:
    x = np.ascontiguousarray(coeffs, dtype=np.float64)
    if x.ndim != 1:
        raise InputDataError("coefficients must form a one-dimensional vector")
    return x


def mean_square_energy(coeffs) -> float:
    """Uncentered second moment (1/n) * sum(coeffs**2)."""
    x = _as_vector(coeffs)
    if x.size == 0:
        raise InputDataError("cannot estimate energy of an empty vector")
    return float(x @ x) / x.size


def distance_variance_naive(coeffs) -> float:
    """Distance variance straight from its double-centered definition, O(n^2)."""
    x = _as_vector(coeffs)
    if x.size < 2:
        raise InputDataError("distance variance needs at least 2 coefficients")
    return float(_kernels.dvar_naive(x))


def distance_variance_fast(coeffs) -> float:
    """Distance variance via the sort/prefix-sum algorithm, O(n log n).

    Exact (no sampling); agrees with the naive form within 1e-9 relative.
    """
    x = _as_vector(coeffs)
    if x.size < 2:
        raise InputDataError("distance variance needs at least 2 coefficients")
    return float(_kernels.dvar_fast(x))


@dataclass(frozen=True)
class EnergyEstimator:
    """Selects which energy estimate a spectrum is built from."""

    kind: EstimatorKind = EstimatorKind.DISTANCE_VARIANCE
    algorithm: DvarAlgorithm = DvarAlgorithm.FAST

    @classmethod
    def mean_square(cls):
        return cls(kind=EstimatorKind.MEAN_SQUARE)

    @classmethod
    def distance_variance(cls, algorithm=DvarAlgorithm.FAST):
        return cls(kind=EstimatorKind.DISTANCE_VARIANCE, algorithm=DvarAlgorithm(algorithm))

    @property
    def label(self) -> str:
        if self.kind is EstimatorKind.MEAN_SQUARE:
            return "var"
        return f"dvar-{self.algorithm.value}"

    def __call__(self, coeffs) -> float:
        if self.kind is EstimatorKind.MEAN_SQUARE:
            return mean_square_energy(coeffs)
        if self.algorithm is DvarAlgorithm.FAST:
            return distance_variance_fast(coeffs)
        return distance_variance_naive(coeffs)
