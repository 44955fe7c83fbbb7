"""Wavelet spectra (level vs log2 energy) and least-squares slope fitting.

The slope of the spectrum over the scale indices measures self-similarity;
a standard Brownian motion path has theoretical slope -2.
"""

from dataclasses import dataclass

import numpy as np

from .energy import EnergyEstimator
from .errors import DegenerateEnergyError, InputDataError
from .wavelet import WaveletDecomposition


@dataclass(eq=False)
class WaveletSpectrum:
    """One (level, log2 energy) point per detail level, coarsest first."""

    levels: np.ndarray
    log2_energies: np.ndarray
    estimator: EnergyEstimator
    signal_length: int

    @property
    def points(self):
        return list(zip(self.levels.tolist(), self.log2_energies.tolist()))


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    level_range: tuple
    residual_sum_squares: float


def wavelet_spectrum(decomp: WaveletDecomposition, estimator: EnergyEstimator) -> WaveletSpectrum:
    """Estimate the log2 energy of every detail level with the chosen estimator.

    A level whose energy is zero, or negligible against the decomposition's
    overall mean square (below 1e-28 of it, i.e. coefficients that are pure
    transform rounding noise), has no defined log energy and raises
    :class:`DegenerateEnergyError`.
    """
    levels = decomp.levels
    total = decomp.smooth @ decomp.smooth + sum(
        d @ d for d in decomp.details.values()
    )
    floor = 1e-28 * total / max(decomp.signal_length, 1)
    energies = np.empty(len(levels))
    for i, j in enumerate(levels):
        energy = estimator(decomp.details[j])
        if energy <= floor:
            raise DegenerateEnergyError(
                f"detail level {j} has zero {estimator.label} energy; log2 is undefined"
            )
        energies[i] = energy
    return WaveletSpectrum(
        levels=np.array(levels, dtype=np.int64),
        log2_energies=np.log2(energies),
        estimator=estimator,
        signal_length=decomp.signal_length,
    )


def default_fit_range(levels) -> tuple:
    """Default slope-fit range: drop the two coarsest levels when enough remain.

    The coarsest levels hold the fewest coefficients and give unstable
    distance-variance estimates; with fewer than four levels available the
    full range is used instead.
    """
    levels = sorted(int(j) for j in levels)
    if len(levels) < 2:
        raise InputDataError("need at least 2 detail levels to fit a slope")
    if len(levels) >= 4:
        levels = levels[2:]
    return levels[0], levels[-1]


def fit_slope(spectrum: WaveletSpectrum, j_min=None, j_max=None) -> SlopeFit:
    """Ordinary least-squares fit of log2 energy on the scale index.

    ``j_min``/``j_max`` bound the levels used (inclusive); omitted bounds
    default to the full available range.
    """
    levels = spectrum.levels
    if j_min is None:
        j_min = int(levels.min())
    if j_max is None:
        j_max = int(levels.max())
    if j_min >= j_max:
        raise InputDataError(f"need j_min < j_max, got [{j_min}, {j_max}]")
    mask = (levels >= j_min) & (levels <= j_max)
    if int(mask.sum()) < 2:
        raise InputDataError(
            f"fewer than 2 spectrum points in level range [{j_min}, {j_max}]"
        )
    x = levels[mask].astype(np.float64)
    y = spectrum.log2_energies[mask]
    x_mean = x.mean()
    y_mean = y.mean()
    sxx = float(((x - x_mean) ** 2).sum())
    sxy = float(((x - x_mean) * (y - y_mean)).sum())
    slope = sxy / sxx
    intercept = y_mean - slope * x_mean
    residuals = y - (intercept + slope * x)
    return SlopeFit(
        slope=slope,
        intercept=intercept,
        level_range=(int(j_min), int(j_max)),
        residual_sum_squares=float(residuals @ residuals),
    )
