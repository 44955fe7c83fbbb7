"""Feature extraction: rolling-window spectrum slopes, direct intensity
magnitudes, and Fisher-criterion ranking.

A window plan slides a dyadic window along each mass spectrum; the wavelet
spectrum slope of every window becomes one candidate feature (the
"evolutionary" slopes). Direct features are raw intensities at single
mass-to-charge indices. Both kinds are scored per feature with Fisher's
criterion between the case and control groups and the top scorers are kept.
"""

from dataclasses import dataclass, field
from enum import Enum, IntEnum

import numpy as np

from .energy import EnergyEstimator
from .errors import DegenerateEnergyError, InputDataError, ParameterError
from .spectra import default_fit_range, fit_slope, wavelet_spectrum
from .wavelet import FilterPair, dwt


class Label(IntEnum):
    CONTROL = 0
    CASE = 1


@dataclass(eq=False)
class MassSpectrum:
    """One sample: intensities on an ascending mass-to-charge grid."""

    mz: np.ndarray
    intensity: np.ndarray
    label: Label
    name: str = ""

    def __post_init__(self):
        self.mz = np.ascontiguousarray(self.mz, dtype=np.float64)
        self.intensity = np.ascontiguousarray(self.intensity, dtype=np.float64)
        if self.mz.shape != self.intensity.shape or self.mz.ndim != 1:
            raise InputDataError("mz and intensity must be 1-D vectors of equal length")
        if self.mz.size >= 2 and not np.all(np.diff(self.mz) > 0):
            raise InputDataError(f"mz grid must be strictly ascending ({self.name or 'sample'})")
        self.label = Label(self.label)


@dataclass(eq=False)
class SpectraDataset:
    """A collection of spectra sharing one mass-to-charge grid."""

    samples: list

    def __post_init__(self):
        if not self.samples:
            raise InputDataError("dataset contains no samples")
        grid = self.samples[0].mz
        for s in self.samples:
            if s.mz.size != grid.size or not np.array_equal(s.mz, grid):
                raise InputDataError(
                    f"sample {s.name or '?'} is not on the shared mz grid"
                )

    @property
    def mz(self) -> np.ndarray:
        return self.samples[0].mz

    @property
    def grid_length(self) -> int:
        return self.samples[0].mz.size

    @property
    def labels(self) -> np.ndarray:
        return np.array([int(s.label) for s in self.samples], dtype=np.int64)

    def intensity_matrix(self) -> np.ndarray:
        return np.stack([s.intensity for s in self.samples])

    def count(self, label: Label) -> int:
        return int(np.sum(self.labels == int(label)))


@dataclass(frozen=True)
class WindowPlan:
    window_length: int
    step: int
    num_windows: int
    window_starts: tuple

    @property
    def covered_length(self) -> int:
        return self.window_starts[-1] + self.window_length


def plan_windows(signal_length: int, window_length: int = 1024, step: int = 500) -> WindowPlan:
    """Lay out ``floor((L - window)/step) + 1`` overlapping windows."""
    if window_length > signal_length:
        raise InputDataError(
            f"window length {window_length} exceeds signal length {signal_length}"
        )
    if step < 1:
        raise ParameterError(f"step must be >= 1, got {step}")
    if window_length & (window_length - 1) or window_length < 2:
        raise ParameterError(f"window length must be a power of two, got {window_length}")
    num = (signal_length - window_length) // step + 1
    starts = tuple(range(0, num * step, step))
    return WindowPlan(
        window_length=window_length, step=step, num_windows=num, window_starts=starts
    )


class FeatureKind(str, Enum):
    SLOPE = "slope"
    MAGNITUDE = "mag"


@dataclass(frozen=True, order=True)
class FeatureId:
    """Provenance of one feature column.

    ``index`` is the window start for slope features and the mz grid index
    for magnitude features.
    """

    kind: FeatureKind
    index: int

    def __str__(self):
        return f"{self.kind.value}:{self.index}"


@dataclass(eq=False)
class FeatureMatrix:
    """Samples-by-features values with per-column provenance and labels."""

    values: np.ndarray
    feature_ids: tuple
    labels: np.ndarray
    sample_names: tuple = field(default=())

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        self.labels = np.ascontiguousarray(self.labels, dtype=np.int64)
        self.feature_ids = tuple(self.feature_ids)
        if self.values.ndim != 2:
            raise InputDataError("feature values must form a 2-D matrix")
        if self.values.shape[0] != self.labels.size:
            raise InputDataError("one label per sample row is required")
        if self.values.shape[1] != len(self.feature_ids):
            raise InputDataError("one feature id per column is required")
        if len(set(self.feature_ids)) != len(self.feature_ids):
            raise InputDataError("feature ids must be unique")
        if self.values.size and not np.all(np.isfinite(self.values)):
            raise InputDataError("feature matrix contains non-finite values")
        if self.sample_names and len(self.sample_names) != self.values.shape[0]:
            raise InputDataError("one sample name per row is required")

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    def rows(self, indices) -> "FeatureMatrix":
        indices = np.asarray(indices, dtype=np.int64)
        names = tuple(self.sample_names[i] for i in indices) if self.sample_names else ()
        return FeatureMatrix(
            values=self.values[indices],
            feature_ids=self.feature_ids,
            labels=self.labels[indices],
            sample_names=names,
        )

    def columns(self, indices) -> "FeatureMatrix":
        indices = list(indices)
        return FeatureMatrix(
            values=self.values[:, indices],
            feature_ids=tuple(self.feature_ids[i] for i in indices),
            labels=self.labels,
            sample_names=self.sample_names,
        )

    def columns_by_id(self, ids) -> "FeatureMatrix":
        positions = {fid: i for i, fid in enumerate(self.feature_ids)}
        try:
            return self.columns([positions[fid] for fid in ids])
        except KeyError as exc:
            raise InputDataError(f"unknown feature id {exc.args[0]}") from exc

    def group_values(self, column: int):
        case = self.values[self.labels == int(Label.CASE), column]
        control = self.values[self.labels == int(Label.CONTROL), column]
        return case, control


def rolling_slopes(
    spectrum,
    plan: WindowPlan,
    filter_pair: FilterPair,
    num_levels: int,
    estimator: EnergyEstimator,
    fit_range=None,
) -> np.ndarray:
    """Wavelet-spectrum slope of every window of one sample.

    ``fit_range`` is an inclusive (j_min, j_max) pair; by default the two
    coarsest detail levels are dropped (see :func:`default_fit_range`).
    """
    intensity = spectrum.intensity if isinstance(spectrum, MassSpectrum) else spectrum
    intensity = np.ascontiguousarray(intensity, dtype=np.float64)
    slopes = np.empty(plan.num_windows)
    for w, start in enumerate(plan.window_starts):
        segment = intensity[start : start + plan.window_length]
        try:
            decomp = dwt(segment, filter_pair, num_levels)
            spec = wavelet_spectrum(decomp, estimator)
            j_min, j_max = fit_range if fit_range is not None else default_fit_range(spec.levels)
            slopes[w] = fit_slope(spec, j_min, j_max).slope
        except DegenerateEnergyError as exc:
            raise DegenerateEnergyError(
                f"window {w} (start index {start}): {exc}"
            ) from exc
    return slopes


def slope_feature_matrix(
    dataset: SpectraDataset,
    plan: WindowPlan,
    filter_pair: FilterPair,
    num_levels: int,
    estimator: EnergyEstimator,
    fit_range=None,
) -> FeatureMatrix:
    """Rolling slopes for every sample; one column per window start."""
    values = np.stack(
        [
            rolling_slopes(s, plan, filter_pair, num_levels, estimator, fit_range)
            for s in dataset.samples
        ]
    )
    ids = tuple(FeatureId(FeatureKind.SLOPE, start) for start in plan.window_starts)
    return FeatureMatrix(
        values=values,
        feature_ids=ids,
        labels=dataset.labels,
        sample_names=tuple(s.name for s in dataset.samples),
    )


def fisher_criterion(case_values, control_values) -> float:
    """(mean difference)^2 over the summed unbiased group variances."""
    case = np.ascontiguousarray(case_values, dtype=np.float64)
    control = np.ascontiguousarray(control_values, dtype=np.float64)
    if case.size < 2 or control.size < 2:
        raise InputDataError("Fisher's criterion needs at least 2 values per group")
    pooled = case.var(ddof=1) + control.var(ddof=1)
    if pooled == 0.0:
        raise DegenerateEnergyError("zero pooled variance; Fisher's criterion is undefined")
    return float((case.mean() - control.mean()) ** 2 / pooled)


def fisher_scores(matrix: FeatureMatrix) -> np.ndarray:
    """Vectorized per-column Fisher scores.

    Columns with zero pooled variance score +inf when the group means differ
    (the feature separates the groups perfectly) and 0 when they coincide.
    """
    case = matrix.values[matrix.labels == int(Label.CASE)]
    control = matrix.values[matrix.labels == int(Label.CONTROL)]
    if case.shape[0] < 2 or control.shape[0] < 2:
        raise InputDataError("Fisher scoring needs at least 2 samples per group")
    diff = case.mean(axis=0) - control.mean(axis=0)
    pooled = case.var(axis=0, ddof=1) + control.var(axis=0, ddof=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        scores = np.where(
            pooled > 0.0, diff**2 / np.where(pooled > 0.0, pooled, 1.0),
            np.where(diff != 0.0, np.inf, 0.0),
        )
    return scores


def select_top_features(matrix: FeatureMatrix, p: int) -> FeatureMatrix:
    """Keep the ``p`` columns with the largest Fisher scores.

    Output columns are ordered by descending score; ties break toward the
    lower column index so selections are reproducible.
    """
    if not 1 <= p <= matrix.n_features:
        raise ParameterError(
            f"p must be in 1..{matrix.n_features}, got {p}"
        )
    scores = fisher_scores(matrix)
    order = np.lexsort((np.arange(scores.size), -scores))
    return matrix.columns(order[:p])


def magnitude_feature_universe(dataset: SpectraDataset, mz_min: float = 500.0) -> FeatureMatrix:
    """All raw-intensity columns with mz >= mz_min, unranked."""
    keep = np.flatnonzero(dataset.mz >= mz_min)
    if keep.size == 0:
        raise InputDataError(f"no mass-to-charge ratios at or above {mz_min}")
    ids = tuple(FeatureId(FeatureKind.MAGNITUDE, int(i)) for i in keep)
    return FeatureMatrix(
        values=dataset.intensity_matrix()[:, keep],
        feature_ids=ids,
        labels=dataset.labels,
        sample_names=tuple(s.name for s in dataset.samples),
    )


def direct_magnitude_features(
    dataset: SpectraDataset, p: int = 10, mz_min: float = 500.0
) -> FeatureMatrix:
    """Top-``p`` single-index intensity features by Fisher score.

    Indices below ``mz_min`` are excluded up front; their magnitudes are
    prone to non-biological acquisition bias.
    """
    if p < 1:
        raise ParameterError(f"p must be >= 1, got {p}")
    return select_top_features(magnitude_feature_universe(dataset, mz_min), p)


def combine_features(a: FeatureMatrix, b: FeatureMatrix) -> FeatureMatrix:
    """Column-concatenate two matrices over the same samples."""
    if a.n_samples != b.n_samples or not np.array_equal(a.labels, b.labels):
        raise InputDataError("feature matrices cover different samples")
    if a.sample_names and b.sample_names and a.sample_names != b.sample_names:
        raise InputDataError("feature matrices cover differently named samples")
    return FeatureMatrix(
        values=np.hstack([a.values, b.values]),
        feature_ids=a.feature_ids + b.feature_ids,
        labels=a.labels,
        sample_names=a.sample_names or b.sample_names,
    )
