"""End-to-end pipeline configuration, orchestration and report serialization.

``run_pipeline`` wires feature extraction, Fisher selection and the repeated
classification experiment into one JSON-serializable report. Reports are
deterministic byte-for-byte given the same config, dataset and seed.

Two selection scopes are supported. ``"full"`` scores features once on the
whole dataset before any splitting (selection is then identical across
repetitions); ``"train"`` re-scores and re-selects inside every repetition
using only that repetition's training rows.
"""

import json
from collections import Counter
from dataclasses import asdict, dataclass, replace
from importlib import resources

from .energy import DvarAlgorithm, EnergyEstimator, EstimatorKind
from .errors import ParameterError
from .features import (
    FeatureKind,
    SpectraDataset,
    combine_features,
    direct_magnitude_features,
    magnitude_feature_universe,
    plan_windows,
    select_top_features,
    slope_feature_matrix,
)
from .ml import CLASSIFIERS, RepeatConfig, repeat_experiment
from .wavelet import SUPPORTED_ORDERS, daubechies_filter

FEATURE_SETS = ("slope", "direct", "combined")
SELECTION_SCOPES = ("full", "train")
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class PipelineConfig:
    wavelet: int = 6
    num_levels: int = 6
    window_length: int = 1024
    step: int = 500
    estimator: str = "dvar"
    algorithm: str = "fast"
    fit_min: int = None
    fit_max: int = None
    feature_set: str = "slope"
    p_slope: int = 5
    p_direct: int = 10
    mz_min: float = 500.0
    selection_scope: str = "full"
    classifier: str = "lr"
    knn_k: int = 5
    svm_regularization: float = 1e-3
    train_fraction: float = 0.67
    balance: bool = True
    reps: int = 200
    seed: int = 0
    store_reps: bool = True
    benign: str = "exclude"
    p_sweep: tuple = None

    def validate(self) -> "PipelineConfig":
        if self.wavelet not in SUPPORTED_ORDERS:
            raise ParameterError(f"wavelet order must be in {SUPPORTED_ORDERS}, got {self.wavelet}")
        if self.estimator not in ("var", "dvar"):
            raise ParameterError(f"estimator must be 'var' or 'dvar', got {self.estimator!r}")
        if self.algorithm not in ("fast", "naive"):
            raise ParameterError(f"algorithm must be 'fast' or 'naive', got {self.algorithm!r}")
        if self.feature_set not in FEATURE_SETS:
            raise ParameterError(f"feature_set must be one of {FEATURE_SETS}, got {self.feature_set!r}")
        if self.selection_scope not in SELECTION_SCOPES:
            raise ParameterError(
                f"selection_scope must be one of {SELECTION_SCOPES}, got {self.selection_scope!r}"
            )
        if self.classifier not in CLASSIFIERS:
            raise ParameterError(f"classifier must be one of {CLASSIFIERS}, got {self.classifier!r}")
        if self.p_slope < 1 or self.p_direct < 1:
            raise ParameterError("p_slope and p_direct must be >= 1")
        if self.reps < 1:
            raise ParameterError(f"reps must be >= 1, got {self.reps}")
        if self.p_sweep is not None and (len(self.p_sweep) == 0 or min(self.p_sweep) < 1):
            raise ParameterError("p_sweep must be a non-empty list of positive ints")
        return self

    def to_dict(self) -> dict:
        out = asdict(self)
        out["p_sweep"] = list(self.p_sweep) if self.p_sweep is not None else None
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ParameterError(f"unknown config keys: {sorted(unknown)}")
        data = dict(data)
        if data.get("p_sweep") is not None:
            data["p_sweep"] = tuple(int(p) for p in data["p_sweep"])
        return cls(**data).validate()

    @classmethod
    def from_json_file(cls, path) -> "PipelineConfig":
        with open(path, "r", encoding="utf-8") as handle:
            return cls.from_dict(json.load(handle))

    def energy_estimator(self) -> EnergyEstimator:
        if self.estimator == "var":
            return EnergyEstimator.mean_square()
        return EnergyEstimator.distance_variance(DvarAlgorithm(self.algorithm))

    def fit_range(self):
        if self.fit_min is None and self.fit_max is None:
            return None
        return (self.fit_min, self.fit_max)

    def repeat_config(self) -> RepeatConfig:
        return RepeatConfig(
            classifier=self.classifier,
            reps=self.reps,
            base_seed=self.seed,
            train_fraction=self.train_fraction,
            balance=self.balance,
            knn_k=self.knn_k,
            svm_regularization=self.svm_regularization,
            store_reps=self.store_reps,
        )


def _per_kind_selector(kinds_and_counts):
    def select(train):
        parts = []
        for kind, p in kinds_and_counts:
            columns = [i for i, fid in enumerate(train.feature_ids) if fid.kind is kind]
            parts.append(select_top_features(train.columns(columns), p))
        selected = parts[0]
        for more in parts[1:]:
            selected = combine_features(selected, more)
        return selected

    return select


def _build_features(dataset: SpectraDataset, config: PipelineConfig):
    """Return (matrix handed to the experiment, per-rep selector or None)."""
    estimator = config.energy_estimator()
    filter_pair = daubechies_filter(config.wavelet)
    slope_universe = None
    if config.feature_set in ("slope", "combined"):
        plan = plan_windows(dataset.grid_length, config.window_length, config.step)
        slope_universe = slope_feature_matrix(
            dataset, plan, filter_pair, config.num_levels, estimator, config.fit_range()
        )
    if config.selection_scope == "full":
        if config.feature_set == "slope":
            return select_top_features(slope_universe, config.p_slope), None
        if config.feature_set == "direct":
            return direct_magnitude_features(dataset, config.p_direct, config.mz_min), None
        direct = direct_magnitude_features(dataset, config.p_direct, config.mz_min)
        slope = select_top_features(slope_universe, config.p_slope)
        return combine_features(direct, slope), None
    # per-repetition selection on training rows only
    if config.feature_set == "slope":
        return slope_universe, _per_kind_selector([(FeatureKind.SLOPE, config.p_slope)])
    magnitudes = magnitude_feature_universe(dataset, config.mz_min)
    if config.feature_set == "direct":
        return magnitudes, _per_kind_selector([(FeatureKind.MAGNITUDE, config.p_direct)])
    universe = combine_features(magnitudes, slope_universe)
    selector = _per_kind_selector(
        [(FeatureKind.MAGNITUDE, config.p_direct), (FeatureKind.SLOPE, config.p_slope)]
    )
    return universe, selector


def _describe_feature(fid, dataset: SpectraDataset, config: PipelineConfig) -> dict:
    mz = dataset.mz
    entry = {"id": str(fid), "kind": fid.kind.value, "index": fid.index}
    if fid.kind is FeatureKind.SLOPE:
        entry["mz_start"] = float(mz[fid.index])
        entry["mz_end"] = float(mz[fid.index + config.window_length - 1])
    else:
        entry["mz"] = float(mz[fid.index])
    return entry


def _modal_selection(per_rep_lists):
    counts = Counter(tuple(sel) for sel in per_rep_lists)
    top = max(counts.values())
    return list(min(sel for sel, c in counts.items() if c == top))


def run_pipeline(dataset: SpectraDataset, config: PipelineConfig) -> dict:
    """Execute extraction -> selection -> repeated evaluation; return the report."""
    config.validate()
    features, selector = _build_features(dataset, config)
    report = repeat_experiment(features, config.repeat_config(), per_rep_select=selector)
    if selector is None:
        selected = [_describe_feature(fid, dataset, config) for fid in features.feature_ids]
        per_rep_selected = None
        modal = [str(fid) for fid in features.feature_ids]
    else:
        selected = None
        per_rep_selected = (
            [list(r.selected) for r in report.per_rep] if report.per_rep else None
        )
        modal = _modal_selection(per_rep_selected) if per_rep_selected else None
    per_rep = None
    if report.per_rep is not None:
        per_rep = [
            {
                "rep": r.rep,
                "seed": r.seed,
                "sensitivity": r.sensitivity,
                "specificity": r.specificity,
                "accuracy": r.accuracy,
                "threshold": r.threshold,
            }
            for r in report.per_rep
        ]
    sweep = None
    if config.p_sweep is not None:
        sweep = []
        for p in config.p_sweep:
            point_config = replace(
                config,
                p_sweep=None,
                store_reps=False,
                p_slope=p if config.feature_set in ("slope", "combined") else config.p_slope,
                p_direct=p if config.feature_set == "direct" else config.p_direct,
            )
            point_features, point_selector = _build_features(dataset, point_config)
            point = repeat_experiment(
                point_features, point_config.repeat_config(), per_rep_select=point_selector
            )
            sweep.append(
                {
                    "p": p,
                    "sensitivity": point.sensitivity,
                    "specificity": point.specificity,
                    "accuracy": point.accuracy,
                }
            )
    labels = dataset.labels
    return {
        "schema_version": SCHEMA_VERSION,
        "config": config.to_dict(),
        "dataset": {
            "n_samples": int(labels.size),
            "n_case": int((labels == 1).sum()),
            "n_control": int((labels == 0).sum()),
            "grid_length": dataset.grid_length,
            "mz_first": float(dataset.mz[0]),
            "mz_last": float(dataset.mz[-1]),
        },
        "features": {
            "selected": selected,
            "modal_selected": modal,
            "per_rep_selected": per_rep_selected,
        },
        "metrics": {
            "sensitivity": report.sensitivity,
            "specificity": report.specificity,
            "accuracy": report.accuracy,
            "threshold": report.threshold,
        },
        "roc": [[fpr, tpr] for fpr, tpr in report.roc],
        "repetitions": report.repetitions,
        "per_rep": per_rep,
        "sweep": sweep,
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def sweep_csv(report: dict) -> str:
    """Plot-ready accuracy-vs-p rows from a report with a sweep section."""
    lines = ["p,sensitivity,specificity,accuracy"]
    for point in report.get("sweep") or []:
        lines.append(
            f"{point['p']},{point['sensitivity']!r},{point['specificity']!r},{point['accuracy']!r}"
        )
    return "\n".join(lines) + "\n"


def load_report_schema() -> dict:
    with resources.files(__package__).joinpath("report_schema.json").open("r") as handle:
        return json.load(handle)


def validate_report(report: dict):
    """Check a report against the published JSON schema (needs jsonschema)."""
    import jsonschema

    jsonschema.validate(instance=report, schema=load_report_schema())
