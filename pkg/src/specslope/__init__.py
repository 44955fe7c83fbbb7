"""Self-similarity features for long 1-D spectra.

Extracts wavelet-spectrum slopes over rolling windows with a robust
distance-variance energy estimator, ranks features by Fisher's criterion,
and classifies case vs control samples.
"""

from .energy import (
    DvarAlgorithm,
    EnergyEstimator,
    EstimatorKind,
    distance_variance_fast,
    distance_variance_naive,
    mean_square_energy,
)
from .errors import (
    ConvergenceError,
    DegenerateEnergyError,
    IngestionError,
    InputDataError,
    ParameterError,
    ParseError,
    StructureError,
)
from .features import (
    FeatureId,
    FeatureKind,
    FeatureMatrix,
    Label,
    MassSpectrum,
    SpectraDataset,
    WindowPlan,
    combine_features,
    direct_magnitude_features,
    fisher_criterion,
    fisher_scores,
    plan_windows,
    rolling_slopes,
    select_top_features,
    slope_feature_matrix,
)
from .ml import (
    EvaluationReport,
    KNNModel,
    LinearSVMModel,
    LogisticModel,
    Metrics,
    RepeatConfig,
    SplitConfig,
    evaluate,
    fit_linear_svm,
    fit_logistic,
    knn_predict,
    repeat_experiment,
    roc_and_youden,
    split_and_balance,
)
from .pipeline import PipelineConfig, run_pipeline, validate_report
from .spectra import SlopeFit, WaveletSpectrum, default_fit_range, fit_slope, wavelet_spectrum
from .synth import (
    ContaminationSpec,
    SlopeBiasSummary,
    brownian_motion,
    contaminate,
    slope_bias_experiment,
)
from .wavelet import FilterPair, WaveletDecomposition, daubechies_filter, dwt, idwt

__version__ = "0.1.0"

__all__ = [
    "ContaminationSpec",
    "ConvergenceError",
    "DegenerateEnergyError",
    "DvarAlgorithm",
    "EnergyEstimator",
    "EstimatorKind",
    "EvaluationReport",
    "FeatureId",
    "FeatureKind",
    "FeatureMatrix",
    "FilterPair",
    "IngestionError",
    "InputDataError",
    "KNNModel",
    "Label",
    "LinearSVMModel",
    "LogisticModel",
    "MassSpectrum",
    "Metrics",
    "ParameterError",
    "ParseError",
    "PipelineConfig",
    "RepeatConfig",
    "SlopeBiasSummary",
    "SlopeFit",
    "SpectraDataset",
    "SplitConfig",
    "StructureError",
    "WaveletDecomposition",
    "WaveletSpectrum",
    "WindowPlan",
    "brownian_motion",
    "combine_features",
    "contaminate",
    "daubechies_filter",
    "default_fit_range",
    "direct_magnitude_features",
    "distance_variance_fast",
    "distance_variance_naive",
    "dwt",
    "evaluate",
    "fisher_criterion",
    "fisher_scores",
    "fit_linear_svm",
    "fit_logistic",
    "fit_slope",
    "idwt",
    "knn_predict",
    "mean_square_energy",
    "plan_windows",
    "repeat_experiment",
    "roc_and_youden",
    "rolling_slopes",
    "run_pipeline",
    "select_top_features",
    "slope_bias_experiment",
    "slope_feature_matrix",
    "split_and_balance",
    "validate_report",
    "wavelet_spectrum",
]
