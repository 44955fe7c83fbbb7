"""Classification harness: balanced stratified splits, three classifiers,
ROC/Youden thresholding, metrics, and the repeated-experiment aggregator.

All classifiers standardize features internally with training-set statistics
(population mean and standard deviation per column), so predictions are
invariant to consistent affine rescaling of the raw inputs. The logistic
model picks its probability threshold by maximizing the Youden index on the
training ROC; the linear SVM thresholds its margin at zero and KNN uses the
majority vote.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, InputDataError, ParameterError
from .features import FeatureMatrix, Label


@dataclass(frozen=True)
class SplitConfig:
    train_fraction: float = 0.67
    balance: bool = True
    seed: int = 0


def split_and_balance(matrix: FeatureMatrix, config: SplitConfig):
    """Optionally equalize class sizes, then split stratified by class.

    Balancing subsamples the majority class uniformly (seeded, without
    replacement) down to the minority size. The train fraction applies
    within each class via ``floor``. Row order inside each part keeps the
    original sample order, so downstream tie-breaking is reproducible.
    """
    if not 0.0 < config.train_fraction < 1.0:
        raise ParameterError(f"train_fraction must be in (0, 1), got {config.train_fraction}")
    labels = matrix.labels
    case_idx = np.flatnonzero(labels == int(Label.CASE))
    control_idx = np.flatnonzero(labels == int(Label.CONTROL))
    if case_idx.size == 0 or control_idx.size == 0:
        raise InputDataError("both classes must be present to split")
    rng = np.random.default_rng(config.seed)
    if config.balance:
        target = min(case_idx.size, control_idx.size)
        if case_idx.size > target:
            case_idx = np.sort(rng.choice(case_idx, size=target, replace=False))
        elif control_idx.size > target:
            control_idx = np.sort(rng.choice(control_idx, size=target, replace=False))
    train_parts = []
    test_parts = []
    for class_idx in (case_idx, control_idx):
        n_train = int(np.floor(config.train_fraction * class_idx.size + 1e-12))
        if n_train < 1 or n_train >= class_idx.size:
            raise InputDataError(
                f"train_fraction {config.train_fraction} leaves an empty train or "
                f"test part for a class of {class_idx.size} samples"
            )
        permuted = rng.permutation(class_idx)
        train_parts.append(permuted[:n_train])
        test_parts.append(permuted[n_train:])
    train_rows = np.sort(np.concatenate(train_parts))
    test_rows = np.sort(np.concatenate(test_parts))
    return matrix.rows(train_rows), matrix.rows(test_rows)


def _fit_standardizer(values):
    mean = values.mean(axis=0)
    scale = values.std(axis=0)
    return mean, np.where(scale > 0.0, scale, 1.0)


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _require_two_per_class(labels):
    if np.sum(labels == int(Label.CASE)) < 2 or np.sum(labels == int(Label.CONTROL)) < 2:
        raise InputDataError("need at least 2 samples per class to fit")


@dataclass(eq=False)
class LogisticModel:
    mean: np.ndarray
    scale: np.ndarray
    weights: np.ndarray
    bias: float
    iterations: int

    def case_scores(self, values) -> np.ndarray:
        """Class-1 (case) probabilities."""
        standardized = (np.asarray(values, dtype=np.float64) - self.mean) / self.scale
        return _sigmoid(standardized @ self.weights + self.bias)

    def predict(self, values, threshold=0.5) -> np.ndarray:
        return (self.case_scores(values) >= threshold).astype(np.int64)


def fit_logistic(train: FeatureMatrix, ridge=1e-6, tol=1e-8, max_iter=500) -> LogisticModel:
    """Maximum-likelihood logistic regression by damped Newton (IRLS) steps.

    A small ridge on the weights (not the bias) keeps the problem well
    conditioned even for separable data. Converged when the penalized
    gradient's max-norm drops below ``tol``.
    """
    _require_two_per_class(train.labels)
    y = (train.labels == int(Label.CASE)).astype(np.float64)
    mean, scale = _fit_standardizer(train.values)
    design = np.hstack(
        [(train.values - mean) / scale, np.ones((train.n_samples, 1))]
    )
    n_params = design.shape[1]
    penalty = np.full(n_params, ridge)
    penalty[-1] = 0.0  # bias unpenalized
    beta = np.zeros(n_params)

    def objective(b):
        z = design @ b
        return float(np.sum(np.logaddexp(0.0, z) - y * z) + 0.5 * np.sum(penalty * b * b))

    current = objective(beta)
    for iteration in range(max_iter):
        z = design @ beta
        prob = _sigmoid(z)
        grad = design.T @ (y - prob) - penalty * beta
        if np.max(np.abs(grad)) < tol:
            return LogisticModel(
                mean=mean, scale=scale, weights=beta[:-1].copy(),
                bias=float(beta[-1]), iterations=iteration,
            )
        curvature = np.clip(prob * (1.0 - prob), 1e-12, None)
        hessian = design.T @ (design * curvature[:, None]) + np.diag(penalty)
        direction = np.linalg.solve(hessian, grad)
        step = 1.0
        while step > 1e-10:
            candidate = beta + step * direction
            value = objective(candidate)
            if value <= current:
                beta = candidate
                current = value
                break
            step *= 0.5
        else:
            break  # no descent along the Newton direction; gradient check failed
    raise ConvergenceError(
        f"logistic fit did not reach gradient tolerance {tol} in {max_iter} iterations",
        iterations=max_iter,
    )


@dataclass(eq=False)
class LinearSVMModel:
    mean: np.ndarray
    scale: np.ndarray
    weights: np.ndarray
    bias: float
    iterations: int
    objective_history: tuple = field(repr=False, default=())

    def case_scores(self, values) -> np.ndarray:
        """Signed margins; >= 0 means case."""
        standardized = (np.asarray(values, dtype=np.float64) - self.mean) / self.scale
        return standardized @ self.weights + self.bias

    def predict(self, values) -> np.ndarray:
        return (self.case_scores(values) >= 0.0).astype(np.int64)


def fit_linear_svm(
    train: FeatureMatrix, regularization=1e-3, tol=1e-6, max_iter=2000
) -> LinearSVMModel:
    """L2-regularized hinge loss minimized by deterministic subgradient descent.

    A backtracking line search only ever accepts strictly decreasing
    objective values, so the recorded objective history is monotone. The fit
    stops when the subgradient norm drops below ``tol`` or no measurable
    descent remains (a kink of the piecewise-linear loss).
    """
    if regularization <= 0.0:
        raise ParameterError(f"regularization must be positive, got {regularization}")
    _require_two_per_class(train.labels)
    y = np.where(train.labels == int(Label.CASE), 1.0, -1.0)
    mean, scale = _fit_standardizer(train.values)
    design = (train.values - mean) / scale
    n = design.shape[0]
    weights = np.zeros(design.shape[1])
    bias = 0.0

    def objective(w, b):
        margins = y * (design @ w + b)
        hinge = np.maximum(0.0, 1.0 - margins)
        return float(0.5 * regularization * (w @ w) + hinge.mean())

    current = objective(weights, bias)
    history = [current]
    step = 1.0
    for iteration in range(max_iter):
        margins = y * (design @ weights + bias)
        violating = margins < 1.0
        grad_w = regularization * weights - (design[violating] * y[violating, None]).sum(axis=0) / n
        grad_b = -float(y[violating].sum()) / n
        grad_norm = float(np.sqrt(grad_w @ grad_w + grad_b * grad_b))
        if grad_norm < tol:
            return LinearSVMModel(
                mean=mean, scale=scale, weights=weights, bias=bias,
                iterations=iteration, objective_history=tuple(history),
            )
        while step > 1e-14:
            w_new = weights - step * grad_w
            b_new = bias - step * grad_b
            value = objective(w_new, b_new)
            if value < current:
                weights, bias, current = w_new, b_new, value
                history.append(current)
                step *= 1.5
                break
            step *= 0.5
        else:
            # stalled at a kink: no descent measurable in float64
            return LinearSVMModel(
                mean=mean, scale=scale, weights=weights, bias=bias,
                iterations=iteration, objective_history=tuple(history),
            )
    raise ConvergenceError(
        f"SVM fit did not converge in {max_iter} iterations", iterations=max_iter
    )


@dataclass(eq=False)
class KNNModel:
    mean: np.ndarray
    scale: np.ndarray
    train_values: np.ndarray
    train_labels: np.ndarray
    k: int

    @classmethod
    def fit(cls, train: FeatureMatrix, k=5) -> "KNNModel":
        if k % 2 == 0:
            raise ParameterError(f"k must be odd for an unambiguous majority, got {k}")
        if not 1 <= k <= train.n_samples:
            raise ParameterError(f"k must be in 1..{train.n_samples}, got {k}")
        mean, scale = _fit_standardizer(train.values)
        return cls(
            mean=mean, scale=scale,
            train_values=(train.values - mean) / scale,
            train_labels=train.labels.copy(), k=k,
        )

    def case_scores(self, values) -> np.ndarray:
        """Fraction of the k nearest training points labeled case."""
        queries = (np.atleast_2d(np.asarray(values, dtype=np.float64)) - self.mean) / self.scale
        diffs = queries[:, None, :] - self.train_values[None, :, :]
        distances = np.sqrt((diffs * diffs).sum(axis=2))
        # stable sort breaks distance ties toward the lower training index
        order = np.argsort(distances, axis=1, kind="stable")[:, : self.k]
        return self.train_labels[order].mean(axis=1)

    def predict(self, values) -> np.ndarray:
        return (self.case_scores(values) >= 0.5).astype(np.int64)


def knn_predict(train: FeatureMatrix, query, k=5) -> int:
    """Majority label among the k nearest (standardized-Euclidean) neighbors."""
    model = KNNModel.fit(train, k)
    return int(model.predict(np.atleast_2d(query))[0])


def roc_and_youden(scores, labels):
    """ROC over all distinct score thresholds and the Youden-optimal threshold.

    Classification rule: ``score >= threshold`` means case. The returned
    points run from (0, 0) to (1, 1) as the threshold decreases. The best
    threshold maximizes sensitivity + specificity - 1 (any positive scaling
    of that objective has the same argmax); when a whole interval of
    thresholds is optimal, the midpoint of that interval between adjacent
    distinct scores is reported.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    n_case = int(np.sum(labels == int(Label.CASE)))
    n_control = labels.size - n_case
    if n_case == 0 or n_control == 0:
        raise InputDataError("ROC needs both classes present")
    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_case = (labels[order] == int(Label.CASE)).astype(np.int64)
    boundaries = np.flatnonzero(np.diff(sorted_scores) != 0.0)
    last = np.concatenate([boundaries, [scores.size - 1]])  # end of each distinct-score run
    tp = np.cumsum(sorted_case)[last]
    fp = np.cumsum(1 - sorted_case)[last]
    tpr = tp / n_case
    fpr = fp / n_control
    points = np.vstack([[0.0, 0.0], np.column_stack([fpr, tpr])])
    youden = tpr - fpr
    best = int(np.argmax(youden))  # first max = highest optimal threshold
    candidates = sorted_scores[last]
    if best + 1 < candidates.size:
        threshold = 0.5 * (candidates[best] + candidates[best + 1])
    else:
        threshold = float(candidates[best])
    return points, float(threshold)


def auc(points) -> float:
    """Area under a piecewise-linear ROC given (fpr, tpr) points."""
    pts = np.asarray(points, dtype=np.float64)
    return float(np.trapz(pts[:, 1], pts[:, 0]))


@dataclass(frozen=True)
class Metrics:
    sensitivity: float
    specificity: float
    accuracy: float


def evaluate(predicted, true) -> Metrics:
    """Sensitivity, specificity and accuracy in percent."""
    predicted = np.asarray(predicted, dtype=np.int64)
    true = np.asarray(true, dtype=np.int64)
    if predicted.size == 0 or predicted.shape != true.shape:
        raise InputDataError("predicted and true labels must be equal-length and non-empty")
    case = true == int(Label.CASE)
    control = ~case
    if not case.any() or not control.any():
        raise InputDataError("true labels must include both classes")
    tp = int(np.sum(predicted[case] == int(Label.CASE)))
    tn = int(np.sum(predicted[control] == int(Label.CONTROL)))
    return Metrics(
        sensitivity=100.0 * tp / int(case.sum()),
        specificity=100.0 * tn / int(control.sum()),
        accuracy=100.0 * (tp + tn) / true.size,
    )


CLASSIFIERS = ("lr", "svm", "knn")


@dataclass(frozen=True)
class RepeatConfig:
    classifier: str = "lr"
    reps: int = 200
    base_seed: int = 0
    train_fraction: float = 0.67
    balance: bool = True
    knn_k: int = 5
    svm_regularization: float = 1e-3
    store_reps: bool = True


@dataclass(frozen=True)
class RepRecord:
    rep: int
    seed: int
    sensitivity: float
    specificity: float
    accuracy: float
    threshold: float = None
    selected: tuple = None


@dataclass(eq=False)
class EvaluationReport:
    sensitivity: float
    specificity: float
    accuracy: float
    threshold: float
    roc: list
    repetitions: int
    per_rep: list = None


def _rep_seed(base_seed: int, rep: int) -> int:
    return int(np.random.SeedSequence((base_seed, rep)).generate_state(1, np.uint64)[0])


def _fit_predict(train, test, config: RepeatConfig):
    if config.classifier == "lr":
        model = fit_logistic(train)
        _, threshold = roc_and_youden(model.case_scores(train.values), train.labels)
    elif config.classifier == "svm":
        model = fit_linear_svm(train, config.svm_regularization)
        threshold = 0.0
    elif config.classifier == "knn":
        model = KNNModel.fit(train, config.knn_k)
        threshold = 0.5
    else:
        raise ParameterError(f"unknown classifier {config.classifier!r}; expected one of {CLASSIFIERS}")
    scores = model.case_scores(test.values)
    predicted = (scores >= threshold).astype(np.int64)
    lr_threshold = float(threshold) if config.classifier == "lr" else None
    return predicted, scores, lr_threshold


def repeat_experiment(
    features: FeatureMatrix, config: RepeatConfig, per_rep_select=None
) -> EvaluationReport:
    """Average metrics over seeded balance/split/fit/evaluate repetitions.

    Each repetition draws its random stream from (base seed, rep index), so
    the aggregate is deterministic and independent of execution order. When
    ``per_rep_select`` is given it is applied to the training matrix of each
    repetition and must return the reduced matrix; the test matrix is then
    restricted to the same feature ids (selection never sees test rows).
    """
    if config.reps < 1:
        raise ParameterError(f"reps must be >= 1, got {config.reps}")
    records = []
    sens = np.empty(config.reps)
    spec = np.empty(config.reps)
    acc = np.empty(config.reps)
    thresholds = []
    first_roc = None
    for rep in range(config.reps):
        seed = _rep_seed(config.base_seed, rep)
        try:
            train, test = split_and_balance(
                features,
                SplitConfig(
                    train_fraction=config.train_fraction,
                    balance=config.balance,
                    seed=seed,
                ),
            )
            if per_rep_select is not None:
                train = per_rep_select(train)
                test = test.columns_by_id(train.feature_ids)
            predicted, scores, threshold = _fit_predict(train, test, config)
        except (InputDataError, ConvergenceError) as exc:
            raise type(exc)(f"repetition {rep} (seed {seed}) failed: {exc}") from exc
        metrics = evaluate(predicted, test.labels)
        sens[rep] = metrics.sensitivity
        spec[rep] = metrics.specificity
        acc[rep] = metrics.accuracy
        if threshold is not None:
            thresholds.append(threshold)
        if rep == 0:
            first_roc, _ = roc_and_youden(scores, test.labels)
        if config.store_reps:
            records.append(
                RepRecord(
                    rep=rep,
                    seed=seed,
                    sensitivity=metrics.sensitivity,
                    specificity=metrics.specificity,
                    accuracy=metrics.accuracy,
                    threshold=threshold,
                    selected=tuple(str(f) for f in train.feature_ids)
                    if per_rep_select is not None
                    else None,
                )
            )
    return EvaluationReport(
        sensitivity=float(sens.mean()),
        specificity=float(spec.mean()),
        accuracy=float(acc.mean()),
        threshold=float(np.mean(thresholds)) if thresholds else None,
        roc=[(float(a), float(b)) for a, b in first_roc],
        repetitions=config.reps,
        per_rep=records if config.store_reps else None,
    )
