"""Command-line surface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical error.

The default data directory for ``features``/``classify`` can be set with
the ``SPECSLOPE_DATA_DIR`` environment variable.
"""

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import _kernels
from .dataio import atomic_write_text, feature_matrix_csv, load_dataset, read_spectrum_file
from .energy import DvarAlgorithm, EnergyEstimator
from .errors import ConvergenceError, InputDataError, ParameterError
from .features import Label
from .pipeline import PipelineConfig, _build_features, report_json, run_pipeline, sweep_csv
from .spectra import default_fit_range, fit_slope, wavelet_spectrum
from .synth import ContaminationSpec, slope_bias_experiment
from .wavelet import daubechies_filter, dwt


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_wavelet(text: str) -> int:
    name = text.strip().lower()
    if name == "haar":
        return 1
    if name.startswith("db"):
        name = name[2:]
    try:
        return int(name)
    except ValueError:
        raise _UsageError(f"cannot parse wavelet name {text!r} (use e.g. db6 or haar)") from None


def _read_signal(path) -> np.ndarray:
    """One value per line, or two columns of which the second is the signal."""
    with open(path, "r", encoding="utf-8") as handle:
        first = ""
        for line in handle:
            line = line.strip()
            if line and not line.startswith("#"):
                first = line
                break
    columns = len(first.replace(",", " ").split())
    if columns >= 2:
        return read_spectrum_file(path, Label.CONTROL).intensity
    values = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                values.append(float(line))
            except ValueError:
                if not values:
                    continue
                raise InputDataError(f"{path}:{lineno}: unreadable value {line!r}") from None
    if not values:
        raise InputDataError(f"{path}: no data rows")
    return np.array(values)


def _emit(text: str, out):
    if out:
        atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


def _default_levels(signal_length: int, requested) -> int:
    if requested is not None:
        return requested
    max_levels = signal_length.bit_length() - 2
    return max(1, min(6, max_levels))


def _cmd_decompose(args):
    signal = _read_signal(args.input)
    filter_pair = daubechies_filter(_parse_wavelet(args.wavelet))
    decomp = dwt(signal, filter_pair, _default_levels(signal.size, args.levels))
    lines = ["level,index,value"]
    for i, value in enumerate(decomp.smooth):
        lines.append(f"c{decomp.coarsest_level},{i},{float(value)!r}")
    for j in decomp.levels:
        for i, value in enumerate(decomp.details[j]):
            lines.append(f"d{j},{i},{float(value)!r}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_spectrum(args):
    signal = _read_signal(args.input)
    filter_pair = daubechies_filter(_parse_wavelet(args.wavelet))
    decomp = dwt(signal, filter_pair, _default_levels(signal.size, args.levels))
    if args.estimator == "var":
        estimator = EnergyEstimator.mean_square()
    else:
        estimator = EnergyEstimator.distance_variance(
            DvarAlgorithm.FAST if args.fast else DvarAlgorithm.NAIVE
        )
    spectrum = wavelet_spectrum(decomp, estimator)
    j_min, j_max = args.fit_min, args.fit_max
    if j_min is None and j_max is None:
        j_min, j_max = default_fit_range(spectrum.levels)
    fit = fit_slope(spectrum, j_min, j_max)
    payload = {
        "signal_length": decomp.signal_length,
        "wavelet": filter_pair.name,
        "estimator": estimator.label,
        "levels": spectrum.levels.tolist(),
        "log2_energies": spectrum.log2_energies.tolist(),
        "fit_min": fit.level_range[0],
        "fit_max": fit.level_range[1],
        "slope": fit.slope,
        "intercept": fit.intercept,
        "residual_sum_squares": fit.residual_sum_squares,
    }
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _data_dir(args):
    data = args.data or os.environ.get("SPECSLOPE_DATA_DIR")
    if not data:
        raise _UsageError("--data is required (or set SPECSLOPE_DATA_DIR)")
    return data


def _load_config(args) -> PipelineConfig:
    if args.config:
        return PipelineConfig.from_json_file(args.config)
    return PipelineConfig()


def _cmd_features(args):
    config = _load_config(args)
    dataset = load_dataset(_data_dir(args), benign=config.benign)
    matrix, _ = _build_features(dataset, config)
    _emit(feature_matrix_csv(matrix), args.out)
    return 0


def _cmd_classify(args):
    config = _load_config(args)
    dataset = load_dataset(_data_dir(args), benign=config.benign)
    report = run_pipeline(dataset, config)
    _emit(report_json(report), args.out)
    if report.get("sweep") is not None and args.out:
        atomic_write_text(Path(args.out).with_suffix(".sweep.csv"), sweep_csv(report))
    metrics = report["metrics"]
    sys.stderr.write(
        f"{config.classifier} x{report['repetitions']} reps: "
        f"sensitivity {metrics['sensitivity']:.2f}  "
        f"specificity {metrics['specificity']:.2f}  "
        f"accuracy {metrics['accuracy']:.2f}\n"
    )
    return 0


def _cmd_simulate_brownian_bias(args):
    contamination = None
    if args.per_level > 0:
        contamination = ContaminationSpec(
            coefficients_per_level=args.per_level, noise_sd=args.noise_sd
        )
    fit_range = None
    if args.fit_min is not None or args.fit_max is not None:
        fit_range = (args.fit_min, args.fit_max)
    summary = slope_bias_experiment(
        reps=args.reps,
        length=args.length,
        vanishing_moments=_parse_wavelet(args.wavelet),
        num_levels=args.levels,
        contamination=contamination,
        seed=args.seed,
        fit_range=fit_range,
    )
    if args.out:
        summary.write_csv(args.out)
        atomic_write_text(
            Path(args.out).with_suffix(".json"),
            json.dumps(summary.to_dict(), indent=2, sort_keys=True) + "\n",
        )
    for label in ("var", "dvar"):
        sys.stderr.write(
            f"{label}: mean slope {summary.mean(label):+.4f} "
            f"(sd {summary.sd(label):.4f}, theoretical {summary.theoretical_slope})\n"
        )
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="specslope", description=__doc__)
    parser.add_argument(
        "--threads", type=int, default=0, metavar="N",
        help="JIT thread count (0 = auto)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    decompose = sub.add_parser("decompose", help="dump wavelet coefficients as CSV")
    decompose.add_argument("--input", required=True)
    decompose.add_argument("--wavelet", default="db6")
    decompose.add_argument("--levels", type=int, default=None)
    decompose.add_argument("--out", default=None)
    decompose.set_defaults(func=_cmd_decompose)

    spectrum = sub.add_parser("spectrum", help="per-level log2 energies plus fitted slope")
    spectrum.add_argument("--input", required=True)
    spectrum.add_argument("--wavelet", default="db6")
    spectrum.add_argument("--levels", type=int, default=None)
    spectrum.add_argument("--estimator", choices=("var", "dvar"), default="dvar")
    spectrum.add_argument("--fast", action="store_true", help="use the O(n log n) distance variance")
    spectrum.add_argument("--fit-min", type=int, default=None)
    spectrum.add_argument("--fit-max", type=int, default=None)
    spectrum.add_argument("--out", default=None)
    spectrum.set_defaults(func=_cmd_spectrum)

    features = sub.add_parser("features", help="write the feature matrix as CSV")
    features.add_argument("--data", default=None)
    features.add_argument("--config", default=None)
    features.add_argument("--out", default=None)
    features.set_defaults(func=_cmd_features)

    classify = sub.add_parser("classify", help="run the full pipeline; write a JSON report")
    classify.add_argument("--data", default=None)
    classify.add_argument("--config", default=None)
    classify.add_argument("--out", default=None)
    classify.set_defaults(func=_cmd_classify)

    simulate = sub.add_parser("simulate", help="synthetic experiments")
    simulate_sub = simulate.add_subparsers(dest="experiment", required=True)
    bias = simulate_sub.add_parser(
        "brownian-bias", help="contaminated Brownian motion slope-bias experiment"
    )
    bias.add_argument("--reps", type=int, default=500)
    bias.add_argument("--per-level", type=int, default=4,
                      help="contaminated coefficients per level (0 = clean control run)")
    bias.add_argument("--noise-sd", type=float, default=1.0)
    bias.add_argument("--seed", type=int, default=0)
    bias.add_argument("--length", type=int, default=1024)
    bias.add_argument("--wavelet", default="db6")
    bias.add_argument("--levels", type=int, default=9)
    bias.add_argument("--fit-min", type=int, default=None)
    bias.add_argument("--fit-max", type=int, default=None)
    bias.add_argument("--out", default=None)
    bias.set_defaults(func=_cmd_simulate_brownian_bias)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _kernels.set_num_threads(args.threads)
        return args.func(args)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except ParameterError as exc:
        sys.stderr.write(f"parameter error: {exc}\n")
        return 1
    except InputDataError as exc:
        sys.stderr.write(f"data error: {exc}\n")
        return 2
    except (ConvergenceError, FloatingPointError) as exc:
        sys.stderr.write(f"numerical error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
