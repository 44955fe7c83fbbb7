"""Dataset ingestion and file-output helpers.

Two on-disk layouts are accepted:

* a directory with ``case/`` and ``control/`` subdirectories (optionally
  ``benign/``), one delimited two-column text file (m/z, intensity) per
  sample, or
* a CSV manifest file with ``path,label`` rows; relative paths resolve
  against the manifest's directory.

Files may start with ``#`` comment lines or one non-numeric header row.
Values use the dot decimal separator regardless of locale. Discovered files
are sorted by name before indexing so seeded subsampling does not depend on
filesystem enumeration order.
"""

import os
from pathlib import Path

import numpy as np

from .errors import IngestionError, ParseError
from .features import Label, MassSpectrum, SpectraDataset

LABEL_ALIASES = {
    "case": Label.CASE,
    "cancer": Label.CASE,
    "1": Label.CASE,
    "control": Label.CONTROL,
    "normal": Label.CONTROL,
    "0": Label.CONTROL,
}

BENIGN_MODES = ("exclude", "case", "control")


def _parse_label(text, source) -> Label:
    key = str(text).strip().lower()
    if key not in LABEL_ALIASES:
        raise IngestionError(f"unknown label {text!r} in {source}", path=source)
    return LABEL_ALIASES[key]


def read_spectrum_file(path, label: Label, name=None) -> MassSpectrum:
    """Parse one two-column sample file."""
    path = Path(path)
    mz = []
    intensity = []
    saw_data = False
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.replace(",", " ").split()
            if len(fields) != 2:
                raise ParseError(
                    f"{path.name}:{lineno}: expected 2 columns, found {len(fields)}",
                    path=str(path), line=lineno,
                )
            try:
                a, b = float(fields[0]), float(fields[1])
            except ValueError:
                if not saw_data:
                    continue  # tolerate a single leading header row
                raise ParseError(
                    f"{path.name}:{lineno}: unreadable value in {fields!r}",
                    path=str(path), line=lineno,
                ) from None
            mz.append(a)
            intensity.append(b)
            saw_data = True
    if not saw_data:
        raise ParseError(f"{path.name}: no data rows", path=str(path))
    return MassSpectrum(
        mz=np.array(mz), intensity=np.array(intensity),
        label=label, name=name or path.stem,
    )


def _is_sample_file(path: Path) -> bool:
    return path.is_file() and not path.name.startswith(".")


def _load_directory(root: Path, benign: str):
    groups = [("case", Label.CASE), ("control", Label.CONTROL)]
    if benign != "exclude":
        groups.append(("benign", _parse_label(benign, root)))
    samples = []
    for subdir, label in groups:
        group_dir = root / subdir
        if not group_dir.is_dir():
            if subdir == "benign":
                continue
            raise IngestionError(
                f"missing {subdir}/ subdirectory under {root}", path=str(root)
            )
        files = sorted(p for p in group_dir.iterdir() if _is_sample_file(p))
        if not files:
            raise IngestionError(f"no sample files in {group_dir}", path=str(group_dir))
        for path in files:
            samples.append(read_spectrum_file(path, label, name=f"{subdir}/{path.stem}"))
    return samples


def _load_manifest(manifest: Path):
    base = manifest.parent
    samples = []
    rows = []
    first_data_row = True
    with open(manifest, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = [f.strip() for f in line.split(",")]
            if len(fields) != 2:
                raise ParseError(
                    f"{manifest.name}:{lineno}: manifest rows need 'path,label'",
                    path=str(manifest), line=lineno,
                )
            if first_data_row and fields[1].lower() not in LABEL_ALIASES:
                first_data_row = False
                continue  # header row
            first_data_row = False
            rows.append((lineno, fields[0], fields[1]))
    rows.sort(key=lambda row: row[1])
    for lineno, rel_path, label_text in rows:
        label = _parse_label(label_text, f"{manifest.name}:{lineno}")
        path = (base / rel_path).resolve() if not os.path.isabs(rel_path) else Path(rel_path)
        samples.append(read_spectrum_file(path, label))
    if not samples:
        raise IngestionError(f"manifest {manifest} lists no samples", path=str(manifest))
    return samples


def load_dataset(path, benign: str = "exclude") -> SpectraDataset:
    """Load a dataset from a sample directory or a manifest CSV.

    ``benign`` controls an optional ``benign/`` subdirectory: ``"exclude"``
    (default) skips it, ``"case"``/``"control"`` relabels its samples.
    """
    if benign not in BENIGN_MODES:
        raise IngestionError(f"benign mode must be one of {BENIGN_MODES}, got {benign!r}")
    path = Path(path)
    if path.is_dir():
        samples = _load_directory(path, benign)
    elif path.is_file():
        samples = _load_manifest(path)
    else:
        raise IngestionError(f"dataset path {path} does not exist", path=str(path))
    grid = samples[0].mz
    for sample in samples:
        if sample.mz.size != grid.size or not np.array_equal(sample.mz, grid):
            raise IngestionError(
                f"sample {sample.name} is not on the same m/z grid as {samples[0].name}",
                path=sample.name,
            )
    return SpectraDataset(samples=samples)


def atomic_write_text(path, text: str):
    """Write via a temp file in the same directory, then rename."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    os.replace(tmp, path)


def feature_matrix_csv(matrix) -> str:
    """Render a feature matrix as CSV: sample, label, one column per feature."""
    header = ["sample", "label"] + [str(fid) for fid in matrix.feature_ids]
    lines = [",".join(header)]
    names = matrix.sample_names or tuple(f"sample{i}" for i in range(matrix.n_samples))
    for i in range(matrix.n_samples):
        label = "case" if matrix.labels[i] == int(Label.CASE) else "control"
        row = [names[i], label] + [repr(float(v)) for v in matrix.values[i]]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"
