"""File formats and dataset preprocessing transforms.

Three text formats cover the data flow: dense CSV for binary matrices,
a coordinate format for sparse ones ("N D" header, then one "row col" pair
per 1-entry), and one integer per line for label vectors.  Run reports are
JSON.  All save/load pairs round-trip losslessly.

The preprocessing transforms turn raw observation tables into binary
matrices: a document-frequency filter for word-count data and a per-column
percentile threshold for real-valued response data.
"""

import json

import numpy as np

from .evaluate import cluster_feature_frequencies
from .model import BinaryMatrix

_MISSING_TOKENS = {"", "na", "nan", "null"}


class DataFormatError(ValueError):
    """Malformed matrix, labels, or report file content."""


# ---------------------------------------------------------------------------
# dense CSV


def save_dense(path, data):
    """Write a binary matrix as dense CSV, one row per line, no header."""
    with open(path, "w") as fh:
        for row in data.values:
            fh.write(",".join("1" if v else "0" for v in row))
            fh.write("\n")


def load_dense(path):
    """Read a dense CSV binary matrix; a non-numeric first row is skipped as a header."""
    with open(path) as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip() != ""]
    if not lines:
        raise DataFormatError(f"{path}: empty file")
    start = 1 if _is_header(lines[0]) else 0
    rows = []
    width = None
    for r, line in enumerate(lines[start:]):
        fields = line.split(",")
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise DataFormatError(f"{path}: row {r} has {len(fields)} values, expected {width}")
        row = []
        for c, field in enumerate(fields):
            value = field.strip()
            if value not in ("0", "1"):
                raise DataFormatError(f"{path}: non-binary value {value!r} at row {r}, column {c}")
            row.append(int(value))
        rows.append(row)
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    return BinaryMatrix(np.asarray(rows, dtype=np.uint8))


def _is_header(line):
    for field in line.split(","):
        try:
            float(field.strip())
        except ValueError:
            return True
    return False


# ---------------------------------------------------------------------------
# sparse coordinate format


def save_sparse(path, data):
    """Write a binary matrix as "N D" header plus one "row col" pair per 1-entry."""
    with open(path, "w") as fh:
        fh.write(f"{data.n_objects} {data.n_features}\n")
        for i, j in np.argwhere(data.values == 1):
            fh.write(f"{i} {j}\n")


def load_sparse(path):
    """Read the sparse coordinate format back into a dense-equivalent matrix."""
    with open(path) as fh:
        lines = [line.strip() for line in fh if line.strip() != ""]
    if not lines:
        raise DataFormatError(f"{path}: empty file")
    header = lines[0].split()
    if len(header) != 2:
        raise DataFormatError(f"{path}: header must be 'N D', got {lines[0]!r}")
    try:
        n, d = int(header[0]), int(header[1])
    except ValueError:
        raise DataFormatError(f"{path}: header must be two integers, got {lines[0]!r}") from None
    if n < 1 or d < 1:
        raise DataFormatError(f"{path}: dimensions must be positive, got {n} x {d}")
    values = np.zeros((n, d), dtype=np.uint8)
    for lineno, line in enumerate(lines[1:], start=2):
        pair = line.split()
        if len(pair) != 2:
            raise DataFormatError(f"{path}: line {lineno}: expected 'row col', got {line!r}")
        try:
            i, j = int(pair[0]), int(pair[1])
        except ValueError:
            raise DataFormatError(f"{path}: line {lineno}: indices must be integers") from None
        if not (0 <= i < n and 0 <= j < d):
            raise DataFormatError(f"{path}: line {lineno}: index ({i}, {j}) out of range for {n} x {d}")
        if values[i, j]:
            raise DataFormatError(f"{path}: line {lineno}: duplicate entry ({i}, {j})")
        values[i, j] = 1
    return BinaryMatrix(values)


def detect_format(path):
    """Classify a matrix file: a comma in the first line means dense, a two-integer
    header means sparse."""
    with open(path) as fh:
        first = fh.readline().strip()
    if "," in first:
        return "dense"
    fields = first.split()
    if len(fields) == 2:
        try:
            int(fields[0]), int(fields[1])
            return "sparse"
        except ValueError:
            pass
    raise DataFormatError(f"{path}: cannot detect matrix format from first line {first!r}")


def load_matrix(path):
    """Load a binary matrix in either format, auto-detected."""
    return load_dense(path) if detect_format(path) == "dense" else load_sparse(path)


# ---------------------------------------------------------------------------
# label vectors


def save_labels(path, labels):
    """Write one non-negative integer label per line."""
    labels = np.asarray(labels)
    with open(path, "w") as fh:
        for value in labels:
            fh.write(f"{int(value)}\n")


def load_labels(path):
    """Read one non-negative integer label per line."""
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if text == "":
                continue
            try:
                value = int(text)
            except ValueError:
                raise DataFormatError(f"{path}: line {lineno}: not an integer label: {text!r}") from None
            if value < 0:
                raise DataFormatError(f"{path}: line {lineno}: negative label {value}")
            out.append(value)
    if not out:
        raise DataFormatError(f"{path}: no labels")
    return np.asarray(out, dtype=np.int64)


# ---------------------------------------------------------------------------
# run reports


def report_to_dict(report, data):
    """Flatten a RunReport plus its per-cluster feature frequencies into plain JSON types."""
    frequencies = cluster_feature_frequencies(report.assignments, data)
    echo = report.config_echo
    return {
        "assignments": [int(v) for v in report.assignments],
        "n_clusters": int(report.n_clusters),
        "seed": int(report.seed),
        "hyperparams": {
            "alpha": float(echo["alpha"]),
            "a_policy": echo["a_policy"],
            "b_policy": echo["b_policy"],
        },
        "schedule": {
            "t_init": float(echo["schedule"]["t_init"]),
            "lambda": float(echo["schedule"]["lambda"]),
            "block": int(echo["schedule"]["block"]),
            "n_sweeps": int(echo["schedule"]["n_sweeps"]),
        },
        "k_init": int(echo["k_init"]),
        "score_trace": [float(v) for v in report.score_trace],
        "k_trace": [int(v) for v in report.k_trace],
        "temp_trace": [float(v) for v in report.temp_trace],
        "feature_frequencies": [[float(v) for v in row] for row in frequencies],
    }


def save_report(path, report, data):
    """Write a run report as JSON (sorted keys, so identical runs give identical bytes)."""
    save_report_dict(path, report_to_dict(report, data))


def save_report_dict(path, report_dict):
    with open(path, "w") as fh:
        json.dump(report_dict, fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_report(path):
    """Read a report JSON back into a plain dict."""
    with open(path) as fh:
        try:
            report = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataFormatError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(report, dict):
        raise DataFormatError(f"{path}: report must be a JSON object")
    return report


# ---------------------------------------------------------------------------
# generic numeric CSV (summaries and preprocessing inputs)


def save_csv_matrix(path, matrix):
    """Write a numeric matrix as CSV, one row per line.

    Integer matrices (contingency tables) are written as integers; floats
    (frequency matrices) via repr, which round-trips losslessly.
    """
    matrix = np.asarray(matrix)
    as_int = np.issubdtype(matrix.dtype, np.integer)
    with open(path, "w") as fh:
        for row in matrix:
            fh.write(",".join(str(int(v)) if as_int else repr(float(v)) for v in row))
            fh.write("\n")


def load_count_csv(path):
    """Read a CSV of non-negative integer counts (optional header row skipped)."""
    with open(path) as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip() != ""]
    if not lines:
        raise DataFormatError(f"{path}: empty file")
    start = 1 if _is_header(lines[0]) else 0
    rows = []
    width = None
    for r, line in enumerate(lines[start:]):
        fields = line.split(",")
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise DataFormatError(f"{path}: row {r} has {len(fields)} values, expected {width}")
        row = []
        for c, field in enumerate(fields):
            try:
                value = int(field.strip())
            except ValueError:
                raise DataFormatError(f"{path}: non-integer count at row {r}, column {c}") from None
            if value < 0:
                raise DataFormatError(f"{path}: negative count at row {r}, column {c}")
            row.append(value)
        rows.append(row)
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    return np.asarray(rows, dtype=np.int64)


def load_real_csv(path):
    """Read a CSV of reals; empty fields and na/nan/null tokens become NaN."""
    with open(path) as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip() != ""]
    if not lines:
        raise DataFormatError(f"{path}: empty file")
    start = 1 if _is_header_real(lines[0]) else 0
    rows = []
    width = None
    for r, line in enumerate(lines[start:]):
        fields = line.split(",")
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise DataFormatError(f"{path}: row {r} has {len(fields)} values, expected {width}")
        row = []
        for c, field in enumerate(fields):
            text = field.strip()
            if text.lower() in _MISSING_TOKENS:
                row.append(np.nan)
                continue
            try:
                row.append(float(text))
            except ValueError:
                raise DataFormatError(f"{path}: non-numeric value {text!r} at row {r}, column {c}") from None
        rows.append(row)
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    return np.asarray(rows, dtype=np.float64)


def _is_header_real(line):
    for field in line.split(","):
        text = field.strip()
        if text.lower() in _MISSING_TOKENS:
            continue
        try:
            float(text)
        except ValueError:
            return True
    return False


# ---------------------------------------------------------------------------
# preprocessing transforms


def term_filter(doc_term_counts):
    """Binarize a document-term count matrix, keeping only informative words.

    A word (column) survives iff some document uses it at least twice and it
    occurs in at least 11 documents; surviving columns are binarized to
    presence/absence.  Returns ``(BinaryMatrix, kept_column_indices)``.
    """
    counts = np.asarray(doc_term_counts)
    if counts.ndim != 2:
        raise ValueError("doc_term_counts must be 2-d")
    if (counts < 0).any():
        raise ValueError("doc_term_counts must be non-negative")
    repeated_somewhere = (counts >= 2).any(axis=0)
    doc_frequency = (counts >= 1).sum(axis=0)
    kept = np.flatnonzero(repeated_somewhere & (doc_frequency >= 11))
    if kept.size == 0:
        raise ValueError("no column passes the term filter")
    binary = (counts[:, kept] >= 1).astype(np.uint8)
    return BinaryMatrix(binary), kept


def percentile_binarize(values, pct, direction="below"):
    """Threshold each column at its own percentile of the non-missing values.

    The threshold is the ``pct``-th percentile (linear interpolation between
    order statistics) of the column's non-NaN entries; an output cell is 1
    iff its value is strictly below (``direction="below"``) or strictly
    above (``direction="above"``) that threshold.  NaN cells binarize to 0
    and their rows are reported in the returned mask so the caller can drop
    them.  Returns ``(BinaryMatrix, rows_with_missing_mask)``.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2:
        raise ValueError("values must be 2-d")
    if not 0 < pct < 100:
        raise ValueError("pct must lie strictly between 0 and 100")
    if direction not in ("below", "above"):
        raise ValueError(f"direction must be 'below' or 'above', got {direction!r}")
    n, d = values.shape
    binary = np.zeros((n, d), dtype=np.uint8)
    for j in range(d):
        column = values[:, j]
        present = ~np.isnan(column)
        if present.sum() < 2:
            raise ValueError(f"column {j} has fewer than 2 non-missing values")
        threshold = np.percentile(column[present], pct)
        if direction == "below":
            hits = column < threshold
        else:
            hits = column > threshold
        binary[:, j] = np.where(present, hits, False)
    rows_with_missing = np.isnan(values).any(axis=1)
    return BinaryMatrix(binary), rows_with_missing
