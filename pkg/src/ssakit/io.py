"""File formats: series CSV, grouping JSON, decomposition JSON, w-cor CSV.

Series CSV holds one sample per row (first column), optional header row,
with an empty field or ``NA`` marking a missing sample.  Numbers are parsed
and written locale-independently with ``.`` as the decimal separator;
written doubles carry 17 significant digits so they round-trip exactly.
"""

import csv
import json

import numpy as np

__all__ = [
    "read_series_csv",
    "write_series_csv",
    "write_columns_csv",
    "read_grouping_json",
    "write_grouping_json",
    "read_decomposition_json",
    "write_decomposition_json",
    "write_matrix_csv",
    "format_double",
]

_MISSING_TOKENS = {"", "na", "nan"}


def format_double(value):
    return f"{float(value):.17g}"


def _parse_sample(token):
    token = token.strip()
    if token.lower() in _MISSING_TOKENS:
        return np.nan
    return float(token)


def read_series_csv(path):
    """Load a one-column series; returns a float array with NaN for gaps."""
    values = []
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and any(cell.strip() for cell in row)]
    for i, row in enumerate(rows):
        try:
            values.append(_parse_sample(row[0]))
        except ValueError:
            if i == 0:  # header row
                continue
            raise ValueError(f"{path}: cannot parse sample on row {i + 1}: {row[0]!r}") from None
    if not values:
        raise ValueError(f"{path}: no samples found")
    return np.asarray(values, dtype=np.float64)


def write_series_csv(path, values, header=None):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if header:
            writer.writerow([header])
        for v in np.asarray(values, dtype=np.float64):
            writer.writerow(["NA" if np.isnan(v) else format_double(v)])


def write_columns_csv(path, columns):
    """Write named, equal-length columns: header row then one row per sample."""
    names = list(columns)
    arrays = [np.asarray(columns[name], dtype=np.float64) for name in names]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(names)
        for row in zip(*arrays):
            writer.writerow(["NA" if np.isnan(v) else format_double(v) for v in row])


def write_matrix_csv(path, matrix):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in np.asarray(matrix, dtype=np.float64):
            writer.writerow([format_double(v) for v in row])


def read_grouping_json(path):
    """Grouping file: ``{"name": [1-based indices]}``."""
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: grouping file must hold a JSON object")
    return {str(name): [int(i) for i in indices] for name, indices in doc.items()}


def write_grouping_json(path, grouping):
    with open(path, "w") as fh:
        json.dump({name: list(map(int, idx)) for name, idx in grouping.items()}, fh, indent=2)
        fh.write("\n")


def read_decomposition_json(path):
    with open(path) as fh:
        return json.load(fh)


def write_decomposition_json(path, doc):
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")
