"""CSV ingestion and result writers."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from ..density import Dataset
from ..exceptions import ConfigError, EmptyInput, ParseError

__all__ = ["load_csv", "write_labels", "write_metrics", "parse_label_column", "METRIC_KEYS"]

METRIC_KEYS = ("n", "dim", "algo", "n_clusters", "n_outliers", "a", "b", "c", "d", "ri", "ji", "qji", "runtime_ms")


def parse_label_column(value):
    """Interpret a ``--label-col`` argument: ``none``, an integer index, or a header name."""
    if value is None:
        return None
    if isinstance(value, int):
        return value
    text = str(value).strip()
    if text.lower() == "none" or text == "":
        return None
    try:
        return int(text)
    except ValueError:
        return text


def _resolve_label_index(label_column, header, width):
    if label_column is None:
        return None
    if isinstance(label_column, str):
        if header is None:
            raise ConfigError(f"label column {label_column!r} given by name but the file has no header")
        names = [h.strip() for h in header]
        if label_column not in names:
            raise ConfigError(f"no column named {label_column!r}; header is {names}")
        return names.index(label_column)
    idx = label_column + width if label_column < 0 else label_column
    if not 0 <= idx < width:
        raise ConfigError(f"label column index {label_column} out of range for {width} columns")
    return idx


def _encode_labels(raw: list[str]) -> np.ndarray:
    """Integer labels stay as-is; anything else is coded by first appearance."""
    try:
        return np.array([int(v) for v in raw], dtype=int)
    except ValueError:
        codes: dict[str, int] = {}
        return np.array([codes.setdefault(v, len(codes)) for v in raw], dtype=int)


def load_csv(path, label_column=None, has_header: bool = False, name: str | None = None) -> Dataset:
    """Read a comma-separated numeric table.

    Parameters
    ----------
    path : str or Path
    label_column : int, str or None
        Column holding ground-truth labels, by position (negative counts from
        the end) or by header name.  ``None`` means the file is unlabeled.
    has_header : bool
        Skip (and remember) the first row.

    Raises
    ------
    EmptyInput
        No data rows.
    ParseError
        A feature cell is not a finite real, or rows have different lengths.
        ``row`` and ``column`` are 1-based positions in the file.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [(i, r) for i, r in enumerate(csv.reader(fh), start=1) if any(c.strip() for c in r)]
    header = None
    if has_header and rows:
        header = [c.strip() for c in rows[0][1]]
        rows = rows[1:]
    if not rows:
        raise EmptyInput(f"{path}: no data rows")
    width = len(header) if header is not None else len(rows[0][1])
    label_idx = _resolve_label_index(parse_label_column(label_column), header, width)

    features, labels = [], []
    for line, row in rows:
        if len(row) != width:
            raise ParseError(f"{path}: row {line} has {len(row)} fields, expected {width}", row=line)
        values = []
        for col, cell in enumerate(row):
            if col == label_idx:
                labels.append(cell.strip())
                continue
            try:
                v = float(cell)
            except ValueError:
                v = math.nan
            if not math.isfinite(v):
                raise ParseError(
                    f"{path}: row {line}, column {col + 1}: {cell!r} is not a finite number",
                    row=line,
                    column=col + 1,
                )
            values.append(v)
        features.append(values)
    if not features[0]:
        raise EmptyInput(f"{path}: no feature columns")
    names = None
    if header is not None:
        names = [h for i, h in enumerate(header) if i != label_idx]
    return Dataset(
        np.array(features, dtype=float),
        _encode_labels(labels) if label_idx is not None else None,
        name=name or path.stem,
        feature_names=names,
    )


def write_labels(path, labels) -> None:
    """``point_index,cluster_id`` rows in input order; outliers are -1."""
    lines = ["point_index,cluster_id"]
    lines += [f"{i},{int(c)}" for i, c in enumerate(np.asarray(labels).tolist())]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_metrics(path, record) -> None:
    """Metrics JSON with the fixed key set; scores are null without ground truth."""
    Path(path).write_text(json.dumps(record.metrics(), indent=2) + "\n", encoding="utf-8")


def write_table(path, rows: list[dict], columns) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: ("" if r.get(k) is None else r.get(k)) for k in columns})
