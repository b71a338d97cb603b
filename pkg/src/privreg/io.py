"""CSV dataset ingestion and CSV report emission."""

from __future__ import annotations

import csv
import dataclasses
import datetime as _dt
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Sequence, TextIO

import numpy as np

from . import __version__
from .core import Dataset, validate_dataset
from .errors import EntryOutOfRange, IoError, LabelError, ParseError


@dataclass
class ReportTable:
    header: list[str]
    rows: list[tuple] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        for i, row in enumerate(self.rows):
            if len(row) != len(self.header):
                raise ValueError(f"row {i} has {len(row)} fields, header has {len(self.header)}")

    @classmethod
    def from_records(cls, records: Sequence[Any], metadata: Mapping[str, Any], header: Optional[list[str]] = None):
        if header is None:
            if not records:
                raise ValueError("header is required for an empty record list")
            header = [f.name for f in dataclasses.fields(records[0])]
        rows = [tuple(getattr(r, h) for h in header) for r in records]
        return cls(list(header), rows, dict(metadata))


def report_metadata(base_seed: int, config: Mapping[str, Any], **extra) -> dict[str, Any]:
    meta = {"tool": "privreg", "version": __version__, "base_seed": int(base_seed)}
    meta.update(extra)
    meta["config"] = json.dumps(dict(config), sort_keys=True, default=str)
    meta["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return meta


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if hasattr(value, "value"):  # enums
        return str(value.value)
    return str(value)


def emit_report(t: ReportTable, path, format: str = "csv") -> None:
    """Write ``# key=value`` metadata lines, the header, then the rows."""
    if format != "csv":
        raise ValueError(f"unsupported report format {format!r}")
    if "base_seed" not in t.metadata:
        raise ValueError("report metadata must include base_seed")
    if str(path) == "-":
        _write_report(t, sys.stdout)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            _write_report(t, fh)
    except OSError as exc:
        raise IoError(f"cannot write report {path}: {exc}") from exc


def _write_report(t: ReportTable, fh: TextIO) -> None:
    for key, value in t.metadata.items():
        text = _fmt(value)
        if "\n" in text:
            raise ValueError(f"metadata value for {key!r} spans lines")
        fh.write(f"# {key}={text}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(t.header)
    for row in t.rows:
        writer.writerow([_fmt(v) for v in row])


def _parse_cell(text: str):
    if text == "":
        return None
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def read_report(path) -> ReportTable:
    """Parse a file written by :func:`emit_report`; numeric cells come back as int/float."""
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise IoError(f"cannot read report {path}: {exc}") from exc
    meta = {}
    i = 0
    while i < len(lines) and lines[i].startswith("# "):
        key, _, value = lines[i][2:].partition("=")
        meta[key] = value
        i += 1
    reader = csv.reader(lines[i:])
    header = next(reader)
    rows = [tuple(_parse_cell(c) for c in row) for row in reader]
    return ReportTable(header, rows, meta)


def _label_key(text: str):
    try:
        return float(text)
    except ValueError:
        return text


def load_csv_dataset(path, label_column, label_map: Optional[Mapping[Any, float]] = None,
                     max_rows: Optional[int] = None, *, seed: int = 0, scale: bool = True,
                     header: Optional[bool] = None) -> Dataset:
    """Read features and a response/label column from a CSV file.

    ``label_column`` is a column name (requires a header row) or a 0-based
    index. Feature columns whose largest absolute entry exceeds 1 are divided
    by that entry when ``scale`` is on; the factors are kept in ``meta``.
    ``label_map`` keys are matched numerically when the label parses as a
    number. When ``max_rows`` is smaller than the file, rows are sampled
    without replacement using a stream derived from ``seed``.
    """
    from .experiments import SAMPLE_STREAM, derive_seed

    try:
        with open(path, encoding="utf-8", newline="") as fh:
            raw = [row for row in csv.reader(fh) if row and not (len(row) == 1 and row[0].strip() == "")]
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if not raw:
        raise ParseError(f"{path} contains no rows")

    if header is None:
        header = isinstance(label_column, str) or not any(_is_number(c) for c in raw[0])
    names = [c.strip() for c in raw[0]] if header else None
    body = raw[1:] if header else raw
    first_line = 2 if header else 1
    if not body:
        raise ParseError(f"{path} contains no data rows")

    width = len(body[0])
    if isinstance(label_column, str):
        if names is None or label_column not in names:
            raise ParseError(f"label column {label_column!r} not found in header")
        label_idx = names.index(label_column)
    else:
        label_idx = int(label_column)
        if label_idx < 0:
            label_idx += width
        if not 0 <= label_idx < width:
            raise ParseError(f"label column index {label_column} out of range for {width} columns")

    feats, labels = [], []
    norm_map = {_label_key(str(k)): float(v) for k, v in (label_map or {}).items()}
    for r, row in enumerate(body):
        line = first_line + r
        if len(row) != width:
            raise ParseError(f"expected {width} fields, found {len(row)}", row=line)
        values = []
        for c, cell in enumerate(row):
            if c == label_idx:
                continue
            try:
                values.append(float(cell))
            except ValueError:
                raise ParseError(f"non-numeric value {cell!r}", row=line, column=c) from None
        feats.append(values)
        cell = row[label_idx].strip()
        if label_map is not None:
            key = _label_key(cell)
            if key not in norm_map:
                raise LabelError(f"label {cell!r} on row {line} is not in the label map")
            labels.append(norm_map[key])
        else:
            try:
                labels.append(float(cell))
            except ValueError:
                raise ParseError(f"non-numeric label {cell!r}", row=line, column=label_idx) from None

    X = np.asarray(feats, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    meta: dict[str, Any] = {"source": str(path), "rows_in_file": X.shape[0]}

    if max_rows is not None and max_rows < X.shape[0]:
        rng = np.random.default_rng(derive_seed(seed, SAMPLE_STREAM))
        keep = np.sort(rng.choice(X.shape[0], size=int(max_rows), replace=False))
        X, y = X[keep], y[keep]
        meta["sampled_rows"] = int(max_rows)

    absmax = np.abs(X).max(axis=0)
    if scale:
        factors = np.where(absmax > 1.0, absmax, 1.0)
        X = X / factors
        meta["scale_factors"] = factors
    elif np.any(absmax > 1.0):
        j = int(np.argmax(absmax))
        raise EntryOutOfRange(f"feature column {j} has |entry| {absmax[j]!r} > 1 and scaling is disabled")
    if names is not None:
        meta["feature_names"] = [n for i, n in enumerate(names) if i != label_idx]
    return validate_dataset(X, y, meta=meta)


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True
