"""Lifetime datasets: the Dataset type and file ingestion.

Accepted inputs are plain text (one value per line, or comma/whitespace
separated values; blank lines and '#' comments ignored) and Excel workbooks,
whose numeric cells are read row by row.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from errors import DatasetError
from unified_logger import LogLevel, get_logger

FIXTURES_ENV = "SSDLAB_FIXTURES"
DEFAULT_FIXTURES_DIR = "fixtures"

# Public datasets the comparison tables were computed on; see fixtures/README.md.
MECHANICAL_FAILURES = "mechanical_failures.txt"
BANK_WAITING_TIMES = "bank_waiting_times.txt"

_ENCODINGS = ['utf-8-sig', 'latin-1', 'iso-8859-1', 'cp1252']
_SEPARATORS = re.compile(r"[,\s;]+")


@dataclass(frozen=True)
class Dataset:
    """Ascending sample of positive lifetimes with a provenance label."""

    values: tuple[float, ...]
    label: str = "dataset"
    _array: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        arr = np.sort(np.asarray(self.values, dtype=float))
        if arr.size == 0:
            raise DatasetError(f"dataset '{self.label}' is empty")
        if not np.all(np.isfinite(arr)) or arr[0] <= 0:
            raise DatasetError(f"dataset '{self.label}' must contain finite values > 0")
        arr.setflags(write=False)
        object.__setattr__(self, "values", tuple(float(v) for v in arr))
        object.__setattr__(self, "_array", arr)

    @classmethod
    def from_values(cls, values, label="dataset"):
        return cls(tuple(np.ravel(np.asarray(values, dtype=float))), label)

    @property
    def array(self) -> np.ndarray:
        return self._array

    @property
    def n(self) -> int:
        return int(self._array.size)

    @property
    def sum(self) -> float:
        return float(self._array.sum())

    @property
    def mean(self) -> float:
        return self.sum / self.n

    @property
    def log_sum(self) -> float:
        return float(np.log(self._array).sum())

    def summary(self) -> dict:
        """Summary statistics in the order they are reported."""
        arr = self._array
        return {
            'label': self.label,
            'n': self.n,
            'sum': self.sum,
            'mean': self.mean,
            'variance': float(arr.var(ddof=1)) if self.n > 1 else 0.0,
            'min': float(arr[0]),
            'median': float(np.median(arr)),
            'max': float(arr[-1]),
        }


def _parse_token(token, line_number):
    try:
        value = float(token)
    except ValueError:
        raise DatasetError(f"not a number: {token!r}", line_number) from None
    if not np.isfinite(value) or value <= 0:
        raise DatasetError(f"lifetimes must be positive, got {token!r}", line_number)
    return value


def _read_text_lines(path):
    last = None
    for encoding in _ENCODINGS:
        try:
            with open(path, 'r', encoding=encoding) as f:
                return f.read().splitlines()
        except UnicodeDecodeError as e:
            last = e
    raise DatasetError(f"could not decode {path}: {last}")


def _values_from_text(path):
    values = []
    for line_number, raw in enumerate(_read_text_lines(path), 1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        for token in _SEPARATORS.split(line):
            if token:
                values.append(_parse_token(token, line_number))
    return values


def _values_from_excel(path):
    try:
        df = pd.read_excel(path, header=None)
    except Exception as e:
        raise DatasetError(f"could not read workbook {path}: {e}") from e
    values = []
    for row_number, row in enumerate(df.itertuples(index=False), 1):
        for cell in row:
            if pd.isna(cell):
                continue
            if isinstance(cell, str) and (not cell.strip() or cell.strip().startswith('#')):
                continue
            values.append(_parse_token(str(cell).strip(), row_number))
    return values


def ingest(path, label=None) -> Dataset:
    """
    Load a lifetime dataset from a text/CSV file or an Excel workbook.

    Args:
        path (str): File to read.
        label (str): Provenance label; defaults to the file name.

    Returns:
        Dataset: sorted sample with n, sum and mean available.

    Raises:
        DatasetError: missing or empty file, non-numeric or non-positive entry
            (the message names the offending line).
    """
    logger = get_logger()
    if not os.path.isfile(path):
        raise DatasetError(f"dataset file {path} does not exist")

    if path.lower().endswith(('.xlsx', '.xls')):
        values = _values_from_excel(path)
    else:
        values = _values_from_text(path)

    if not values:
        raise DatasetError(f"dataset file {path} contains no values")

    dataset = Dataset.from_values(values, label or os.path.basename(path))
    logger.log(LogLevel.INFO, f"Loaded {dataset.n} values from {path} (mean {dataset.mean:.6g})")
    return dataset


def fixtures_dir():
    """Directory where the public datasets are dropped (env SSDLAB_FIXTURES)."""
    return os.environ.get(FIXTURES_ENV, DEFAULT_FIXTURES_DIR)


def find_fixture(file_name):
    """Path of a fixture file, or None when it has not been provided."""
    path = os.path.join(fixtures_dir(), file_name)
    return path if os.path.isfile(path) else None
