"""CSV ingestion of a single numeric column."""

import csv
import logging
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from lambertw_tails.errors import DatasetError
from lambertw_tails.models import Series

logger = logging.getLogger(__name__)


def _resolve_column(frame: pd.DataFrame, column: Union[str, int], has_header: bool):
    if has_header and column in frame.columns:
        return column
    try:
        index = int(column)
    except (TypeError, ValueError):
        raise DatasetError(f"column {column!r} not found; available: {list(frame.columns)}") from None
    if not 0 <= index < frame.shape[1]:
        raise DatasetError(f"column index {index} out of range for {frame.shape[1]} column(s)")
    return frame.columns[index]


def _record_line(path: Path, record: int) -> int:
    """Last physical line of the 0-based CSV record; quoted cells may span lines."""
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        for index, _ in enumerate(reader):
            if index == record:
                return reader.line_num
    return record + 1


def ingest_csv(path: Union[str, Path], column: Union[str, int] = 0, has_header: bool = True) -> Series:
    """Read one column of a CSV file as finite reals.

    Blank cells and lines are skipped. A non-numeric cell raises DatasetError
    carrying its 1-based file line.
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"file not found: {path}")
    try:
        frame = pd.read_csv(
            path,
            header=0 if has_header else None,
            dtype=str,
            skip_blank_lines=False,
            keep_default_na=False,
            encoding="utf-8",
        )
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise DatasetError(f"cannot parse {path}: {exc}") from exc

    name = _resolve_column(frame, column, has_header)
    cells = frame[name].fillna("").astype(str).str.strip()
    present = cells != ""
    values = pd.to_numeric(cells[present], errors="coerce")
    bad = ~np.isfinite(values.to_numpy(dtype=float))
    if bad.any():
        row = int(values.index[bad][0])
        line = _record_line(path, row + (1 if has_header else 0))
        raise DatasetError(f"non-numeric value {cells[row]!r} at line {line}", line=line)
    if values.empty:
        raise DatasetError(f"column {name!r} in {path} is empty")

    logger.info("read %d values from %s (column %s)", values.size, path, name)
    return Series(values=values.astype(float).tolist(), label=str(name), source_path=str(path))
