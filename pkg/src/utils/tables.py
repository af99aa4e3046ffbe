# !/usr/bin/env python3

import csv
import datetime
import io
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Sequence

import numpy as np

from src.utils.utils import atomic_write_text


def format_metadata(metadata: Mapping[str, Any], timestamp: bool = True) -> str:
    """render a '#' metadata header

    Args:
        metadata (Mapping[str, Any]): resolved parameters, written in insertion order
        timestamp (bool, optional): add a generation timestamp line. Defaults to True.

    Returns:
        str: header lines, each starting with '# '
    """
    lines = [f"# {key}: {value}" for key, value in metadata.items()]
    if timestamp:
        now = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
        lines.append(f"# generated: {now}")
    return "\n".join(lines) + "\n" if lines else ""


def write_table(
    path: Path,
    names: Sequence[str],
    columns: Sequence[np.ndarray],
    metadata: Optional[Mapping[str, Any]] = None,
    timestamp: bool = True,
    fmt: str = "%.10e",
) -> Path:
    """write numeric columns as a comma-separated table

    Args:
        path (Path): destination
        names (Sequence[str]): column names
        columns (Sequence[np.ndarray]): equal length numeric columns
        metadata (Optional[Mapping[str, Any]], optional): header parameters.
            Defaults to None.
        timestamp (bool, optional): add a timestamp line. Defaults to True.
        fmt (str, optional): number format. Defaults to "%.10e".

    Returns:
        Path: destination
    """
    data = np.column_stack([np.asarray(column, dtype=float) for column in columns])
    body = io.StringIO()
    np.savetxt(body, data, fmt=fmt, delimiter=",", header=",".join(names), comments="")

    text = format_metadata(metadata or {}, timestamp) + body.getvalue()
    return atomic_write_text(path, text)


def write_rows(
    path: Path,
    names: Sequence[str],
    rows: Iterable[Sequence[Any]],
    metadata: Optional[Mapping[str, Any]] = None,
    timestamp: bool = True,
) -> Path:
    """write mixed text / numeric rows as a comma-separated table

    Args:
        path (Path): destination
        names (Sequence[str]): column names
        rows (Iterable[Sequence[Any]]): table rows
        metadata (Optional[Mapping[str, Any]], optional): header parameters.
            Defaults to None.
        timestamp (bool, optional): add a timestamp line. Defaults to True.

    Returns:
        Path: destination
    """
    body = io.StringIO()
    writer = csv.writer(body, lineterminator="\n")
    writer.writerow(names)
    for row in rows:
        writer.writerow([f"{v:.10e}" if isinstance(v, float) else v for v in row])

    text = format_metadata(metadata or {}, timestamp) + body.getvalue()
    return atomic_write_text(path, text)


def read_table(path: Path) -> dict[str, np.ndarray]:
    """read a numeric table written by write_table

    Args:
        path (Path): table file

    Returns:
        dict[str, np.ndarray]: column name -> values
    """
    with open(path, encoding="utf-8") as stream:
        lines = [line for line in stream if not line.startswith("#")]
    names = lines[0].strip().split(",")
    if len(lines) == 1:
        return {name: np.empty(0) for name in names}
    data = np.loadtxt(io.StringIO("".join(lines[1:])), delimiter=",", ndmin=2)

    return {name: data[:, i] for i, name in enumerate(names)}
