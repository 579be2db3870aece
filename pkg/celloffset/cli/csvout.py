"""CSV writer shared by every command."""

import contextlib
import csv
import math
import sys
from typing import Iterable, Sequence

from .config import SIGNIFICANT_DIGITS

STDOUT = "-"


def format_cell(value) -> str:
    """Numbers with nine significant digits, booleans as 0/1, ``None`` as an empty cell."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return format(value, f".{SIGNIFICANT_DIGITS}g")
    return str(value)


@contextlib.contextmanager
def _open(destination: str):
    if destination == STDOUT:
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(destination, "w", encoding="utf-8", newline="") as f:
            yield f


def emit_csv(header: Sequence[str], rows: Iterable[Sequence], destination: str = STDOUT) -> int:
    """
    Write ``header`` and ``rows`` as comma-separated lines ending in a single newline.

    :param header: column names
    :param rows: cells in header order
    :param destination: a path, or ``-`` for standard output
    :return: number of data rows written
    :raises OSError: when the destination cannot be written
    """
    count = 0
    with _open(destination) as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            if len(row) != len(header):
                raise ValueError(f"row has {len(row)} cells, header has {len(header)}")
            writer.writerow([format_cell(cell) for cell in row])
            count += 1
    return count
