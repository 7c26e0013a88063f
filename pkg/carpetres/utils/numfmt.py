"""Number formatting and tabular output."""

import csv
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np


def fmt17(value: Any) -> str:
    """Format a float with 17 significant digits (exact round trip); pass other values through."""
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Write rows to a CSV file, formatting floats with fmt17."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt17(v) for v in row])
    return path
