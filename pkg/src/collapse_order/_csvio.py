"""Locale-independent CSV emission with 17 significant digits."""

from __future__ import annotations

import csv
import io
import os
from typing import IO, Iterable, Sequence


def fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    try:
        import numpy as np

        if isinstance(value, np.integer):
            return str(int(value))
        if isinstance(value, np.floating):
            return format(float(value), ".17g")
    except ImportError:  # pragma: no cover
        pass
    return str(value)


def write_rows(
    dest: str | os.PathLike | IO[str] | None,
    header: Sequence[str],
    rows: Iterable[Sequence],
) -> str:
    """Write ``rows`` under ``header``; returns the CSV text.

    ``dest`` may be a path, an open text stream, or ``None`` (text only).
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    text = buf.getvalue()
    if dest is None:
        return text
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def kv_line(pairs: Iterable[tuple[str, object]]) -> str:
    return " ".join(f"{k}={fmt(v)}" for k, v in pairs)
