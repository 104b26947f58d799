"""Line-delimited JSON record files.

The first line is a header ``{"schema": "jsrcert.records", "version": 1, ...}``;
every following line is one result row.  Floats are written with Python's
shortest round-trip repr, so reading a file back gives the same doubles.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable

SCHEMA = "jsrcert.records"
SCHEMA_VERSION = 1


def _clean(obj):
    # JSON has no inf/nan; encode them as strings
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), separators=(",", ":"), allow_nan=False)


def write_records(path: str | Path, kind: str, rows: Iterable[dict], meta: dict | None = None) -> None:
    header = {"schema": SCHEMA, "version": SCHEMA_VERSION, "kind": kind}
    header.update(meta or {})
    with open(path, "w") as fh:
        fh.write(dumps(header) + "\n")
        for row in rows:
            fh.write(dumps(row) + "\n")


def read_records(path: str | Path) -> tuple[dict, list[dict]]:
    lines = Path(path).read_text().splitlines()
    header = json.loads(lines[0])
    if header.get("schema") != SCHEMA:
        raise ValueError(f"not a {SCHEMA} file")
    return header, [json.loads(line) for line in lines[1:] if line.strip()]
