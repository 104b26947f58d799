"""Plain-text matrix-set files.

Format::

    # comments start with '#'
    field real            # or: complex
    dimension 2
    generator S1          # one block per generator: label line + d rows
    1   1
    0   1
    generator S2
    3/4 0
    3/4 3/4

Entries are decimals, ``p/q`` rationals (rounded to the nearest double) or,
for complex sets, Python complex literals such as ``1-2j``.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import numpy as np

from .products import MatrixSet


class SetFileError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


def _parse_number(tok: str, field: str):
    if "j" in tok.lower():
        if field != "complex":
            raise ValueError("complex literal in a real set")
        return complex(tok)
    if "/" in tok:
        frac = Fraction(tok)
        return float(frac)
    return float(tok)


def parse_set_file(text: str, name: str = "") -> MatrixSet:
    field = None
    dim = None
    blocks: list[tuple[str, list[list]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        toks = line.split()
        col = len(line) - len(line.lstrip()) + 1
        head = toks[0].lower()
        if head == "field":
            if len(toks) != 2 or toks[1].lower() not in ("real", "complex"):
                raise SetFileError("expected 'field real' or 'field complex'", lineno, col)
            field = toks[1].lower()
        elif head in ("dimension", "dim"):
            if len(toks) != 2:
                raise SetFileError("expected 'dimension <d>'", lineno, col)
            try:
                dim = int(toks[1])
            except ValueError:
                raise SetFileError(f"bad dimension {toks[1]!r}", lineno, line.index(toks[1]) + 1)
            if not 2 <= dim <= 16:
                raise SetFileError("dimension must lie in 2..16", lineno, line.index(toks[1]) + 1)
        elif head == "generator":
            if field is None or dim is None:
                raise SetFileError("'field' and 'dimension' must precede generators", lineno, col)
            label = " ".join(toks[1:]) or f"S{len(blocks) + 1}"
            blocks.append((label, []))
        else:
            if not blocks:
                raise SetFileError(f"unexpected {toks[0]!r} before first generator", lineno, col)
            label, rows = blocks[-1]
            if len(rows) == dim:
                raise SetFileError(f"generator {label!r} already has {dim} rows", lineno, col)
            if len(toks) != dim:
                raise SetFileError(f"expected {dim} numbers, found {len(toks)}", lineno, col)
            row = []
            pos = 0
            for tok in toks:
                pos = line.index(tok, pos)
                try:
                    row.append(_parse_number(tok, field))
                except (ValueError, ZeroDivisionError) as exc:
                    raise SetFileError(f"bad number {tok!r} ({exc})", lineno, pos + 1)
                pos += len(tok)
            rows.append(row)
    if field is None or dim is None:
        raise SetFileError("missing 'field' or 'dimension' header")
    for label, rows in blocks:
        if len(rows) != dim:
            raise SetFileError(f"generator {label!r} has {len(rows)} rows, expected {dim}")
    if len(blocks) < 2:
        raise SetFileError(f"card(K) >= 2 required, found {len(blocks)} generator(s)")
    dtype = complex if field == "complex" else float
    gens = np.array([np.array(rows, dtype=dtype) for _, rows in blocks])
    return MatrixSet(gens, tuple(label for label, _ in blocks), field, name)


def read_set_file(path: str | Path) -> MatrixSet:
    p = Path(path)
    return parse_set_file(p.read_text(), name=p.stem)


def _fmt(x, field: str) -> str:
    if field == "complex":
        return repr(complex(x)).strip("()")
    return repr(float(x))


def format_set_file(mset: MatrixSet) -> str:
    lines = []
    if mset.name:
        lines.append(f"# {mset.name}")
    lines += [f"field {mset.field}", f"dimension {mset.d}"]
    for label, g in zip(mset.labels, mset.generators):
        lines.append(f"generator {label}")
        for row in g:
            lines.append("  ".join(_fmt(x, mset.field) for x in row))
    return "\n".join(lines) + "\n"


def write_set_file(mset: MatrixSet, path: str | Path) -> None:
    Path(path).write_text(format_set_file(mset))


def parse_words_file(text: str) -> list[tuple[int, ...]]:
    """One word per line, 1-based indices separated by commas."""
    words = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            idx = [int(t) for t in line.replace(" ", "").split(",") if t]
        except ValueError:
            raise SetFileError(f"bad word {line!r}", lineno, 1)
        if not idx or min(idx) < 1:
            raise SetFileError("word indices are 1-based positive integers", lineno, 1)
        words.append(tuple(i - 1 for i in idx))
    return words
