"""Flat-file formats: corpora and matrices as CSV, auditable by eye.

A corpus file is one metadata header line and one comma-separated row of bits
per record::

    # width=2 m=3 a=0.75 seed=42
    0,1
    1,1
    0,1

``width`` and ``m`` are mandatory and checked against the data; other header
keys ride along untouched, which lets the randomize command record the channel
parameter and seed next to the data they produced.  Numbers are always written
with 17 significant digits so parse(emit(x)) recovers every float bit-exactly.
"""

from __future__ import annotations

from contextlib import nullcontext
from typing import Mapping

import numpy as np

from .errors import CorpusFormatError
from .randomizer import ResponseCorpus


def format_float(x: float) -> str:
    """17 significant digits: the shortest form guaranteed to round-trip."""
    return f"{x:.17g}"


def _reading(f):
    """Accept an open text file or a path; close only what we opened."""
    if hasattr(f, "read"):
        return nullcontext(f)
    return open(f, "r", encoding="utf-8")


def _writing(f):
    if hasattr(f, "write"):
        return nullcontext(f)
    return open(f, "w", encoding="utf-8")


def _format_meta_value(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def write_corpus(f, corpus: ResponseCorpus, meta: Mapping[str, object] | None = None) -> None:
    """Write a corpus with its header; extra metadata keys follow width and m."""
    fields = {"width": corpus.width, "m": corpus.m}
    for key, value in (meta or {}).items():
        if key in ("width", "m"):
            continue
        fields[key] = value
    header = " ".join(f"{k}={_format_meta_value(v)}" for k, v in fields.items())
    with _writing(f) as out:
        out.write(f"# {header}\n")
        for row in corpus.bits:
            out.write(",".join(str(int(b)) for b in row) + "\n")


def read_corpus(f) -> tuple[ResponseCorpus, dict[str, str]]:
    """Parse a corpus file; returns the corpus and the raw header mapping.

    Every malformation is reported with its 1-based line number.
    """
    with _reading(f) as src:
        lines = src.read().splitlines()
    if not lines or not lines[0].lstrip().startswith("#"):
        raise CorpusFormatError("missing '# width=... m=...' header", line=1)
    meta: dict[str, str] = {}
    for token in lines[0].lstrip()[1:].split():
        key, sep, value = token.partition("=")
        if not sep:
            raise CorpusFormatError(f"header token {token!r} is not key=value", line=1)
        meta[key] = value
    try:
        width = int(meta["width"])
        m = int(meta["m"])
    except KeyError as exc:
        raise CorpusFormatError(f"header lacks required key {exc}", line=1) from exc
    except ValueError as exc:
        raise CorpusFormatError(f"bad header integer: {exc}", line=1) from exc
    if width < 1:
        raise CorpusFormatError(f"width must be positive, got {width}", line=1)
    if m < 0:
        raise CorpusFormatError(f"record count must be non-negative, got {m}", line=1)

    rows = np.zeros((m, width), dtype=np.uint8)
    seen = 0
    for line_no, raw in enumerate(lines[1:], start=2):
        text = raw.strip()
        if not text:
            continue
        if seen >= m:
            raise CorpusFormatError(
                f"more data rows than the declared m={m}", line=line_no
            )
        parts = text.split(",")
        if len(parts) != width:
            raise CorpusFormatError(
                f"expected {width} comma-separated bits, got {len(parts)}",
                line=line_no,
            )
        for j, part in enumerate(parts):
            bit = part.strip()
            if bit == "0":
                continue
            if bit == "1":
                rows[seen, j] = 1
            else:
                raise CorpusFormatError(
                    f"field {j} is {part!r}, expected 0 or 1", line=line_no
                )
        seen += 1
    if seen != m:
        raise CorpusFormatError(
            f"header declared m={m} but found {seen} data rows",
            line=len(lines) + 1,
        )
    return ResponseCorpus(rows), meta


def write_matrix(f, matrix: np.ndarray) -> None:
    """Row-major CSV, 17 significant digits per entry."""
    matrix = np.asarray(matrix, dtype=np.float64)
    with _writing(f) as out:
        for row in np.atleast_2d(matrix):
            out.write(",".join(format_float(v) for v in row) + "\n")


def read_matrix(f) -> np.ndarray:
    """Parse a matrix written by :func:`write_matrix`."""
    rows: list[list[float]] = []
    with _reading(f) as src:
        for line_no, raw in enumerate(src.read().splitlines(), start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            try:
                rows.append([float(part) for part in text.split(",")])
            except ValueError as exc:
                raise CorpusFormatError(f"bad number: {exc}", line=line_no) from exc
            if len(rows) > 1 and len(rows[-1]) != len(rows[0]):
                raise CorpusFormatError(
                    f"row has {len(rows[-1])} fields, expected {len(rows[0])}",
                    line=line_no,
                )
    if not rows:
        raise CorpusFormatError("no data rows found")
    return np.array(rows, dtype=np.float64)


def read_vector(f) -> np.ndarray:
    """Parse a flat list of numbers (commas and/or whitespace, '#' comments)."""
    with _reading(f) as src:
        text = src.read()
    tokens: list[str] = []
    for line in text.splitlines():
        body = line.split("#", 1)[0]
        tokens.extend(body.replace(",", " ").split())
    try:
        values = [float(t) for t in tokens]
    except ValueError as exc:
        raise CorpusFormatError(f"bad number: {exc}") from exc
    if not values:
        raise CorpusFormatError("no numbers found")
    return np.array(values, dtype=np.float64)


__all__ = [
    "format_float",
    "write_corpus",
    "read_corpus",
    "write_matrix",
    "read_matrix",
    "read_vector",
]
