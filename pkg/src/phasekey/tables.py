"""Row-table serialization shared by the CLI and the test fixtures.

CSV: ``# key=value`` metadata lines, then a header row, then one line per
row with floats in full-precision scientific notation. JSON: a single
object ``{"meta": {...}, "rows": [{...}, ...]}``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile

FORMAT_VERSION = 1


def _columns(rows):
    cols = []
    for row in rows:
        for key in row:
            if key not in cols:
                cols.append(key)
    return cols


def _format_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value) if not math.isfinite(value) else f"{value:.17e}"
    return str(value)


def _parse_cell(text):
    if text == "":
        return None
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    if text in ("true", "false"):
        return text == "true"
    return text


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def dumps(rows, meta, fmt="csv") -> str:
    meta = {"format_version": FORMAT_VERSION, **meta}
    if fmt == "json":
        payload = {"meta": meta, "rows": [{k: _json_value(v) for k, v in row.items()} for row in rows]}
        return json.dumps(payload, indent=1) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    for key, value in meta.items():
        buf.write(f"# {key}={json.dumps(value)}\n")
    cols = _columns(rows)
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        writer.writerow([_format_cell(row.get(c)) for c in cols])
    return buf.getvalue()


def loads(text: str):
    """Inverse of :func:`dumps`; returns ``(meta, rows)``."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        payload = json.loads(text)
        return payload["meta"], payload["rows"]
    meta = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# ") and not body:
            key, _, value = line[2:].partition("=")
            meta[key] = json.loads(value)
        else:
            body.append(line)
    reader = csv.reader(body)
    header = next(reader, [])
    rows = [dict(zip(header, (_parse_cell(c) for c in line))) for line in reader if line]
    return meta, rows


def write(path, rows, meta, fmt="csv"):
    """Write atomically: rerunning an identical job leaves an identical file."""
    text = dumps(rows, meta, fmt)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".phasekey-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
