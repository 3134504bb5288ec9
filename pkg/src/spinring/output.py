"""CSV/JSON emission with metadata blocks, and the key=value config reader.

CSV layout: a leading block of ``# key = value`` lines (one per metadata
entry, insertion order), then a comma-separated header row, then data rows.
Floats are printed with 17 significant digits so every cell round-trips
through float64 without loss.  JSON output is {"meta": {...}, "rows": [...]}
with one object per row.  No timestamps or host details are emitted, so
repeated runs with the same configuration are byte-identical.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    if value is None:
        return ""
    return str(value)


def _csv_cell(value) -> str:
    text = format_value(value)
    if any(ch in text for ch in (",", '"', "\n")):
        return '"' + text.replace('"', '""') + '"'
    return text


def render_csv(meta: dict, header: list, rows: list) -> str:
    lines = [f"# {key} = {format_value(value)}" for key, value in meta.items()]
    lines.append(",".join(_csv_cell(cell) for cell in header))
    for row in rows:
        lines.append(",".join(_csv_cell(cell) for cell in row))
    return "\n".join(lines) + "\n"


def render_json(meta: dict, header: list, rows: list) -> str:
    payload = {
        "meta": {key: value for key, value in meta.items()},
        "rows": [dict(zip(header, row)) for row in rows],
    }
    return json.dumps(payload, indent=2) + "\n"


def emit(meta: dict, header: list, rows: list, fmt: str = "csv",
         out_path: str | None = None) -> str:
    """Render the table and write it to ``out_path`` or standard output."""
    if fmt == "csv":
        text = render_csv(meta, header, rows)
    elif fmt == "json":
        text = render_json(meta, header, rows)
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return text


def parse_config_file(path: str) -> dict:
    """Read ``key = value`` lines; '#' starts a comment, blank lines ignored."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values
