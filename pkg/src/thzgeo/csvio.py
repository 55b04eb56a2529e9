"""Deterministic CSV / JSON table output.

Every table starts with a ``#``-prefixed comment block embedding the tool
version, the command, and the fully resolved configuration (plus per-curve
overrides), so outputs are self-describing.  Numbers are written with 17
significant digits, which round-trips IEEE doubles exactly; reruns with the
same configuration produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, int):
        return str(value)
    return str(value)


def header_lines(version: str, command: str, config_pairs, curve_pairs) -> list[str]:
    lines = [f"# thzgeo {version}", f"# command: {command}"]
    for key, value in config_pairs:
        lines.append(f"# {key} = {value}")
    for name, overrides in curve_pairs:
        for key in sorted(overrides):
            lines.append(f"# curve.{name}.{key} = {overrides[key]}")
    return lines


def write_table(
    path: str | Path,
    *,
    version: str,
    command: str,
    config_pairs,
    curve_pairs,
    columns: list[str],
    rows: list[list],
    fmt: str = "csv",
) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        lines = header_lines(version, command, config_pairs, curve_pairs)
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(format_cell(cell) for cell in row))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    elif fmt == "json":
        payload = {
            "tool": "thzgeo",
            "version": version,
            "command": command,
            "config": {k: v for k, v in config_pairs},
            "curves": {name: dict(sorted(ov.items())) for name, ov in curve_pairs},
            "columns": columns,
            "rows": [[cell for cell in row] for row in rows],
        }
        path.write_text(
            json.dumps(payload, sort_keys=True, separators=(",", ": "), indent=1) + "\n",
            encoding="utf-8",
        )
    else:
        raise ValueError(f"unknown output format {fmt!r}")
