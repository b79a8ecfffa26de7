"""Flat key-value configuration, grid specs and report emission.

Config files hold one ``key = value`` per line, ``#`` starts a comment and
list values are comma separated.  Every report written by the CLI starts
with ``# config: key = value`` lines, and feeding such a report back through
``--config`` reproduces it.
"""
from __future__ import annotations

import csv
import io
import math
from pathlib import Path

import numpy as np

CONFIG_PREFIX = "# config:"


def fmt(x) -> str:
    """17 significant digits: enough to round-trip any double."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if x is None:
        return ""
    return str(x)


def human(x) -> str:
    return format(float(x), ".4g")


def normalize_key(key: str) -> str:
    return key.strip().replace("-", "_")


def parse_config_text(text: str) -> dict[str, str]:
    """Parse a plain config file or the ``# config:`` header of a report."""
    lines = text.splitlines()
    is_report = any(line.startswith(CONFIG_PREFIX) for line in lines)
    out = {}
    for n, raw in enumerate(lines, start=1):
        line = raw.strip()
        if is_report:
            if not line.startswith(CONFIG_PREFIX):
                continue
            line = line[len(CONFIG_PREFIX):].strip()
        elif not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {n}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        out[normalize_key(key)] = value.strip()
    return out


def load_config(path) -> dict[str, str]:
    return parse_config_text(Path(path).read_text(encoding="utf-8"))


def parse_grid(spec: str, integer: bool = False) -> list:
    """``log:lo:hi:n``, ``lin:lo:hi:n``, a comma list, or empty."""
    spec = spec.strip()
    if not spec:
        return []
    if spec.startswith(("log:", "lin:")):
        kind, lo, hi, n = spec.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
        if kind == "log":
            vals = np.logspace(math.log10(lo), math.log10(hi), n)
        else:
            vals = np.linspace(lo, hi, n)
        if integer:
            return sorted({int(v) for v in vals})
        return [float(v) for v in vals]
    conv = int if integer else float
    return [conv(v) for v in spec.split(",") if v.strip()]


def _echo(x) -> str:
    # shortest repr that round-trips; the data rows use fmt()
    if isinstance(x, float):
        return repr(x)
    return fmt(x)


def header_lines(tool: str, version: str, command: str, config: dict) -> list[str]:
    lines = [f"# {tool} {version} {command}"]
    for key in sorted(config):
        lines.append(f"{CONFIG_PREFIX} {key} = {_echo(config[key])}")
    return lines


def render_csv(header: list[str], rows: list[list], preamble: list[str] = ()) -> str:
    buf = io.StringIO()
    for line in preamble:
        buf.write(line + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def read_csv_report(text: str) -> tuple[list[str], list[dict[str, str]]]:
    body = [line for line in text.splitlines() if not line.startswith("#")]
    reader = csv.DictReader(body)
    return list(reader.fieldnames or []), list(reader)
