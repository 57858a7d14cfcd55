"""Writers for experiment records, CSV tables and SVG scatter plots."""

from __future__ import annotations

import csv
import math
import os

from ..rootsolver import CSV_HEADER
from .experiment import SUMMARY_KEYS, ExperimentRecord

SVG_SIZE = 600
SVG_WINDOW = 2.0
_COLORS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b")


def write_record(record: ExperimentRecord, out_dir: str, emit_svg: bool = False) -> list[str]:
    """Write ``record.json``, ``replicates.csv`` and, when roots exist,
    ``roots.csv`` (one row per root) and optionally ``roots.svg``.
    Returns the written paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    path = os.path.join(out_dir, "record.json")
    with open(path, "w") as fh:
        fh.write(record.to_json())
    paths.append(path)

    path = os.path.join(out_dir, "replicates.csv")
    keys = sorted({k for r in record.replicates for k in r["stats"]})
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "replicate", "converged", *keys])
        for r in record.replicates:
            w.writerow([r["n"], r["replicate"], int(r["converged"]),
                        *(_cell(r["stats"].get(k)) for k in keys)])
    paths.append(path)

    with_roots = [r for r in record.replicates if "roots" in r]
    if with_roots:
        path = os.path.join(out_dir, "roots.csv")
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n", "replicate", *CSV_HEADER])
            for r in with_roots:
                for row in r["roots"]:
                    w.writerow([r["n"], r["replicate"], *row])
        paths.append(path)
        if emit_svg:
            path = os.path.join(out_dir, "roots.svg")
            with open(path, "w") as fh:
                fh.write(scatter_svg(with_roots))
            paths.append(path)
    return paths


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, float):
        return format(v, ".17g")
    return v


def scatter_svg(replicates) -> str:
    """Root scatter on the window ``[-2, 2]^2``, one color per degree."""
    scale = SVG_SIZE / (2 * SVG_WINDOW)
    degrees = sorted({r["n"] for r in replicates})
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" '
        f'viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">',
        f'<rect width="{SVG_SIZE}" height="{SVG_SIZE}" fill="white"/>',
        f'<line x1="0" y1="{SVG_SIZE / 2}" x2="{SVG_SIZE}" y2="{SVG_SIZE / 2}" stroke="#ccc"/>',
        f'<line x1="{SVG_SIZE / 2}" y1="0" x2="{SVG_SIZE / 2}" y2="{SVG_SIZE}" stroke="#ccc"/>',
    ]
    for r in replicates:
        color = _COLORS[degrees.index(r["n"]) % len(_COLORS)]
        for row in r["roots"]:
            log_abs, arg = float(row[4]), float(row[3])
            if log_abs > math.log(2 * SVG_WINDOW):
                continue
            x = math.exp(log_abs) * math.cos(arg)
            y = math.exp(log_abs) * math.sin(arg)
            if abs(x) > SVG_WINDOW or abs(y) > SVG_WINDOW:
                continue
            cx = (x + SVG_WINDOW) * scale
            cy = (SVG_WINDOW - y) * scale
            parts.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="1.5" fill="{color}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def format_table(record: ExperimentRecord) -> str:
    """Plain-text aggregate table, one line per degree."""
    cols = [k for k in SUMMARY_KEYS
            if any(f"median_{k}" in row for row in record.aggregates.values())]
    head = ["n", "ok/total", *cols]
    lines = ["  ".join(f"{h:>12}" for h in head)]
    for n, row in record.aggregates.items():
        cells = [n, f"{row['converged']}/{row['replicates']}"]
        cells += [format(row.get(f"median_{k}", float("nan")), ".6g") for k in cols]
        lines.append("  ".join(f"{c:>12}" for c in cells))
    return "\n".join(lines)
