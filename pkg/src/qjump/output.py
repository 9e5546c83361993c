"""File formats for the command-line front end.

CSV is the canonical output: '#'-prefixed "key = value" metadata lines,
then a header row, then rows printed with 17 significant digits so written
values round-trip exactly through the reader.  The SVG quick-looks are
self-contained minimal line plots (no plotting dependency).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

TRAJECTORY_COLUMNS = ("time", "mean_n", "var_n", "quad_phase",
                      "i_h_raw", "i_h_filtered")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_trajectory_csv(path, record, filtered_values, meta: dict):
    """Write one trajectory + its filtered record in the canonical schema."""
    cols = (record.times, record.mean_n, record.var_n, record.quad_phase,
            record.photocurrent, np.asarray(filtered_values, dtype=float))
    if any(c.size != record.times.size for c in cols):
        raise ValueError("column length mismatch")
    lines = [f"# {k} = {v}" for k, v in meta.items()]
    lines.append(",".join(TRAJECTORY_COLUMNS))
    for row in zip(*cols):
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def write_histogram_csv(path, weights, thermal_weights, meta: dict):
    weights = np.asarray(weights, dtype=float)
    thermal_weights = np.asarray(thermal_weights, dtype=float)
    if weights.shape != thermal_weights.shape:
        raise ValueError("histogram/thermal length mismatch")
    lines = [f"# {k} = {v}" for k, v in meta.items()]
    lines.append("n,weight,thermal_weight")
    for n, (w, t) in enumerate(zip(weights, thermal_weights)):
        lines.append(f"{n},{_fmt(w)},{_fmt(t)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path):
    """Read either schema back: returns (meta, {column: array})."""
    meta = {}
    header = None
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            meta[key.strip()] = value.strip()
            continue
        if header is None:
            header = [c.strip() for c in line.split(",")]
            continue
        rows.append([float(v) for v in line.split(",")])
    if header is None:
        raise ValueError(f"{path}: no header row")
    data = np.asarray(rows, dtype=float)
    return meta, {name: data[:, k] for k, name in enumerate(header)}


def write_jsonl(path, checks: list[dict]):
    Path(path).write_text("".join(json.dumps(c) + "\n" for c in checks))


_PALETTE = ("#1b6ca8", "#d1495b", "#66a182", "#edae49", "#8d6a9f")


def svg_line_plot(path, x, series: dict, title: str = "", width: int = 860,
                  height: int = 340):
    """Self-contained SVG with one polyline per named series."""
    x = np.asarray(x, dtype=float)
    ml, mr, mt, mb = 55, 15, 28, 34
    pw, ph = width - ml - mr, height - mt - mb
    ys = [np.asarray(v, dtype=float) for v in series.values()]
    lo = min(float(np.nanmin(v)) for v in ys)
    hi = max(float(np.nanmax(v)) for v in ys)
    if hi == lo:
        hi, lo = lo + 1.0, lo - 1.0
    pad = 0.05 * (hi - lo)
    lo, hi = lo - pad, hi + pad
    x0, x1 = float(x[0]), float(x[-1])

    def sx(v):
        return ml + pw * (v - x0) / (x1 - x0)

    def sy(v):
        return mt + ph * (1.0 - (v - lo) / (hi - lo))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" '
        'stroke="#444" stroke-width="1"/>',
        f'<text x="{width / 2:.0f}" y="18" font-size="13" '
        f'text-anchor="middle" font-family="sans-serif">{title}</text>',
        f'<text x="{ml - 6}" y="{sy(hi - pad):.1f}" font-size="11" '
        f'text-anchor="end" font-family="sans-serif">{hi - pad:.3g}</text>',
        f'<text x="{ml - 6}" y="{sy(lo + pad):.1f}" font-size="11" '
        f'text-anchor="end" font-family="sans-serif">{lo + pad:.3g}</text>',
        f'<text x="{ml}" y="{height - 8}" font-size="11" '
        f'font-family="sans-serif">t = {x0:.3g}</text>',
        f'<text x="{width - mr}" y="{height - 8}" font-size="11" '
        f'text-anchor="end" font-family="sans-serif">t = {x1:.3g}</text>',
    ]
    # thin long series so files stay small
    stride = max(1, x.size // 4000)
    for k, (name, v) in enumerate(series.items()):
        color = _PALETTE[k % len(_PALETTE)]
        pts = " ".join(f"{sx(a):.1f},{sy(b):.1f}"
                       for a, b in zip(x[::stride], np.asarray(v)[::stride])
                       if np.isfinite(b))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                   'stroke-width="1"/>')
        out.append(f'<text x="{ml + 8}" y="{mt + 16 + 14 * k}" font-size="11" '
                   f'fill="{color}" font-family="sans-serif">{name}</text>')
    out.append("</svg>")
    Path(path).write_text("\n".join(out))
