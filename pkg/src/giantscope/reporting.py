"""File output: CSV with '#' metadata lines, JSON with a meta block, and
plain SVG line plots."""

from __future__ import annotations

import json
import math
from xml.sax.saxutils import escape

__all__ = ["metadata", "fmt", "write_csv", "write_json", "write_svg"]

VERSION = "0.1.0"


def metadata(command, params):
    """Ordered metadata: tool version, subcommand and every parameter."""
    meta = {"tool": "giantscope", "version": VERSION, "command": command}
    for key in sorted(params):
        meta[key] = params[key]
    return meta


def fmt(x):
    """Stable text form of a cell; infinite rates become ``inf``."""
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return repr(x)
    if isinstance(x, (list, tuple)):
        return " ".join(fmt(v) for v in x)
    return str(x)


def _meta_lines(meta):
    return [f"{k}: {json.dumps(v)}" for k, v in meta.items()]


def write_csv(path, columns, rows, meta):
    with open(path, "w") as fh:
        for line in _meta_lines(meta):
            fh.write(f"# {line}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return fmt(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):
        return _jsonable(x.item())
    return x


def write_json(path, doc, meta):
    with open(path, "w") as fh:
        fh.write(json.dumps({"meta": _jsonable(meta), **_jsonable(doc)}, indent=1) + "\n")


_COLOURS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b")


def write_svg(path, series, meta, title="", xlabel="", ylabel="", width=640, height=420, marks=()):
    """Line plot of ``series = [(label, xs, ys), ...]``.

    Non-finite ``y`` values break the line.  ``marks`` are x positions drawn
    as dashed vertical guides.
    """
    pad_l, pad_r, pad_t, pad_b = 64, 150, 36, 48
    pts = [(x, y) for _, xs, ys in series for x, y in zip(xs, ys) if math.isfinite(y)]
    if not pts:
        raise ValueError("nothing finite to plot")
    x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
    y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1
    w, h = width - pad_l - pad_r, height - pad_t - pad_b
    sx = lambda x: pad_l + (x - x0) / (x1 - x0) * w
    sy = lambda y: pad_t + (1 - (y - y0) / (y1 - y0)) * h
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        "<!--",
        *(escape(line).replace("--", "- -") for line in _meta_lines(meta)),
        "-->",
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{pad_l}" y="{pad_t}" width="{w}" height="{h}" fill="none" stroke="black"/>',
        f'<text x="{pad_l + w / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<text x="{pad_l + w / 2:.1f}" y="{height - 10}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
        f'<text x="16" y="{pad_t + h / 2:.1f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {pad_t + h / 2:.1f})">{escape(ylabel)}</text>',
    ]
    for k in range(5):
        xv = x0 + (x1 - x0) * k / 4
        yv = y0 + (y1 - y0) * k / 4
        out.append(f'<text x="{sx(xv):.1f}" y="{pad_t + h + 16}" text-anchor="middle" font-size="10">{xv:.3g}</text>')
        out.append(f'<text x="{pad_l - 6}" y="{sy(yv) + 3:.1f}" text-anchor="end" font-size="10">{yv:.3g}</text>')
    for xm in marks:
        if x0 <= xm <= x1:
            out.append(
                f'<line x1="{sx(xm):.2f}" y1="{pad_t}" x2="{sx(xm):.2f}" y2="{pad_t + h}" '
                'stroke="gray" stroke-dasharray="4 3"/>'
            )
    for idx, (label, xs, ys) in enumerate(series):
        colour = _COLOURS[idx % len(_COLOURS)]
        run = []
        for x, y in list(zip(xs, ys)) + [(None, math.nan)]:
            if x is not None and math.isfinite(y):
                run.append(f"{sx(x):.2f},{sy(y):.2f}")
                continue
            if len(run) > 1:
                out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{" ".join(run)}"/>')
            run = []
        ly = pad_t + 16 * (idx + 1)
        out.append(f'<line x1="{pad_l + w + 10}" y1="{ly}" x2="{pad_l + w + 30}" y2="{ly}" stroke="{colour}" stroke-width="2"/>')
        out.append(f'<text x="{pad_l + w + 34}" y="{ly + 4}" font-size="11">{escape(label)}</text>')
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")
