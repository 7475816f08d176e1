"""Deterministic CSV / JSON / SVG emission.

Identical inputs must produce byte-identical files: floats are formatted to
a fixed number of significant digits (17 in JSON for round-trip fidelity,
12 in CSV for readability), dictionaries keep insertion order, and nothing
time- or host-dependent is ever written.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

JSON_SIG = 17
CSV_SIG = 12


def format_float(x: float, sig: int) -> str:
    if isinstance(x, float) and (math.isnan(x) or math.isinf(x)):
        raise ValueError("refusing to serialize non-finite float")
    return f"{x:.{sig}g}"


def _json_token(obj, sig: int) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, (np.floating, float)):
        return format_float(float(obj), sig)
    if isinstance(obj, (np.integer, int)):
        return str(int(obj))
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{out}"'
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json_token(v, sig) for v in obj) + "]"
    if isinstance(obj, dict):
        items = (f'{_json_token(str(k), sig)}: {_json_token(v, sig)}'
                 for k, v in obj.items())
        return "{" + ", ".join(items) + "}"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def json_dumps(obj, sig: int = JSON_SIG) -> str:
    return _json_token(obj, sig)


def write_json(path: Path, obj, sig: int = JSON_SIG) -> Path:
    path = Path(path)
    path.write_text(json_dumps(obj, sig) + "\n", encoding="utf-8")
    return path


def write_csv(path: Path, header: list[str], rows, sig: int = CSV_SIG) -> Path:
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, (float, np.floating)):
                cells.append(format_float(float(cell), sig))
            else:
                cells.append(str(cell))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_jsonl(path: Path, records, sig: int = JSON_SIG) -> Path:
    path = Path(path)
    path.write_text("".join(json_dumps(r, sig) + "\n" for r in records),
                    encoding="utf-8")
    return path


# ---------------------------------------------------------------------------
# SVG


def _fmt_pt(x: float) -> str:
    return f"{x:.4f}"


def _bezier_path(points: np.ndarray) -> str:
    """Closed cubic-segment path through the sample points (Catmull-Rom)."""
    z = np.asarray(points, dtype=complex)
    n = len(z)
    prev = np.roll(z, 1)
    nxt = np.roll(z, -1)
    nxt2 = np.roll(z, -2)
    c1 = z + (nxt - prev) / 6.0
    c2 = nxt - (nxt2 - z) / 6.0
    parts = [f"M {_fmt_pt(z[0].real)} {_fmt_pt(z[0].imag)}"]
    for i in range(n):
        parts.append(
            f"C {_fmt_pt(c1[i].real)} {_fmt_pt(c1[i].imag)} "
            f"{_fmt_pt(c2[i].real)} {_fmt_pt(c2[i].imag)} "
            f"{_fmt_pt(nxt[i].real)} {_fmt_pt(nxt[i].imag)}")
    parts.append("Z")
    return " ".join(parts)


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b", "#e377c2", "#7f7f7f")


def write_curves_svg(path: Path, curves: list[np.ndarray],
                     labels: list[str] | None = None, size: int = 640) -> Path:
    """Closed curves (complex sample arrays) on a common square canvas."""
    path = Path(path)
    allpts = np.concatenate([np.asarray(c) for c in curves])
    span = max(np.ptp(allpts.real), np.ptp(allpts.imag)) * 1.15
    cx = (allpts.real.max() + allpts.real.min()) / 2.0
    cy = (allpts.imag.max() + allpts.imag.min()) / 2.0
    scale = size / span

    def to_canvas(z):
        # y flipped: SVG grows downward
        return (z.real - cx) * scale + size / 2.0 \
            + 1j * ((cy - z.imag) * scale + size / 2.0)

    body = []
    for i, curve in enumerate(curves):
        color = _PALETTE[i % len(_PALETTE)]
        d = _bezier_path(to_canvas(np.asarray(curve, dtype=complex)))
        body.append(f'  <path d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        if labels:
            body.append(f'  <text x="10" y="{18 * (i + 1)}" fill="{color}" '
                        f'font-size="13" font-family="monospace">{labels[i]}</text>')
    svg = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">\n' + "\n".join(body) + "\n</svg>\n")
    path.write_text(svg, encoding="utf-8")
    return path


def write_xy_svg(path: Path, x: np.ndarray, y: np.ndarray,
                 xlabel: str, ylabel: str, size: int = 640) -> Path:
    """One polyline with framed axes; enough for branch diagrams."""
    path = Path(path)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    pad = 60
    span_x = np.ptp(x) or 1.0
    span_y = np.ptp(y) or 1.0
    px = pad + (x - x.min()) / span_x * (size - 2 * pad)
    py = size - pad - (y - y.min()) / span_y * (size - 2 * pad)
    pts = " ".join(f"{_fmt_pt(a)},{_fmt_pt(b)}" for a, b in zip(px, py))
    ticks = (f'  <text x="{pad}" y="{size - pad + 20}" font-size="12" '
             f'font-family="monospace">{format_float(float(x.min()), 6)}</text>\n'
             f'  <text x="{size - pad - 40}" y="{size - pad + 20}" font-size="12" '
             f'font-family="monospace">{format_float(float(x.max()), 6)}</text>\n'
             f'  <text x="5" y="{size - pad}" font-size="12" '
             f'font-family="monospace">{format_float(float(y.min()), 6)}</text>\n'
             f'  <text x="5" y="{pad}" font-size="12" '
             f'font-family="monospace">{format_float(float(y.max()), 6)}</text>\n')
    svg = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">\n'
           f'  <rect x="{pad}" y="{pad}" width="{size - 2 * pad}" '
           f'height="{size - 2 * pad}" fill="none" stroke="#888"/>\n'
           f'  <polyline points="{pts}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>\n'
           f'{ticks}'
           f'  <text x="{size // 2 - 20}" y="{size - 15}" font-size="13" '
           f'font-family="monospace">{xlabel}</text>\n'
           f'  <text x="10" y="{size // 2}" font-size="13" '
           f'font-family="monospace" transform="rotate(-90 14 {size // 2})">{ylabel}</text>\n'
           f'</svg>\n')
    path.write_text(svg, encoding="utf-8")
    return path


def write_residual_csv(path: Path, field) -> Path:
    """ResidualField as (node angle, residual value) rows."""
    return write_csv(path, ["angle", "residual"],
                     zip(field.grid.angles, field.values))


def write_residual_json(path: Path, field) -> Path:
    """ResidualField as its sine expansion plus grid metadata."""
    return write_json(path, {"grid_size": field.grid.size,
                             "grid_shift": field.grid.shift,
                             "cosine_residue": field.cosine_residue,
                             "sine_coeffs": field.sine_coeffs})
