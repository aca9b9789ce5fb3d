"""Deterministic CSV tables, hand-written SVG plots and the run manifest."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence
from xml.sax.saxutils import escape

import numpy as np

__all__ = ["append_manifest", "atomic_write", "csv_bytes", "format_value", "loglog_svg", "polygon_svg", "text_svg", "write_csv"]


def format_value(v) -> str:
    """Exact text for rationals, shortest round-trip text for floats."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if v is None:
        return ""
    return str(v)


def csv_bytes(rows: Sequence[dict]) -> bytes:
    """CSV with a header from the union of row keys in first-seen order and ``\\n`` line ends."""
    keys: list[str] = []
    for r in rows:
        for k in r:
            if k not in keys:
                keys.append(k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys)
    for r in rows:
        w.writerow([format_value(r.get(k)) for k in keys])
    return buf.getvalue().encode()


def atomic_write(path: Path, data: bytes) -> Path:
    """Write through a temporary file in the target directory and rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_csv(path: Path, rows: Sequence[dict]) -> Path:
    return atomic_write(path, csv_bytes(rows))


def append_manifest(out_dir: Path, record: dict) -> Path:
    """Append one JSON line to ``manifest.jsonl``."""
    path = Path(out_dir) / "manifest.jsonl"
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(record, sort_keys=True) + "\n")
    return path


# --- SVG ------------------------------------------------------------------------------------------

W, H, PAD = 480, 360, 56
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _num(v: float) -> str:
    return f"{v:.3f}"


def _frame(title: str, xlabel: str, ylabel: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
        f'<rect x="{PAD}" y="{PAD // 2}" width="{W - 3 * PAD // 2}" height="{H - 2 * PAD}" '
        'fill="none" stroke="black"/>',
        f'<text x="{W // 2}" y="16" text-anchor="middle" font-size="13">{escape(title)}</text>',
        f'<text x="{W // 2}" y="{H - 8}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
        f'<text x="14" y="{H // 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {H // 2})">{escape(ylabel)}</text>',
    ]


def _mapper(lo: float, hi: float, a: float, b: float):
    span = hi - lo if hi > lo else 1.0
    return lambda v: a + (v - lo) / span * (b - a)


def loglog_svg(series: Iterable[tuple[str, Sequence[float], Sequence[float]]],
               fits: Iterable[tuple[str, float, float]] = (), title: str = "",
               xlabel: str = "x", ylabel: str = "y") -> str:
    """Log-log scatter of ``(label, x, y)`` series with fitted lines ``y = exp(b) x^a`` given as ``(label, a, b)``."""
    series = [(lab, np.asarray(x, float), np.abs(np.asarray(y, float))) for lab, x, y in series]
    fits = list(fits)
    pos = [(x[(x > 0) & (y > 0)], y[(x > 0) & (y > 0)]) for _, x, y in series]
    lx = np.log10(np.concatenate([p[0] for p in pos])) if pos else np.array([0.0, 1.0])
    ly = np.log10(np.concatenate([p[1] for p in pos])) if pos else np.array([0.0, 1.0])
    X = _mapper(lx.min(), lx.max(), PAD, W - PAD // 2)
    Y = _mapper(ly.min(), ly.max(), H - 3 * PAD // 2, PAD // 2)
    out = _frame(title, f"log10 {xlabel}", f"log10 {ylabel}")
    for i, ((label, _, _), (x, y)) in enumerate(zip(series, pos)):
        c = COLORS[i % len(COLORS)]
        for a, b in zip(np.log10(x), np.log10(y)):
            out.append(f'<circle cx="{_num(X(a))}" cy="{_num(Y(b))}" r="3" fill="{c}"/>')
        out.append(f'<text x="{W - 3 * PAD // 2}" y="{PAD + 14 * i}" font-size="11" fill="{c}">'
                   f'{escape(label)}</text>')
    for i, (label, slope, intercept) in enumerate(fits):
        c = COLORS[i % len(COLORS)]
        x0, x1 = lx.min(), lx.max()
        y0 = (slope * x0 * math.log(10) + intercept) / math.log(10)
        y1 = (slope * x1 * math.log(10) + intercept) / math.log(10)
        out.append(f'<line x1="{_num(X(x0))}" y1="{_num(Y(y0))}" x2="{_num(X(x1))}" y2="{_num(Y(y1))}" '
                   f'stroke="{c}" stroke-dasharray="4 3"><title>{escape(label)}: slope {slope:.4f}</title></line>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def polygon_svg(pieces: dict[str, Sequence[tuple[Fraction, Fraction]]], title: str = "",
                xlabel: str = "1/r", ylabel: str = "1/r~") -> str:
    """Polygons on the unit square; exact vertices are kept in ``data-vertices``."""
    X = _mapper(0.0, 1.0, PAD, W - PAD // 2)
    Y = _mapper(0.0, 1.0, H - 3 * PAD // 2, PAD // 2)
    out = _frame(title, xlabel, ylabel)
    for i, (name, verts) in enumerate(pieces.items()):
        if not verts:
            continue
        c = COLORS[i % len(COLORS)]
        pts = " ".join(f"{_num(X(float(x)))},{_num(Y(float(y)))}" for x, y in verts)
        exact = " ".join(f"{x},{y}" for x, y in verts)
        tag = "polyline" if len(verts) < 3 else "polygon"
        fill = "none" if tag == "polyline" else c
        out.append(f'<{tag} data-piece="{escape(name)}" data-vertices="{exact}" points="{pts}" '
                   f'fill="{fill}" fill-opacity="0.3" stroke="{c}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def text_svg(lines: Sequence[str], title: str = "") -> str:
    """Monospaced listing, one line per row."""
    h = 40 + 16 * len(lines)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="960" height="{h}" viewBox="0 0 960 {h}">',
           f'<rect x="0" y="0" width="960" height="{h}" fill="white"/>',
           f'<text x="10" y="20" font-size="13">{escape(title)}</text>']
    for i, line in enumerate(lines):
        color = "#d62728" if line.startswith("[FAIL]") else "black"
        out.append(f'<text x="10" y="{40 + 16 * i}" font-family="monospace" font-size="11" '
                   f'fill="{color}">{escape(line)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
