"""Sweep tables (CSV) and the band-plus-curves picture (SVG).

The CSV schema is ``alpha,band_top,count,eig_1,...,eig_K`` with one row per
alpha, values rescaled by alpha, blank cells for absent eigenvalues and an
optional trailing ``# warnings: ...`` comment.  The SVG is written by hand
from rect, polyline and text elements only.
"""
import csv
import io
import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

__all__ = [
    "SchemaError",
    "SweepTable",
    "format_number",
    "sweep_to_csv",
    "parse_sweep_csv",
    "render_svg",
]


class SchemaError(ValueError):
    """A sweep CSV does not follow the expected layout."""


def format_number(value):
    """12 significant digits, no exponent for ordinary magnitudes."""
    return format(float(value), ".12g")


@dataclass(frozen=True)
class SweepTable:
    alpha: np.ndarray
    band_top: np.ndarray
    count: np.ndarray
    eigenvalues: np.ndarray  # rows x columns, nan where absent
    warnings: tuple = ()

    @property
    def n_curves(self):
        return self.eigenvalues.shape[1]


def sweep_to_csv(rows):
    """Serialise ``SweepRow`` objects; the number of columns follows the largest count."""
    width = max((len(r.eigenvalues) for r in rows), default=0)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["alpha", "band_top", "count"] + [f"eig_{j + 1}" for j in range(width)])
    notes = []
    for r in rows:
        cells = [format_number(v) for v in r.eigenvalues]
        cells += [""] * (width - len(cells))
        writer.writerow([format_number(r.alpha), format_number(r.band_top), str(r.count)] + cells)
        notes.extend(r.warnings)
    text = out.getvalue()
    if notes:
        text += "# warnings: " + " | ".join(n.replace("\n", " ") for n in notes) + "\n"
    return text


def parse_sweep_csv(text):
    """Read a sweep table back, checking the header, the row widths and the numbers."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    warnings = tuple(ln[len("# warnings:"):].strip() for ln in lines if ln.startswith("# warnings:"))
    body = [ln for ln in lines if not ln.startswith("#")]
    if not body:
        raise SchemaError("empty sweep file")
    reader = list(csv.reader(body))
    header = reader[0]
    if header[:3] != ["alpha", "band_top", "count"]:
        raise SchemaError("header must start with alpha,band_top,count")
    width = len(header) - 3
    if header[3:] != [f"eig_{j + 1}" for j in range(width)]:
        raise SchemaError("eigenvalue columns must be eig_1, eig_2, ...")
    if len(reader) < 2:
        raise SchemaError("sweep file has a header but no rows")
    alpha, band, count, eig = [], [], [], []
    for lineno, row in enumerate(reader[1:], start=2):
        if len(row) != len(header):
            raise SchemaError(f"row {lineno} has {len(row)} cells, expected {len(header)}")
        try:
            alpha.append(float(row[0]))
            band.append(float(row[1]))
            count.append(int(row[2]))
            eig.append([float(c) if c else math.nan for c in row[3:]])
        except ValueError as exc:
            raise SchemaError(f"row {lineno}: {exc}") from None
    eig = np.array(eig, dtype=float).reshape(len(alpha), width)
    return SweepTable(np.array(alpha), np.array(band), np.array(count), eig, warnings)


_WIDTH, _HEIGHT = 720, 480
_MARGIN = (60, 20, 20, 50)  # left, right, top, bottom


def _fmt(v):
    return f"{v:.2f}"


def render_svg(table, title="Spectrum of alpha K_alpha"):
    """The shaded band ``[0, band_top]`` across the alpha range and one polyline per column."""
    left, right, top, bottom = _MARGIN
    x0, x1 = 0.0, float(np.max(table.alpha))
    present = table.eigenvalues[np.isfinite(table.eigenvalues)]
    band_top = float(np.max(table.band_top))
    y1 = max(band_top, float(present.max()) if present.size else band_top) * 1.05
    pw, ph = _WIDTH - left - right, _HEIGHT - top - bottom

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + ph - y / y1 * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<rect class="band" data-ymin="0" data-ymax="{format_number(band_top)}" '
        f'x="{_fmt(px(float(table.alpha.min())))}" y="{_fmt(py(band_top))}" '
        f'width="{_fmt(px(x1) - px(float(table.alpha.min())))}" height="{_fmt(py(0.0) - py(band_top))}" '
        f'fill="#bbbbbb"/>',
    ]
    for j in range(table.n_curves):
        col = table.eigenvalues[:, j]
        keep = np.isfinite(col)
        if not keep.any():
            continue
        pts = " ".join(f"{_fmt(px(a))},{_fmt(py(v))}" for a, v in zip(table.alpha[keep], col[keep]))
        parts.append(f'<polyline class="eigenvalue" data-index="{j + 1}" points="{pts}" '
                     f'fill="none" stroke="black" stroke-width="1.2"/>')
    # axes, ticks and labels
    parts.append(f'<polyline class="axis" points="{left},{top} {left},{top + ph} {left + pw},{top + ph}" '
                 f'fill="none" stroke="black"/>')
    for tick in np.arange(0.0, x1 + 1e-9, max(1.0, math.ceil(x1 / 12.0))):
        parts.append(f'<text x="{_fmt(px(tick))}" y="{top + ph + 18}" font-size="11" '
                     f'text-anchor="middle">{tick:g}</text>')
    for tick in np.arange(0.0, y1 + 1e-9, max(1.0, math.ceil(y1 / 8.0))):
        parts.append(f'<text x="{left - 8}" y="{_fmt(py(tick) + 4)}" font-size="11" '
                     f'text-anchor="end">{tick:g}</text>')
    parts.append(f'<text x="{left + pw / 2:.2f}" y="{_HEIGHT - 12}" font-size="13" '
                 f'text-anchor="middle">alpha</text>')
    parts.append(f'<text x="16" y="{top + ph / 2:.2f}" font-size="13" text-anchor="middle" '
                 f'transform="rotate(-90 16 {top + ph / 2:.2f})">alpha * lambda</text>')
    parts.append(f'<text x="{left + pw / 2:.2f}" y="{top + 14}" font-size="13" '
                 f'text-anchor="middle">{escape(title)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
