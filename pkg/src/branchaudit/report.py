"""CSV and SVG output.

CSV floats are written with 17 significant digits and rows always come out
in a fixed order, so a given configuration reproduces its files byte for
byte. SVGs are plain hand-written polylines over the same sample arrays
that go into the sibling CSV.
"""

from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .preimage import PreimageQuery, closed_form_preimage
from .region import Region, Window

RED = "#d62728"
BLUE = "#1f77b4"
GREY = "#888888"


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def write_csv(path: Path, header, rows) -> Path:
    path = Path(path)
    path.write_text(csv_text(header, rows))
    return path


def read_csv(path: Path):
    lines = Path(path).read_text().splitlines()
    header = lines[0].split(",")
    return header, [line.split(",") for line in lines[1:]]


def curve_rows(ts, pts):
    return [(float(t), float(z.real), float(z.imag)) for t, z in zip(ts, pts)]


# -- figures -----------------------------------------------------------------


def fig1_samples(samples: int = 1000, r_max: float = 1e3):
    cv = closed_form_preimage(PreimageQuery("F1", r_max=r_max, samples=samples))
    return cv.ts, cv.samples


def fig2_samples(samples: int = 1000, r_max: float = 1e3):
    cv = closed_form_preimage(PreimageQuery("F2", r_max=r_max, samples=samples))
    return cv.ts, cv.samples


def fig3_parts(window: Window, samples: int = 400):
    """Sampled boundary pieces of the default exclusions, keyed by part name.

    Each value is (params, points, kind) with kind 'line' or 'marker'.
    """
    ray_len = max(-window.x0, 0.0)
    t = np.linspace(0.0, ray_len, samples)
    ang = np.linspace(math.pi / 2, 3 * math.pi / 2, samples)
    diam = np.linspace(0.0, 1.0, samples)
    return {
        "ray": (t, -t + 0j, "line"),
        "semicircle": (ang, 0.5j + 0.5 * np.exp(1j * ang), "line"),
        "segment": (diam, 1j * diam, "line"),
        "point_0": (np.array([0.0]), np.array([0j]), "marker"),
        "point_i": (np.array([0.0]), np.array([1j]), "marker"),
        "point_minus_i": (np.array([0.0]), np.array([-1j]), "marker"),
    }


# -- SVG ---------------------------------------------------------------------


class SvgCanvas:
    """Maps a complex-plane window onto a square pixel canvas."""

    def __init__(self, window: Window, size: int = 480, margin: int = 24, title: str = ""):
        self.window = window
        self.size = size
        self.margin = margin
        self.sx = (size - 2 * margin) / (window.x1 - window.x0)
        self.sy = (size - 2 * margin) / (window.y1 - window.y0)
        self.items = []
        self.title = title

    def px(self, z):
        z = np.asarray(z, dtype=complex)
        x = self.margin + (z.real - self.window.x0) * self.sx
        y = self.margin + (self.window.y1 - z.imag) * self.sy
        return x, y

    def unpx(self, x, y) -> complex:
        re = (x - self.margin) / self.sx + self.window.x0
        im = self.window.y1 - (y - self.margin) / self.sy
        return complex(re, im)

    def axes(self):
        w = self.window
        if w.y0 <= 0 <= w.y1:
            self.polyline([w.x0, w.x1], GREY, 0.6, cls="axis")
        if w.x0 <= 0 <= w.x1:
            self.polyline([complex(0, w.y0), complex(0, w.y1)], GREY, 0.6, cls="axis")
        for k in range(math.ceil(w.x0), math.floor(w.x1) + 1):
            x, y = self.px(complex(k, 0))
            self.items.append(f'<line class="tick" x1="{x:.6f}" y1="{y - 3:.6f}" x2="{x:.6f}" '
                              f'y2="{y + 3:.6f}" stroke="{GREY}" stroke-width="0.6"/>')
        for k in range(math.ceil(w.y0), math.floor(w.y1) + 1):
            x, y = self.px(complex(0, k))
            self.items.append(f'<line class="tick" x1="{x - 3:.6f}" y1="{y:.6f}" x2="{x + 3:.6f}" '
                              f'y2="{y:.6f}" stroke="{GREY}" stroke-width="0.6"/>')

    def polyline(self, pts, color=RED, width=2.0, cls="curve", name=""):
        x, y = self.px(pts)
        coords = " ".join(f"{a:.6f},{b:.6f}" for a, b in zip(np.atleast_1d(x), np.atleast_1d(y)))
        self.items.append(f'<polyline class="{cls}" data-name="{name}" points="{coords}" fill="none" '
                          f'stroke="{color}" stroke-width="{width}"/>')

    def marker(self, z, color=RED, radius=3.5, name=""):
        x, y = self.px(z)
        self.items.append(f'<circle class="marker" data-name="{name}" cx="{float(x):.6f}" cy="{float(y):.6f}" '
                          f'r="{radius}" fill="{color}"/>')

    def filled(self, pts, color=RED, opacity=0.25, name=""):
        x, y = self.px(pts)
        coords = " ".join(f"{a:.6f},{b:.6f}" for a, b in zip(x, y))
        self.items.append(f'<polygon class="fill" data-name="{name}" points="{coords}" fill="{color}" '
                          f'fill-opacity="{opacity}" stroke="none"/>')

    def render(self) -> str:
        s = self.size
        head = (f'<?xml version="1.0" encoding="UTF-8"?>\n'
                f'<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">\n'
                f'<title>{escape(self.title)}</title>\n'
                f'<rect x="0" y="0" width="{s}" height="{s}" fill="white"/>\n')
        return head + "\n".join(self.items) + "\n</svg>\n"

    def save(self, path: Path) -> Path:
        path = Path(path)
        path.write_text(self.render())
        return path


def curve_svg(window: Window, pts, title: str, name: str) -> SvgCanvas:
    canvas = SvgCanvas(window, title=title)
    canvas.axes()
    canvas.polyline(pts, RED, name=name)
    return canvas


def region_svg(window: Window, parts: dict, title: str, traces=(), region: Region | None = None) -> SvgCanvas:
    canvas = SvgCanvas(window, title=title)
    canvas.axes()
    for name, (_, pts, kind) in parts.items():
        if name == "semicircle":
            canvas.filled(pts, RED, name="semidisk")
        if kind == "line":
            canvas.polyline(pts, RED, name=name)
        else:
            canvas.marker(pts[0], RED, name=name)
    for k, cv in enumerate(traces):
        canvas.polyline(cv.samples, BLUE, name=f"trace_{k}")
    return canvas


def svg_polylines(text: str):
    """Polyline point lists of an SVG document, keyed by data-name."""
    import xml.etree.ElementTree as ET

    root = ET.fromstring(text)
    out = {}
    for el in root.iter("{http://www.w3.org/2000/svg}polyline"):
        pts = [tuple(map(float, pair.split(","))) for pair in el.get("points").split()]
        out[el.get("data-name")] = pts
    return out
