"""Open planar regions described as the plane minus closed excluded pieces.

A :class:`Region` is the complex plane with a finite list of excluded
primitives removed (curves, disks or half-disks, points, half-planes). All
membership questions reduce to the exact Euclidean distance from a point
to the excluded set, compared against a small standoff ``guard``.

Plain-text table format (``region_to_table``/``region_from_table``)::

    # guard=1e-06 name=fig3
    kind<TAB>params<TAB>closure

one primitive per line. ``params`` is a space separated list of
``key=value``; complex values are written ``re,im`` with 17 significant
digits, trace samples as ``t:re:im`` joined by ``;``. ``closure`` is a
comma separated list of ``closed``/``open`` flags, one per endpoint (one
flag for disks, points and half-planes).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree

from .errors import ParameterError

DEFAULT_GUARD = 1e-6
CURVE_KINDS = ("circle-arc", "segment", "ray", "numeric-trace")
VARIANTS = ("fig3", "upper-half-simply-connected")


# -- windows -----------------------------------------------------------------


@dataclass(frozen=True)
class Window:
    """Axis-aligned rectangle [x0, x1] x [y0, y1]."""

    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        vals = (self.x0, self.x1, self.y0, self.y1)
        if not all(math.isfinite(v) for v in vals):
            raise ParameterError(f"window bounds must be finite: {vals}")
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise ParameterError(f"degenerate window: {vals}")

    @classmethod
    def square(cls, half: float) -> "Window":
        return cls(-half, half, -half, half)

    @classmethod
    def coerce(cls, w) -> "Window":
        return w if isinstance(w, Window) else cls(*map(float, w))

    def as_tuple(self):
        return (self.x0, self.x1, self.y0, self.y1)

    def cell_size(self, n: int):
        return (self.x1 - self.x0) / n, (self.y1 - self.y0) / n

    def centers(self, n: int):
        """Cell centres of an n x n grid; returns (xs, ys, Z) with Z[row, col]."""
        dx, dy = self.cell_size(n)
        xs = self.x0 + (np.arange(n) + 0.5) * dx
        ys = self.y0 + (np.arange(n) + 0.5) * dy
        Z = xs[None, :] + 1j * ys[:, None]
        return xs, ys, Z

    def cell_of(self, z: complex, n: int):
        dx, dy = self.cell_size(n)
        col = int(math.floor((z.real - self.x0) / dx))
        row = int(math.floor((z.imag - self.y0) / dy))
        if not (0 <= row < n and 0 <= col < n):
            return None
        return row, col

    def contains(self, z) -> bool:
        return self.x0 <= z.real <= self.x1 and self.y0 <= z.imag <= self.y1


# -- excluded primitives -----------------------------------------------------


def _seg_distance(z, a, b):
    """Distance from points z (array) to the closed segment [a, b]."""
    d = b - a
    L2 = abs(d) ** 2
    if L2 == 0:  # endpoints so close that the squared length underflows
        return np.abs(z - a)
    t = np.clip(((z - a) * np.conj(d)).real / L2, 0.0, 1.0)
    return np.abs(z - (a + t * d))


@dataclass(frozen=True, eq=False)
class ParamCurve:
    """Parametric curve t -> z(t) over ``domain``.

    ``params`` by kind:
      circle-arc     center, radius (angles are the domain)
      segment        start, end (domain [0, 1])
      ray            anchor, direction (unit; domain [0, inf))
      numeric-trace  samples (complex array), ts (parameter array)
    """

    kind: str
    params: dict
    domain: tuple
    closure: tuple = (True, True)
    flags: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in CURVE_KINDS:
            raise ParameterError(f"unknown curve kind {self.kind!r}")
        t0, t1 = self.domain
        if not t1 > t0:
            raise ParameterError(f"empty curve domain {self.domain}")
        if self.kind == "circle-arc" and not self.params["radius"] > 0:
            raise ParameterError("arc radius must be positive")
        if self.kind == "segment" and self.params["start"] == self.params["end"]:
            raise ParameterError("segment endpoints coincide")
        if self.kind == "ray" and abs(abs(self.params["direction"]) - 1) > 1e-12:
            raise ParameterError("ray direction must be a unit vector")
        if self.kind == "numeric-trace":
            ts = np.asarray(self.params["ts"], dtype=float)
            pts = np.asarray(self.params["samples"], dtype=complex)
            if len(ts) != len(pts) or len(pts) < 2:
                raise ParameterError("numeric trace needs >= 2 samples with parameters")
            if np.any(np.diff(ts) <= 0):
                raise ParameterError("numeric trace parameters must be strictly increasing")
            if np.any(np.abs(np.diff(pts)) == 0):
                raise ParameterError("numeric trace samples must be pairwise distinct")

    # constructors

    @classmethod
    def segment(cls, start, end, closure=(True, True)):
        return cls("segment", {"start": complex(start), "end": complex(end)}, (0.0, 1.0), tuple(closure))

    @classmethod
    def ray(cls, anchor, direction, closed=True):
        u = complex(direction)
        u /= abs(u)
        return cls("ray", {"anchor": complex(anchor), "direction": u}, (0.0, math.inf), (closed, False))

    @classmethod
    def arc(cls, center, radius, start, stop, closure=(True, True)):
        return cls("circle-arc", {"center": complex(center), "radius": float(radius)},
                   (float(start), float(stop)), tuple(closure))

    @classmethod
    def trace(cls, samples, ts, closure=(True, True), flags=None):
        pts = np.asarray(samples, dtype=complex)
        ts = np.asarray(ts, dtype=float)
        return cls("numeric-trace", {"samples": pts, "ts": ts}, (float(ts[0]), float(ts[-1])),
                   tuple(closure), dict(flags or {}))

    # evaluation

    @property
    def samples(self):
        return self.params["samples"]

    @property
    def ts(self):
        return self.params["ts"]

    def point(self, t):
        k, p = self.kind, self.params
        t = np.asarray(t, dtype=float)
        if k == "segment":
            out = p["start"] + t * (p["end"] - p["start"])
        elif k == "ray":
            out = p["anchor"] + t * p["direction"]
        elif k == "circle-arc":
            out = p["center"] + p["radius"] * np.exp(1j * t)
        else:
            out = np.interp(t, self.ts, self.samples.real) + 1j * np.interp(t, self.ts, self.samples.imag)
        return complex(out) if out.ndim == 0 else out

    def sample(self, n: int, t_max: float | None = None):
        """n points at evenly spaced parameters (rays are cut at ``t_max``)."""
        if self.kind == "numeric-trace":
            return self.ts.copy(), self.samples.copy()
        t0, t1 = self.domain
        if math.isinf(t1):
            if t_max is None:
                raise ParameterError("sampling a ray needs t_max")
            t1 = t_max
        ts = np.linspace(t0, t1, n)
        return ts, self.point(ts)

    @cached_property
    def _tree(self):
        pts = self.samples
        return cKDTree(np.column_stack([pts.real, pts.imag]))

    def distance(self, z):
        """Exact Euclidean distance from z (scalar or array) to the curve."""
        arr = np.asarray(z, dtype=complex)
        k, p = self.kind, self.params
        if k == "segment":
            d = _seg_distance(arr, p["start"], p["end"])
        elif k == "ray":
            u = p["direction"]
            t = np.maximum(((arr - p["anchor"]) * np.conj(u)).real, 0.0)
            d = np.abs(arr - (p["anchor"] + t * u))
        elif k == "circle-arc":
            d = self._arc_distance(arr)
        else:
            d = self._trace_distance(arr)
        return float(d) if np.ndim(d) == 0 else d

    def _arc_distance(self, z):
        c, R = self.params["center"], self.params["radius"]
        a0, a1 = self.domain
        w = z - c
        ang = np.angle(w)
        # angle measured from the arc start, wrapped into [0, 2*pi)
        rel = np.mod(ang - a0, 2 * math.pi)
        on_span = rel <= (a1 - a0)
        radial = np.abs(np.abs(w) - R)
        ends = np.minimum(np.abs(z - (c + R * np.exp(1j * a0))), np.abs(z - (c + R * np.exp(1j * a1))))
        return np.where(on_span, radial, ends)

    def _trace_distance(self, z):
        # nearest sample, then exact distance to the two adjacent chords
        pts = self.samples
        flat = np.atleast_1d(z).ravel()
        dist, idx = self._tree.query(np.column_stack([flat.real, flat.imag]))
        if self.flags.get("discrete"):
            return dist.reshape(np.shape(z)) if np.ndim(z) else float(dist[0])
        lo = np.clip(idx - 1, 0, len(pts) - 1)
        hi = np.clip(idx + 1, 0, len(pts) - 1)
        d1 = _seg_distance_pairs(flat, pts[lo], pts[idx])
        d2 = _seg_distance_pairs(flat, pts[idx], pts[hi])
        d = np.minimum(d1, d2)
        return d.reshape(np.shape(z)) if np.ndim(z) else d[0]


def _seg_distance_pairs(z, a, b):
    d = b - a
    L2 = np.abs(d) ** 2
    safe = np.where(L2 > 0, L2, 1.0)
    t = np.where(L2 > 0, np.clip(((z - a) * np.conj(d)).real / safe, 0.0, 1.0), 0.0)
    return np.abs(z - (a + t * d))


_HALF_NORMALS = {None: None, "left": -1 + 0j, "right": 1 + 0j, "upper": 1j, "lower": -1j}


@dataclass(frozen=True)
class Disk:
    """Disk |z - center| <= radius, optionally cut to one half."""

    center: complex
    radius: float
    closed: bool = True
    half: str | None = None

    def __post_init__(self):
        if not self.radius > 0:
            raise ParameterError("disk radius must be positive")
        if self.half not in _HALF_NORMALS:
            raise ParameterError(f"unknown half {self.half!r}")

    def distance(self, z):
        arr = np.asarray(z, dtype=complex)
        w = arr - self.center
        R = self.radius
        n = _HALF_NORMALS[self.half]
        if n is None:
            d = np.maximum(np.abs(w) - R, 0.0)
        else:
            # rotate so the kept half is re(w) >= 0
            w = w * np.conj(n)
            inside = (np.abs(w) <= R) & (w.real >= 0)
            arc = np.where(w.real >= 0, np.abs(np.abs(w) - R),
                           np.minimum(np.abs(w - 1j * R), np.abs(w + 1j * R)))
            diam = _seg_distance(w, -1j * R, 1j * R)
            d = np.where(inside, 0.0, np.minimum(arc, diam))
        return float(d) if np.ndim(d) == 0 else d


@dataclass(frozen=True)
class HalfPlane:
    """Closed half-plane {z : re(z * conj(normal)) >= offset}."""

    normal: complex
    offset: float = 0.0
    closed: bool = True

    def distance(self, z):
        arr = np.asarray(z, dtype=complex)
        n = self.normal / abs(self.normal)
        d = np.maximum(self.offset - (arr * np.conj(n)).real, 0.0)
        return float(d) if np.ndim(d) == 0 else d


# -- regions -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Region:
    curves: tuple = ()
    disks: tuple = ()
    points: tuple = ()
    halfplanes: tuple = ()
    guard: float = DEFAULT_GUARD
    name: str = ""

    def __post_init__(self):
        if not (math.isfinite(self.guard) and self.guard > 0):
            raise ParameterError(f"guard must be > 0, got {self.guard}")

    def primitives(self):
        yield from self.curves
        yield from self.disks
        yield from self.halfplanes

    def distance_to_exclusions(self, z):
        arr = np.asarray(z, dtype=complex)
        d = np.full(arr.shape, np.inf)
        for prim in self.primitives():
            d = np.minimum(d, prim.distance(arr))
        for q in self.points:
            d = np.minimum(d, np.abs(arr - q))
        return float(d) if d.ndim == 0 else d

    def contains(self, z):
        d = self.distance_to_exclusions(z)
        return bool(d > self.guard) if np.ndim(d) == 0 else d > self.guard

    def with_curves(self, *curves, name=None) -> "Region":
        return replace(self, curves=self.curves + tuple(curves), name=name or self.name)

    def with_guard(self, guard: float) -> "Region":
        return replace(self, guard=guard)


def build_paper_region(variant: str = "fig3", guard: float = DEFAULT_GUARD) -> Region:
    """The default slit region, or its simply connected upper half-plane variant.

    fig3 excludes the ray x <= 0 on the real axis, the closed left half of the
    disk |z - i/2| <= 1/2, the segment [0, i] and the points 0, i, -i.
    """
    if variant not in VARIANTS:
        raise ParameterError(f"unknown region variant {variant!r}; expected one of {VARIANTS}")
    half_disk = Disk(0.5j, 0.5, closed=True, half="left")
    if variant == "fig3":
        return Region(
            curves=(ParamCurve.ray(0, -1), ParamCurve.segment(0, 1j)),
            disks=(half_disk,),
            points=(0j, 1j, -1j),
            guard=guard,
            name="fig3",
        )
    return Region(disks=(half_disk,), halfplanes=(HalfPlane(-1j),), guard=guard, name=variant)


def region_contains(r: Region, z):
    return r.contains(z)


def distance_to_exclusions(r: Region, z):
    return r.distance_to_exclusions(z)


# -- connectivity ------------------------------------------------------------


@dataclass
class Components:
    labels: np.ndarray  # (n, n) ints, 0 = excluded cell
    count: int
    representatives: list
    sizes: list
    window: Window
    n: int
    block_radius: float

    def label_at(self, z) -> int:
        cell = self.window.cell_of(complex(z), self.n)
        return 0 if cell is None else int(self.labels[cell])

    def centers(self):
        return self.window.centers(self.n)[2]


def connected_components(r: Region, window, n: int, block_radius: float | None = None) -> Components:
    """Label the grid cells inside ``r`` by 4-neighbour flood fill.

    A cell is blocked when its centre lies within ``block_radius`` of the
    excluded set; the default (half a cell, or the guard if larger) makes
    sure two 4-adjacent free cells never straddle an excluded curve.
    """
    if n < 16:
        raise ParameterError(f"grid size must be >= 16, got {n}")
    window = Window.coerce(window)
    dx, dy = window.cell_size(n)
    if block_radius is None:
        # a hair over half a cell: a curve exactly midway between two centres
        # must still block them, whatever the rounding of the distances
        block_radius = max(r.guard, 0.5 * max(dx, dy) * (1 + 1e-9))
    _, _, Z = window.centers(n)
    free = r.distance_to_exclusions(Z) > block_radius
    labels, count = ndimage.label(free)  # default structure = 4-connectivity
    reps, sizes = [], []
    if count:
        flat = labels.ravel()
        sizes = np.bincount(flat, minlength=count + 1)[1:].tolist()
        # first cell of each label in row-major order
        order = np.unique(flat, return_index=True)
        firsts = dict(zip(order[0].tolist(), order[1].tolist()))
        reps = [complex(Z.ravel()[firsts[k]]) for k in range(1, count + 1)]
    return Components(labels, int(count), reps, sizes, window, n, float(block_radius))


# -- plain-text table --------------------------------------------------------


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _cfmt(z: complex) -> str:
    return f"{_fmt(z.real)},{_fmt(z.imag)}"


def _cparse(s: str) -> complex:
    re_, im_ = s.split(",")
    return complex(float(re_), float(im_))


def _closure_fmt(flags) -> str:
    return ",".join("closed" if f else "open" for f in flags)


def _closure_parse(s: str):
    return tuple(tok == "closed" for tok in s.split(","))


def region_to_table(r: Region) -> str:
    lines = [f"# guard={_fmt(r.guard)} name={r.name}", "kind\tparams\tclosure"]
    for cv in r.curves:
        p = cv.params
        if cv.kind == "ray":
            params = f"anchor={_cfmt(p['anchor'])} direction={_cfmt(p['direction'])}"
        elif cv.kind == "segment":
            params = f"start={_cfmt(p['start'])} end={_cfmt(p['end'])}"
        elif cv.kind == "circle-arc":
            params = (f"center={_cfmt(p['center'])} radius={_fmt(p['radius'])} "
                      f"start={_fmt(cv.domain[0])} stop={_fmt(cv.domain[1])}")
        else:
            pts = ";".join(f"{_fmt(t)}:{_fmt(z.real)}:{_fmt(z.imag)}" for t, z in zip(cv.ts, cv.samples))
            params = f"points={pts}"
        lines.append(f"{cv.kind}\t{params}\t{_closure_fmt(cv.closure)}")
    for d in r.disks:
        lines.append(f"disk\tcenter={_cfmt(d.center)} radius={_fmt(d.radius)} half={d.half or 'none'}"
                     f"\t{_closure_fmt([d.closed])}")
    for q in r.points:
        lines.append(f"point\tat={_cfmt(q)}\tclosed")
    for h in r.halfplanes:
        lines.append(f"halfplane\tnormal={_cfmt(h.normal)} offset={_fmt(h.offset)}\t{_closure_fmt([h.closed])}")
    return "\n".join(lines) + "\n"


def region_from_table(text: str) -> Region:
    guard, name = DEFAULT_GUARD, ""
    curves, disks, points, halfplanes = [], [], [], []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                key, _, val = tok.partition("=")
                if key == "guard":
                    guard = float(val)
                elif key == "name":
                    name = val
            continue
        kind, params, closure = line.split("\t")
        if kind == "kind":
            continue
        kv = dict(tok.split("=", 1) for tok in params.split())
        flags = _closure_parse(closure)
        if kind == "ray":
            curves.append(ParamCurve.ray(_cparse(kv["anchor"]), _cparse(kv["direction"]), flags[0]))
        elif kind == "segment":
            curves.append(ParamCurve.segment(_cparse(kv["start"]), _cparse(kv["end"]), flags))
        elif kind == "circle-arc":
            curves.append(ParamCurve.arc(_cparse(kv["center"]), float(kv["radius"]),
                                         float(kv["start"]), float(kv["stop"]), flags))
        elif kind == "numeric-trace":
            rows = [tuple(map(float, item.split(":"))) for item in kv["points"].split(";")]
            ts = [t for t, _, _ in rows]
            pts = [complex(x, y) for _, x, y in rows]
            curves.append(ParamCurve.trace(pts, ts, flags))
        elif kind == "disk":
            half = None if kv["half"] == "none" else kv["half"]
            disks.append(Disk(_cparse(kv["center"]), float(kv["radius"]), flags[0], half))
        elif kind == "point":
            points.append(_cparse(kv["at"]))
        elif kind == "halfplane":
            halfplanes.append(HalfPlane(_cparse(kv["normal"]), float(kv["offset"]), flags[0]))
        else:
            raise ParameterError(f"unknown primitive kind {kind!r}")
    return Region(tuple(curves), tuple(disks), tuple(points), tuple(halfplanes), guard, name)
