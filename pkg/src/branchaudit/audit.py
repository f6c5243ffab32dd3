"""Numerical audit of the analyticity of f on the region.

The pipeline is: scan f along paths for jumps, bisect each jump down to a
point on the discontinuity locus, follow the locus with a
predictor-corrector march, cut it out of the region, and check that f is
constant on every remaining grid component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from . import core
from .errors import AuditFailure, DomainError, ParameterError, SpuriousBracketError
from .functions import (
    DEFAULT_C,
    PhaseParam,
    _phase,
    log_arguments,
    make_f,
    rational_F3,
    rational_F3_derivative,
)
from .region import (
    DEFAULT_GUARD,
    ParamCurve,
    Region,
    Window,
    build_paper_region,
    connected_components,
)

DEFAULT_JUMP_THRESHOLD = 1.0
DEFAULT_PATH_STEP = 1e-3
DEFAULT_ZERO_TOL = 1e-9
DEFAULT_PROBE_RADII = (1e-2, 1e-3, 1e-4)
DEFAULT_CONSTANCY_TOL = 1e-8


def default_h(z) -> float:
    return 1e-5 * max(1.0, abs(z))


def cr_residual(func, z, h: float | None = None) -> float:
    """|d func / d conj(z)| from a centred four-point stencil."""
    z = complex(z)
    if h is None:
        h = default_h(z)
    if not h > 0:
        raise ParameterError("h must be positive")
    dx = (func(z + h) - func(z - h)) / (2 * h)
    dy = (func(z + 1j * h) - func(z - 1j * h)) / (2 * h)
    return float(abs(dx + 1j * dy))


# -- paths -------------------------------------------------------------------


@dataclass(frozen=True)
class Path:
    waypoints: tuple
    step: float

    def __post_init__(self):
        if len(self.waypoints) < 2:
            raise ParameterError("a path needs at least two waypoints")
        if not self.step > 0:
            raise ParameterError("path step must be positive")
        w = np.asarray(self.waypoints, dtype=complex)
        if np.any(np.diff(w) == 0):
            raise ParameterError("consecutive waypoints must be distinct")

    def samples(self) -> np.ndarray:
        w = np.asarray(self.waypoints, dtype=complex)
        pieces = [w[:1]]
        for a, b in zip(w[:-1], w[1:]):
            k = max(1, math.ceil(abs(b - a) / self.step))
            t = np.arange(1, k + 1) / k
            pieces.append(a + t * (b - a))
        return np.concatenate(pieces)


def arc_path(radius: float, start: float, stop: float, step: float = DEFAULT_PATH_STEP,
             center: complex = 0j) -> Path:
    """Polyline through points of a circular arc, chords no longer than ``step``."""
    k = max(1, math.ceil(radius * abs(stop - start) / step))
    ang = np.linspace(start, stop, k + 1)
    return Path(tuple(center + radius * np.exp(1j * ang)), step)


def segment_path(a, b, step: float = DEFAULT_PATH_STEP) -> Path:
    return Path((complex(a), complex(b)), step)


@dataclass
class Jump:
    index: int
    a: complex
    b: complex
    value: complex  # func(b) - func(a)

    @property
    def magnitude(self) -> float:
        return abs(self.value)


@dataclass
class PathScan:
    jumps: list
    gaps: list  # (a, b) pairs where a sample hit a domain error
    samples: np.ndarray
    values: np.ndarray


def _evaluate(func, pts):
    """Evaluate func on points; NaN where it raises a domain error."""
    try:
        vals = np.asarray(func(pts), dtype=complex)
        if vals.shape == pts.shape:
            return vals
    except DomainError:
        pass
    out = np.empty(pts.shape, dtype=complex)
    for i, z in enumerate(pts.flat):
        try:
            out.flat[i] = func(complex(z))
        except DomainError:
            out.flat[i] = complex(np.nan, np.nan)
    return out


def path_scan(func, path: Path, jump_threshold: float = DEFAULT_JUMP_THRESHOLD) -> PathScan:
    """Consecutive samples along ``path`` whose values differ by more than the threshold."""
    pts = path.samples()
    vals = _evaluate(func, pts)
    bad = np.isnan(vals)
    jumps, gaps = [], []
    diff = np.diff(vals)
    for i in range(len(pts) - 1):
        if bad[i] or bad[i + 1]:
            gaps.append((complex(pts[i]), complex(pts[i + 1])))
        elif abs(diff[i]) > jump_threshold:
            jumps.append(Jump(i, complex(pts[i]), complex(pts[i + 1]), complex(diff[i])))
    return PathScan(jumps, gaps, pts, vals)


# -- bisection ---------------------------------------------------------------


@dataclass
class Crossing:
    point: complex
    a: complex
    b: complex
    jump: complex
    crossed: str | None = None  # which log argument crossed the cut
    cut_distance: float | None = None  # distance of that argument to the cut at `point`


def crossed_argument(a, b, p=DEFAULT_C):
    """Name of the log argument of f whose angle wraps between a and b."""
    args_a, args_b = log_arguments(complex(a), p), log_arguments(complex(b), p)
    best, best_gap = None, math.pi
    for name in args_a:
        try:
            gap = abs(core.principal_arg(args_b[name]) - core.principal_arg(args_a[name]))
        except DomainError:
            continue
        if gap > best_gap:
            best, best_gap = name, gap
    return best


def bisect_discontinuity(func, a, b, tol: float = 1e-10,
                         jump_threshold: float = DEFAULT_JUMP_THRESHOLD, phase=None) -> Crossing:
    """Shrink the bracket [a, b] around a jump of ``func`` below length ``tol``.

    With ``phase`` given (or carried by ``func``, as for :func:`make_f`), the
    crossing also names which of F1, F2, F3, z crossed the cut.
    """
    a, b = complex(a), complex(b)
    if not abs(b - a) > tol:
        raise ParameterError("bracket is already shorter than tol")
    fa, fb = func(a), func(b)
    if not abs(fb - fa) > jump_threshold:
        raise SpuriousBracketError(f"no jump between {a} and {b}")
    for _ in range(400):
        if abs(b - a) < tol:
            break
        m = (a + b) / 2
        if m in (a, b):
            break
        fm = func(m)
        left, right = abs(fm - fa), abs(fb - fm)
        if left > jump_threshold and left >= right:
            b, fb = m, fm
        elif right > jump_threshold:
            a, fa = m, fm
        else:
            raise SpuriousBracketError(f"jump vanished under refinement near {m}")
    point = (a + b) / 2
    phase = phase if phase is not None else getattr(func, "phase", None)
    crossed = dist = None
    if phase is not None:
        crossed = crossed_argument(a, b, phase)
        if crossed is not None:
            dist = float(core.cut_distance(log_arguments(point, phase)[crossed]))
    return Crossing(point, a, b, complex(fb - fa), crossed, dist)


# -- continuation of the F3 cut locus ------------------------------------------


def _project(z, p, iters: int = 30):
    """Newton on im F3 along its gradient; returns (z, converged)."""
    for _ in range(iters):
        w = rational_F3(z, p)
        g = w.imag
        grad = 1j * rational_F3_derivative(z, p).conjugate()
        n2 = abs(grad) ** 2
        if n2 == 0:
            return z, False
        dz = -g * grad / n2
        z = z + dz
        if abs(dz) <= 1e-15 * max(1.0, abs(z)):
            break
    w = rational_F3(z, p)
    return z, abs(w.imag) <= 1e-12 * max(1.0, abs(w))


def _march(z0, p, window: Window, step: float, sign: int, min_step: float, max_samples: int):
    pts = [z0]
    z = z0
    h = 0.9 * step
    status = "max-samples"
    while len(pts) < max_samples:
        if not window.contains(z):
            status = "exited"
            break
        if abs(z - 1j) < 1.5 * step:
            pts.append(1j)
            status = "reached-i"
            break
        if abs(z) < 1.5 * step:
            status = "reached-origin"
            break
        d = rational_F3_derivative(z, p)
        if d == 0:
            status = "step-collapse"
            break
        tangent = sign * (-d.conjugate()) / abs(d)
        accepted = False
        while h >= min_step:
            zc, ok = _project(z + h * tangent, p)
            move = zc - z
            if ok and 0 < abs(move) <= step and (move * tangent.conjugate()).real > 0 \
                    and rational_F3(zc, p).real < 0:
                d_new = rational_F3_derivative(zc, p)
                t_new = sign * (-d_new.conjugate()) / abs(d_new)
                if (t_new * tangent.conjugate()).real > math.cos(0.5):
                    accepted = True
                    break
            h /= 2
        if not accepted:
            status = "step-collapse"
            break
        z = zc
        pts.append(z)
        h = min(1.5 * h, 0.9 * step)
    return pts, status


def trace_discontinuity_curve(p, window, seed, step: float = 1e-2, min_step: float | None = None,
                              max_samples: int = 200_000) -> ParamCurve:
    """Follow {z : F3(z) on the cut} from ``seed`` in both directions.

    The march stops when it leaves ``window``, reaches z = i (appended
    exactly) or approaches the origin. Samples are ordered by the cut
    parameter r = -F3(z), which grows monotonically away from i. A failed
    step-size search ends the march early and sets ``flags['partial']``.
    """
    p = _phase(p)
    window = Window.coerce(window)
    if not step > 0:
        raise ParameterError("step must be positive")
    if min_step is None:
        min_step = step * 1e-4
    z0, ok = _project(complex(seed), p)
    if not ok or rational_F3(z0, p).real > 0:
        raise ParameterError(f"seed {seed} is not on the F3 cut locus")
    fwd, s_fwd = _march(z0, p, window, step, +1, min_step, max_samples)
    bwd, s_bwd = _march(z0, p, window, step, -1, min_step, max_samples)
    pts = np.array(bwd[::-1] + fwd[1:], dtype=complex)
    ts = -np.asarray(rational_F3(np.where(pts == 0, 1, pts), p)).real
    ts[pts == 1j] = 0.0
    keep = np.concatenate([[True], np.diff(ts) > 0])
    pts, ts = pts[keep], ts[keep]
    flags = {
        "partial": "step-collapse" in (s_fwd, s_bwd),
        "ends": (s_bwd, s_fwd),
        "phase": p.c,
        "step": step,
    }
    return ParamCurve.trace(pts, ts, flags=flags)


# -- zeros -------------------------------------------------------------------


@dataclass
class ZeroRecord:
    location: complex
    isolated: bool
    witness_radius: float
    cluster_size: int
    probe_hits: dict = field(default_factory=dict)


@dataclass
class ZeroReport:
    records: list
    zero_mask: np.ndarray
    window: Window
    n: int

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)


def classify_zero(func, z0, probe_radii=DEFAULT_PROBE_RADII, region: Region | None = None,
                  zero_tol: float = DEFAULT_ZERO_TOL, n_probe: int = 16):
    """Count zeros on circles of each probe radius around z0."""
    hits = {}
    for rho in probe_radii:
        ring = z0 + rho * np.exp(2j * math.pi * (np.arange(n_probe) + 0.5) / n_probe)
        if region is not None:
            ring = ring[region.contains(ring)]
        if ring.size == 0:
            hits[rho] = 0
            continue
        vals = _evaluate(func, ring)
        hits[rho] = int(np.sum(np.abs(vals) < zero_tol))
    found = [rho for rho, k in hits.items() if k > 0]
    if found:
        return False, min(found), hits
    return True, max(probe_radii), hits


def _newton_zero(func, z, window, region, zero_tol, iters=60):
    for _ in range(iters):
        try:
            fz = func(z)
            if abs(fz) < zero_tol:
                return z
            h = 1e-6 * max(1.0, abs(z))
            d = (func(z + h) - func(z - h)) / (2 * h)
        except DomainError:
            return None
        if d == 0 or not np.isfinite(d):
            return None
        z = z - fz / d
        if not window.contains(z) or (region is not None and not region.contains(z)):
            return None
    return None


def isolated_zero_audit(func, region: Region | None, window, n: int,
                        probe_radii=DEFAULT_PROBE_RADII, zero_tol: float = DEFAULT_ZERO_TOL) -> ZeroReport:
    """Find zeros of ``func`` on a grid and classify each as isolated or not.

    Cells with |func| < zero_tol are grouped into 8-connected clusters.
    Sharp local minima of |func| are polished by Newton's method to catch
    isolated zeros that fall between grid centres. A zero is isolated (at
    the probed resolution) when no probe circle around it contains a zero.
    """
    if n < 64:
        raise ParameterError(f"grid size must be >= 64, got {n}")
    window = Window.coerce(window)
    _, _, Z = window.centers(n)
    inside = region.contains(Z) if region is not None else np.ones(Z.shape, dtype=bool)
    A = np.full(Z.shape, np.inf)
    vals = _evaluate(func, Z[inside])
    A[inside] = np.where(np.isnan(vals), np.inf, np.abs(vals))
    zero_mask = A < zero_tol

    records = []
    labels, count = ndimage.label(zero_mask, structure=np.ones((3, 3)))
    for k in range(1, count + 1):
        cells = np.argwhere(labels == k)
        zs = Z[labels == k]
        centroid = zs.mean()
        rep = complex(zs[np.argmin(np.abs(zs - centroid))])
        isolated, radius, hits = classify_zero(func, rep, probe_radii, region, zero_tol)
        if len(cells) > 1:
            isolated = False
        records.append(ZeroRecord(rep, isolated, radius, len(cells), hits))

    finite = np.where(np.isfinite(A), A, -np.inf)
    local_min = (A == ndimage.minimum_filter(A, size=3, mode="nearest")) & np.isfinite(A)
    dip = A < 0.5 * ndimage.maximum_filter(finite, size=3, mode="nearest")
    cell = max(window.cell_size(n))
    for z in Z[local_min & dip & ~zero_mask]:
        root = _newton_zero(func, complex(z), window, region, zero_tol)
        if root is None:
            continue
        if any(abs(root - r.location) < cell for r in records):
            continue
        zcell = window.cell_of(root, n)
        if zcell is not None and zero_mask[zcell]:
            continue
        isolated, radius, hits = classify_zero(func, root, probe_radii, region, zero_tol)
        records.append(ZeroRecord(root, isolated, radius, 1, hits))
    records.sort(key=lambda r: (r.location.real, r.location.imag))
    return ZeroReport(records, zero_mask, window, n)


# -- constancy audit ---------------------------------------------------------


@dataclass
class ComponentRecord:
    label: int
    representative: complex
    size: int
    value: complex
    max_deviation: float


@dataclass
class AuditReport:
    c: float
    window: Window
    n: int
    jumps: list  # Crossing records that seeded traces
    traces: list  # ParamCurve numeric traces of the discontinuity locus
    components: list  # ComponentRecord per grid component
    excluded_trace: bool
    anchors: dict  # name -> (point, component label, f value)
    constant: bool
    constancy_tol: float
    zero_report: ZeroReport | None = None

    @property
    def component_count(self) -> int:
        return len(self.components)

    @property
    def discontinuity_trace(self) -> ParamCurve | None:
        return self.traces[0] if self.traces else None

    def values(self):
        return [rec.value for rec in self.components]


ANCHORS = {
    "case_I": complex(math.cos(math.pi / 4), math.sin(math.pi / 4)),
    "case_II": complex(math.cos(3 * math.pi / 4), math.sin(3 * math.pi / 4)),
}


def locate_discontinuities(func, p, region: Region, window, path_step: float = DEFAULT_PATH_STEP,
                           jump_threshold: float = DEFAULT_JUMP_THRESHOLD, trace_step: float = 1e-2):
    """Scan two circles for jumps of ``func`` inside ``region`` and trace each locus.

    The outer circle (radius > 1) crosses the outer F3 branch; the inner one
    (radius 1/2) catches the inner branch when it leaves the excluded
    half-disk. Jumps located outside the region are discarded.
    """
    p = _phase(p)
    window = Window.coerce(window)
    reach = min(-window.x0, window.x1, -window.y0, window.y1)
    radii = [r for r in (max(1.5, 0.6 * reach), 0.5) if r < reach]
    crossings, traces = [], []
    for R in radii:
        scan = path_scan(func, arc_path(R, -math.pi + 0.02, math.pi - 0.02, path_step), jump_threshold)
        for jump in scan.jumps:
            try:
                cr = bisect_discontinuity(func, jump.a, jump.b, jump_threshold=jump_threshold, phase=p)
            except SpuriousBracketError:
                continue
            if cr.crossed != "F3" or not region.contains(cr.point):
                continue
            if any(t.distance(cr.point) < 10 * trace_step for t in traces):
                continue
            crossings.append(cr)
            traces.append(trace_discontinuity_curve(p, window, cr.point, trace_step))
    return crossings, traces


def component_constancy_audit(p=DEFAULT_C, window=(-6, 6, -6, 6), n: int = 600, exclude_trace: bool = True,
                              func=None, guard: float = DEFAULT_GUARD,
                              constancy_tol: float = DEFAULT_CONSTANCY_TOL, trace_step: float = 1e-2,
                              raise_on_failure: bool = True) -> AuditReport:
    """Check that f is constant on every grid component of the region.

    With ``exclude_trace`` the traced discontinuity locus is cut out first.
    A component on which f varies by more than ``constancy_tol`` raises
    :class:`AuditFailure` carrying the report (unless ``raise_on_failure``
    is false).
    """
    if n < 200:
        raise ParameterError(f"grid size must be >= 200, got {n}")
    p = _phase(p)
    window = Window.coerce(window)
    func = func if func is not None else make_f(p)
    base = build_paper_region("fig3", guard)
    crossings, traces = locate_discontinuities(func, p, base, window, trace_step=trace_step)
    region = base.with_curves(*traces, name="fig3-minus-trace") if exclude_trace else base
    comps = connected_components(region, window, n)

    Z = comps.centers()
    free = comps.labels > 0
    vals = np.full(Z.shape, np.nan + 0j)
    vals[free] = _evaluate(func, Z[free])
    flat_labels = comps.labels[free]
    flat_vals = vals[free]

    records = []
    for k in range(1, comps.count + 1):
        v = flat_vals[flat_labels == k]
        ref = complex(np.median(v.real), np.median(v.imag))
        dev = float(np.max(np.abs(v - ref)))
        records.append(ComponentRecord(k, comps.representatives[k - 1], comps.sizes[k - 1], ref, dev))

    anchors = {}
    for name, z in ANCHORS.items():
        anchors[name] = (z, comps.label_at(z), complex(func(z)))

    constant = all(rec.max_deviation < constancy_tol for rec in records)
    report = AuditReport(p.c, window, n, crossings, traces, records, exclude_trace, anchors,
                         constant, constancy_tol)
    if not constant and raise_on_failure:
        worst = max(records, key=lambda rec: rec.max_deviation)
        raise AuditFailure(
            f"f is not constant on component {worst.label} (deviation {worst.max_deviation:.3g})", report)
    return report
