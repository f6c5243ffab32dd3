"""Where do F1, F2, F3 and the identity land on the cut?

Two independent routes are provided for every map: the closed-form answer
(``closed_form_preimage``) and a brute-force grid scan of the distance from
F(z) to the cut (``grid_scan_preimage``). For F3 a third route solves the
cut condition exactly: F3(z) = -r is the quadratic

    z^2 - (2i + 2 r e^{-ic}) z - 1 = 0,

whose roots (``f3_preimage_oracle``) trace two curves through i, one out to
infinity and one into the origin. The closed-form answer for F3 is only the
two points {i, -i}, which is what the scan contradicts.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import core
from .errors import EmptyInputError, ParameterError
from .functions import DEFAULT_C, PhaseParam, _phase, eval_F1, eval_F2, eval_F3
from .region import ParamCurve, Window

FUNC_IDS = ("F1", "F2", "F3", "identity")


@dataclass(frozen=True)
class PreimageQuery:
    func_id: str
    c: PhaseParam = PhaseParam(DEFAULT_C)
    r_max: float = 1e3
    samples: int = 1000

    def __post_init__(self):
        if self.func_id not in FUNC_IDS:
            raise ParameterError(f"unknown func_id {self.func_id!r}")
        if not (math.isfinite(self.r_max) and self.r_max > 0):
            raise ParameterError("r_max must be finite and positive")
        if self.samples < 2:
            raise ParameterError("need at least 2 samples")


def cut_parameters(r_max: float, samples: int) -> np.ndarray:
    """r values on [0, r_max]: a uniform band near 0, geometric beyond."""
    band = min(0.1, r_max / 10)
    k = max(1, samples // 4)
    dense = np.linspace(0.0, band, k, endpoint=False)
    m = samples - k
    tail = np.array([r_max]) if m == 1 else np.geomspace(band, r_max, m)
    return np.concatenate([dense, tail])


def f1_cut_curve(r):
    """z with F1(z) = -r: x = -r/(r^2+1), y = r^2/(r^2+1)."""
    r = np.asarray(r, dtype=float)
    d = r * r + 1
    return -r / d + 1j * (r * r / d)


def f2_cut_curve(r):
    """z with F2(z) = -r: z = i r / (r + 1)."""
    r = np.asarray(r, dtype=float)
    return 1j * (r / (r + 1))


def closed_form_preimage(q: PreimageQuery) -> ParamCurve:
    """The cut preimage as derived by hand, sampled in r.

    For F3 the hand derivation only yields the finite set {i, -i}; it comes
    back as a discrete two-point trace.
    """
    if q.func_id == "F3":
        return ParamCurve.trace([1j, -1j], [0.0, 1.0], flags={"discrete": True, "func_id": "F3"})
    rs = cut_parameters(q.r_max, q.samples)
    if q.func_id == "F1":
        pts = f1_cut_curve(rs)
    elif q.func_id == "F2":
        pts = f2_cut_curve(rs)
    else:
        pts = -rs + 0j
    return ParamCurve.trace(pts, rs, flags={"func_id": q.func_id})


def f3_preimage_oracle(p, r: float):
    """Both roots of z^2 - (2i + 2 r e^{-ic}) z - 1 = 0.

    Returns (outer, inner): the larger-magnitude root from the sign-matched
    quadratic formula, and its companion -1/outer from the product of roots.
    """
    p = _phase(p)
    if r < 0:
        raise ParameterError("r must be >= 0")
    b = 2j + 2 * r * p.rotation.conjugate()
    disc = cmath.sqrt(b * b + 4)
    if (b.conjugate() * disc).real < 0:
        disc = -disc
    outer = (b + disc) / 2
    inner = -1 / outer
    return outer, inner


def oracle_sweep(p, rs):
    """Oracle roots for every r in ``rs``; arrays (outer, inner)."""
    pairs = [f3_preimage_oracle(p, float(r)) for r in rs]
    return np.array([a for a, _ in pairs]), np.array([b for _, b in pairs])


def eq12_residuals(s: float, theta: float, p, r: float):
    """Literal left-hand sides of the two real cut conditions for F3.

    First value: the imaginary-part equation (should be 0).
    Second value: real-part LHS minus its right-hand side -2rs.
    """
    p = _phase(p)
    if not s > 0:
        raise ParameterError("s must be positive")
    c = p.c
    sc, cc = math.sin(c), math.cos(c)
    st, ct = math.sin(theta), math.cos(theta)
    eq1 = 2 * s * cc - s * s * st * cc - s * s * ct * sc + ct * sc - st * cc
    eq2 = -2 * s * sc - s * s * ct * cc + s * s * st * sc + ct * cc + st * sc
    return eq1, eq2 + 2 * r * s


def _map(func_id, p):
    if func_id == "F1":
        return eval_F1
    if func_id == "F2":
        return eval_F2
    if func_id == "F3":
        return lambda z: eval_F3(z, p)
    return lambda z: np.asarray(z, dtype=complex)


@dataclass
class ScanResult:
    points: np.ndarray  # hits in row-major order
    mask: np.ndarray  # (n, n) bool
    window: Window
    n: int
    tol: float

    @property
    def cell(self) -> float:
        return max(self.window.cell_size(self.n))


def grid_scan_preimage(func_id: str, p=DEFAULT_C, window=(-2, 2, -2, 2), n: int = 800,
                       tol: float | None = None) -> ScanResult:
    """All cell centres z with dist(F(z), cut) < tol, row-major."""
    if func_id not in FUNC_IDS:
        raise ParameterError(f"unknown func_id {func_id!r}")
    if n < 32:
        raise ParameterError(f"grid size must be >= 32, got {n}")
    window = Window.coerce(window)
    if tol is None:
        tol = max(window.cell_size(n))
    if not tol > 0:
        raise ParameterError("tol must be positive")
    p = _phase(p)
    _, _, Z = window.centers(n)
    ok = (Z != 0) & (Z != 1j)
    mask = np.zeros(Z.shape, dtype=bool)
    vals = _map(func_id, p)(Z[ok])
    mask[ok] = core.cut_distance(vals) < tol
    return ScanResult(Z[mask], mask, window, n, float(tol))


def compare_preimages(closed: ParamCurve, scanned) -> float:
    """One-sided Hausdorff distance from the scanned points to the curve."""
    pts = scanned.points if isinstance(scanned, ScanResult) else np.asarray(scanned, dtype=complex)
    if pts.size == 0:
        raise EmptyInputError("no scanned points to compare")
    if closed is None:
        raise EmptyInputError("no closed-form curve to compare")
    return float(np.max(closed.distance(pts)))
