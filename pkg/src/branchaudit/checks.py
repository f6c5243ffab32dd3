"""Invariant suite run by ``branchaudit check``.

Each check measures one quantity and compares it against a named
tolerance. Tolerances can be overridden by name (``*`` overrides all).
Library functions are looked up through their modules at call time so a
patched implementation is what gets checked.
"""

from __future__ import annotations

import math
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import audit, core, functions, preimage, region

PI = math.pi


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: float
    tol: float

    @property
    def margin(self) -> float:
        return self.tol - self.measured

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag}  {self.name:<28} measured={self.measured:.3e}  tol={self.tol:.1e}  margin={self.margin:+.3e}"


def _rng():
    return np.random.default_rng(20240101)


def _random_nonzero(n, rmin=0.1, rmax=10.0):
    rng = _rng()
    mod = np.exp(rng.uniform(math.log(rmin), math.log(rmax), n))
    ang = rng.uniform(-PI, PI, n)
    return mod * np.exp(1j * ang)


def _phases():
    return [functions.PhaseParam(c) for c in (-3 * PI / 4, -PI / 4, -0.1, -3.0)]


# Each check returns (measured, structurally_ok).


def principal_arg_convention():
    xs = np.array([1e-3, 0.5, 1.0, 2.0, 1e3])
    worst = 0.0
    for x in xs:
        for z in (complex(-x, 0.0), complex(-x, -0.0)):
            worst = max(worst, abs(core.principal_arg(z) - PI), abs(core.pln(z).imag - PI))
    zs = _random_nonzero(500)
    args = core.principal_arg(zs)
    ok = bool(np.all(args > -PI) and np.all(args <= PI))
    return worst, ok


def exp_ln_roundtrip():
    zs = _random_nonzero(1000, 1e-3, 1e3)
    back = core.c_exp(core.pln(zs))
    return float(np.max(np.abs(back - zs) / np.abs(zs))), True


def log_branch_offset_range():
    a, b = _random_nonzero(500), _random_nonzero(500)[::-1]
    worst, ok = 0.0, True
    for x, y in zip(a, b):
        k = core.log_branch_offset(x, y)
        ok &= k in (-1, 0, 1)
        gap = core.pln(x * y) - core.pln(x) - core.pln(y)
        worst = max(worst, abs(gap - 2j * PI * k))
    return worst, ok


def sin_cos_pythagoras():
    rng = _rng()
    zs = 10 * np.sqrt(rng.uniform(0, 1, 500)) * np.exp(1j * rng.uniform(-PI, PI, 500))
    s, c = core.c_sin(zs), core.c_cos(zs)
    scale = 1 + np.abs(s) ** 2 + np.abs(c) ** 2
    return float(np.max(np.abs(s * s + c * c - 1) / scale)), True


def sin_of_log_identity():
    zs = _random_nonzero(1000)
    lhs = core.c_sin(-1j * core.pln(zs))
    rhs = (zs - 1 / zs) / 2j
    return float(np.max(np.abs(lhs - rhs) / (np.abs(zs) + 1 / np.abs(zs)))), True


def region_distance_on_primitives():
    r = region.build_paper_region("fig3")
    on = np.concatenate([
        -np.linspace(0, 5, 50) + 0j,
        1j * np.linspace(0, 1, 50),
        0.5j + 0.5 * np.exp(1j * np.linspace(PI / 2, 3 * PI / 2, 50)),
        np.array([0j, 1j, -1j]),
    ])
    d = r.distance_to_exclusions(on)
    off = np.array([2 + 2j, 1 + 0j, -2 + 1j, 0.5 + 0.5j, 3 - 3j])
    ok = bool(np.all(r.distance_to_exclusions(off) > r.guard)) and not np.any(r.contains(on))
    return float(np.max(d)), ok


def region_guard_monotone():
    rng = _rng()
    Z = rng.uniform(-3, 3, 2000) + 1j * rng.uniform(-3, 3, 2000)
    r = region.build_paper_region("fig3", guard=1e-2)
    small = r.with_guard(1e-6)
    violations = np.sum(r.contains(Z) & ~small.contains(Z))
    return float(violations), True


def fig3_refinement_stability():
    r = region.build_paper_region("fig3")
    w = region.Window.square(4)
    counts = [region.connected_components(r, w, n).count for n in (100, 200)]
    return float(abs(counts[0] - counts[1])), counts[0] == 1


def f2_is_i_f1():
    zs = _random_nonzero(1000)
    zs = zs[np.abs(zs - 1j) > 1e-3]
    f1, f2 = functions.eval_F1(zs), functions.eval_F2(zs)
    return float(np.max(np.abs(f2 - 1j * f1) / np.abs(f2))), True


def f3_branch_independence():
    zs = _random_nonzero(1000)
    worst = 0.0
    for p in _phases():
        a, b = functions.eval_F3(zs, p), functions.rational_F3(zs, p)
        worst = max(worst, float(np.max(np.abs(a - b) / np.abs(b))))
    return worst, True


def _arc(lo, hi, n=50):
    th = np.linspace(lo, hi, n)
    return np.cos(th) + 1j * np.sin(th)


def case_one_arc():
    z = _arc(0.01, PI / 2 - 0.01)
    return max(float(np.max(np.abs(functions.eval_f(z, p)))) for p in _phases()), True


def case_two_arc():
    z = _arc(PI / 2 + 0.01, PI - 0.01)
    return max(float(np.max(np.abs(functions.eval_f(z, p) + 2j * PI))) for p in _phases()), True


def phase_invariance():
    worst = 0.0
    for z in (_arc(0.01, PI / 2 - 0.01), _arc(PI / 2 + 0.01, PI - 0.01)):
        vals = np.array([functions.eval_f(z, p) for p in _phases()])
        worst = max(worst, float(np.max(np.abs(vals - vals[0]))))
    return worst, True


def sum_of_logs_decomposition():
    zs = _random_nonzero(1000)
    zs = zs[np.abs(zs - 1j) > 1e-2]
    worst = 0.0
    for p in _phases():
        f = functions.eval_f(zs, p)
        prod = (functions.eval_F1(zs) * functions.eval_F2(zs) * functions.eval_F3(zs, p) * 2
                / (zs * 1j * p.rotation))
        gap = (f - core.pln(prod)) / (2j * PI)
        worst = max(worst, float(np.max(np.abs(gap - np.round(gap.real)))) * 2 * PI)
    return worst, True


def f1_semicircle():
    cv = preimage.closed_form_preimage(preimage.PreimageQuery("F1", samples=1000))
    z = cv.samples
    ok = bool(np.all(z.real <= 0) and np.all(z.imag >= 0))
    return float(np.max(np.abs(np.abs(z - 0.5j) - 0.5))), ok


def f2_segment():
    cv = preimage.closed_form_preimage(preimage.PreimageQuery("F2", samples=1000))
    z = cv.samples
    ok = bool(np.all(z.imag >= 0) and np.all(z.imag < 1))
    return float(np.max(np.abs(z.real))), ok


_RS = np.concatenate([[0.0], np.geomspace(1e-6, 1e2, 60)])


def oracle_backsubstitution():
    worst = 0.0
    for p in _phases():
        for r in _RS:
            for z in preimage.f3_preimage_oracle(p, r):
                worst = max(worst, abs(functions.rational_F3(z, p) + r) / (1 + r))
    return worst, True


def vieta_product():
    worst = 0.0
    for p in _phases():
        for r in _RS:
            a, b = preimage.f3_preimage_oracle(p, r)
            worst = max(worst, abs(a * b + 1))
    return worst, True


def eq12_at_oracle_roots():
    worst, off_axis = 0.0, False
    for p in _phases():
        for r in _RS[_RS <= 10]:
            for z in preimage.f3_preimage_oracle(p, r):
                pol = core.to_polar(z)
                e1, e2 = preimage.eq12_residuals(pol.modulus, pol.angle, p, r)
                worst = max(worst, abs(e1), abs(e2))
                off_axis |= abs(math.sin(pol.angle)) > 0.1 and r > 0
    return worst, off_axis


def cr_term_scaling():
    """Worst (residual(h/2) * 3 / residual(h)) over the non-constant log terms."""
    p = functions.PhaseParam(-PI / 4)
    terms = [
        lambda z: core.pln(functions.eval_F1(z)),
        lambda z: core.pln(functions.eval_F2(z)),
        lambda z: core.pln(functions.eval_F3(z, p)),
    ]
    probes = [2 + 2j, 3 - 1j, -2 - 2j, 0.5 - 1.5j, 1 + 0.5j]
    worst = 0.0
    for g in terms:
        for z in probes:
            r1, r2 = audit.cr_residual(g, z, 1e-3), audit.cr_residual(g, z, 5e-4)
            worst = max(worst, 3 * r2 / r1)
    return worst, True


def f_is_holomorphic_off_trace():
    f = functions.make_f(-PI / 4)
    probes = [2 + 2j, 3 - 1j, -2 - 2j, 0.5 - 1.5j, -2 + 3j]
    return max(audit.cr_residual(f, z) for z in probes), True


def jump_is_two_pi():
    f = functions.make_f(-PI / 4)
    scan = audit.path_scan(f, audit.arc_path(4.0, 0.3, 2.8))
    worst, ok = 0.0, len(scan.jumps) == 1
    for j in scan.jumps:
        cr = audit.bisect_discontinuity(f, j.a, j.b)
        worst = max(worst, abs(abs(cr.jump) - 2 * PI), cr.cut_distance)
        ok &= cr.crossed == "F3"
    return worst, ok


def csv_determinism():
    from .cli import RunConfig, cmd_curves

    blobs = []
    for _ in range(2):
        with tempfile.TemporaryDirectory() as tmp:
            cfg = RunConfig(output_dir=Path(tmp), format="csv")
            cmd_curves(cfg)
            blobs.append(tuple(sorted((p.name, p.read_bytes()) for p in Path(tmp).glob("*.csv"))))
    return float(blobs[0] != blobs[1]), len(blobs[0]) >= 3


CHECKS = {
    "principal_arg_convention": (principal_arg_convention, 0.0),
    "exp_ln_roundtrip": (exp_ln_roundtrip, 1e-13),
    "log_branch_offset_range": (log_branch_offset_range, 1e-12),
    "sin_cos_pythagoras": (sin_cos_pythagoras, 1e-12),
    "sin_of_log_identity": (sin_of_log_identity, 1e-12),
    "region_distance_zero": (region_distance_on_primitives, 1e-12),
    "region_guard_monotone": (region_guard_monotone, 0.0),
    "fig3_refinement_stable": (fig3_refinement_stability, 0.0),
    "F2_equals_i_F1": (f2_is_i_f1, 1e-15),
    "F3_branch_independent": (f3_branch_independence, 1e-12),
    "case_I_zero": (case_one_arc, 1e-9),
    "case_II_minus_2pi_i": (case_two_arc, 1e-9),
    "phase_invariance": (phase_invariance, 1e-9),
    "sum_of_logs_in_2pi_i_Z": (sum_of_logs_decomposition, 1e-10),
    "F1_semicircle": (f1_semicircle, 1e-12),
    "F2_segment": (f2_segment, 0.0),
    "oracle_backsubstitution": (oracle_backsubstitution, 1e-10),
    "vieta_product": (vieta_product, 1e-12),
    "eq12_residuals": (eq12_at_oracle_roots, 1e-9),
    "cr_term_scaling": (cr_term_scaling, 1.0),
    "f_holomorphic_off_trace": (f_is_holomorphic_off_trace, 1e-6),
    "jump_is_2pi": (jump_is_two_pi, 1e-6),
    "csv_determinism": (csv_determinism, 0.0),
}


def run_checks(overrides: dict | None = None, names=None) -> list:
    overrides = dict(overrides or {})
    blanket = overrides.pop("*", None)
    results = []
    for name, (fn, tol) in CHECKS.items():
        if names is not None and name not in names:
            continue
        if blanket is not None:
            tol = blanket
        tol = overrides.get(name, tol)
        try:
            measured, ok = fn()
        except Exception:  # a crashing check is a failing check
            measured, ok = math.inf, False
        results.append(CheckResult(name, bool(ok) and measured <= tol, float(measured), float(tol)))
    return results
