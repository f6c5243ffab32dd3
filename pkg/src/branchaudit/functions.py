"""The three maps F1, F2, F3, the composite f and their unit-circle closed forms.

    F1(z) = z / (iz + 1)
    F2(z) = iz / (iz + 1)
    F3(z) = i e^{ic} (1 - sin(-i Ln z))
    f(z)  = Ln F1 + Ln F2 + Ln F3 - Ln z + Ln 2 - i*pi/2 - i*c

Because exp(Ln z) = z on every branch, sin(-i Ln z) = (z - 1/z) / 2i and F3
is really the single-valued rational map -e^{ic} (z - i)^2 / (2z).
Multiplying out, F1 F2 F3 = i e^{ic} z / 2, so f only ever takes values
in 2*pi*i*Z: it is locally constant and jumps wherever one of the four log
arguments crosses the cut.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import core
from .errors import DomainError, ParameterError, PoleError, SingularError

# Admissible phases must keep this far away from -pi/2 (cos c = 0).
PHASE_MARGIN = 1e-9
DEFAULT_C = -math.pi / 4


@dataclass(frozen=True)
class PhaseParam:
    """Phase c of F3; admissible when -pi < c < 0 and cos(c) != 0."""

    c: float = DEFAULT_C

    def __post_init__(self):
        c = self.c
        if not math.isfinite(c) or not (-math.pi < c < 0):
            raise ParameterError(f"c must satisfy -pi < c < 0, got {c}")
        if abs(c + math.pi / 2) < PHASE_MARGIN:
            raise ParameterError("c = -pi/2 is forbidden (cos(c) = 0)")

    @property
    def rotation(self) -> complex:
        return complex(math.cos(self.c), math.sin(self.c))


def _phase(p) -> PhaseParam:
    if isinstance(p, PhaseParam):
        return p
    return PhaseParam(float(p))


def _check_pole(arr):
    if np.any(1j * arr + 1 == 0):
        raise PoleError("F1/F2 have a pole at z = i")


def eval_F1(z):
    arr, scalar = core._as_complex(z)
    _check_pole(arr)
    out = arr / (1j * arr + 1)
    return core._out(out, scalar)


def eval_F2(z):
    arr, scalar = core._as_complex(z)
    _check_pole(arr)
    out = 1j * arr / (1j * arr + 1)
    return core._out(out, scalar)


def eval_F3(z, p=DEFAULT_C):
    """F3 through the principal log and the exponential definition of sine."""
    p = _phase(p)
    arr, scalar = core._as_complex(z)
    s = core.c_sin(-1j * core.pln(arr))
    out = 1j * p.rotation * (1 - s)
    return core._out(np.asarray(out), scalar)


def rational_F3(z, p=DEFAULT_C):
    """Branch-free F3 = i e^{ic} (1 - (z - 1/z)/2i), in factored form.

    The factored form -e^{ic} (z - i)^2 / (2z) is the same rational function
    but avoids the cancellation in 1 - (z - 1/z)/2i near z = i.
    """
    p = _phase(p)
    arr, scalar = core._as_complex(z)
    core._require_nonzero(arr, "rational_F3")
    out = -p.rotation * (arr - 1j) ** 2 / (2 * arr)
    return core._out(out, scalar)


def rational_F3_derivative(z, p=DEFAULT_C):
    """d/dz of F3 = -e^{ic} (1 + 1/z^2) / 2."""
    p = _phase(p)
    arr, scalar = core._as_complex(z)
    core._require_nonzero(arr, "rational_F3_derivative")
    out = -p.rotation * (1 + 1 / arr**2) / 2
    return core._out(out, scalar)


def log_arguments(z, p=DEFAULT_C):
    """The four arguments fed to Ln inside f, keyed by name."""
    p = _phase(p)
    return {
        "F1": eval_F1(z),
        "F2": eval_F2(z),
        "F3": eval_F3(z, p),
        "z": z if np.ndim(z) == 0 else np.asarray(z, dtype=complex),
    }


def eval_f(z, p=DEFAULT_C):
    """The seven-term sum of principal logs defining f.

    Does not check membership of z in the region; callers that care pair it
    with ``Region.contains``.
    """
    p = _phase(p)
    arr, scalar = core._as_complex(z)
    _check_pole(arr)
    args = log_arguments(arr, p)
    for name, value in args.items():
        if np.any(np.asarray(value) == 0):
            raise DomainError(f"log argument {name} vanishes")
    out = (
        core.pln(args["F1"])
        + core.pln(args["F2"])
        + core.pln(args["F3"])
        - core.pln(arr)
        + math.log(2.0)
        - 1j * math.pi / 2
        - 1j * p.c
    )
    return core._out(np.asarray(out), scalar)


def make_f(p=DEFAULT_C):
    """Bind the phase so f can be handed to the audit routines."""
    p = _phase(p)

    def f(z):
        return eval_f(z, p)

    f.phase = p
    return f


def unit_circle_forms(theta: float, p=DEFAULT_C):
    """Closed forms of (F1, F2, F3) at z = e^{i theta}."""
    p = _phase(p)
    theta = float(theta)
    if not (-math.pi < theta <= math.pi):
        raise DomainError(f"theta must lie in (-pi, pi], got {theta}")
    half = theta / 2 + math.pi / 4
    denom = 2 * math.cos(half)
    if abs(theta - math.pi / 2) < 1e-12:
        raise SingularError("closed forms of F1, F2 are singular at theta = pi/2")
    spin = complex(math.cos(theta / 2), math.sin(theta / 2))
    f1 = complex(math.cos(-math.pi / 4), math.sin(-math.pi / 4)) * spin / denom
    f2 = complex(math.cos(math.pi / 4), math.sin(math.pi / 4)) * spin / denom
    f3 = 2j * p.rotation * math.cos(half) ** 2
    return f1, f2, f3


def arc_value(theta: float) -> complex:
    """Value of f on the unit-circle arcs: 0 for theta < pi/2, -2*pi*i above."""
    return -2j * math.pi if theta > math.pi / 2 else 0j
