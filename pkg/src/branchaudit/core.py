"""Principal-branch complex arithmetic.

Every function accepts a Python scalar or a numpy array. Scalars come back
as ``complex``/``float``; arrays come back as arrays of the same shape.

Branch convention: the argument lives in (-pi, pi] and the negative real
axis maps to exactly +pi. A signed zero imaginary part (``-0.0``) is
normalised to ``+0.0`` before the angle is taken, otherwise ``atan2`` would
silently put -1 on the -pi side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RangeError

TWO_PI = 2.0 * math.pi

# exp(700) ~ 1e304; anything above is reported instead of returning inf.
EXP_LIMIT = 700.0

# The cut {x + iy : y = 0, x <= 0} shared by pln and principal_arg.
CUT_DESCRIPTION = "{x + iy : y = 0, x <= 0}"


def _as_complex(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ndim == 0


def _out(arr, scalar, kind=complex):
    return kind(arr) if scalar else arr


def _require_nonzero(arr, what):
    if np.any(arr == 0):
        raise DomainError(f"{what} is undefined at z = 0")


def principal_arg(z):
    """Angle of ``z`` in (-pi, pi]; the negative real axis gives +pi."""
    arr, scalar = _as_complex(z)
    _require_nonzero(arr, "principal_arg")
    # `+ 0.0` turns -0.0 into +0.0 so atan2 never returns -pi.
    theta = np.arctan2(arr.imag + 0.0, arr.real)
    # a tiny negative imaginary part can still round to exactly -pi
    theta = np.where(theta <= -np.pi, np.pi, theta)
    return _out(theta, scalar, float)


@dataclass(frozen=True)
class PolarForm:
    modulus: float
    angle: float

    def __post_init__(self):
        if not (math.isfinite(self.modulus) and self.modulus > 0):
            raise DomainError(f"polar modulus must be finite and > 0, got {self.modulus}")
        if not (-math.pi < self.angle <= math.pi):
            raise DomainError(f"polar angle must lie in (-pi, pi], got {self.angle}")


def to_polar(z) -> PolarForm:
    z = complex(z)
    if z == 0:
        raise DomainError("the origin has no polar form")
    return PolarForm(abs(z), principal_arg(z))


def from_polar(p: PolarForm) -> complex:
    return complex(p.modulus * math.cos(p.angle), p.modulus * math.sin(p.angle))


def pln(z):
    """Principal logarithm ln|z| + i*principal_arg(z)."""
    arr, scalar = _as_complex(z)
    _require_nonzero(arr, "pln")
    out = np.log(np.abs(arr)) + 1j * np.arctan2(arr.imag + 0.0, arr.real)
    return _out(out, scalar)


def c_exp(z):
    arr, scalar = _as_complex(z)
    if np.any(arr.real > EXP_LIMIT):
        raise RangeError(f"c_exp overflow: real part exceeds {EXP_LIMIT}")
    mag = np.exp(arr.real)
    out = mag * np.cos(arr.imag) + 1j * (mag * np.sin(arr.imag))
    return _out(out, scalar)


def c_sin(z):
    """(e^{iz} - e^{-iz}) / 2i, evaluated literally."""
    arr, scalar = _as_complex(z)
    out = (c_exp(1j * arr) - c_exp(-1j * arr)) / 2j
    return _out(np.asarray(out), scalar)


def c_cos(z):
    """(e^{iz} + e^{-iz}) / 2, evaluated literally."""
    arr, scalar = _as_complex(z)
    out = (c_exp(1j * arr) + c_exp(-1j * arr)) / 2
    return _out(np.asarray(out), scalar)


def log_branch_offset(a, b) -> int:
    """Integer k in {-1, 0, 1} with pln(ab) = pln(a) + pln(b) + 2*pi*i*k."""
    a, b = complex(a), complex(b)
    if a == 0 or b == 0:
        raise DomainError("log_branch_offset needs nonzero arguments")
    gap = pln(a * b).imag - pln(a).imag - pln(b).imag
    return int(round(gap / TWO_PI))


def cut_distance(w):
    """Exact Euclidean distance from ``w`` to the cut {x <= 0, y = 0}."""
    arr, scalar = _as_complex(w)
    d = np.where(arr.real <= 0, np.abs(arr.imag), np.abs(arr))
    return _out(d, scalar, float)


def on_cut(w, tol=0.0):
    arr, scalar = _as_complex(w)
    hit = cut_distance(arr) <= tol
    return bool(hit) if scalar else hit
