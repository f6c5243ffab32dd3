"""Constancy audit of f with and without the traced F3 cut preimage removed.

Prints the component table for both runs and optionally writes an SVG of
the region with the traced curve.
"""

import argparse
import math
import time

from branchaudit.audit import component_constancy_audit
from branchaudit.functions import PhaseParam
from branchaudit.report import fig3_parts, region_svg


def show(rep, label):
    print(f"{label}: {rep.component_count} component(s), constant={rep.constant}")
    for c in rep.components:
        print(f"  #{c.label:<2} cells={c.size:<7} value={c.value.imag:+.12f}i  max dev={c.max_deviation:.2e}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--c", type=float, default=-math.pi / 4)
    ap.add_argument("--half", type=float, default=6.0, help="window is [-half, half]^2")
    ap.add_argument("--grid", type=int, default=600)
    ap.add_argument("--svg", type=str, default=None)
    args = ap.parse_args()

    p = PhaseParam(args.c)
    window = (-args.half, args.half, -args.half, args.half)
    for exclude in (False, True):
        t0 = time.perf_counter()
        rep = component_constancy_audit(p, window, args.grid, exclude_trace=exclude, raise_on_failure=False)
        show(rep, f"trace {'excluded' if exclude else 'kept'} ({time.perf_counter() - t0:.2f}s)")
    for cv in rep.traces:
        print(f"trace: {len(cv.samples)} samples, ends {cv.flags['ends']}")
    if args.svg:
        canvas = region_svg(rep.window, fig3_parts(rep.window), f"c = {args.c:.4f}", traces=rep.traces)
        canvas.save(args.svg)
        print(f"wrote {args.svg}")


if __name__ == "__main__":
    main()
