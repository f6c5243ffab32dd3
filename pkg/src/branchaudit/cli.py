"""Command-line front end: ``branchaudit {curves,evaluate,audit,check}``.

Exit codes: 0 success, 1 invariant check failed, 2 audit contradiction,
3 configuration error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import ast
import json
import math
import operator
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path


from . import audit, checks, functions, preimage, report
from .errors import ConfigError, ParameterError
from .region import Window, build_paper_region, region_to_table

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONTRADICTION, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3, 4
OUT_ENV = "BRANCHAUDIT_OUT"
DEFAULT_OUT = "branchaudit-out"
FORMATS = ("csv", "svg", "both")
DEFAULT_THETAS = ("pi/8", "pi/4", "3*pi/8", "5*pi/8", "3*pi/4", "7*pi/8")


@dataclass
class RunConfig:
    c: float = -math.pi / 4
    window: tuple = (-4.0, 4.0, -4.0, 4.0)
    grid: int = 400
    guard: float = 1e-6
    tolerances: dict = field(default_factory=dict)
    output_dir: Path = Path(DEFAULT_OUT)
    format: str = "both"
    trace: bool = True

    def __post_init__(self):
        try:
            functions.PhaseParam(self.c)
            self.window = Window.coerce(self.window).as_tuple()
        except ParameterError as exc:
            raise ConfigError(str(exc)) from exc
        if int(self.grid) != self.grid or self.grid < 32:
            raise ConfigError(f"grid must be an integer >= 32, got {self.grid}")
        if not (math.isfinite(self.guard) and self.guard > 0):
            raise ConfigError(f"guard must be > 0, got {self.guard}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        self.output_dir = Path(self.output_dir)

    @property
    def phase(self) -> functions.PhaseParam:
        return functions.PhaseParam(self.c)

    @property
    def win(self) -> Window:
        return Window(*self.window)

    @property
    def want_csv(self) -> bool:
        return self.format in ("csv", "both")

    @property
    def want_svg(self) -> bool:
        return self.format in ("svg", "both")

    def manifest(self, command: str) -> dict:
        d = asdict(self)
        d["output_dir"] = str(self.output_dir)
        d["window"] = list(self.window)
        d["command"] = command
        return d


def _prepare(cfg: RunConfig, command: str) -> Path:
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    (out / f"manifest_{command}.json").write_text(json.dumps(cfg.manifest(command), indent=2, sort_keys=True) + "\n")
    return out


# -- curves ------------------------------------------------------------------


def cmd_curves(cfg: RunConfig) -> list:
    out = _prepare(cfg, "curves")
    win = cfg.win
    written = []
    for stem, (ts, pts), title in (
        ("fig1", report.fig1_samples(), "The semicircle |z - i/2| = 1/2, x <= 0, y >= 0"),
        ("fig2", report.fig2_samples(), "The segment z = i r/(r+1), r >= 0"),
    ):
        if cfg.want_csv:
            written.append(report.write_csv(out / f"{stem}.csv", ("param", "re", "im"), report.curve_rows(ts, pts)))
        if cfg.want_svg:
            canvas = report.curve_svg(win, pts, title, stem)
            canvas.marker(0j, name="point_0")
            canvas.marker(1j, name="point_i")
            written.append(canvas.save(out / f"{stem}.svg"))
    parts = report.fig3_parts(win)
    if cfg.want_csv:
        rows = [(name, float(t), float(z.real), float(z.imag))
                for name, (ts, pts, _) in parts.items() for t, z in zip(ts, pts)]
        written.append(report.write_csv(out / "fig3.csv", ("part", "param", "re", "im"), rows))
        (out / "region_fig3.txt").write_text(region_to_table(build_paper_region("fig3", cfg.guard)))
        written.append(out / "region_fig3.txt")
    if cfg.want_svg:
        written.append(report.region_svg(win, parts, "The region D").save(out / "fig3.svg"))
    return written


# -- evaluate ----------------------------------------------------------------

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def parse_angle(text: str) -> float:
    """Evaluate a small arithmetic expression in numbers and ``pi``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        raise ConfigError(f"cannot parse angle {text!r}")

    try:
        return ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse angle {text!r}") from exc


def cmd_evaluate(cfg: RunConfig, thetas) -> list:
    """Rows (theta, f, expected, deviation) for z = e^{i theta}."""
    p = cfg.phase
    angles = [parse_angle(t) if isinstance(t, str) else float(t) for t in thetas]
    for th in angles:
        if abs(th - math.pi / 2) < 1e-12:
            raise ConfigError("theta = pi/2 is an excluded point (z = i)")
        if not (-math.pi < th <= math.pi):
            raise ConfigError(f"theta must lie in (-pi, pi], got {th}")
    rows = []
    for th in angles:
        z = complex(math.cos(th), math.sin(th))
        val = functions.eval_f(z, p)
        expected = functions.arc_value(th)
        rows.append((th, val, expected, abs(val - expected)))
    if cfg.want_csv:
        out = _prepare(cfg, "evaluate")
        report.write_csv(out / "evaluate.csv", ("theta", "f_re", "f_im", "deviation"),
                         [(th, v.real, v.imag, dev) for th, v, _, dev in rows])
    return rows


def format_evaluate(rows) -> str:
    lines = [f"{'theta':>22} {'f_re':>24} {'f_im':>24} {'expected':>10} {'deviation':>10}"]
    for th, v, exp, dev in rows:
        tag = "0" if exp == 0 else "-2*pi*i"
        lines.append(f"{th:22.17g} {v.real:24.17g} {v.imag:24.17g} {tag:>10} {dev:10.3e}")
    return "\n".join(lines)


# -- audit -------------------------------------------------------------------


def cmd_audit(cfg: RunConfig):
    """Run the full audit; returns (exit_code, summary_text, written_paths)."""
    if cfg.grid < 200:
        raise ConfigError("the constancy audit needs --grid >= 200")
    out = _prepare(cfg, "audit")
    p, win, n = cfg.phase, cfg.win, cfg.grid
    tol = dict(cfg.tolerances)
    f = functions.make_f(p)
    written = []

    # cut preimages, closed form vs grid scan
    pre_rows = []
    for fid in ("F1", "F2", "F3"):
        scan = preimage.grid_scan_preimage(fid, p, win, n, tol=max(win.cell_size(n)))
        closed = preimage.closed_form_preimage(preimage.PreimageQuery(fid, p, r_max=1e4))
        dist = preimage.compare_preimages(closed, scan) if scan.points.size else 0.0
        pre_rows.append((fid, len(scan.points), dist, dist / scan.cell))

    rep = audit.component_constancy_audit(
        p, win, n, exclude_trace=cfg.trace, guard=cfg.guard,
        constancy_tol=tol.get("constancy", audit.DEFAULT_CONSTANCY_TOL), raise_on_failure=False)
    region = build_paper_region("fig3", cfg.guard)
    zeros = audit.isolated_zero_audit(f, region, win, n, zero_tol=tol.get("zero", audit.DEFAULT_ZERO_TOL))
    rep.zero_report = zeros

    if cfg.want_csv:
        written.append(report.write_csv(out / "preimages.csv", ("func", "hits", "hausdorff", "hausdorff_cells"),
                                        pre_rows))
        written.append(report.write_csv(
            out / "jumps.csv",
            ("a_re", "a_im", "b_re", "b_im", "point_re", "point_im", "jump_re", "jump_im", "crossed", "cut_distance"),
            [(j.a.real, j.a.imag, j.b.real, j.b.imag, j.point.real, j.point.imag, j.jump.real, j.jump.imag,
              j.crossed or "", j.cut_distance if j.cut_distance is not None else float("nan")) for j in rep.jumps]))
        written.append(report.write_csv(
            out / "trace.csv", ("curve", "param", "re", "im"),
            [(k, float(t), float(z.real), float(z.imag))
             for k, cv in enumerate(rep.traces) for t, z in zip(cv.ts, cv.samples)]))
        written.append(report.write_csv(
            out / "components.csv", ("label", "rep_re", "rep_im", "size", "value_re", "value_im", "max_deviation"),
            [(c.label, c.representative.real, c.representative.imag, c.size, c.value.real, c.value.imag,
              c.max_deviation) for c in rep.components]))
        written.append(report.write_csv(
            out / "zeros.csv", ("re", "im", "isolated", "witness_radius", "cluster_size"),
            [(z.location.real, z.location.imag, z.isolated, z.witness_radius, z.cluster_size) for z in zeros]))
    if cfg.want_svg:
        canvas = report.region_svg(win, report.fig3_parts(win), "The region D and the traced F3 cut preimage",
                                   traces=rep.traces)
        written.append(canvas.save(out / "audit.svg"))

    summary = audit_summary(cfg, rep, pre_rows, f)
    (out / "summary.txt").write_text(summary)
    written.append(out / "summary.txt")
    return (EXIT_OK if rep.constant else EXIT_CONTRADICTION), summary, written


def audit_summary(cfg: RunConfig, rep: audit.AuditReport, pre_rows, f) -> str:
    lines = [f"audit of f with c = {cfg.c:.17g} on window {list(cfg.window)}, grid {cfg.grid}", ""]
    lines.append("values on the unit circle:")
    for th in (math.pi / 4, 3 * math.pi / 4):
        v = f(complex(math.cos(th), math.sin(th)))
        lines.append(f"  f(e^(i*{th:.6f})) = {v.real:+.3e} {v.imag:+.15f}i")
    lines.append("")
    lines.append("cut preimages (grid scan vs closed form, one-sided Hausdorff):")
    for fid, hits, dist, cells in pre_rows:
        lines.append(f"  {fid}: {hits} hits, distance {dist:.4g} ({cells:.1f} cells)")
    lines.append("")
    lines.append(f"traced exclusion curves: {len(rep.traces)}")
    for k, cv in enumerate(rep.traces):
        a, b = cv.samples[0], cv.samples[-1]
        lines.append(f"  curve {k}: {len(cv.samples)} samples from {a.real:+.4f}{a.imag:+.4f}i "
                     f"to {b.real:+.4f}{b.imag:+.4f}i, ends {cv.flags.get('ends')}")
    lines.append(f"trace excluded from region: {'yes' if rep.excluded_trace else 'no'}")
    lines.append("")
    lines.append(f"components: {rep.component_count}")
    for c in rep.components:
        lines.append(f"  component {c.label}: {c.size} cells, value {c.value.real:+.3e} {c.value.imag:+.15f}i, "
                     f"max deviation {c.max_deviation:.3e}")
    for name, (z, label, v) in rep.anchors.items():
        lines.append(f"  {name} anchor {z.real:+.4f}{z.imag:+.4f}i lies in component {label}")
    if rep.zero_report is not None:
        iso = sum(r.isolated for r in rep.zero_report)
        lines.append("")
        lines.append(f"zero clusters: {len(rep.zero_report)} ({iso} isolated at the probed radii, "
                     f"{len(rep.zero_report) - iso} non-isolated)")
    lines.append("")
    if rep.constant:
        lines.append("VERDICT: f is locally constant on each component of D minus the traced curve")
    else:
        lines.append("CONTRADICTION: f takes more than one value on a single component of D "
                     "(the F3 cut preimage was not excluded)")
    return "\n".join(lines) + "\n"


# -- check -------------------------------------------------------------------


def cmd_check(cfg: RunConfig):
    return checks.run_checks(cfg.tolerances)


# -- argument parsing --------------------------------------------------------


def _window(text: str):
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad window {text!r}") from exc
    if len(vals) != 4:
        raise ConfigError("window needs four numbers x0,x1,y0,y1")
    return vals


def _tolerance(items):
    out = {}
    for item in items or ():
        name, sep, val = item.partition("=")
        if not sep:
            raise ConfigError(f"tolerance override must be NAME=VALUE, got {item!r}")
        try:
            out[name] = float(val)
        except ValueError as exc:
            raise ConfigError(f"bad tolerance value in {item!r}") from exc
    return out


class _Parser(argparse.ArgumentParser):
    # argparse would exit with 2, which is the contradiction code here
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--c", type=str, default="-pi/4", help="phase of F3, -pi < c < 0, c != -pi/2")
    common.add_argument("--window", type=str, default="-4,4,-4,4", help="x0,x1,y0,y1")
    common.add_argument("--grid", type=int, default=400)
    common.add_argument("--guard", type=float, default=1e-6)
    common.add_argument("--out", type=str, default=None, help=f"output directory (else ${OUT_ENV})")
    common.add_argument("--format", choices=FORMATS, default="both")
    common.add_argument("--no-trace", action="store_true", help="do not cut the traced curve out of D")
    common.add_argument("--tol", action="append", metavar="NAME=VALUE", help="tolerance override; '*' for all")

    parser = _Parser(prog="branchaudit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("curves", parents=[common], help="write the cut preimages and the region boundary as CSV/SVG")
    ev = sub.add_parser("evaluate", parents=[common], help="evaluate f on the unit circle")
    ev.add_argument("thetas", nargs="*", help="angles, e.g. pi/4 3*pi/4 (use -- before negative values)")
    sub.add_parser("audit", parents=[common], help="run the full analyticity audit")
    sub.add_parser("check", parents=[common], help="run the invariant suite")
    return parser


def config_from_args(args) -> RunConfig:
    out = args.out or os.environ.get(OUT_ENV) or DEFAULT_OUT
    return RunConfig(
        c=parse_angle(args.c),
        window=_window(args.window),
        grid=args.grid,
        guard=args.guard,
        tolerances=_tolerance(args.tol),
        output_dir=Path(out),
        format=args.format,
        trace=not args.no_trace,
    )


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = config_from_args(args)
        if args.command == "curves":
            for path in cmd_curves(cfg):
                print(path)
            return EXIT_OK
        if args.command == "evaluate":
            rows = cmd_evaluate(cfg, args.thetas or DEFAULT_THETAS)
            print(format_evaluate(rows))
            return EXIT_OK
        if args.command == "audit":
            code, summary, _ = cmd_audit(cfg)
            print(summary, end="")
            return code
        results = cmd_check(cfg)
        for res in results:
            print(res.line())
        failed = [r for r in results if not r.passed]
        print(f"{len(results) - len(failed)}/{len(results)} checks passed")
        return EXIT_CHECK_FAILED if failed else EXIT_OK
    except (ConfigError, ParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
