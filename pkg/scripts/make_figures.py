"""Write the curve CSV/SVG set and the audit picture into one directory."""

import argparse
from pathlib import Path

from branchaudit.cli import RunConfig, cmd_audit, cmd_curves


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("figures"))
    ap.add_argument("--grid", type=int, default=400)
    args = ap.parse_args()

    cfg = RunConfig(output_dir=args.out, grid=args.grid)
    for path in cmd_curves(cfg):
        print(path)
    code, summary, paths = cmd_audit(cfg)
    for path in paths:
        print(path)
    print(summary.strip().splitlines()[-1])


if __name__ == "__main__":
    main()
