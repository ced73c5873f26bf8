"""Command-line entry: figplots <figure_id> <csv> <out.png>."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import FIGURE_SCHEMAS, PlotJob, render


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="figplots", description=__doc__)
    parser.add_argument("figure_id", choices=sorted(FIGURE_SCHEMAS))
    parser.add_argument("csv", type=Path)
    parser.add_argument("output", type=Path)
    args = parser.parse_args(argv)
    try:
        out = render(PlotJob(csv_path=args.csv, figure_id=args.figure_id,
                             output_image_path=args.output))
    except (OSError, ValueError) as exc:
        print(f"figplots: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
