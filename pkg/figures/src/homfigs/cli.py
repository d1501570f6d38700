"""render-figs: batch-render every recognized scenario CSV in a directory.

Exit codes: 0 success, 2 bad input (missing files or column mismatch).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import ColumnMismatchError, FigureSpec, render

# file stem -> (panel kind, title)
_KNOWN = {
    "dip": ("curves", "coincidence dip"),
    "g2": ("curves", "coincidence and g2"),
    "classical": ("curves", "classical two-laser baseline"),
    "maps": ("heatmap", "coincidence and port intensities"),
    "filtered": ("heatmap", "filtered spectrum"),
    "intensities": ("intensities", "mean port intensities"),
    "dephasing_summary": ("sweep", "dephasing sweep"),
}


def _panel_for(stem: str) -> tuple[str, str] | None:
    if stem in _KNOWN:
        return _KNOWN[stem]
    if stem.startswith("dephasing_curve_"):
        return ("curves", stem.replace("_", " "))
    return None


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render-figs", description="Render scenario CSVs into PNG/SVG panels"
    )
    parser.add_argument("--in", dest="in_dir", required=True, help="directory of scenario CSVs")
    parser.add_argument("--out", dest="out_dir", required=True, help="directory for images")
    parser.add_argument("--panel", default=None, help="render only this panel (file stem)")
    args = parser.parse_args(argv)

    in_dir = Path(args.in_dir)
    out_dir = Path(args.out_dir)
    if not in_dir.is_dir():
        print(f"render-figs: input directory not found: {in_dir}", file=sys.stderr)
        return 2

    stems = [p.stem for p in sorted(in_dir.glob("*.csv"))]
    if args.panel is not None:
        if args.panel not in stems:
            print(f"render-figs: no CSV for panel {args.panel!r} in {in_dir}", file=sys.stderr)
            return 2
        stems = [args.panel]

    rendered = 0
    for stem in stems:
        panel = _panel_for(stem)
        if panel is None:
            continue
        kind, title = panel
        spec = FigureSpec(
            input_path=in_dir / f"{stem}.csv",
            kind=kind,
            out_stem=out_dir / stem,
            title=title,
        )
        try:
            paths = render(spec)
        except ColumnMismatchError as exc:
            print(f"render-figs: {exc}", file=sys.stderr)
            return 2
        rendered += 1
        for path in paths:
            print(path)
    if rendered == 0:
        print(f"render-figs: no recognized CSVs in {in_dir}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
