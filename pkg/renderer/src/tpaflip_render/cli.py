"""Command line: ``tpa-flip-render --manifest <path> --out <dir>``."""

from __future__ import annotations

import argparse
import sys

from .rendering import RenderError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tpa-flip-render",
        description="Render tpa-flip figure manifests (CSV curves) to PNG files",
    )
    parser.add_argument("--manifest", required=True, action="append",
                        help="manifest JSON path; repeat for several figures")
    parser.add_argument("--out", required=True, help="output directory")
    args = parser.parse_args(argv)
    try:
        total = 0
        for manifest in args.manifest:
            for summary in render(manifest, args.out):
                print(f"wrote {summary['png']} ({len(summary['curves'])} curves)")
                total += 1
        if total == 0:
            print("no figures rendered", file=sys.stderr)
    except RenderError as exc:
        print(f"render error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    return 0


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
