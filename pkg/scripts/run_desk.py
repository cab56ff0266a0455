#!/usr/bin/env python3
"""Run the optimizer on the desk-scale scene and drop all artifacts in
runs/desk (report, trajectory table, trace, route SVG)."""

import sys

from linepaint.cli import main

if __name__ == "__main__":
    args = [
        "solve",
        "--preset", "desk",
        "--pop", "100",
        "--gens", "50",
        "--seed", "0",
        "--out", "runs/desk",
        "--dump-seeds",
    ]
    raise SystemExit(main(args + sys.argv[1:]))
