#!/usr/bin/env python3
"""Method-combination study on the desk-scale scene: all eight configurations
(M1 bare GA ... M8 full method) over five seeds, tables in runs/ablation."""

import sys

from linepaint.cli import main

if __name__ == "__main__":
    args = [
        "ablate",
        "--preset", "desk",
        "--pop", "100",
        "--gens", "50",
        "--seeds", "0,1,2,3,4",
        "--out", "runs/ablation",
    ]
    raise SystemExit(main(args + sys.argv[1:]))
