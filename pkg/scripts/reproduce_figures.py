#!/usr/bin/env python3
"""Regenerate all five experiment datasets into out/ with the default seeds.

Equivalent to running `bisymrr figures <id> --out out/figure_<id>.csv` for
each id; kept as a script so the full reproduction is one command.
"""

import pathlib
import sys

from bisymrr.cli import main
from bisymrr.figures import FIGURES


def run(out_dir: str = "out") -> int:
    target = pathlib.Path(out_dir)
    target.mkdir(parents=True, exist_ok=True)
    for which in sorted(FIGURES):
        path = target / f"figure_{which}.csv"
        code = main(["figures", which, "--out", str(path)])
        if code != 0:
            print(f"figure {which} failed with exit code {code}", file=sys.stderr)
            return code
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(run(*sys.argv[1:]))
