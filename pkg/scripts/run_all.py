#!/usr/bin/env python3
"""Run every shipped experiment config and summarize the gate verdicts.

Usage: python scripts/run_all.py [config ...]

Without arguments, runs all configs in configs/.  Exits nonzero if any run
fails a gate or errors out.
"""

import sys
import time
from pathlib import Path

from quadbvp.cli import main as cli_main

ROOT = Path(__file__).resolve().parent.parent


def run(paths):
    failures = 0
    for path in paths:
        print(f"=== {path} ===")
        start = time.perf_counter()
        status = cli_main(["run", str(path)])
        print(f"--- exit {status} in {time.perf_counter() - start:.1f}s\n")
        failures += status != 0
    return failures


if __name__ == "__main__":
    args = [Path(a) for a in sys.argv[1:]] or sorted((ROOT / "configs").glob("*.ini"))
    sys.exit(1 if run(args) else 0)
