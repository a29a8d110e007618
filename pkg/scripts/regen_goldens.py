#!/usr/bin/env python3
"""Regenerate the committed golden outputs for the CLI regression suite."""

import os
import subprocess
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(ROOT, "tests"))

from cli_suite import SUITE  # noqa: E402

GOLDEN = os.path.join(ROOT, "tests", "golden", "cli")


def main():
    os.makedirs(GOLDEN, exist_ok=True)
    for name, argv in SUITE:
        result = subprocess.run(
            [sys.executable, "-m", "multiform", *argv],
            cwd=ROOT,
            capture_output=True,
            check=True,
        )
        path = os.path.join(GOLDEN, f"{name}.json")
        with open(path, "wb") as fh:
            fh.write(result.stdout)
        print(f"wrote {path} ({len(result.stdout)} bytes)")


if __name__ == "__main__":
    main()
