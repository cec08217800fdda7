#!/usr/bin/env python3
"""
Run the seeded acceptance suites (tests marked ``slow``) and print per-test timings.
Usage: python scripts/run_acceptance.py [extra pytest args]
"""

import sys
from pathlib import Path

import pytest


REPO_ROOT = Path(__file__).resolve().parent.parent


def main():
    args = [
        str(REPO_ROOT / 'tests' / 'test_acceptance.py'),
        '-m', 'slow',
        '--durations=0',
        '-q',
    ] + sys.argv[1:]
    print(f"[INFO] Running acceptance suites from {REPO_ROOT}", file=sys.stderr)
    code = pytest.main(args)
    if code != 0:
        print(f"[ERROR] Acceptance suites failed (pytest exit code {int(code)})", file=sys.stderr)
    return int(code)


if __name__ == '__main__':
    sys.exit(main())
