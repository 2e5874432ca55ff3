"""Run the acceptance criteria and print one PASS/FAIL line per criterion.

    python scripts/run_acceptance.py [-k EXPR]
"""

import argparse
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-k", default=None, help="pytest -k selection, e.g. 'criterion_05'")
    args = ap.parse_args(argv)
    cmd = [str(ROOT / "tests" / "test_acceptance.py"), "-q", "-p", "no:cacheprovider",
           "--rootdir", str(ROOT)]
    if args.k:
        cmd += ["-k", args.k]
    return int(pytest.main(cmd))


if __name__ == "__main__":
    sys.exit(main())
