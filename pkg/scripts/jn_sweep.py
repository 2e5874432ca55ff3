"""Exponential integral against the John-Nirenberg bound as eps -> threshold.

    python scripts/jn_sweep.py --input random_analytic:N=6,seed=3 --z 0.3,0.2
"""

import argparse
import math
import sys

import numpy as np

from bmokit.cli import load_input, parse_z
from bmokit.circle_fn import FourierSeries
from bmokit.inequalities import check_strong_jn, jn_threshold
from bmokit.norms import bmo2
from bmokit.suite import PROFILES


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description="strong John-Nirenberg eps sweep")
    ap.add_argument("--input", default="monomial:n=1")
    ap.add_argument("--z", default="0,0")
    ap.add_argument("--points", type=int, default=20)
    ap.add_argument("--profile", default="fast", choices=sorted(PROFILES))
    args = ap.parse_args(argv)

    grid = PROFILES[args.profile].grid
    ((_, f),) = load_input(args.input)[:1]
    z = parse_z(args.z)
    n2 = bmo2(f, grid)
    real = isinstance(f, FourierSeries)
    threshold = 1 / (math.sqrt(2 * math.e) * n2.value) if real else jn_threshold(n2.value)
    print("eps_frac,eps,integral,bound,margin")
    for frac in np.linspace(0.05, 0.95, args.points).tolist():
        r = check_strong_jn(f, z, frac * threshold, grid, norm=n2)
        print(f"{frac:.4f},{r.witness['eps']!r},{r.lhs!r},{r.rhs!r},{r.margin!r}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
