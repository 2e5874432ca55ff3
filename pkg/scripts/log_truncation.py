"""Truncation deficit of the Poisson variance of ``-log(1 - z)`` at 0.

``garsia_at(F_N, 0) = sum_{n<=N} 1/n^2``, so the gap to ``pi^2/6`` is the
tail ``sum_{n>N} 1/n^2 ~ 1/N - 1/(2N^2)``.  The script prints the computed
gap next to that asymptotic and the smallest N meeting a given tolerance.

    python scripts/log_truncation.py --tol 2e-4
"""

import argparse
import math
import sys

from bmokit.corpus import gen_log_singularity
from bmokit.norms import garsia_at


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description="log(1-z) truncation deficit at 0")
    ap.add_argument("--tol", type=float, default=2e-4)
    ap.add_argument("--max-log2", type=int, default=16)
    args = ap.parse_args(argv)

    print("N,garsia_at_0,gap,asymptotic_gap")
    for k in range(4, args.max_log2 + 1):
        N = 1 << k
        _, F = gen_log_singularity(N)
        g = garsia_at(-F, 0)
        gap = math.pi ** 2 / 6 - g
        print(f"{N},{g!r},{gap!r},{1 / N - 1 / (2 * N * N)!r}")
    n_min = math.ceil(1 / args.tol)
    print(f"gap <= {args.tol:g} needs N >= ~{n_min} (tail ~ 1/N)", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
