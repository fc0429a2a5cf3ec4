"""Explore stabilization of torsion valuation traces on random inputs.

For random valuation vectors this prints the trace, the first
single-segment step m, and where the q^{-d} ratio law kicks in; the two
always agree, which is the point.
"""

import argparse
import random
from fractions import Fraction

from ramtower.polygon import format_rat
from ramtower.towers import torsion_valuations


def random_vector(rng, d):
    return tuple(Fraction(rng.randint(1, 24), rng.choice((1, 2, 3))) for _ in range(d))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=12)
    ap.add_argument("--nmax", type=int, default=10)
    ap.add_argument("--branch", default="max", choices=["max", "min"])
    args = ap.parse_args()

    rng = random.Random(args.seed)
    worst = 0
    for _ in range(args.count):
        q = rng.choice((2, 3, 4))
        g = rng.randint(1, 3)
        d = rng.randint(1, 4)
        vec = random_vector(rng, d)
        trace = torsion_valuations(vec, q=q, g=g, n_max=args.nmax, branch=args.branch)
        worst = max(worst, trace.m or 0)
        head = ", ".join(format_rat(v) for v in trace.valuations[:6])
        print(
            f"q={q} g={g} a_vals=({', '.join(format_rat(v) for v in vec)}) "
            f"m={trace.m}  trace: {head}, ..."
        )
        assert trace.ratio_holds_from() == trace.m
    print(f"\nlargest stabilization step seen: m = {worst}")


if __name__ == "__main__":
    main()
