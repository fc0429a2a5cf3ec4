"""Print the lower/upper filtration tables of a tower as aligned text.

Usage: python3 scripts/print_break_tables.py [--p 2 --q 2 --g 1 --d 1 --N 0 --c 1 --n 4]
"""

import argparse

from ramtower.polygon import format_rat
from ramtower.towers import TowerParams, filtration_tables


def fmt_interval(lo, hi, first):
    left = "[" if first else "("
    right = "inf)" if hi is None else f"{format_rat(hi)}]"
    return f"{left}{format_rat(lo)}, {right}"


def main():
    ap = argparse.ArgumentParser()
    for flag, default in (("p", 2), ("q", 2), ("g", 1), ("d", 1), ("N", 0), ("c", 1)):
        ap.add_argument(f"--{flag}", type=int, default=default)
    ap.add_argument("--n", type=int, default=4)
    args = ap.parse_args()

    params = TowerParams(p=args.p, q=args.q, g=args.g, d=args.d, N=args.N, c=args.c)
    sched = filtration_tables(params, args.n)

    print(f"tower {params}")
    print(f"layers {params.N + 1}..{args.n}")
    print(f"  lower breaks: {', '.join(format_rat(b) for b in sched.lower)}")
    print(f"  upper breaks: {', '.join(format_rat(w) for w in sched.upper)}")
    for name, table in (("lower", sched.lower_table), ("upper", sched.upper_table)):
        print(f"\n{name} numbering:")
        for i, ((lo, hi), order) in enumerate(table):
            print(f"  {fmt_interval(lo, hi, i == 0):>18}  ->  order {order}")
    for line in sched.diagnostics:
        print(f"\nwarning: {line}")


if __name__ == "__main__":
    main()
