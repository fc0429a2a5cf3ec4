"""Sweep the verification grid and summarize failures and lint findings.

The same computation backs `ramtower verify`; this variant prints per-tuple
progress and the full lint list, which is more useful interactively.
"""

import argparse
import time

from ramtower.towers import DEFAULT_GRID, verify_grid, verify_tuple


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--depth", type=int, default=DEFAULT_GRID["depth"])
    ap.add_argument("--quiet", action="store_true")
    args = ap.parse_args()

    grid = dict(DEFAULT_GRID, depth=args.depth)
    t0 = time.time()
    failures, lints, cases = [], [], 0
    for params, depth in verify_grid(grid):
        rep = verify_tuple(params, depth)
        cases += rep.cases
        failures.extend(rep.failures)
        lints.extend(rep.diagnostics)
        if not args.quiet:
            mark = "ok " if rep.ok else "FAIL"
            warn = f" ({len(rep.diagnostics)} lint)" if rep.diagnostics else ""
            print(f"{mark} {params}{warn}")
    dt = time.time() - t0

    print(f"\n{cases} layer checks in {dt:.2f}s; {len(failures)} failures, {len(lints)} lints")
    for f in failures:
        print(f"FAIL {f}")
    if lints and not args.quiet:
        print("\nnon-integral break lints:")
        for line in lints:
            print(f"  {line}")


if __name__ == "__main__":
    main()
