"""Query count against N^(2/3) over a range of N, written as CSV.

    python scripts/query_scaling.py --n-max 5000 --step 1 --out query_scaling.csv

Prints the worst ratio overall and per decade so the lack of an upward
trend is visible without plotting.
"""

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor

from exact_ed.pipeline import sweep_point
from exact_ed.records import SWEEP_HEADER, sweep_row, write_csv


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-min", type=int, default=5)
    ap.add_argument("--n-max", type=int, default=5000)
    ap.add_argument("--step", type=int, default=1)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)

    ns = list(range(args.n_min, args.n_max + 1, args.step))
    with ProcessPoolExecutor(args.workers) as pool:
        results = list(pool.map(sweep_point, ns, chunksize=64))
    rows = [sweep_row(p, s) for p, s in results]
    if args.out == "-":
        write_csv(rows, SWEEP_HEADER, sys.stdout)
    else:
        with open(args.out, "w", newline="") as fh:
            write_csv(rows, SWEEP_HEADER, fh)

    ratios = [(p.query_count / p.N ** (2 / 3), p.N) for p, _ in results]
    worst = max(ratios)
    print(f"max queries/N^(2/3) = {worst[0]:.2f} at N = {worst[1]}", file=sys.stderr)
    decade = 1
    while decade <= args.n_max:
        band = [r for r in ratios if decade <= r[1] < 10 * decade]
        if band:
            top = max(band)
            print(f"  N in [{decade}, {10 * decade}): max {top[0]:.2f} at N = {top[1]}", file=sys.stderr)
        decade *= 10
    worst_fail = max(1 - s for _, s in results)
    print(f"max 1 - success_prob = {worst_fail:.2e}", file=sys.stderr)
    return 0 if math.isfinite(worst[0]) else 1


if __name__ == "__main__":
    sys.exit(main())
