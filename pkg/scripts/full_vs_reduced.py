"""Run the brute-force and the 5-dimensional simulations side by side.

For each N the full state is projected onto the five group states after
every outer round and compared with the reduced trajectory; leakage out of
that subspace is tracked after every walk step.
"""

import argparse

import numpy as np

from exact_ed.fullspace import make_instance, run_full
from exact_ed.params import solve_params
from exact_ed.reduced import build_reduced_model, run_reduced


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=12)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    print(f"{'N':>4} {'dim':>8} {'t1':>4} {'1-success full':>15} {'max gap':>10} {'leakage':>10} {'queries':>8}")
    for n in range(5, args.n_max + 1):
        p = solve_params(n)
        inst = make_instance(n, (0, n - 1), seed=args.seed)
        full = run_full(inst, p, track_leakage=True)
        red = run_reduced(build_reduced_model(n, p.r), p, keep_trajectory=True)
        gap = max(float(np.abs(a - b).max()) for a, b in zip(full.outer_projections, red.trajectory[1:]))
        print(f"{n:>4} {full.final.graph.dimension:>8} {p.t1:>4} {1 - full.success_prob:>15.2e} "
              f"{gap:>10.2e} {full.max_leakage:>10.2e} {full.query_count:>8}")


if __name__ == "__main__":
    main()
