"""Command-line interface: ``solve``, ``verify``, ``sweep`` and ``measure``.

Exit codes: 0 success, 1 verification/solver failure, 2 usage or
precondition error, 3 resource (dimension cap) error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

from .config import DEFAULT_CAP
from .errors import ExactEDError, ResourceError, SolverError, UnsupportedInstanceError, DomainError
from .fullspace import ALL_DISTINCT, make_instance, run_full, sample_outcomes
from .params import solve_params
from .pipeline import solve_record, sweep_point, tolerances_for, verify_row
from .records import SWEEP_HEADER, sweep_row, write_csv

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
ANGLE_FIELDS = {"theta1", "theta2", "beta", "phi0", "alpha1", "alpha2", "phi"}


class UsageError(Exception):
    pass


def parse_n_list(text: str) -> list[int]:
    """'5', '5..8', '50,500,5000' or a mix such as '5..8,20'."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = part.split("..", 1)
                lo, hi = int(lo), int(hi)
                if hi < lo:
                    raise UsageError(f"empty range {part!r}")
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise UsageError(f"cannot parse --n item {part!r}") from None
    if not out:
        raise UsageError("--n is empty")
    return out


def _single_n(text: str) -> int:
    ns = parse_n_list(text)
    if len(ns) != 1:
        raise UsageError("this command takes a single --n value")
    return ns[0]


def _check_n(n: int):
    if n < 5:
        raise UsageError("N must be ≥ 5")


def _show(key, value, degrees):
    if degrees and key in ANGLE_FIELDS:
        return f"{math.degrees(value):.10g} deg"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def cmd_solve(args) -> int:
    n = _single_n(args.n)
    _check_n(n)
    rec = solve_record(n, args.c, args.tol)
    if args.json:
        print(rec.to_json())
    else:
        for key, value in rec.to_dict().items():
            print(f"{key:>16}  {_show(key, value, args.degrees)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    ns = parse_n_list(args.n)
    for n in ns:
        _check_n(n)
    pair = tuple(int(i) for i in args.pair.split(","))
    rows = [verify_row(n, args.mode, args.c, args.tol, args.cap, pair, args.seed) for n in ns]
    if args.json:
        print(json.dumps(rows))
    else:
        print(f"{'N':>6} {'mode':>7} {'success_prob':>20} {'1-success':>11} {'phase_rot':>10} "
              f"{'leakage':>10} {'agreement':>10} {'queries':>8}  status")
        for row in rows:
            print(f"{row['N']:>6} {row['mode']:>7} {row['success_prob']:>20.17f} {row['failure_prob']:>11.3e} "
                  f"{row['phase_rotation']:>10.3e} {row['leakage']:>10.3e} {row['agreement']:>10.3e} "
                  f"{row['query_count']:>8}  {'ok' if row['passed'] else 'FAIL ' + ','.join(row['failed_checks'])}")
    bad = [row["N"] for row in rows if not row["passed"]]
    if bad:
        print(f"verification failed for N = {bad}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_sweep(args) -> int:
    ns = parse_n_list(args.n)[:: args.step]
    for n in ns:
        _check_n(n)
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            results = list(pool.map(sweep_point, ns, [args.c] * len(ns), [args.tol] * len(ns)))
    else:
        results = [sweep_point(n, args.c, args.tol) for n in ns]
    rows = [sweep_row(p, s) for p, s in results]
    if args.out in (None, "-"):
        write_csv(rows, SWEEP_HEADER, sys.stdout)
    else:
        with open(args.out, "w", newline="") as fh:
            write_csv(rows, SWEEP_HEADER, fh)
        print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_measure(args) -> int:
    n = _single_n(args.n)
    _check_n(n)
    pair = None if args.distinct else tuple(int(i) for i in args.pair.split(","))
    params = solve_params(n, args.c, tolerances_for(args.tol))
    inst = make_instance(n, pair, seed=args.instance_seed)
    result = run_full(inst, params, cap=args.cap)
    counts = sample_outcomes(result, inst, args.seed, args.shots)
    expected = ALL_DISTINCT if pair is None else inst.colliding_pair
    report = {
        "N": n,
        "seed": args.seed,
        "shots": args.shots,
        "values": list(inst.values),
        "colliding_pair": None if pair is None else list(inst.colliding_pair),
        "outcomes": {(k if k == ALL_DISTINCT else f"{k[0]},{k[1]}"): v for k, v in counts.items()},
        "correct_fraction": counts[expected] / args.shots,
        "query_count": result.query_count,
    }
    if args.json:
        print(json.dumps(report))
    else:
        print(f"seed {args.seed}  N={n}  x={list(inst.values)}  (indices 0-based)")
        for key, count in counts.most_common():
            print(f"  {key!s:>14}  {count}")
        print(f"correct fraction {report['correct_fraction']:.6f}, queries {result.query_count}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", required=True, help="N: an int, a range a..b, or a comma list")
    common.add_argument("--c", type=int, default=10, help="even inner-loop multiplier (default 10)")
    common.add_argument("--tol", type=float, default=1e-12, help="root-finding tolerance; bisection stops at min(tol, 1e-13)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--degrees", action="store_true", help="show angles in degrees (tables only)")

    parser = argparse.ArgumentParser(prog="exact-ed", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="solve the parameter bundle for one N")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", parents=[common], help="check exactness and the operator identities")
    p.add_argument("--mode", choices=("reduced", "full", "both"), default="reduced")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--pair", default="0,1", help="colliding indices for the full simulation")
    p.add_argument("--seed", type=int, default=0, help="instance seed for the full simulation")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", parents=[common], help="CSV of parameters and query counts over N")
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--out", default=None)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("measure", parents=[common], help="sample measurement outcomes of a full run")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--shots", type=int, default=1)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--pair", default="0,1")
    group.add_argument("--distinct", action="store_true")
    p.add_argument("--instance-seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_measure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "step", 1) < 1:
        parser.error("--step must be >= 1")
    try:
        return args.func(args)
    except (UsageError, UnsupportedInstanceError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except SolverError as exc:
        print(f"solver failure in equation {exc.equation} on bracket {exc.bracket}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ExactEDError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
