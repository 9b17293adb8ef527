"""How d and beta approach their large-N limits.

d tends to sqrt(c^2 - 8(c-1))/c (sqrt(7)/5 for c = 10) and beta to
c*d*pi mod 2pi (about 1.2915 pi).
"""

import argparse
import math

from exact_ed.params import solve_params


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--c", type=int, default=10)
    args = ap.parse_args(argv)
    c = args.c
    d_inf = math.sqrt(c * c - 8 * (c - 1)) / c
    beta_inf = (c * d_inf * math.pi) % (2 * math.pi)
    print(f"limits: d -> {d_inf:.6f}, beta/pi -> {beta_inf / math.pi:.6f}")
    print(f"{'N':>12} {'r':>7} {'t2':>5} {'d':>10} {'d - lim':>10} {'beta/pi':>9} {'t1':>6} {'queries':>12}")
    for n in (5, 6, 7, 8, 10, 100, 10**3, 10**4, 10**5, 10**6, 10**7, 10**9):
        p = solve_params(n, c)
        print(f"{n:>12} {p.r:>7} {p.t2:>5} {p.d:>10.6f} {p.d - d_inf:>10.2e} {p.beta / math.pi:>9.5f} "
              f"{p.t1:>6} {p.query_count:>12}")


if __name__ == "__main__":
    main()
