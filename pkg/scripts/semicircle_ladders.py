"""Standardized free cumulants of X(n, m, N) along fixed-m and growing-m ladders.

With m fixed, kappa_4(S) tends to -1/m rather than 0, so |kappa_4| grows along
the ladder; letting m grow as well drives it toward the semicircle value 0.
Output is CSV (one row per size) for external plotting.
"""
import argparse
import csv
import sys

from freehyper.freelaws import standardized_cumulants

LADDERS = {
    "fixed-m": [(4, 2, 8), (8, 2, 16), (16, 2, 32), (32, 2, 64)],
    "growing-m": [(8, 2, 16), (32, 4, 64), (128, 8, 256)],
}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pmax", type=int, default=4)
    ap.add_argument("--ladder", choices=list(LADDERS) + ["both"], default="both")
    args = ap.parse_args(argv)

    names = list(LADDERS) if args.ladder == "both" else [args.ladder]
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["ladder", "n", "m", "N", "minus_one_over_m"] + [f"kappa_{p}" for p in range(1, args.pmax + 1)])
    for name in names:
        for n, m, N in LADDERS[name]:
            ks = standardized_cumulants(n, m, N, args.pmax)
            w.writerow([name, n, m, N, f"{-1 / m:.6f}"] + [f"{k.to_float():.12f}" for k in ks])
    return 0


if __name__ == "__main__":
    sys.exit(main())
