"""Exact moments of X(n, n, n^2) against the alternating binomial closed form.

Writes a CSV with the exact rational moment, the closed form with the
corrected prefactor n^k/(n+2)^k, and the ratio obtained with the printed
prefactor n^k/(n+1)^k (which equals ((n+2)/(n+1))^k).
"""
import argparse
import csv
import sys

import mpmath

from freehyper import io
from freehyper.freelaws import thm34_closed_form
from freehyper.weingarten import fhg_moment


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ns", default="3,4,5")
    ap.add_argument("--kmax", type=int, default=6)
    ap.add_argument("--precision", type=int, default=40)
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)

    rows = []
    for n in (int(x) for x in args.ns.split(",")):
        for k in range(1, args.kmax + 1):
            exact = fhg_moment(n, n, n * n, k)
            with mpmath.workdps(args.precision):
                ex = mpmath.mpf(exact.numerator) / exact.denominator
                cf = thm34_closed_form(n, k, args.precision)
                printed = thm34_closed_form(n, k, args.precision, prefactor="printed")
                rows.append([
                    n, k, io.fraction_str(exact), mpmath.nstr(cf, 25),
                    mpmath.nstr(abs(cf - ex) / ex, 3), mpmath.nstr(printed / ex, 15),
                ])

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["n", "k", "exact", "closed_form", "rel_error", "printed_over_exact"])
    w.writerows(rows)
    if fh is not sys.stdout:
        fh.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
