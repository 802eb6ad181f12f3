#!/usr/bin/env python3
"""Tabulate F^(k) for every torsion index of level N on a vertical line of tau values."""

import argparse
import csv
import sys

from ellpolylog.eisenstein import modular_F


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--N", type=int, default=3)
    ap.add_argument("--tau-real", type=float, default=0.0)
    ap.add_argument("--tau-imag", type=float, nargs="+", default=[1.0, 1.5, 2.0, 3.0])
    args = ap.parse_args(argv)
    wr = csv.writer(sys.stdout, lineterminator="\n")
    wr.writerow(["a", "b", "tau_re", "tau_im", "value_re", "value_im"])
    for a in range(args.N):
        for b in range(args.N):
            if a == 0 and b == 0:
                continue
            for y in args.tau_imag:
                v = modular_F(args.k, a, b, args.N, complex(args.tau_real, y)).value
                wr.writerow([a, b, args.tau_real, y, repr(v.real), repr(v.imag)])
    return 0


if __name__ == "__main__":
    sys.exit(main())
