"""How well a bosonic mode stands in for the collective atomic excitation.

For a number-state medium |n1, N - n1> the exact spin quadrature variance is
compared with that of the boson number state |n1> (1 + 2 n1), together with
the storage correlation coefficients each gives at the balanced angle.
"""

from __future__ import annotations

import argparse
import math

from eitcv import fock
from eitcv.atomic import FockMedium
from eitcv.checks import spin_oracle_moments
from eitcv.qnd import closed_form_coefficients


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n1", type=int, default=2)
    ap.add_argument("--theta", type=float, default=math.pi / 4)
    args = ap.parse_args()

    boson = fock.build_state([("x", fock.Number(args.n1, args.n1 + 6))])
    _, cov = fock.moments(boson, [fock.Q("x")])
    vb = float(cov[0, 0])
    cb = closed_form_coefficients(1.0, vb, args.theta)
    print(f"boson |{args.n1}>: V = {vb:.6f}, C = ({cb[0]:.5f}, {cb[1]:.5f}, {cb[2]:.5f})")
    for n in (5, 10, 20, 50, 100, 200):
        if n <= args.n1:
            continue
        v = spin_oracle_moments(FockMedium(args.n1, n - args.n1)).v_q
        c = closed_form_coefficients(1.0, v, args.theta)
        print(f"N = {n:4d}: V = {v:.6f}, C = ({c[0]:.5f}, {c[1]:.5f}, {c[2]:.5f}), |dV| = {abs(v - vb):.2e}")


if __name__ == "__main__":
    main()
