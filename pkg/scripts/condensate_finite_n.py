"""Finite-N behaviour of the condensate spin-quadrature moments.

Three routes are compared: the closed form, the binomial expansion and the
dense two-mode Fock tensor. The closed form turns out exact at every N, so
the printed errors sit at roundoff. The Fock medium is shown for contrast:
its variance approaches the bosonic value 1 + 2 n1 with a genuine 1/N gap.
"""

from __future__ import annotations

import argparse
import math

from eitcv.atomic import BECMedium, FockMedium, exact_bec_moments, spin_moments
from eitcv.checks import spin_oracle_moments


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--pop1", type=float, default=0.5)
    ap.add_argument("--phi", type=float, default=math.pi / 4)
    ap.add_argument("--n1", type=int, default=2)
    args = ap.parse_args()

    print("   N   closed V_Q   |oracle-closed|  |expansion-closed|")
    for n in (2, 5, 10, 20, 50, 100):
        med = BECMedium.from_population(n, args.pop1, args.phi)
        c, o, e = spin_moments(med), spin_oracle_moments(med), exact_bec_moments(med)
        d_o = max(abs(c.v_q - o.v_q), abs(c.v_p - o.v_p), abs(c.cov_qp - o.cov_qp))
        d_e = max(abs(c.v_q - e.v_q), abs(c.v_p - e.v_p), abs(c.cov_qp - e.cov_qp))
        print(f"{n:4d}   {c.v_q:.6f}     {d_o:.2e}         {d_e:.2e}")

    print(f"\nFock medium n1 = {args.n1}: V against 1 + 2 n1 = {1 + 2 * args.n1}")
    for n in (10, 20, 50, 100, 200):
        v = spin_moments(FockMedium(args.n1, n - args.n1)).v_q
        print(f"{n:4d}   V = {v:.6f}   gap * N = {(1 + 2 * args.n1 - v) * n:.4f}")


if __name__ == "__main__":
    main()
