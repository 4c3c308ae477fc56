"""Correlation coefficients against the mixing angle for the two condensate phases.

Writes the sweep CSVs and prints where each C3 curve peaks.
"""

from __future__ import annotations

import argparse
import math
from pathlib import Path

import numpy as np

from eitcv.atomic import BECMedium
from eitcv.cli import SWEEP_HEADER, sweep_rows, theta_grid
from eitcv.io import write_csv


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path("out/angle_sweep"))
    ap.add_argument("--points", type=int, default=201)
    ap.add_argument("--pop1", type=float, default=0.3)
    args = ap.parse_args()

    thetas = theta_grid(args.points)
    for name, phi in (("phi_pi4", math.pi / 4), ("phi_0", 0.0)):
        med = BECMedium.from_population(1000, args.pop1, phi)
        rows = np.array(sweep_rows(med, thetas, 0.1))
        write_csv(args.out / f"{name}.csv", SWEEP_HEADER, rows, {"pop1": args.pop1, "phi": phi})
        for j, quad in enumerate("QP"):
            c3 = rows[:, 3 + 3 * j]
            k = int(np.argmax(c3))
            print(f"{name} {quad}: V_xi = {rows[0, 7 + j]:.4f}, C3 max {c3[k]:.4f} at theta = {thetas[k]:.4f}")


if __name__ == "__main__":
    main()
