"""Integrate the rotation system whose exact solution is (cos t, sin t).

Prints the deviation from the exact solution for a ladder of grids, which
should roughly halve with each doubling of N.
"""

import argparse
import math
from pathlib import Path

import numpy as np

from fmgl.solver import RotationSystem, max_deviation, solve_linear
from fmgl.table import Table
from fmgl.trajectory import HistorySegment, periodicity_defect

TWO_PI = 2 * math.pi


def exact(t):
    return np.stack([np.cos(t), np.sin(t)], axis=-1)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--alpha", type=float, default=0.5)
    parser.add_argument("--N", type=int, nargs="+", default=[512, 1024, 2048, 4096])
    parser.add_argument("--t-end", type=float, default=6 * math.pi)
    parser.add_argument("--out", type=Path, default=Path("periodic_solution.csv"))
    args = parser.parse_args()

    system = RotationSystem.periodic(args.alpha, TWO_PI)
    print(f"a = {system.a:.6f}, b = {system.b:.6f}")
    previous = None
    for N in args.N:
        hist = HistorySegment.from_functions([np.cos, np.sin], 0.0, TWO_PI, N)
        traj = solve_linear(system.matrix, hist, args.alpha, args.t_end)
        dev = max_deviation(traj, exact)
        defect = periodicity_defect(traj, TWO_PI, window=(TWO_PI, traj.times[-1]))
        ratio = f", ratio {dev / previous:.3f}" if previous else ""
        print(f"N={N}: deviation {dev:.4e}, periodicity defect {defect:.4e}{ratio}")
        previous = dev

    table = Table(("t", "x1", "x2", "cos", "sin"))
    for t, x in zip(traj.times, traj.states):
        table.append(float(t), float(x[0]), float(x[1]), math.cos(t), math.sin(t))
    args.out.write_text(table.to_csv(), encoding="utf-8")
    print(f"wrote {args.out} (N={args.N[-1]})")


if __name__ == "__main__":
    main()
