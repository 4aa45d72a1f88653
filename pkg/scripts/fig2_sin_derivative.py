"""Fixed memory derivatives of sin and cos at L = 30 for a few orders.

Closed forms next to the discrete operator, plus the largest gap between them.
"""

import argparse
import math
from pathlib import Path

import numpy as np

from fmgl.closed_forms import d_cos, d_sin
from fmgl.functions import cosine, sine
from fmgl.grunwald import GridSpec, fm_gl_derivative_series
from fmgl.table import Table


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--L", type=float, default=30.0)
    parser.add_argument("--N", type=int, default=3000)
    parser.add_argument("--alphas", type=float, nargs="+", default=[0.3, 0.5, 0.8, 1.5])
    parser.add_argument("--t-max", type=float, default=4 * math.pi)
    parser.add_argument("--out", type=Path, default=Path("fig2.csv"))
    args = parser.parse_args()

    grid = GridSpec(args.L, args.N)
    columns = ["t"]
    blocks = []
    times = None
    for alpha in args.alphas:
        for name, f, closed in (("sin", sine(), d_sin), ("cos", cosine(), d_cos)):
            series = fm_gl_derivative_series(f, 0.0, args.t_max, alpha, grid)
            exact = closed(series.times, alpha, args.L)
            times = series.times
            columns += [f"{name}_a{alpha:g}", f"{name}_a{alpha:g}_discrete"]
            blocks += [exact, series.states]
            gap = float(np.max(np.abs(series.states - exact)))
            print(f"{name} alpha={alpha:g}: max |discrete - closed| = {gap:.3e} (alpha h / 2 = {alpha * grid.h / 2:.3e})")

    table = Table(tuple(columns))
    for i, t in enumerate(times):
        table.append(float(t), *(float(b[i]) for b in blocks))
    args.out.write_text(table.to_csv(), encoding="utf-8")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
