"""Fixed memory derivative of sin for several memory lengths."""

import argparse
import math
from pathlib import Path

from fmgl.analysis import memory_sweep
from fmgl.functions import sine


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--alpha", type=float, default=0.5)
    parser.add_argument("--L", type=float, nargs="+", default=[10.0, 20.0, 30.0, 60.0])
    parser.add_argument("--num", type=int, default=401)
    parser.add_argument("--out", type=Path, default=Path("fig3.csv"))
    args = parser.parse_args()

    sweep = memory_sweep(sine(), args.alpha, (0.0, 4 * math.pi), args.L, args.num)
    args.out.write_text(sweep.table().to_csv(), encoding="utf-8")
    for (a, b), d in zip(zip(args.L, args.L[1:]), sweep.distances):
        print(f"sup |d(L={b:g}) - d(L={a:g})| = {d:.5f}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
