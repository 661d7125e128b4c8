"""Running-average ND of HBR and HSP at every stage, T = 3000.

Writes ``nd_trend_<game>.csv`` with columns ``t,hbr,hsp`` for the rational
interior game and for the variant with an irrational entry (float mode).

    python scripts/nd_trend.py --out results/nd_trend
"""

import argparse
import csv
import math
from pathlib import Path

from hedgebr.game import Game
from hedgebr.hbr import hbr_profile_trend, run_hsp

GAMES = {
    "interior": Game(((-2, 1, 3), (1, 2, -2), (2, 0, -1))),
    "sqrt2": Game(((-2, math.sqrt(2), 3), (1, 2, -2), (2, 0, -1))),
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--horizon", type=int, default=3000)
    ap.add_argument("--out", default="results/nd_trend")
    a = ap.parse_args()
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, g in GAMES.items():
        hbr = hbr_profile_trend(g, a.horizon, mode="exact" if g.exact else "float")
        hsp = run_hsp(g, a.horizon).nd_trend
        with open(out / f"nd_trend_{name}.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "hbr", "hsp"])
            for t, (u, v) in enumerate(zip(hbr, hsp), start=1):
                w.writerow([t, repr(u), repr(v)])
        print(f"{name}: final ND hbr={hbr[-1]:.4e} hsp={hsp[-1]:.4e}")


if __name__ == "__main__":
    main()
