"""Trajectories of the small worked examples.

* ``fixed_eta.csv``: interior game, eta = ln3/625, strategies until the cycle closes
* ``noninterior.csv``: x_1 (log10) every 1000 stages, T = 1e5; it keeps falling
* ``cycle_no_assumptions.txt``: detected cycle and its average
* ``irrational_actions.csv``: Y's actions over stages 1800..1900 with a sqrt(2) entry

    python scripts/example_trajectories.py --out results/examples
"""

import argparse
import csv
import math
from pathlib import Path

from hedgebr.dynamics import HedgeMyopic
from hedgebr.game import Game
from hedgebr.hbr import SolveConfig, auto_eta, format_result, run_hbr

INTERIOR = Game(((-2, 1, 3), (1, 2, -2), (2, 0, -1)))
NONINTERIOR = Game(((-2, 1, 3), (1, -1, 2), (0, 2, -1)))
CYCLE = Game(((2, -1, 0), (-1, 1, -2), (-3, -2, 1)))
SQRT2 = Game(((-2, math.sqrt(2), 3), (1, 2, -2), (2, 0, -1)))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/examples")
    a = ap.parse_args()
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)

    cfg = SolveConfig(horizon=10**5, eta=math.log(3) / 625, record_trajectory=True)
    r = run_hbr(INTERIOR, cfg)
    with open(out / "fixed_eta.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "x_1", "x_2", "x_3", "y"])
        for row in r.trajectory:
            w.writerow([row["t"], *(f"{v:.12g}" for v in row["x"]), row["y"]])
    print(r.cycle.format())

    T = 10**5
    sim = HedgeMyopic(NONINTERIOR, auto_eta(3, T))
    with open(out / "noninterior.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "log10_x_1"])
        for t in range(1, T + 1):
            sim.step()
            if t % 1000 == 0:
                w.writerow([t, f"{sim.log_x[0] / math.log(10):.6g}"])

    cfg = SolveConfig(horizon=10**5)
    (out / "cycle_no_assumptions.txt").write_text(format_result(run_hbr(CYCLE, cfg), cfg, CYCLE))

    sim = HedgeMyopic(SQRT2, auto_eta(3, 2000), "float")
    ys = [sim.step() + 1 for _ in range(1900)]
    with open(out / "irrational_actions.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "y"])
        for t in range(1800, 1901):
            w.writerow([t, ys[t - 1]])


if __name__ == "__main__":
    main()
