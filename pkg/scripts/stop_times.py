"""Cycle-detection stop times of both players against the horizon T (auto eta).

    python scripts/stop_times.py --out results/stop_times
"""

import argparse
import sys
from pathlib import Path

from hedgebr.cli import main

GAME = Path(__file__).resolve().parent.parent / "games" / "interior3.txt"


def run() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--game", default=str(GAME))
    ap.add_argument("--horizons", default="10000:1000000:10000")
    ap.add_argument("--out", default="results/stop_times")
    a = ap.parse_args()
    return main(["sweep", "--game", a.game, "--horizons", a.horizons, "--metric", "stoptime", "--out", a.out])


if __name__ == "__main__":
    sys.exit(run())
