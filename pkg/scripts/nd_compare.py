"""Final ND of HBR and HSP time averages for T = 1000, 2000, ..., 80000.

    python scripts/nd_compare.py --out results/nd_compare
"""

import argparse
import sys
from pathlib import Path

from hedgebr.cli import main

GAME = Path(__file__).resolve().parent.parent / "games" / "interior3.txt"


def run() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--game", default=str(GAME))
    ap.add_argument("--horizons", default="1000:80000:1000")
    ap.add_argument("--out", default="results/nd_compare")
    a = ap.parse_args()
    return main(["sweep", "--game", a.game, "--horizons", a.horizons, "--metric", "nd", "--out", a.out])


if __name__ == "__main__":
    sys.exit(run())
