"""Zero-sum matrix games and the equilibrium-quality measures on them.

``A[i][j]`` is the payoff to the column player Y (and the loss of the row
player X) when X plays ``i`` and Y plays ``j``.  Games whose entries are all
rational run in exact mode; a float entry (e.g. ``math.sqrt(2)``) turns the
whole game into a float game.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational as _RationalABC
from pathlib import Path
from typing import Sequence

import numpy as np

from .rational import RationalMatrix, format_rational, lcm_of_denominators, parse_rational

FLOAT_SUM_TOL = 1e-12


def _coerce(v):
    if isinstance(v, (Fraction, int)) or isinstance(v, _RationalABC):
        return Fraction(v)
    if isinstance(v, str):
        return parse_rational(v)
    return float(v)


@dataclass(frozen=True)
class Game:
    """An n x m zero-sum game, n, m >= 2."""

    A: tuple

    def __post_init__(self):
        rows = tuple(tuple(_coerce(v) for v in r) for r in self.A)
        if len(rows) < 2 or len(rows[0]) < 2:
            raise ValueError("a game needs at least 2 actions per player")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged payoff matrix")
        if any(isinstance(v, float) for r in rows for v in r):
            rows = tuple(tuple(float(v) for v in r) for r in rows)
            if not all(math.isfinite(v) for r in rows for v in r):
                raise ValueError("payoff entries must be finite")
        object.__setattr__(self, "A", rows)

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def m(self) -> int:
        return len(self.A[0])

    @property
    def exact(self) -> bool:
        return isinstance(self.A[0][0], Fraction)

    @property
    def entries(self):
        return [v for r in self.A for v in r]

    @cached_property
    def delta(self):
        """Payoff range ``max a_ij - min a_ij``."""
        e = self.entries
        return max(e) - min(e)

    @cached_property
    def lcm_den(self) -> int:
        if not self.exact:
            raise TypeError("float game has no common denominator")
        return lcm_of_denominators(self.entries)

    @cached_property
    def A_int(self) -> tuple:
        """``lcm_den * A`` as a tuple of integer rows."""
        d = self.lcm_den
        return tuple(tuple(int(v * d) for v in r) for r in self.A)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array([[float(v) for v in r] for r in self.A], dtype=float)

    @cached_property
    def matrix(self) -> RationalMatrix:
        if not self.exact:
            raise TypeError("float game has no rational matrix")
        return RationalMatrix(self.A)

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.A)

    def swapped(self) -> "Game":
        """Game with the roles exchanged: payoff matrix ``-A^T`` for the new column player."""
        return Game(tuple(tuple(-v for v in col) for col in zip(*self.A)))

    def to_float(self) -> "Game":
        return Game(tuple(tuple(float(v) for v in r) for r in self.A))

    def scaled(self, lam) -> "Game":
        return Game(tuple(tuple(lam * v for v in r) for r in self.A))

    def __str__(self) -> str:
        return format_game(self)


@dataclass(frozen=True)
class MixedStrategy:
    """Probability vector; exact when every entry is a Fraction, float otherwise."""

    probs: tuple
    player: str = "x"

    def __post_init__(self):
        probs = tuple(self.probs)
        if self.player not in ("x", "y"):
            raise ValueError("player must be 'x' or 'y'")
        if all(isinstance(p, (Fraction, int)) for p in probs):
            probs = tuple(Fraction(p) for p in probs)
            if any(p < 0 for p in probs) or sum(probs) != 1:
                raise ValueError(f"not a probability vector: {probs}")
        else:
            probs = tuple(float(p) for p in probs)
            if any(p < 0 for p in probs) or abs(math.fsum(probs) - 1.0) > FLOAT_SUM_TOL:
                raise ValueError(f"not a probability vector: {probs}")
        object.__setattr__(self, "probs", probs)

    @classmethod
    def uniform(cls, k: int, player: str = "x") -> "MixedStrategy":
        return cls(tuple(Fraction(1, k) for _ in range(k)), player)

    @classmethod
    def pure(cls, k: int, i: int, player: str = "x") -> "MixedStrategy":
        return cls(tuple(Fraction(int(j == i)) for j in range(k)), player)

    @property
    def exact(self) -> bool:
        return isinstance(self.probs[0], Fraction)

    def __len__(self) -> int:
        return len(self.probs)

    def __iter__(self):
        return iter(self.probs)

    def __getitem__(self, i):
        return self.probs[i]

    def as_float(self) -> tuple:
        return tuple(float(p) for p in self.probs)


@dataclass(frozen=True)
class StrategyProfile:
    x: MixedStrategy
    y: MixedStrategy

    @classmethod
    def of(cls, x: Sequence, y: Sequence) -> "StrategyProfile":
        x = x if isinstance(x, MixedStrategy) else MixedStrategy(tuple(x), "x")
        y = y if isinstance(y, MixedStrategy) else MixedStrategy(tuple(y), "y")
        return cls(x, y)


def _check(g: Game, p: StrategyProfile) -> bool:
    """Validate dimensions; return True when evaluation can stay exact."""
    if len(p.x) != g.n or len(p.y) != g.m:
        raise ValueError(f"profile dims ({len(p.x)}, {len(p.y)}) do not match game {g.n}x{g.m}")
    return g.exact and p.x.exact and p.y.exact


def row_payoffs(g: Game, y: Sequence, exact: bool) -> list:
    """``A y``: payoff to Y against each pure row."""
    if exact:
        return [sum((a * q for a, q in zip(r, y)), Fraction(0)) for r in g.A]
    return [math.fsum(float(a) * float(q) for a, q in zip(r, y)) for r in g.A]


def column_payoffs(g: Game, x: Sequence, exact: bool) -> list:
    """``x^T A``: payoff to each pure column."""
    if exact:
        return [sum((x[i] * g.A[i][j] for i in range(g.n)), Fraction(0)) for j in range(g.m)]
    return [math.fsum(float(x[i]) * float(g.A[i][j]) for i in range(g.n)) for j in range(g.m)]


def _payoff(g: Game, x, y, exact: bool):
    cols = column_payoffs(g, x, exact)
    if exact:
        return sum((c * q for c, q in zip(cols, y)), Fraction(0))
    return math.fsum(c * float(q) for c, q in zip(cols, y))


def expected_payoff(g: Game, p: StrategyProfile):
    """``x^T A y`` in the flavor of the inputs."""
    exact = _check(g, p)
    return _payoff(g, p.x, p.y, exact)


def exploitability_x(g: Game, p: StrategyProfile):
    exact = _check(g, p)
    return max(column_payoffs(g, p.x, exact)) - _payoff(g, p.x, p.y, exact)


def exploitability_y(g: Game, p: StrategyProfile):
    exact = _check(g, p)
    return _payoff(g, p.x, p.y, exact) - min(row_payoffs(g, p.y, exact))


def nash_distance(g: Game, p: StrategyProfile):
    """``max_y' x^T A y' - min_x' x'^T A y``; zero exactly at equilibrium."""
    exact = _check(g, p)
    return max(column_payoffs(g, p.x, exact)) - min(row_payoffs(g, p.y, exact))


def is_eps_ne(g: Game, p: StrategyProfile, eps) -> bool:
    if eps < 0:
        raise ValueError("eps must be non-negative")
    return exploitability_x(g, p) <= eps and exploitability_y(g, p) <= eps


# ---------------------------------------------------------------- file format


def parse_game(text: str) -> Game:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty game file")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError("first line must be 'n m'")
    n, m = int(header[0]), int(header[1])
    body = lines[1:]
    if len(body) != n:
        raise ValueError(f"expected {n} payoff rows, found {len(body)}")
    rows = []
    for k, ln in enumerate(body, start=1):
        toks = ln.split()
        if len(toks) != m:
            raise ValueError(f"row {k}: expected {m} entries, found {len(toks)}")
        rows.append(tuple(parse_rational(t) for t in toks))
    return Game(tuple(rows))


def load_game(path: str | Path) -> Game:
    return parse_game(Path(path).read_text())


def format_game(g: Game) -> str:
    fmt = format_rational if g.exact else repr
    lines = [f"{g.n} {g.m}"]
    lines += [" ".join(fmt(v) for v in r) for r in g.A]
    return "\n".join(lines) + "\n"
