"""Exact recurrence detection on the integer state vector.

The state before stage ``t`` is ``s_t = A_int @ c_t`` (``c_t`` counts Y's
past actions).  Hedge is invariant to adding a constant to every loss, so
``s_t - s_t[n] * 1`` pins down ``x_t`` exactly; two equal keys mean the run
has closed a loop.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .game import Game, row_payoffs
from .rational import format_rational

# dict slot + tuple header; each int is counted separately
_KEY_OVERHEAD = 120


class UnsupportedModeError(RuntimeError):
    pass


def state_key(g: Game, counts: Sequence[int]) -> tuple:
    """Normalized integer state vector; the last entry is always 0."""
    s = [sum(a * c for a, c in zip(row, counts)) for row in g.A_int]
    last = s[-1]
    return tuple(v - last for v in s)


@dataclass(frozen=True)
class CycleReport:
    t_prime: int
    t: int
    action_counts: tuple

    def __post_init__(self):
        if self.period < 1 or sum(self.action_counts) != self.period:
            raise ValueError("inconsistent cycle report")

    @property
    def period(self) -> int:
        return self.t - self.t_prime

    @property
    def average(self) -> tuple:
        return tuple(Fraction(c, self.period) for c in self.action_counts)

    def format(self) -> str:
        avg = " ".join(format_rational(p) for p in self.average)
        return f"cycle t'={self.t_prime} t={self.t} period={self.period}\navg={avg}"


class CycleDetector:
    """Stage-indexed map of state keys, bounded by ``memory_cap`` bytes.

    Once the estimated footprint passes the cap, detection switches itself
    off (``overflowed`` is set) and every later lookup returns None.
    """

    def __init__(self, mode: str = "exact", memory_cap: int | None = None):
        if mode != "exact":
            raise UnsupportedModeError("cycle detection needs exact mode")
        self.memory_cap = memory_cap
        self.history: dict[tuple, int] = {}
        self.bytes_used = 0
        self.overflowed = False

    def observe(self, key: tuple, t: int) -> int | None:
        """Return the earlier stage holding ``key``, or record it and return None."""
        if self.overflowed:
            return None
        prev = self.history.get(key)
        if prev is not None:
            return prev
        self.history[key] = t
        self.bytes_used += _KEY_OVERHEAD + sum(sys.getsizeof(v) for v in key)
        if self.memory_cap is not None and self.bytes_used > self.memory_cap:
            self.overflowed = True
            self.history.clear()
        return None


def detect(key: tuple, history: dict, t: int | None = None, mode: str = "exact") -> int | None:
    """Functional form of :meth:`CycleDetector.observe` on a plain dict."""
    if mode != "exact":
        raise UnsupportedModeError("cycle detection needs exact mode")
    if key in history:
        return history[key]
    history[key] = len(history) + 1 if t is None else t
    return None


def period_average(y_history: Sequence[int], t_prime: int, t: int, m: int | None = None) -> tuple:
    """Exact mean of Y's actions over stages ``t_prime .. t-1`` (1-based stages, 0-based actions)."""
    if t <= t_prime:
        raise ValueError("empty cycle window")
    window = y_history[t_prime - 1 : t - 1]
    if len(window) != t - t_prime:
        raise ValueError("action history shorter than the cycle window")
    m = m if m is not None else max(window) + 1
    return tuple(Fraction(window.count(j), len(window)) for j in range(m))


def verify_cycle_consequence(g: Game, y_bar, oracle_value=None) -> bool:
    """True iff every row of ``A @ y_bar`` is the same number.

    When ``oracle_value`` is supplied that common number must also equal it.
    """
    if isinstance(y_bar, CycleReport):
        y_bar = y_bar.average
    rows = row_payoffs(g, y_bar, exact=True)
    if any(r != rows[0] for r in rows):
        return False
    return oracle_value is None or rows[0] == oracle_value
