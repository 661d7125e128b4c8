"""Hedge (row player X) against myopic best response (column player Y).

Exact mode keeps the action counts and cumulative losses as integers
(``A_int @ counts``); the Hedge strategy itself is a float softmax of the
shifted losses.  The best response is ranked from the same shifted losses,
and whenever the float ranking is too close to call the decision is redone
in 113-bit arithmetic (or adaptively, to the real-arithmetic answer), ties
going to the smallest action index.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .game import Game, MixedStrategy, column_payoffs

log = logging.getLogger(__name__)

TIE_MARGIN = 1e-12
# binary128 significand
BR_PRECISION = 113


class BoundaryError(ValueError):
    """A strategy entry is zero where the dynamics guarantee positivity."""


def _probs(x) -> tuple:
    return tuple(x.probs) if isinstance(x, MixedStrategy) else tuple(x)


def _logsumexp(vals: Sequence[float]) -> float:
    hi = max(vals)
    return hi + math.log(math.fsum(math.exp(v - hi) for v in vals))


def hedge_strategy(cum_loss: Sequence, eta: float) -> tuple:
    """``softmax(-eta * cum_loss)`` computed after subtracting the minimum loss."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    lo = min(cum_loss)
    shifted = [float(v - lo) for v in cum_loss]
    if not all(math.isfinite(v) for v in shifted):
        raise ValueError("non-finite cumulative loss")
    w = [math.exp(-eta * v) for v in shifted]
    s = math.fsum(w)
    return tuple(v / s for v in w)


def hedge_step(x_prev, y_prev: int, g: Game, eta: float) -> tuple:
    """One multiplicative update of ``x_prev`` against pure column ``y_prev``."""
    x_prev = _probs(x_prev)
    if any(p <= 0 for p in x_prev):
        raise BoundaryError("hedge_step needs a strictly positive strategy")
    col = [float(v) for v in g.column(y_prev)]
    lo = min(col)
    w = [p * math.exp(-eta * (a - lo)) for p, a in zip(x_prev, col)]
    s = math.fsum(w)
    return tuple(v / s for v in w)


def best_response(g: Game, x) -> int:
    """Smallest-index maximizer of ``x^T A e_j`` (0-based).

    Exact strategies on exact games are compared exactly, anything else with
    strict float comparison.
    """
    probs = _probs(x)
    exact = g.exact and all(isinstance(p, Fraction) for p in probs)
    return _argmax_first(column_payoffs(g, probs, exact))


def _argmax_first(scores: Sequence) -> int:
    best = 0
    for j in range(1, len(scores)):
        if scores[j] > scores[best]:
            best = j
    return best


def _exactly_tied(A_int, groups: list[list[int]], j: int, k: int) -> bool:
    # eta is a nonzero rational, so exp(-eta d) over distinct d are linearly
    # independent over Q: columns tie iff each equal-loss group cancels.
    return all(sum(A_int[i][j] - A_int[i][k] for i in idx) == 0 for idx in groups)


def _refined_best_response(A_int, diffs: Sequence[int], lcm_den: int, eta: float, bits: int | None = BR_PRECISION) -> int:
    """Re-rank the columns in multiprecision.

    With ``bits`` set, gaps below the working resolution count as ties and go
    to the smallest index.  With ``bits=None`` the precision is raised until
    every gap is resolved, which follows the real-arithmetic trajectory.
    """
    n, m = len(A_int), len(A_int[0])
    groups: dict[int, list[int]] = {}
    for i, d in enumerate(diffs):
        groups.setdefault(d, []).append(i)
    groups = list(groups.values())
    if bits is None:
        # the smallest weight sits about eta*max(diffs)/ln(2) bits below 1
        prec = 200 + int(eta * max(diffs) / lcm_den / math.log(2))
    else:
        prec = bits
    while True:
        with mpmath.workprec(prec):
            e = mpmath.mpf(eta)
            w = [mpmath.exp(-e * d / lcm_den) for d in diffs]
            scores = [mpmath.fsum(w[i] * A_int[i][j] for i in range(n)) for j in range(m)]
            scale = mpmath.fsum(w) * max(1, max(abs(v) for r in A_int for v in r))
            tol = mpmath.ldexp(scale, 16 - prec)
            best, decided = 0, True
            for j in range(1, m):
                if _exactly_tied(A_int, groups, j, best):
                    continue
                gap = scores[j] - scores[best]
                if abs(gap) <= tol:
                    if bits is None:
                        decided = False
                        break
                    continue
                if gap > 0:
                    best = j
            if decided:
                return best
        prec *= 2


def q_value(x, x_star) -> float:
    """Cross entropy ``-sum x*_i ln x_i``."""
    x, xs = _probs(x), _probs(x_star)
    if any(p <= 0 for p in x):
        raise BoundaryError("Q is undefined on the simplex boundary")
    return -math.fsum(float(a) * math.log(b) for a, b in zip(xs, x))


def q_from_history(R: Sequence, eta: float) -> float:
    """``ln sum_i exp(eta R_i)`` from the regret vector."""
    return _logsumexp([eta * float(r) for r in R])


def d_value(g: Game, x, v_star, eta: float) -> float:
    """One-step change of Q when X plays ``x`` and Y best-responds."""
    x = _probs(x)
    if any(p <= 0 for p in x):
        raise BoundaryError("D is evaluated on interior strategies only")
    j = best_response(g, x)
    v = float(v_star)
    return _logsumexp([math.log(p) + eta * (v - float(g.A[i][j])) for i, p in enumerate(x)])


def kl_divergence(x_star, x) -> float:
    xs, x = _probs(x_star), _probs(x)
    if any(p <= 0 for p in x) or any(p <= 0 for p in xs):
        raise BoundaryError("KL needs strictly positive arguments")
    return math.fsum(float(a) * (math.log(float(a)) - math.log(b)) for a, b in zip(xs, x))


def regret_vector(g: Game, counts: Sequence[int], v_star) -> tuple:
    """Exact ``R_i = sum_tau (v* - e_i^T A y_tau)`` from Y's action counts."""
    stages = sum(counts)
    v_star = Fraction(v_star)
    return tuple(
        stages * v_star - sum((a * c for a, c in zip(row, counts)), Fraction(0)) for row in g.A
    )


@dataclass(frozen=True)
class DynState:
    """Snapshot of the Hedge-myopic recurrence before stage ``t`` is played."""

    t: int
    counts: tuple
    cum_loss: tuple
    x: tuple
    eta: float
    mode: str


class HedgeMyopic:
    """Mutable simulator for one Hedge-vs-best-response run."""

    def __init__(
        self,
        g: Game,
        eta: float,
        mode: str = "exact",
        counts: Sequence[int] | None = None,
        br_precision: int | None = BR_PRECISION,
    ):
        if mode not in ("exact", "float"):
            raise ValueError(f"unknown mode {mode!r}")
        if mode == "exact" and not g.exact:
            raise ValueError("exact mode needs a rational game")
        if not eta > 0:
            raise ValueError("eta must be positive")
        self.g, self.eta, self.mode = g, float(eta), mode
        self.br_precision = br_precision
        self.counts = list(counts) if counts is not None else [0] * g.m
        if len(self.counts) != g.m or any(c < 0 for c in self.counts):
            raise ValueError("invalid action counts")
        self.t = sum(self.counts) + 1
        self.near_ties = 0
        if mode == "exact":
            self._A = g.A_int
            self._den = g.lcm_den
            self.loss = [sum(a * c for a, c in zip(r, self.counts)) for r in self._A]
        else:
            self._A = g.A
            self._den = 1
            self.loss = self._float_loss()
        self._cache = None

    @classmethod
    def from_state(cls, g: Game, st: DynState) -> "HedgeMyopic":
        return cls(g, st.eta, st.mode, st.counts)

    def _float_loss(self) -> list:
        return [math.fsum(a * c for a, c in zip(r, self.counts)) for r in self._A]

    def _weights(self):
        if self._cache is None:
            lo = min(self.loss)
            diffs = [v - lo for v in self.loss]
            w = [math.exp(-self.eta * (float(d) / self._den)) for d in diffs]
            self._cache = (diffs, w)
        return self._cache

    @property
    def x(self) -> tuple:
        _, w = self._weights()
        s = math.fsum(w)
        return tuple(v / s for v in w)

    @property
    def log_x(self) -> tuple:
        """Natural log of ``x``; finite even where ``x`` underflows to 0."""
        diffs, _ = self._weights()
        z = [-self.eta * (float(d) / self._den) for d in diffs]
        lse = _logsumexp(z)
        return tuple(v - lse for v in z)

    @property
    def cum_loss(self) -> tuple:
        if self.mode == "exact":
            return tuple(Fraction(v, self._den) for v in self.loss)
        return tuple(self.loss)

    def best_response(self) -> int:
        diffs, w = self._weights()
        A, n, m = self._A, self.g.n, self.g.m
        scores = [math.fsum(w[i] * A[i][j] for i in range(n)) for j in range(m)]
        j = _argmax_first(scores)
        if self.mode == "exact":
            scale = math.fsum(w) * max(1, max(abs(v) for r in A for v in r))
            runner_up = max((s for k, s in enumerate(scores) if k != j), default=-math.inf)
            if scores[j] - runner_up <= TIE_MARGIN * scale:
                self.near_ties += 1
                refined = _refined_best_response(A, diffs, self._den, self.eta, self.br_precision)
                log.debug("stage %d: near tie, float BR %d, refined BR %d", self.t, j + 1, refined + 1)
                j = refined
        return j

    def step(self) -> int:
        """Play stage ``t``; return Y's action (0-based)."""
        j = self.best_response()
        self.counts[j] += 1
        if self.mode == "exact":
            for i in range(self.g.n):
                self.loss[i] += self._A[i][j]
        else:
            self.loss = self._float_loss()
        self.t += 1
        self._cache = None
        return j

    def state(self) -> DynState:
        return DynState(self.t, tuple(self.counts), self.cum_loss, self.x, self.eta, self.mode)


def hm_step(g: Game, st: DynState) -> tuple[DynState, int]:
    sim = HedgeMyopic.from_state(g, st)
    j = sim.step()
    return sim.state(), j


def initial_state(g: Game, eta: float, mode: str = "exact") -> DynState:
    return HedgeMyopic(g, eta, mode).state()


# ------------------------------------------------------------------ self-play


@dataclass(frozen=True)
class HedgeState:
    """A Hedge learner: cumulative loss per action and its learning rate."""

    cum_loss: tuple
    eta: float

    @classmethod
    def fresh(cls, k: int, eta: float) -> "HedgeState":
        return cls((0.0,) * k, eta)

    @property
    def strategy(self) -> tuple:
        return hedge_strategy(self.cum_loss, self.eta)


def hsp_step(g: Game, st_x: HedgeState, st_y: HedgeState) -> tuple[HedgeState, HedgeState]:
    """Both players update against the opponent's mixed strategy of this stage.

    Y's losses are the negated payoffs ``-x^T A e_j``.
    """
    x, y = st_x.strategy, st_y.strategy
    A = g.array
    lx = tuple(a + math.fsum(float(v) for v in row * y) for a, row in zip(st_x.cum_loss, A))
    ly = tuple(b - math.fsum(float(v) for v in A[:, j] * x) for j, b in enumerate(st_y.cum_loss))
    return HedgeState(lx, st_x.eta), HedgeState(ly, st_y.eta)


# --------------------------------------------------------------- trajectory io


def trajectory_header(n: int) -> list[str]:
    return ["t", *[f"x_{i}" for i in range(1, n + 1)], "y", "Q", "ND"]


def _dec(v) -> str:
    if v is None or v == "":
        return ""
    return f"{float(v):.12g}"


def write_trajectory_csv(path, rows: Iterable[dict], n: int) -> None:
    """Rows carry ``t``, ``x`` (tuple), ``y`` (1-based), ``Q`` and ``ND``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(trajectory_header(n))
        for r in rows:
            w.writerow([r["t"], *(_dec(v) for v in r["x"]), r["y"], _dec(r.get("Q")), _dec(r.get("ND"))])
