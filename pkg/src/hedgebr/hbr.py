"""HBR solver: Hedge vs best response with exact cycle termination.

The loop checks the state key *before* playing each stage, so when stage
``t`` repeats the key of stage ``t'`` the recorded actions ``y_t' .. y_{t-1}``
form exactly one period.  Without a recurrence the run plays all ``T``
stages and reports the time-averaged profile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import __version__
from .cycle import CycleDetector, CycleReport, verify_cycle_consequence
from .dynamics import BR_PRECISION, HedgeMyopic, HedgeState, hsp_step, q_value
from .game import Game, StrategyProfile, MixedStrategy, nash_distance
from .oracle import solve_ne
from .rational import format_rational

DEFAULT_MEMORY_CAP = 2 * 1024**3


def epsilon_bound(n: int, T: int) -> float:
    """``sqrt(ln n / (2T))``: equilibrium gap of the time average for payoffs in [0, 1]."""
    if n < 2 or T < 1:
        raise ValueError("need n >= 2 and T >= 1")
    return math.sqrt(math.log(n) / (2 * T))


def regret_bound(n: int, T: int, eta: float, delta) -> float:
    """Average Hedge regret bound ``ln n / (eta T) + eta delta^2 / 8`` for payoff range ``delta``.

    Bounds the Nash distance of the time-averaged profile for any payoff
    scale; with ``delta = 1`` and the default rate it equals :func:`epsilon_bound`.
    """
    return math.log(n) / (eta * T) + eta * float(delta) ** 2 / 8


def auto_eta(n: int, T: int) -> float:
    return math.sqrt(8 * math.log(n) / T)


@dataclass(frozen=True)
class SolveConfig:
    horizon: int
    eta: float | str = "auto"
    mode: str = "exact"
    player: str = "y"
    record_trajectory: bool = False
    memory_cap: int = DEFAULT_MEMORY_CAP
    detect_cycles: bool = True
    br_precision: int | None = BR_PRECISION

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.mode not in ("exact", "float"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.player not in ("x", "y"):
            raise ValueError(f"unknown player {self.player!r}")
        if self.eta != "auto" and not float(self.eta) > 0:
            raise ValueError("eta must be positive or 'auto'")

    def resolve_eta(self, n: int) -> float:
        return auto_eta(n, self.horizon) if self.eta == "auto" else float(self.eta)


@dataclass
class SolveResult:
    kind: str  # "exact-cycle" | "time-average"
    player: str
    strategy: tuple  # best responder's strategy (rational in exact mode)
    strategy_other: tuple  # Hedge player's time average, floats
    eta: float
    stages: int
    eps_guarantee: float | None = None
    regret_bound: float | None = None
    cycle: CycleReport | None = None
    certified: bool | None = None
    nd_achieved: float = 0.0
    flags: list = field(default_factory=list)
    near_ties: int = 0
    trajectory: list | None = None

    @property
    def exact(self) -> bool:
        return all(isinstance(p, Fraction) for p in self.strategy)


def swap_roles(g: Game) -> Game:
    """New column player is the old row player: payoff matrix ``-A^T``."""
    return g.swapped()


def _profile_nd(g: Game, x: Sequence[float], y: Sequence) -> float:
    p = StrategyProfile(MixedStrategy(tuple(float(v) for v in x), "x"), MixedStrategy(tuple(float(v) for v in y), "y"))
    return float(nash_distance(g, p))


def _normalize(v: list[float]) -> tuple:
    s = math.fsum(v)
    return tuple(a / s for a in v)


def run_hbr(g: Game, cfg: SolveConfig) -> SolveResult:
    game = swap_roles(g) if cfg.player == "x" else g
    n, m = game.n, game.m
    eta = cfg.resolve_eta(n)
    sim = HedgeMyopic(game, eta, cfg.mode, br_precision=cfg.br_precision)
    exact = cfg.mode == "exact"
    detector = CycleDetector("exact", cfg.memory_cap) if exact and cfg.detect_cycles else None

    x_star = None
    if cfg.record_trajectory and exact:
        ne = solve_ne(game)
        x_star = ne.x_star if ne.interior_x else None

    x_sum = [0.0] * n
    ys: list[int] = []
    traj = [] if cfg.record_trajectory else None
    report = None

    for t in range(1, cfg.horizon + 1):
        if detector is not None:
            last = sim.loss[-1]
            prev = detector.observe(tuple(v - last for v in sim.loss), t)
            if prev is not None:
                window = ys[prev - 1 : t - 1]
                report = CycleReport(prev, t, tuple(window.count(j) for j in range(m)))
                break
        x = sim.x
        j = sim.step()
        ys.append(j)
        for i in range(n):
            x_sum[i] += x[i]
        if traj is not None:
            q = q_value(x, x_star) if x_star is not None else None
            y_avg = [c / t for c in sim.counts]
            traj.append({"t": t, "x": x, "y": j + 1, "Q": q, "ND": _profile_nd(game, _normalize(x_sum), y_avg)})

    stages = len(ys)
    tas_x = _normalize(x_sum) if stages else tuple(1.0 / n for _ in range(n))
    flags = []
    if detector is not None and detector.overflowed:
        flags.append("memory-cap")

    if report is not None:
        avg = report.average
        certified = verify_cycle_consequence(game, avg)
        if not certified:
            flags.append("no-certificate")
        return SolveResult(
            kind="exact-cycle",
            player=cfg.player,
            strategy=avg,
            strategy_other=tas_x,
            eta=eta,
            stages=stages,
            cycle=report,
            certified=certified,
            nd_achieved=_profile_nd(game, tas_x, avg),
            flags=flags,
            near_ties=sim.near_ties,
            trajectory=traj,
        )

    if exact:
        tas_y = tuple(Fraction(c, stages) for c in sim.counts)
    else:
        tas_y = tuple(c / stages for c in sim.counts)
    return SolveResult(
        kind="time-average",
        player=cfg.player,
        strategy=tas_y,
        strategy_other=tas_x,
        eta=eta,
        stages=stages,
        eps_guarantee=epsilon_bound(n, cfg.horizon),
        regret_bound=regret_bound(n, cfg.horizon, eta, game.delta),
        nd_achieved=_profile_nd(game, tas_x, tas_y),
        flags=flags,
        near_ties=sim.near_ties,
        trajectory=traj,
    )


# ------------------------------------------------------------------ baselines


@dataclass
class HSPResult:
    x_avg: tuple
    y_avg: tuple
    nd_trend: list
    eta_x: float
    eta_y: float

    @property
    def nd(self) -> float:
        return self.nd_trend[-1]


def run_hsp(g: Game, T: int, eta: float | str = "auto", trend: bool = True) -> HSPResult:
    """Hedge self-play; ND of the running time-averaged profile after every stage.

    With ``trend=False`` only the final ND is computed.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    ex = auto_eta(g.n, T) if eta == "auto" else float(eta)
    ey = auto_eta(g.m, T) if eta == "auto" else float(eta)
    sx, sy = HedgeState.fresh(g.n, ex), HedgeState.fresh(g.m, ey)
    x_sum, y_sum = [0.0] * g.n, [0.0] * g.m
    nds = []
    for _ in range(T):
        x, y = sx.strategy, sy.strategy
        x_sum = [a + b for a, b in zip(x_sum, x)]
        y_sum = [a + b for a, b in zip(y_sum, y)]
        if trend:
            nds.append(_profile_nd(g, _normalize(x_sum), _normalize(y_sum)))
        sx, sy = hsp_step(g, sx, sy)
    if not trend:
        nds.append(_profile_nd(g, _normalize(x_sum), _normalize(y_sum)))
    return HSPResult(_normalize(x_sum), _normalize(y_sum), nds, ex, ey)


def best_responder_average(g: Game, T: int, eta: float, mode: str = "exact", running: bool = True) -> list:
    """Running time-average of Y's actions over ``T`` stages, no early stop.

    With ``running=False`` the list holds only the final average.
    """
    sim = HedgeMyopic(g, eta, mode if g.exact else "float")
    out = []
    for t in range(1, T + 1):
        sim.step()
        if running or t == T:
            out.append(tuple(c / t for c in sim.counts))
    return out


def hbr_profile_trend(g: Game, T: int, eta: float | str = "auto", mode: str = "exact") -> list:
    """ND trend of the HBR profile over ``T`` stages.

    Each player's strategy is its own running time average from the run in
    which it plays best response: Y from ``g``, X from the swapped game.
    """
    ey = auto_eta(g.n, T) if eta == "auto" else float(eta)
    ex = auto_eta(g.m, T) if eta == "auto" else float(eta)
    ybar = best_responder_average(g, T, ey, mode)
    xbar = best_responder_average(swap_roles(g), T, ex, mode)
    return [_profile_nd(g, x, y) for x, y in zip(xbar, ybar)]


def hbr_profile_nd(g: Game, T: int, eta: float | str = "auto", mode: str = "exact") -> float:
    """Final value of :func:`hbr_profile_trend`."""
    ey = auto_eta(g.n, T) if eta == "auto" else float(eta)
    ex = auto_eta(g.m, T) if eta == "auto" else float(eta)
    ybar = best_responder_average(g, T, ey, mode, running=False)[-1]
    xbar = best_responder_average(swap_roles(g), T, ex, mode, running=False)[-1]
    return _profile_nd(g, xbar, ybar)


# ------------------------------------------------------------------- result io


def _tokens(values, exact: bool) -> str:
    if exact:
        return " ".join(format_rational(v) for v in values)
    return " ".join(f"{float(v):.12g}" for v in values)


def format_result(r: SolveResult, cfg: SolveConfig, game: Game) -> str:
    lines = [
        f"# hedgebr {__version__}",
        f"# game {game.n}x{game.m}",
        f"# horizon={cfg.horizon} eta={r.eta!r} mode={cfg.mode} player={cfg.player}",
        "kind=" + r.kind + "".join(f" [{f}]" for f in r.flags),
        f"strategy_{r.player}={_tokens(r.strategy, r.exact)}",
        f"strategy_{'y' if r.player == 'x' else 'x'}_tas={_tokens(r.strategy_other, False)}",
        f"stages={r.stages}",
        f"eps={'' if r.eps_guarantee is None else repr(r.eps_guarantee)}",
        f"regret_bound={'' if r.regret_bound is None else repr(r.regret_bound)}",
        f"nd={r.nd_achieved!r}",
    ]
    if r.cycle is not None:
        lines.append(r.cycle.format())
        lines.append(f"certified={str(r.certified).lower()}")
    return "\n".join(lines) + "\n"
