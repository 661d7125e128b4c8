"""Geometry of the upper region Z_u and bounds on the Q-sequence.

``Z_u = {x in simplex : x^T A e_j <= v* + eta delta^2 / 8 for all j}``.  For a
square game with an interior equilibrium it is a simplex whose ``n``
vertices solve ``A_k x = c + delta_c``; its smallest vertex entry ``eps_d``
bounds every strategy inside it away from the boundary.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .game import Game, column_payoffs
from .oracle import EquilibriumProfile, assumption2_matrix
from .rational import SingularMatrixError, format_rational, inverse, solve_linear_system


class NonInteriorError(ValueError):
    pass


def zu_slack(g: Game, eta) -> Fraction:
    """``eta * delta^2 / 8`` with ``eta`` taken at its exact binary value."""
    return Fraction(eta) * Fraction(g.delta) ** 2 / 8


@dataclass(frozen=True)
class ZuDescription:
    b: Fraction
    vertices: tuple  # vertex k has every facet j != k tight
    min_entry: Fraction
    slack: Fraction

    @property
    def eps_d(self) -> Fraction:
        return self.min_entry


def zu_vertices(g: Game, eta, profile: EquilibriumProfile) -> ZuDescription:
    if g.n != g.m:
        raise ValueError(f"Z_u vertices need a square game, got {g.n}x{g.m}")
    if not profile.interior:
        raise NonInteriorError("non-interior NE")
    slack = zu_slack(g, eta)
    v = profile.value
    rhs = tuple([v + slack] * (g.n - 1) + [Fraction(1)])
    verts = []
    for k in range(g.n):
        try:
            verts.append(solve_linear_system(assumption2_matrix(g, k), rhs))
        except SingularMatrixError as exc:
            raise SingularMatrixError(f"A_{k + 1} is singular") from exc
    b = v + slack
    for k, x in enumerate(verts):
        if min(x) <= 0:
            raise ValueError(f"vertex {k + 1} leaves the simplex interior; eta too large")
        if max(column_payoffs(g, x, exact=True)) > b:  # pragma: no cover - follows from the facet solve
            raise ArithmeticError(f"vertex {k + 1} is outside Z_u")
    return ZuDescription(b, tuple(verts), min(min(x) for x in verts), slack)


def zu_contains(g: Game, eta, v_star, x: Sequence) -> bool:
    """Closed membership test ``max_j x^T A e_j <= v* + eta delta^2 / 8``."""
    exact = g.exact and all(isinstance(p, Fraction) for p in x)
    if exact:
        return max(column_payoffs(g, x, exact=True)) <= Fraction(v_star) + zu_slack(g, eta)
    return max(column_payoffs(g, x, exact=False)) <= float(v_star) + float(eta) * float(g.delta) ** 2 / 8


def vertex_distance_bounds(g: Game, profile: EquilibriumProfile, zu: ZuDescription) -> list[tuple[float, float]]:
    """Per vertex: (``||x^k - x*||_2``, ``||A_k^-1||_F * ||delta_c||_2``).

    Frobenius dominates the spectral norm, so the second number is a valid
    upper bound for the first.
    """
    dc_norm = math.sqrt(float(zu.slack**2 * (g.n - 1)))
    out = []
    for k, x in enumerate(zu.vertices):
        inv = inverse(assumption2_matrix(g, k))
        frob = math.sqrt(float(sum(v * v for r in inv.rows for v in r)))
        dist = math.sqrt(float(sum((a - b) ** 2 for a, b in zip(x, profile.x_star))))
        out.append((dist, frob * dc_norm))
    return out


@dataclass(frozen=True)
class QBounds:
    M_p: float
    delta_u: Fraction
    M_Q: float


def q_bound_constants(g: Game, eta, profile: EquilibriumProfile, zu: ZuDescription | None = None) -> QBounds:
    """``M_p = -ln eps_d``, ``delta_u = v* - min a_ij``, ``M_Q = max(ln n, M_p + eta delta_u)``."""
    zu = zu if zu is not None else zu_vertices(g, eta, profile)
    M_p = -math.log(zu.min_entry)
    delta_u = profile.value - min(g.entries)
    return QBounds(M_p, delta_u, max(math.log(g.n), M_p + float(eta) * float(delta_u)))


def epsilon_q(M_Q: float, x_star: Sequence) -> float:
    """Entry floor implied by ``Q <= M_Q``: ``exp(-M_Q / min_i x*_i)``.

    ``x_j <= eps`` forces ``Q >= x*_j ln(1/eps) >= min x* ln(1/eps)``, so
    any ``Q <= M_Q`` keeps every entry above this value.
    """
    return math.exp(-M_Q / float(min(x_star)))


@dataclass(frozen=True)
class RegretPoint:
    t: int
    R: tuple
    br: int  # 1-based


def export_regret_trajectory(g: Game, actions: Sequence[int], v_star) -> list[RegretPoint]:
    """Exact regret vector before each stage with the action Y then chose.

    ``actions`` are Y's 0-based actions from a Hedge-myopic run.
    """
    v_star = Fraction(v_star)
    R = [Fraction(0)] * g.n
    out = []
    for t, j in enumerate(actions, start=1):
        out.append(RegretPoint(t, tuple(R), j + 1))
        for i in range(g.n):
            R[i] += v_star - g.A[i][j]
    return out


def lattice_step(g: Game, v_star) -> Fraction:
    """Every regret entry is an integer multiple of this."""
    return Fraction(1, g.lcm_den * Fraction(v_star).denominator)


def write_regret_csv(path, points: Sequence[RegretPoint], n: int) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", *[f"R_{i}" for i in range(1, n + 1)], "br"])
        for p in points:
            w.writerow([p.t, *(format_rational(r) for r in p.R), p.br])


def format_zu(zu: ZuDescription) -> str:
    lines = [f"b={format_rational(zu.b)}", f"eps_d={format_rational(zu.min_entry)}"]
    for k, x in enumerate(zu.vertices, start=1):
        lines.append(f"vertex_{k}=" + " ".join(format_rational(v) for v in x))
    return "\n".join(lines) + "\n"
