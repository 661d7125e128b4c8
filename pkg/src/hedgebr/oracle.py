"""Ground-truth equilibria by exact simplex, and the structural game checks.

Each player's optimal strategy comes from its own LP, solved over Fractions
with Bland's rule so degenerate pivots cannot cycle.  The two LP optima must
agree exactly (minimax duality); that agreement is asserted on every solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .game import Game, MixedStrategy, StrategyProfile, nash_distance
from .rational import RationalMatrix, determinant


@dataclass(frozen=True)
class EquilibriumProfile:
    x_star: MixedStrategy
    y_star: MixedStrategy
    value: Fraction

    @property
    def interior_x(self) -> bool:
        return all(p > 0 for p in self.x_star)

    @property
    def interior_y(self) -> bool:
        return all(p > 0 for p in self.y_star)

    @property
    def interior(self) -> bool:
        return self.interior_x and self.interior_y

    @property
    def profile(self) -> StrategyProfile:
        return StrategyProfile(self.x_star, self.y_star)


def _simplex_max_unit(M: list[list[Fraction]]) -> list[Fraction]:
    """Maximize ``1^T z`` s.t. ``M z <= 1``, ``z >= 0`` for entrywise-positive ``M``.

    Slack basis is feasible from the start, and positivity keeps the LP
    bounded.  Entering and leaving variables follow Bland's smallest-index rule.
    """
    rows, cols = len(M), len(M[0])
    width = cols + rows
    # tableau rows: [coefficients..., rhs]; objective stored as reduced costs
    tab = [list(M[i]) + [Fraction(int(i == k)) for k in range(rows)] + [Fraction(1)] for i in range(rows)]
    cost = [Fraction(1)] * cols + [Fraction(0)] * rows
    basis = [cols + i for i in range(rows)]
    while True:
        enter = next((j for j in range(width) if cost[j] > 0), None)
        if enter is None:
            break
        best = None
        for i in range(rows):
            a = tab[i][enter]
            if a > 0:
                key = (tab[i][-1] / a, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:  # pragma: no cover - positive M rules this out
            raise ArithmeticError("unbounded LP")
        r = best[1]
        piv = tab[r][enter]
        tab[r] = [v / piv for v in tab[r]]
        for i in range(rows):
            if i != r and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [a - f * b for a, b in zip(tab[i], tab[r])]
        f = cost[enter]
        cost = [c - f * b for c, b in zip(cost, tab[r][:-1])]
        basis[r] = enter
    z = [Fraction(0)] * cols
    for i, b in enumerate(basis):
        if b < cols:
            z[b] = tab[i][-1]
    return z


def _minimax_strategy(A: tuple) -> tuple[tuple, Fraction]:
    """Row strategy minimizing ``max_j (x^T A)_j``, and that optimum."""
    entries = [v for r in A for v in r]
    shift = 1 - min(entries)
    n, m = len(A), len(A[0])
    # x^T P <= w 1 with P = A + shift > 0; z = x / w, maximize sum z = 1 / w
    P_T = [[A[i][j] + shift for i in range(n)] for j in range(m)]
    z = _simplex_max_unit(P_T)
    total = sum(z)
    x = tuple(v / total for v in z)
    return x, 1 / total - shift


def solve_ne(g: Game) -> EquilibriumProfile:
    """Exact equilibrium profile and value of a rational game."""
    if not g.exact:
        raise TypeError("solve_ne needs a rational payoff matrix")
    x, vx = _minimax_strategy(g.A)
    y, vy_neg = _minimax_strategy(g.swapped().A)
    if vx != -vy_neg:
        raise ArithmeticError(f"LP duality violated: {vx} != {-vy_neg}")
    prof = EquilibriumProfile(MixedStrategy(x, "x"), MixedStrategy(y, "y"), vx)
    if nash_distance(g, prof.profile) != 0:  # pragma: no cover
        raise ArithmeticError("oracle returned a non-equilibrium profile")
    return prof


def assumption2_matrix(g: Game, k: int) -> RationalMatrix:
    """``A_k``: columns of ``A`` (as rows) except column ``k`` (0-based), then ones."""
    if g.n != g.m:
        raise ValueError(f"A_k needs a square game, got {g.n}x{g.m}")
    rows = [g.column(j) for j in range(g.m) if j != k]
    rows.append(tuple(Fraction(1) for _ in range(g.n)))
    return RationalMatrix(tuple(rows))


def check_assumption2(g: Game) -> list[bool]:
    """Per-k non-singularity of ``A_k``."""
    return [determinant(assumption2_matrix(g, k)) != 0 for k in range(g.n)]


def classify_game(g: Game) -> str:
    """``rational-interior``, ``non-interior`` or ``other`` (float payoffs).

    Interiority is judged on the equilibrium the simplex returns; uniqueness
    is not checked.
    """
    if not g.exact:
        return "other"
    return "rational-interior" if solve_ne(g).interior else "non-interior"
