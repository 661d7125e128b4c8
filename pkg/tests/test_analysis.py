import csv
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hedgebr.analysis import (
    NonInteriorError,
    QBounds,
    ZuDescription,
    epsilon_q,
    export_regret_trajectory,
    format_zu,
    lattice_step,
    q_bound_constants,
    vertex_distance_bounds,
    write_regret_csv,
    zu_contains,
    zu_slack,
    zu_vertices,
)
from hedgebr.dynamics import HedgeMyopic, best_response, q_value
from hedgebr.game import Game, MixedStrategy, column_payoffs
from hedgebr.oracle import solve_ne

from conftest import ETA_FIXED, INTERIOR, VALUE, X_STAR

F = Fraction
weights = st.lists(st.integers(0, 20), min_size=3, max_size=3).filter(any)


@pytest.fixture(scope="module")
def ne():
    return solve_ne(Game(INTERIOR))


@pytest.fixture(scope="module")
def zu(ne):
    return zu_vertices(Game(INTERIOR), ETA_FIXED, ne)


def test_slack_is_exact():
    g = Game(INTERIOR)
    assert zu_slack(g, 0.5) == F(25, 16)
    assert zu_slack(g, ETA_FIXED) == F(ETA_FIXED) * 25 / 8


def test_vertices_positive_and_on_facets(zu):
    g = Game(INTERIOR)
    assert len(zu.vertices) == 3
    for k, x in enumerate(zu.vertices):
        assert all(isinstance(p, Fraction) and p > 0 for p in x)
        assert sum(x) == 1
        pay = column_payoffs(g, x, exact=True)
        assert all(pay[j] == zu.b for j in range(3) if j != k)
        assert pay[k] < VALUE
    assert zu.eps_d == min(min(x) for x in zu.vertices)
    assert zu.b == VALUE + zu.slack


def test_zero_eta_collapses_to_ne(ne):
    zu0 = zu_vertices(Game(INTERIOR), 0.0, ne)
    assert all(v == X_STAR for v in zu0.vertices)


def test_vertices_approach_ne_as_eta_shrinks(ne):
    gaps = []
    for eta in (1e-2, 1e-3, 1e-4):
        z = zu_vertices(Game(INTERIOR), eta, ne)
        gaps.append(max(abs(float(a - b)) for v in z.vertices for a, b in zip(v, X_STAR)))
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[1] / gaps[2] == pytest.approx(10, rel=1e-6)


def test_zu_errors(ne, noninterior):
    with pytest.raises(NonInteriorError, match="non-interior NE"):
        zu_vertices(noninterior, 0.01, solve_ne(noninterior))
    rect = Game(((1, 0, 2), (0, 1, -1)))
    with pytest.raises(ValueError):
        zu_vertices(rect, 0.01, solve_ne(rect))
    with pytest.raises(ValueError, match="eta too large"):
        zu_vertices(Game(INTERIOR), math.sqrt(8 * math.log(3) / 10**4), ne)


def test_zu_contains_examples(zu):
    g = Game(INTERIOR)
    assert zu_contains(g, ETA_FIXED, VALUE, X_STAR)
    assert not zu_contains(g, ETA_FIXED, VALUE, MixedStrategy.pure(3, 0).probs)
    assert all(zu_contains(g, ETA_FIXED, VALUE, v) for v in zu.vertices)
    assert zu_contains(g, ETA_FIXED, VALUE, tuple(float(v) for v in X_STAR))


@given(weights)
def test_hull_points_inside_and_above_eps_d(w):
    g = Game(INTERIOR)
    z = zu_vertices(g, ETA_FIXED, solve_ne(g))
    lam = [F(v, sum(w)) for v in w]
    x = tuple(sum(l * v[i] for l, v in zip(lam, z.vertices)) for i in range(3))
    assert zu_contains(g, ETA_FIXED, VALUE, x)
    assert min(x) >= z.eps_d


def test_vertex_distance_bounds(ne, zu):
    for dist, bound in vertex_distance_bounds(Game(INTERIOR), ne, zu):
        assert 0 < dist <= bound


def test_q_bound_constants(ne, zu):
    g = Game(INTERIOR)
    qb = q_bound_constants(g, ETA_FIXED, ne, zu)
    assert qb.delta_u == F(59, 24)
    assert qb.M_p == pytest.approx(-math.log(zu.eps_d))
    assert qb.M_Q == max(math.log(3), qb.M_p + ETA_FIXED * 59 / 24)
    uniform = ZuDescription(F(0), (), F(1, 3), F(0))
    assert q_bound_constants(g, ETA_FIXED, ne, uniform).M_p == pytest.approx(math.log(3))
    assert isinstance(qb, QBounds)


def test_epsilon_q():
    assert epsilon_q(math.log(2), (F(1, 2), F(1, 2))) == pytest.approx(0.25)


@given(st.lists(st.floats(0.01, 1), min_size=3, max_size=3))
def test_epsilon_q_is_a_floor(w):
    x = tuple(v / math.fsum(w) for v in w)
    Q = q_value(x, X_STAR)
    assert min(x) >= epsilon_q(Q, X_STAR) * (1 - 1e-12)


@pytest.fixture(scope="module")
def long_run():
    g = Game(INTERIOR)
    sim = HedgeMyopic(g, ETA_FIXED)
    xs, actions = [], []
    for _ in range(4000):
        xs.append(sim.x)
        actions.append(sim.step())
    return xs, actions


def test_regret_export_examples(long_run):
    g = Game(INTERIOR)
    xs, actions = long_run
    pts = export_regret_trajectory(g, actions, VALUE)
    assert pts[0].R == (0, 0, 0)
    assert pts[0].br == best_response(g, MixedStrategy.uniform(3)) + 1 == 2
    step = lattice_step(g, VALUE)
    assert step == F(1, 24)
    assert all((r / step).denominator == 1 for p in pts for r in p.R)


def test_regret_within_q_bounds(long_run, ne, zu):
    g = Game(INTERIOR)
    xs, actions = long_run
    qb = q_bound_constants(g, ETA_FIXED, ne, zu)
    q_max = max(q_value(x, X_STAR) for x in xs)
    assert q_max <= qb.M_Q
    eps = epsilon_q(q_max, X_STAR)
    lo, hi = math.log(eps) / ETA_FIXED, qb.M_Q / ETA_FIXED
    for p in export_regret_trajectory(g, actions, VALUE):
        assert all(lo <= float(r) <= hi for r in p.R)


def test_write_regret_csv(tmp_path):
    g = Game(INTERIOR)
    pts = export_regret_trajectory(g, [1, 1, 0], VALUE)
    path = tmp_path / "r.csv"
    write_regret_csv(path, pts, 3)
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["t", "R_1", "R_2", "R_3", "br"]
    assert rows[1] == ["1", "0", "0", "0", "2"]
    assert rows[2] == ["2", "-13/24", "-37/24", "11/24", "2"]
    assert len(rows) == 4


def test_format_zu(zu):
    text = format_zu(zu)
    assert text.startswith("b=")
    assert text.count("vertex_") == 3
