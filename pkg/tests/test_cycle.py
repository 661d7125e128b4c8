import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hedgebr.cycle import (
    CycleDetector,
    CycleReport,
    UnsupportedModeError,
    detect,
    period_average,
    state_key,
    verify_cycle_consequence,
)
from hedgebr.dynamics import HedgeMyopic
from hedgebr.game import Game

from conftest import ETA_FIXED, INTERIOR, VALUE, Y_STAR

F = Fraction
counts3 = st.lists(st.integers(0, 40), min_size=3, max_size=3)


def test_state_key_examples(interior):
    assert state_key(interior, (0, 0, 0)) == (0, 0, 0)
    assert state_key(interior, (1, 0, 0)) == (-4, -1, 0)


def test_state_key_uses_integer_rows():
    g = Game(((F(1, 2), 0), (0, F(1, 3))))
    assert state_key(g, (1, 1)) == (1, 0)


@given(counts3, counts3)
def test_state_key_shift_invariance(c, d):
    g = Game(INTERIOR)
    # y* equalizes the rows, so adding 24 y* (=(9,8,7)) shifts every loss by 11
    e = [a + b for a, b in zip(c, (9, 8, 7))]
    assert state_key(g, e) == state_key(g, c)
    same = state_key(g, c) == state_key(g, d)
    rows_c = [sum(a * x for a, x in zip(r, c)) for r in INTERIOR]
    rows_d = [sum(a * x for a, x in zip(r, d)) for r in INTERIOR]
    assert same == (len({u - v for u, v in zip(rows_c, rows_d)}) == 1)


@given(counts3)
def test_equal_keys_give_equal_strategies(c):
    g = Game(INTERIOR)
    e = [a + b for a, b in zip(c, (9, 8, 7))]
    a, b = HedgeMyopic(g, 0.1, counts=c), HedgeMyopic(g, 0.1, counts=e)
    assert a.x == b.x


def test_detector_examples():
    d = CycleDetector()
    assert d.observe((1, 0), 1) is None
    assert d.observe((2, 0), 2) is None
    assert d.observe((1, 0), 3) == 1
    h = {}
    assert detect((0, 0), h, 1) is None
    assert detect((0, 0), h, 5) == 1


def test_detector_rejects_float_mode():
    with pytest.raises(UnsupportedModeError):
        CycleDetector("float")
    with pytest.raises(UnsupportedModeError):
        detect((0,), {}, 1, "float")


def test_detector_memory_cap():
    d = CycleDetector(memory_cap=500)
    for t in range(100):
        d.observe((t, 0), t + 1)
    assert d.overflowed
    assert d.observe((0, 0), 200) is None
    assert d.history == {}


def test_recurrence_on_fixed_eta_run(interior):
    sim = HedgeMyopic(interior, ETA_FIXED)
    d = CycleDetector()
    for t in range(1, 5000):
        if d.observe(state_key(interior, sim.counts), t) is not None:
            break
        sim.step()
    else:
        pytest.fail("no recurrence")


def test_period_average_examples():
    assert period_average([0, 0, 1], 1, 4, 3) == (F(2, 3), F(1, 3), F(0))
    assert period_average([5, 0, 1, 1, 2], 2, 4) == (F(1, 2), F(1, 2))
    with pytest.raises(ValueError):
        period_average([0, 1], 2, 2)
    with pytest.raises(ValueError):
        period_average([0, 1], 1, 5)


def test_cycle_report():
    r = CycleReport(397, 421, (9, 8, 7))
    assert r.period == 24
    assert r.average == Y_STAR
    assert r.format() == "cycle t'=397 t=421 period=24\navg=3/8 1/3 7/24"
    with pytest.raises(ValueError):
        CycleReport(5, 5, ())
    with pytest.raises(ValueError):
        CycleReport(1, 4, (1, 1, 0))


def test_verify_cycle_consequence_examples(interior):
    assert verify_cycle_consequence(interior, Y_STAR)
    assert verify_cycle_consequence(interior, Y_STAR, VALUE)
    assert not verify_cycle_consequence(interior, Y_STAR, F(0))
    assert not verify_cycle_consequence(interior, (F(2, 3), F(1, 3), F(0)))
    assert verify_cycle_consequence(interior, CycleReport(397, 421, (9, 8, 7)))


def test_verify_degenerate_single_action():
    saddle = Game(((1, 2), (1, 0)))
    assert verify_cycle_consequence(saddle, (F(1), F(0)))
    assert not verify_cycle_consequence(saddle, (F(0), F(1)))


def test_cycle_window_is_one_period(interior):
    eta = math.sqrt(8 * math.log(3) / 500000)
    sim = HedgeMyopic(interior, eta)
    d = CycleDetector()
    ys = []
    for t in range(1, 3000):
        prev = d.observe(state_key(interior, sim.counts), t)
        if prev is not None:
            break
        ys.append(sim.step())
    period = t - prev
    # the continuation replays the window verbatim
    more = [sim.step() for _ in range(2 * period)]
    assert more == ys[prev - 1 : t - 1] * 2
    assert period_average(ys, prev, t, 3) == Y_STAR
