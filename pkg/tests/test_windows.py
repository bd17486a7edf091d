from fractions import Fraction

import pytest

from cutproject.circle import IntervalSet, OrbitNumber
from cutproject.errors import PreconditionViolated
from cutproject.windows import (check_irredundant, custom_window, empty_window, filling_of, full_window,
                                gap_distance, interval_window, local_germ, removed_gaps_V, window_from_filling,
                                window_random)


def _gaps(C, level):
    return IntervalSet(C.omega, [(g.lo, g.hi) for g in C.gaps if g.level == level])


def test_self_similar_window_fills_even_gaps(cantor3, win_W):
    assert win_W.set == cantor3.body.union(_gaps(cantor3, 2))
    assert win_W.set.complement() == _gaps(cantor3, 3)
    assert win_W.measure() == 1 - _gaps(cantor3, 3).measure()
    assert len(win_W.boundary) == 6684


def test_ldc_window_removes_one_gap_per_level(cantor3, win_V):
    chosen = removed_gaps_V(cantor3)
    assert [g.level for g in chosen] == [2, 3]
    comp = win_V.set.complement()
    assert len(comp.components) == 2
    assert comp.measure() == sum((g.length for g in chosen), cantor3.omega.zero)
    assert len(win_V.boundary) == 4


def test_ldc_window_chooses_the_nearest_gap(cantor3):
    gaps = cantor3.canonical_gaps()
    for g, k in zip(removed_gaps_V(cantor3), (2, 3)):
        d, _ = gap_distance(gaps[k - 1], g)
        others = [gap_distance(gaps[k - 1], h)[0] for h in gaps if h.level == k]
        assert d == min(others)


def test_gap_distance_symmetry(cantor3):
    a, b = cantor3.gaps[0], cantor3.gaps[5]
    dab, cw = gap_distance(a, b)
    dba, cw2 = gap_distance(b, a)
    assert dab == dba
    assert cw != cw2
    assert gap_distance(a, a)[0] == 0


def test_random_filling_is_seeded(cantor3, win_random):
    again = window_random(cantor3, "", 0)
    assert again == win_random
    other = window_random(cantor3, "", 1)
    assert other != win_random
    assert cantor3.body.difference(win_random.set).is_empty()


def test_filling_round_trip(cantor3, win_random, win_W):
    assert window_from_filling(cantor3, filling_of(win_random)).set == win_random.set
    assert window_from_filling(cantor3, filling_of(win_W)).set == win_W.set


def test_filling_prefix_is_respected(cantor3):
    W = window_random(cantor3, "1011", 5)
    assert filling_of(W)[:4] == [True, False, True, True]
    with pytest.raises(PreconditionViolated):
        window_random(cantor3, "10x")
    with pytest.raises(PreconditionViolated):
        window_random(cantor3, "0" * (len(cantor3.gaps) + 1))


def test_half_open_interval(omega):
    W = interval_window(omega, 0, Fraction(1, 3), open_hi=True)
    assert W.contains(OrbitNumber(0, 0, omega))
    assert not W.contains(OrbitNumber(Fraction(1, 3), 0, omega))
    assert W.measure() == Fraction(1, 3)
    assert W.set.contains(OrbitNumber(Fraction(1, 3), 0, omega))


def test_trivial_windows(omega):
    assert full_window(omega).measure() == 1
    assert empty_window(omega).measure() == 0
    assert check_irredundant(full_window(omega))["degenerate"]


def test_constructed_windows_have_no_periods(win_W, win_V, win_random):
    for W in (win_W, win_V, win_random):
        assert check_irredundant(W)["periods"] == []


def test_periodic_window_is_detected(omega):
    S = IntervalSet.from_arcs(omega, [(omega.point(0), omega.point(Fraction(1, 10))),
                                      (omega.point(Fraction(1, 2)), omega.point(Fraction(6, 10)))])
    rep = check_irredundant(custom_window(S))
    assert rep["periods"] == [omega.point(Fraction(1, 2))]


def test_local_germ(omega):
    S = IntervalSet.interval(omega, Fraction(1, 4), Fraction(1, 2))
    g = local_germ(S, omega.point(Fraction(1, 2)), omega.point(Fraction(1, 100)))
    assert g.measure() == Fraction(1, 100)
    assert g.contains(omega.zero)
    assert not g.interior_contains(omega.zero)
