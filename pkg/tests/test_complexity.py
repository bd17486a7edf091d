from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutproject.complexity import (brute_complexity, entropy_semicontinuity_experiment, patch_complexity, splice)
from cutproject.errors import PreconditionViolated
from cutproject.windows import full_window, interval_window

# distinct length-n words over all cells, by exact cut-point sorting and midpoint evaluation
BRUTE_W = [2, 4, 6, 8, 10, 12, 14, 16]
BRUTE_V = [2, 3, 4, 5, 6, 7, 8, 9]
BRUTE_RANDOM = [2, 4, 8, 16, 32, 64, 128, 256]


def _sturmian_factors(omega, n, length=20000):
    x = omega.value
    s = "".join("1" if (k * x) % 1.0 < x else "0" for k in range(length))
    return len({s[i:i + n] for i in range(length - n)})


def test_sturmian_complexity(omega):
    W = interval_window(omega, 0, omega.point(0, 1), open_hi=True)
    table = patch_complexity(W, 20)
    assert table.p == [n + 1 for n in range(1, 21)]
    assert table.p == [_sturmian_factors(omega, n) for n in range(1, 21)]


def test_sturmian_brute_on_cells(golden):
    W = interval_window(golden, 0, golden.point(0, 1))
    cuts = sorted({(golden.orbit_point(k) - e).mod1() for e in W.boundary for k in range(6)})
    mids = [(a + b) / 2 for a, b in zip(cuts, cuts[1:])] + [(cuts[-1] + cuts[0] + 1) / 2]
    assert brute_complexity(W, 6, mids) == 7


def test_full_window(omega):
    assert patch_complexity(full_window(omega), 10).p == [1] * 10


def test_tables_match_frozen_oracle(win_W, win_V, win_random):
    assert patch_complexity(win_W, 8).p == BRUTE_W
    assert patch_complexity(win_V, 8).p == BRUTE_V
    assert patch_complexity(win_random, 8).p == BRUTE_RANDOM


def test_separation_and_shape(win_W, win_random):
    pw = patch_complexity(win_W, 64)
    pr = patch_complexity(win_random, 64)
    assert pr.value(64) > pw.value(64)
    for t in (pw, pr):
        assert t.is_monotone()
        assert t.is_subadditive()
        assert all(c >= p for c, p in zip(t.cells, t.p))


@settings(max_examples=25, deadline=None)
@given(st.fractions(min_value=Fraction(1, 50), max_value=Fraction(49, 50), max_denominator=200))
def test_interval_windows_have_linear_complexity(omega, length):
    # a single arc gives at most 2n words (complexity of a rotation coding by one interval)
    table = patch_complexity(interval_window(omega, 0, length), 12)
    assert table.is_monotone()
    assert all(p <= 2 * n for n, p in table.rows())


def test_splice():
    assert splice([1, 1, 1, 1], [0, 0, 0, 0], 2) == [1, 1, 0, 0]
    x, y = [1, 0, 1], [0, 0, 1]
    assert splice(x, y, 0) == y and splice(x, y, 3) == x


def test_semicontinuity_experiment(cantor3):
    rows = entropy_semicontinuity_experiment(cantor3, [0, 4000], 16, seed=0)
    assert rows[0]["p_xy"] == rows[0]["p_y"]
    assert rows[0]["p_yx"] == rows[0]["p_x"]
    assert rows[1]["p_xy"] == rows[1]["p_x"]


def test_bad_length(win_V):
    with pytest.raises(PreconditionViolated):
        patch_complexity(win_V, 0)
