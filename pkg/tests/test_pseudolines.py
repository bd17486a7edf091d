import math
from fractions import Fraction

import numpy as np
import pytest

from cutproject.circle import Quad
from cutproject.complexity import patch_complexity
from cutproject.errors import PreconditionViolated
from cutproject.pseudolines import (Cps3, brute_points, decompose, default_cps3, fiber_spanning_bound,
                                    project_line, project_range, tube_geometry)
from cutproject.windows import empty_window, full_window, interval_window


@pytest.fixture(scope="module")
def cps3(omega):
    return default_cps3(omega)


def _box(cps3, t, M):
    """Index bound from the inverse coordinate matrix: every point of the ball has |n|, |m| below it."""
    inv = np.linalg.inv(np.array([[float(x) for x in row] for row in cps3.rows()]))
    reach = 2.0 + abs(float(t))
    return max(int(math.ceil(abs(inv[i, 0]) * M + abs(inv[i, 1]) * M + abs(inv[i, 2]) * reach)) + 1
               for i in range(3))


@pytest.mark.parametrize("M", [5, 12, 20])
def test_decomposition_matches_brute_force(omega, cps3, win_W, M):
    for t in (omega.zero, omega.orbit_point(3)):
        d = decompose(cps3, win_W, t, M)
        assert d.points() == brute_points(cps3, win_W, t, M, _box(cps3, t, M))


def test_decomposition_of_interval_window(omega, cps3):
    W = interval_window(omega, 0, Fraction(1, 3), open_hi=True)
    t = omega.point(Fraction(1, 7))
    d = decompose(cps3, W, t, 15)
    assert d.points() == brute_points(cps3, W, t, 15, _box(cps3, t, 15))


def test_line_count_bound(omega, cps3, win_W, win_V):
    for W in (win_W, win_V):
        for M in (5, 20, 40):
            d = decompose(cps3, W, omega.orbit_point(3), M)
            assert d.count() <= d.kappa * 2 * M


def test_points_stay_in_their_tube(omega, cps3, win_W):
    t = omega.orbit_point(3)
    C, delta, _ = tube_geometry(cps3, win_W, t)
    dn, dm, _ = cps3.directions()
    norm = math.hypot(*dn)
    d = decompose(cps3, win_W, t, 30)
    for pl in d.lines:
        for n, k, m in pl.points:
            x = [float(v) for v in cps3.external(n, k, m)]
            off = (x[0] - m * dm[0], x[1] - m * dm[1])
            assert abs(off[0] * dn[1] - off[1] * dn[0]) / norm <= C + 1e-9


def test_projection_equals_planar_model_set(omega, cps3, win_W):
    t = omega.orbit_point(3)
    M = 25
    d = decompose(cps3, win_W, t, M)
    planar = cps3.planar()
    for pl in d.lines:
        patch = project_range(cps3, win_W, t, pl.m, M + 2 * abs(pl.m) + 1)
        in_ball = [(n, k) for n, k in patch.points if (n, k, pl.m) in set(pl.points)]
        assert [(n, k) for n, k, _ in pl.points] == sorted(in_ball)
        expected = sorted((planar.external(n, k) + cps3.c_m[0] * pl.m for n, k in in_ball), key=float)
        assert project_line(pl, cps3) == expected


def test_projection_is_injective(omega, cps3, win_W):
    d = decompose(cps3, win_W, omega.zero, 30)
    for pl in d.lines:
        xs = project_line(pl, cps3)
        assert len(set(xs)) == len(xs)


def test_lattice_translation(omega, cps3, win_W):
    # raising t by the internal coordinate of (0, 0, 1) translates the point set by c_m
    t = omega.orbit_point(3)
    d0 = decompose(cps3, win_W, t, 15)
    d1 = decompose(cps3, win_W, t + cps3.m_shift(1), 40)
    centre = cps3.external(0, 0, 1)

    def near(p):
        x = cps3.external(*p)
        dx, dy = x[0] - centre[0], x[1] - centre[1]
        return (dx * dx + dy * dy - 225).sign() <= 0

    assert {p for p in d1.points() if near(p)} == {(n, k, m + 1) for n, k, m in d0.points()}


def test_empty_window(omega, cps3):
    d = decompose(cps3, empty_window(omega), omega.zero, 10)
    assert d.count() == 0 and d.points() == []


def test_scheme_validation(omega):
    one, r = Quad(1, 0, 2), Quad(0, 1, 2)
    with pytest.raises(PreconditionViolated):
        Cps3((one, r), (one * 3 + r, one - r), (r, one), omega, Fraction(0), Fraction(2))
    with pytest.raises(PreconditionViolated):
        Cps3((one, r), (one, r), (r, one), omega, Fraction(1, 2), Fraction(2))


def test_spanning_bound_vanishes_for_a_full_window(omega, cps3):
    W = full_window(omega)
    table = patch_complexity(W, 200)
    rep = fiber_spanning_bound(cps3, W, omega.zero, Fraction(1, 2), 20, table)
    assert rep["P1"] == 1 and rep["bound"] == 0


def test_spanning_bound_decays_for_sturmian_slices(omega, cps3):
    W = interval_window(omega, 0, omega.point(0, 1), open_hi=True)
    table = patch_complexity(W, 800)
    vals = [fiber_spanning_bound(cps3, W, omega.zero, Fraction(1, 2), M, table)["normalized"]
            for M in (10, 50, 200)]
    assert vals[0] > vals[1] > vals[2]
    with pytest.raises(PreconditionViolated):
        fiber_spanning_bound(cps3, W, omega.zero, Fraction(1, 2), 5000, table)
