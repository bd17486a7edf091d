import random
from fractions import Fraction

import mpmath
import pytest

from cutproject.birkhoff import birkhoff_fiber_agreement, bump_average
from cutproject.cps import critical_points, default_cps
from cutproject.errors import PreconditionViolated


def _oracle(points, g0, rho, N):
    """(1/2N) * integral of phi(min_g |g - g0 - s|) over [-N, N] by adaptive quadrature."""
    rho = mpmath.mpf(rho)

    def phi(d):
        if d <= rho:
            return mpmath.mpf(1)
        if d < 2 * rho:
            return 2 - d / rho
        return mpmath.mpf(0)

    def f(s):
        return phi(min(abs(mpmath.mpf(g) - g0 - s) for g in points))

    kinks = {-N, N}
    for g in points:
        for off in (-2 * rho, -rho, 0, rho, 2 * rho):
            x = g - g0 + off
            if -N < x < N:
                kinks.add(x)
    xs = sorted(points)
    for a, b in zip(xs, xs[1:]):
        x = (mpmath.mpf(a) + b) / 2 - g0
        if -N < x < N:
            kinks.add(x)
    # phi is linear between consecutive kinks, so Gauss-Legendre at low degree is exact
    return mpmath.quad(f, sorted(kinks), method="gauss-legendre", maxdegree=3) / (2 * N)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_bump_average_matches_quadrature(seed):
    rng = random.Random(seed)
    pts = sorted(rng.uniform(-12, 12) for _ in range(12))
    for rho in (0.05, 0.3):
        got = bump_average(pts, 0.7, rho, 10)
        with mpmath.workdps(40):
            assert abs(got - float(_oracle(pts, 0.7, rho, 10))) < 1e-12


def test_isolated_point_mass():
    # one point well inside the range carries mass 3*rho
    assert bump_average([0.0], 0.0, 0.1, 5) == pytest.approx(0.3 / 10, abs=1e-15)


def _shifts(W, rng, count, K=10**4):
    out = []
    while len(out) < count:
        t = W.omega.orbit_point(rng.randint(-K, K)) - rng.choice(W.boundary)
        if critical_points(W, t, K):
            out.append(t)
    return out


def test_fiber_averages_agree(omega, win_V):
    cps = default_cps(omega)
    # external coordinates grow like 0.41 |k|, so |k| <= 4000 keeps the hit inside N = 2000
    for t in _shifts(win_V, random.Random(4), 3, K=4000):
        rep = birkhoff_fiber_agreement(cps, win_V, t, 0, Fraction(1, 10), 2000)
        assert rep["hits"] >= 1
        assert rep["candidates"] == rep["hits"] + 1
        assert rep["max_point_difference"] == (2 if rep["hits"] > 1 else 1)
        assert rep["holds"] and rep["deviation"] <= rep["bound"]


def test_constant_observable(omega, win_V):
    cps = default_cps(omega)
    t = omega.orbit_point(3) - win_V.boundary[1]
    rep = birkhoff_fiber_agreement(cps, win_V, t, 0, Fraction(1, 10), 500, observable="one")
    assert rep["averages"] == [1.0] * rep["candidates"]
    assert rep["deviation"] == 0


def test_window_without_ldc_is_rejected(omega, win_W):
    t = omega.orbit_point(0) - win_W.boundary[0]
    with pytest.raises(PreconditionViolated):
        birkhoff_fiber_agreement(default_cps(omega), win_W, t, 0, Fraction(1, 10), 50)


def test_bad_arguments(omega, win_V):
    cps = default_cps(omega)
    with pytest.raises(PreconditionViolated):
        birkhoff_fiber_agreement(cps, win_V, omega.zero, 0, 0, 10)
    with pytest.raises(PreconditionViolated):
        birkhoff_fiber_agreement(cps, win_V, omega.zero, 0, Fraction(1, 10), 10, observable="cube")
