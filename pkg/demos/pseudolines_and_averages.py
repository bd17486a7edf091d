"""Pseudoline decomposition in the plane and Birkhoff averages over an LDC fibre.

    python demos/pseudolines_and_averages.py
"""

from fractions import Fraction

from cutproject.birkhoff import birkhoff_fiber_agreement
from cutproject.cantor import build_cantor, plan_parameters
from cutproject.circle import make_rotation
from cutproject.cps import default_cps
from cutproject.pseudolines import decompose, default_cps3
from cutproject.windows import window_V, window_W


def main():
    omega = make_rotation(2, -1, 1, 1)
    C = build_cantor(*plan_parameters(Fraction(1, 10), 3, omega))
    W, V = window_W(C), window_V(C)

    cps3 = default_cps3(omega)
    t = omega.orbit_point(3)
    for M in (10, 25, 50):
        d = decompose(cps3, W, t, M)
        print(f"M = {M}: {len(d.points())} points on {d.count()} pseudolines (bound {2 * M * d.kappa:.1f})")

    shift = omega.orbit_point(3) - V.boundary[1]
    rep = birkhoff_fiber_agreement(default_cps(omega), V, shift, 0, Fraction(1, 10), 10**4)
    print(f"Birkhoff: {rep['candidates']} candidates, deviation {rep['deviation']:.3e} <= bound {rep['bound']:.3e}")


if __name__ == "__main__":
    main()
