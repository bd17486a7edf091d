"""Build the Cantor windows for the silver rotation and inspect one critical fibre of each.

    python demos/windows_and_fibres.py
"""

import random
from fractions import Fraction

from cutproject.cantor import build_cantor, plan_parameters
from cutproject.circle import make_rotation
from cutproject.cps import critical_points, default_cps, fiber_enumerate, similarity_classes
from cutproject.windows import window_V, window_W


def main():
    omega = make_rotation(2, -1, 1, 1)
    plan, rd = plan_parameters(Fraction(1, 10), 3, omega)
    C = build_cantor(plan, rd)
    print(f"partition levels {plan.n_seq}, |C_3| = {float(C.measure()):.6f}, {len(C.gaps)} gaps")

    cps = default_cps(omega)
    rng = random.Random(0)
    for name, W in (("self-similar W", window_W(C)), ("LDC window V", window_V(C))):
        e = rng.choice(W.boundary)
        t = omega.orbit_point(rng.randint(-2000, 2000)) - e
        hits = critical_points(W, t, 2000)
        fr = fiber_enumerate(cps, W, t, 900)
        print(f"{name}: {len(W.boundary)} boundary points, {len(hits)} hits with |k| <= 2000, "
              f"{len(similarity_classes(W, t, hits))} class(es), {len(fr.candidates)} fibre candidates, "
              f"LDC {fr.ldc}")


if __name__ == "__main__":
    main()
