"""Word complexity of the Sturmian, self-similar and random-filling windows side by side.

    python demos/complexity_tables.py
"""

from fractions import Fraction

from cutproject.cantor import build_cantor, plan_parameters
from cutproject.circle import make_rotation
from cutproject.complexity import patch_complexity
from cutproject.windows import interval_window, window_random, window_W


def main():
    omega = make_rotation(2, -1, 1, 1)
    C = build_cantor(*plan_parameters(Fraction(1, 10), 3, omega))
    tables = {
        "sturmian": patch_complexity(interval_window(omega, 0, omega.point(0, 1), open_hi=True), 64),
        "W": patch_complexity(window_W(C), 64),
        "random": patch_complexity(window_random(C, "", 0), 64),
    }
    print(f"{'n':>4} " + " ".join(f"{k:>9}" for k in tables))
    for n in (1, 2, 4, 8, 16, 32, 64):
        print(f"{n:>4} " + " ".join(f"{t.value(n):>9}" for t in tables.values()))
    for k, t in tables.items():
        print(f"{k}: log p(64)/64 = {t.log_slopes()[-1]:.4f}")


if __name__ == "__main__":
    main()
