"""Birkhoff averages of a bump observable over the candidates of one fiber.

The observable is f(Gamma) = phi(dist(g0, Gamma)) with phi = 1 up to the
plateau radius rho, a linear ramp to 0 at 2*rho, and 0 beyond. Translating
Gamma by s and integrating over s in [-N, N] reduces to integrating
phi(|g - u|) over the Voronoi cell of each point g, clipped to
[g0 - N, g0 + N]. The plateau is taken as rho = eps / 2, so a single
point contributes mass 3*eps/2 and the support of f along the orbit of a
point has length 2*eps.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .circle import OrbitNumber
from .cps import PlanarCPS, check_ldc, fiber_enumerate
from .errors import PreconditionViolated
from .windows import WindowSpec


def _phi_primitive(y: float, rho: float) -> float:
    """Integral of phi over [0, y] for y >= 0."""
    if y <= rho:
        return y
    if y < 2 * rho:
        return rho + 2 * (y - rho) - (y * y - rho * rho) / (2 * rho)
    return 1.5 * rho


def _phi_integral(a: float, b: float, rho: float) -> float:
    """Integral of phi(|x|) over [a, b]."""
    if b <= a:
        return 0.0

    def odd(y):
        return math.copysign(_phi_primitive(abs(y), rho), y)

    return odd(b) - odd(a)


def bump_average(points: list, g0: float, rho: float, N: float) -> float:
    """(1/2N) * integral over s in [-N, N] of phi(dist(g0, Gamma - s)).

    ``points`` are external coordinates, which must cover [g0 - N - 2 rho,
    g0 + N + 2 rho] for the truncation to be exact.
    """
    lo, hi = g0 - N, g0 + N
    xs = sorted(points)
    parts = []
    for i, g in enumerate(xs):
        left = lo if i == 0 else max(lo, (xs[i - 1] + g) / 2)
        right = hi if i == len(xs) - 1 else min(hi, (g + xs[i + 1]) / 2)
        if right > left:
            parts.append(_phi_integral(left - g, right - g, rho))
    return math.fsum(parts) / (2 * N)


def birkhoff_fiber_agreement(cps: PlanarCPS, V: WindowSpec, t: OrbitNumber, g0, eps, N: int,
                             observable: str = "bump") -> dict:
    """Averages over [-N, N] for every fiber candidate over t and their spread.

    ``observable`` is "bump" for the plateau bump above or "one" for the
    constant function. The bound is (support length 2*eps) * sup f times
    the largest pairwise point difference, divided by 2N.
    """
    eps = Fraction(eps)
    if eps <= 0 or N < 1:
        raise PreconditionViolated("eps and N must be positive")
    if observable not in ("bump", "one"):
        raise PreconditionViolated(f"unknown observable {observable!r}")
    rho = float(eps) / 2
    g0f = float(g0)
    R = int(math.ceil(N + abs(g0f) + 2 * float(eps))) + 1
    fiber = fiber_enumerate(cps, V, t, R)
    if fiber.critical:
        ok, _ = check_ldc(V, t, [n for n, _ in fiber.hits])
        if not ok:
            raise PreconditionViolated("window fails locally disjoint complements at t")
    averages = []
    for i in range(len(fiber.candidates)):
        if observable == "one":
            averages.append(1.0)
            continue
        pts = [float(cps.external(n, m)) for n, m in fiber.candidate_points(i)]
        averages.append(bump_average(pts, g0f, rho, N))
    sets = [frozenset(c) for c in fiber.candidates]
    diff = max((len(a ^ b) for a in sets for b in sets), default=0)
    deviation = max(averages) - min(averages) if averages else 0.0
    sup_f = 1.0
    bound = 2 * float(eps) * sup_f * diff / (2 * N)
    return {
        "candidates": len(averages),
        "hits": len(fiber.hits),
        "averages": averages,
        "deviation": deviation,
        "max_point_difference": diff,
        "bound": bound,
        "holds": deviation <= bound,
        "radius": R,
    }
