"""Model sets in the plane with a one-dimensional internal space.

Lattice points are integer triples (n, k, m). The coordinate matrix has
columns c_n, c_k, c_m: two external rows and the internal row
(omega1, 1, omega2) with omega2 = u + v*omega1. A point belongs to the
model set when its internal coordinate n*omega1 + k + m*omega2 lies in
W + t.

Fixing m leaves the planar condition n*omega1 + k in W + t - m*omega2,
so every slice (a pseudoline) is a planar model set in disguise. The
slice for m lies near the line through m*d_m in the direction d_n, where
d_n = c_n - omega1*c_k and d_m = c_m - omega2*c_k.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .circle import OrbitNumber, Quad, RotationNumber
from .complexity import ComplexityTable
from .cps import PlanarCPS, PointPatch, model_set
from .errors import PreconditionViolated
from .windows import WindowSpec


def _q(x, D: int) -> Quad:
    return x if isinstance(x, Quad) else Quad(Fraction(x), 0, D)


@dataclass(frozen=True)
class Cps3:
    """Coordinates of the lattice point (n, k, m) are c_n*n + c_k*k + c_m*m."""

    c_n: tuple  # (external x1, external x2) as Quads
    c_k: tuple
    c_m: tuple
    omega: RotationNumber
    u: Fraction
    v: Fraction

    def __post_init__(self):
        D = self.omega.D
        for col in (self.c_n, self.c_k, self.c_m):
            for x in col:
                if not x.is_rational() and x.D != D:
                    raise PreconditionViolated("entries must lie in the field of omega1")
        if self.u == 0 or self.v == 0:
            raise PreconditionViolated("omega2 = u + v*omega1 needs u and v nonzero")
        if self.det().sign() == 0:
            raise PreconditionViolated("coordinate matrix is singular")
        for row in self.rows():
            for i in range(3):
                for j in range(i + 1, 3):
                    if row[i].sign() == 0 or row[j].sign() == 0 or (row[i] / row[j]).is_rational():
                        raise PreconditionViolated("row entries must have pairwise irrational ratios")
        if self.planar().slope.sign() == 0:
            raise PreconditionViolated("pseudolines would be unbounded")

    @property
    def omega2(self) -> Quad:
        return _q(self.u, self.omega.D) + self.omega.quad * self.v

    def rows(self) -> list:
        return [[self.c_n[0], self.c_k[0], self.c_m[0]],
                [self.c_n[1], self.c_k[1], self.c_m[1]],
                [self.omega.quad, _q(1, self.omega.D), self.omega2]]

    def det(self) -> Quad:
        a = self.rows()
        return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))

    def external(self, n: int, k: int, m: int) -> tuple:
        return (self.c_n[0] * n + self.c_k[0] * k + self.c_m[0] * m,
                self.c_n[1] * n + self.c_k[1] * k + self.c_m[1] * m)

    def internal(self, n: int, k: int, m: int) -> OrbitNumber:
        return OrbitNumber(k + m * self.u, n + m * self.v, self.omega)

    def m_shift(self, m: int) -> OrbitNumber:
        """m*omega2 as an orbit number."""
        return OrbitNumber(m * self.u, m * self.v, self.omega)

    def planar(self) -> PlanarCPS:
        """The scheme seen by the first external coordinate of one slice."""
        return PlanarCPS(self.c_n[0], self.c_k[0], self.omega)

    def directions(self) -> tuple:
        """Float vectors d_n, d_m and c_k."""
        w1, w2 = self.omega.value, float(self.omega2)
        cn = [float(x) for x in self.c_n]
        ck = [float(x) for x in self.c_k]
        cm = [float(x) for x in self.c_m]
        dn = (cn[0] - w1 * ck[0], cn[1] - w1 * ck[1])
        dm = (cm[0] - w2 * ck[0], cm[1] - w2 * ck[1])
        return dn, dm, tuple(ck)


def default_cps3(omega: RotationNumber) -> Cps3:
    """A fixed scheme over Q(sqrt D) with omega2 = 1/2 + 2*omega1."""
    D = omega.D
    r = Quad(0, 1, D)
    one = Quad(1, 0, D)
    return Cps3(c_n=(one, r), c_k=(one * 3 + r, one - r), c_m=(r, one), omega=omega,
                u=Fraction(1, 2), v=Fraction(2))


def _perp(vec: tuple, base: tuple) -> float:
    """Length of the component of vec orthogonal to base."""
    return abs(vec[0] * base[1] - vec[1] * base[0]) / math.hypot(*base)


@dataclass
class Pseudoline:
    m: int
    points: list  # (n, k, m) triples sorted by n


@dataclass
class Decomposition:
    M: int
    lines: list
    tube_radius: float
    spacing: float
    kappa: float

    def points(self) -> list:
        return sorted(p for pl in self.lines for p in pl.points)

    def count(self) -> int:
        """Pseudolines that meet the ball."""
        return sum(1 for pl in self.lines if pl.points)


def _window_reach(W: WindowSpec, t: OrbitNumber) -> float:
    """Largest |y| over the lifted window shifted by t."""
    arcs = W.set.arcs() if not W.set.is_full() else [(W.omega.zero, W.omega.one)]
    tf = float(t)
    return max(max(abs(float(lo) + tf), abs(float(hi) + tf)) for lo, hi in arcs)


def tube_geometry(cps3: Cps3, W: WindowSpec, t: OrbitNumber) -> tuple:
    """(C, delta, kappa): tube radius, line spacing, count constant.

    Offsets from the line through m*d_m are y*c_k with y the internal
    coordinate, so C = |c_k perpendicular to d_n| * max|y|. Consecutive
    lines are delta = |d_m perpendicular to d_n| apart, hence at most
    2(M + C)/delta + 1 <= kappa * 2M lines meet the ball of radius M >= 1.
    """
    dn, dm, ck = cps3.directions()
    C = _perp(ck, dn) * _window_reach(W, t)
    delta = _perp(dm, dn)
    kappa = (1 + C + delta / 2) / delta
    return C, delta, kappa


def _in_ball(x: tuple, M: int) -> bool:
    return (x[0] * x[0] + x[1] * x[1] - M * M).sign() <= 0


def decompose(cps3: Cps3, W: WindowSpec, t: OrbitNumber, M: int) -> Decomposition:
    """Model-set points in the closed ball of radius M, grouped by m."""
    if M <= 0:
        raise PreconditionViolated("M must be positive")
    C, delta, kappa = tube_geometry(cps3, W, t) if not W.set.is_empty() else (0.0, 1.0, 0.0)
    if W.set.is_empty():
        return Decomposition(M, [], C, delta, kappa)
    m_max = int(math.ceil((M + C) / delta)) + 1
    lines = []
    for m in range(-m_max, m_max + 1):
        patch = project_range(cps3, W, t, m, M + abs(float(cps3.c_m[0])) * abs(m) + 1)
        pts = []
        for n, k in patch.points:
            if _in_ball(cps3.external(n, k, m), M):
                pts.append((n, k, m))
        lines.append(Pseudoline(m, sorted(pts)))
    return Decomposition(M, lines, C, delta, kappa)


def project_range(cps3: Cps3, W: WindowSpec, t: OrbitNumber, m: int, R) -> PointPatch:
    """Planar model set for the slice m: window W + t - m*omega2, first coordinate only."""
    return model_set(cps3.planar(), W, t - cps3.m_shift(m), Fraction(R).limit_denominator(10**6) + 1)


def project_line(pl: Pseudoline, cps3: Cps3) -> list:
    """First external coordinates of the slice, as exact values, sorted.

    They equal m*c_m[0] plus the planar model-set coordinates of the
    slice (see project_range).
    """
    return sorted((cps3.external(n, k, m)[0] for n, k, m in pl.points), key=float)


def brute_points(cps3: Cps3, W: WindowSpec, t: OrbitNumber, M: int, box: int) -> list:
    """Reference enumeration over |n|, |m| <= box and every k near the lifted window."""
    if W.set.is_empty():
        return []
    arcs = W.set.arcs() if not W.set.is_full() else [(W.omega.zero, W.omega.one)]
    los = [lo for lo, _ in arcs]
    x1 = [float(x) for x in (cps3.c_n[0], cps3.c_k[0], cps3.c_m[0])]
    x2 = [float(x) for x in (cps3.c_n[1], cps3.c_k[1], cps3.c_m[1])]

    def inside(y):
        i = bisect_right(los, y) - 1
        if i < 0 or y > arcs[i][1]:
            return False
        lo, hi = arcs[i]
        return not ((y == lo and lo.mod1() in W.open_points) or (y == hi and hi.mod1() in W.open_points))

    out = []
    for m in range(-box, box + 1):
        for n in range(-box, box + 1):
            base = cps3.internal(n, 0, m) - t
            k0 = -math.floor(float(base))
            for k in range(k0 - 2, k0 + 4):
                f1 = x1[0] * n + x1[1] * k + x1[2] * m
                f2 = x2[0] * n + x2[1] * k + x2[2] * m
                if f1 * f1 + f2 * f2 > M * M + 1e-6 * (1 + M * M):
                    continue
                if inside(base + k) and _in_ball(cps3.external(n, k, m), M):
                    out.append((n, k, m))
    return sorted(out)


def fiber_spanning_bound(cps3: Cps3, W: WindowSpec, t: OrbitNumber, eps, M: int,
                         planar_p: ComplexityTable) -> dict:
    """kappa * 2(M + 1/eps) * log P1 and its value divided by the area of the ball.

    P1 is the planar word count at the length that covers 2(M + 1/eps)
    of one slice, i.e. p(ceil(2(M + 1/eps) / |slope|)).
    """
    eps = Fraction(eps)
    if eps <= 0 or M <= 0:
        raise PreconditionViolated("eps and M must be positive")
    _, _, kappa = tube_geometry(cps3, W, t)
    reach = 2 * (M + 1 / float(eps))
    n_word = max(1, math.ceil(reach / abs(float(cps3.planar().slope))))
    if n_word > max(planar_p.n):
        raise PreconditionViolated(f"complexity table stops before word length {n_word}")
    P1 = planar_p.value(n_word)
    bound = kappa * reach * math.log(P1)
    return {"M": M, "eps": eps, "kappa": kappa, "word_length": n_word, "P1": P1,
            "bound": bound, "normalized": bound / (math.pi * M * M)}
