"""Exact arithmetic in Q(sqrt D) and closed interval sets on the circle R/Z.

Every point the constructions produce has the form a + b*omega with
rational a, b, so all comparisons, floors and measures here are exact.
A float shadow value is kept for speed; it is only trusted when the gap
it reports is far above its rounding error.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from .errors import PreconditionViolated, RationalRotation, ZeroDenominator

Rational = Union[int, Fraction]


def _rat(x) -> Rational:
    """Coerce to int when integral, else Fraction."""
    if isinstance(x, int):
        return x
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def _split_square(D: int) -> tuple[int, int]:
    """Write D = s^2 * core with core square-free; return (s, core)."""
    s, core = 1, 1
    n = D
    f = 2
    while f * f <= n:
        while n % (f * f) == 0:
            n //= f * f
            s *= f
        if n % f == 0:
            n //= f
            core *= f
        f += 1
    return s, core * n


def floor_quadratic(x: Rational, y: Rational, D: int) -> int:
    """Exact floor of x + y*sqrt(D) for rationals x, y and non-square D."""
    x, y = Fraction(x), Fraction(y)
    den = x.denominator * y.denominator // math.gcd(x.denominator, y.denominator)
    X = x.numerator * (den // x.denominator)
    Y = y.numerator * (den // y.denominator)
    s = math.isqrt(Y * Y * D)
    fy = s if Y >= 0 else -s - 1
    return (X + fy) // den


def sign_quadratic(x: Rational, y: Rational, D: int) -> int:
    """Exact sign of x + y*sqrt(D) for rationals x, y and non-square D."""
    if y == 0:
        return (x > 0) - (x < 0)
    sy = 1 if y > 0 else -1
    if x == 0 or (x > 0) == (y > 0):
        return sy
    return (1 if x > 0 else -1) if x * x > y * y * D else sy


class Quad:
    """An element x + y*sqrt(D) of a real quadratic field, x and y rational."""

    __slots__ = ("x", "y", "D")

    def __init__(self, x: Rational, y: Rational = 0, D: int = 2):
        self.x = _rat(x)
        self.y = _rat(y)
        self.D = D

    def _lift(self, other) -> "Quad":
        if isinstance(other, Quad):
            if other.D != self.D and other.y != 0 and self.y != 0:
                raise PreconditionViolated("mixing quadratic fields with different D")
            return other
        if isinstance(other, OrbitNumber):
            return other.to_quad()
        return Quad(other, 0, self.D)

    def _field(self, other: "Quad") -> int:
        return self.D if self.y != 0 else other.D

    def __add__(self, other):
        o = self._lift(other)
        return Quad(self.x + o.x, self.y + o.y, self._field(o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return Quad(self.x - o.x, self.y - o.y, self._field(o))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return Quad(-self.x, -self.y, self.D)

    def __mul__(self, other):
        o = self._lift(other)
        D = self._field(o)
        return Quad(self.x * o.x + self.y * o.y * D, self.x * o.y + self.y * o.x, D)

    __rmul__ = __mul__

    def inverse(self) -> "Quad":
        norm = self.x * self.x - self.y * self.y * self.D
        if norm == 0:
            raise ZeroDivisionError("inverse of zero")
        return Quad(Fraction(self.x) / norm, -Fraction(self.y) / norm, self.D)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def sign(self) -> int:
        return sign_quadratic(self.x, self.y, self.D)

    def floor(self) -> int:
        return floor_quadratic(self.x, self.y, self.D)

    def frac(self) -> "Quad":
        return Quad(self.x - self.floor(), self.y, self.D)

    def is_rational(self) -> bool:
        return self.y == 0

    def __eq__(self, other):
        if not isinstance(other, (Quad, OrbitNumber, int, Fraction)):
            return NotImplemented
        o = self._lift(other)
        return self.x == o.x and self.y == o.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.x) + float(self.y) * math.sqrt(self.D)

    def __repr__(self):
        return f"Quad({self.x}, {self.y}, D={self.D})"


@dataclass(frozen=True)
class RotationNumber:
    """omega = (p + q*sqrt(D)) / r, normalized so that 0 < omega < 1/2."""

    D: int
    p: int
    q: int
    r: int

    @property
    def quad(self) -> Quad:
        return Quad(Fraction(self.p, self.r), Fraction(self.q, self.r), self.D)

    @property
    def value(self) -> float:
        return (self.p + self.q * math.sqrt(self.D)) / self.r

    def __float__(self) -> float:
        return self.value

    def point(self, a: Rational, b: Rational = 0) -> "OrbitNumber":
        return OrbitNumber(a, b, self)

    def floor_multiple(self, k: int) -> int:
        """Exact floor of k*omega."""
        return floor_quadratic(Fraction(k * self.p, self.r), Fraction(k * self.q, self.r), self.D)

    def orbit_point(self, k: int) -> "OrbitNumber":
        """The circle point {k*omega}, represented as (-floor(k*omega), k)."""
        return OrbitNumber(-self.floor_multiple(k), k, self)

    @property
    def zero(self) -> "OrbitNumber":
        return OrbitNumber(0, 0, self)

    @property
    def one(self) -> "OrbitNumber":
        return OrbitNumber(1, 0, self)

    def as_dict(self) -> dict:
        return {"D": self.D, "p": self.p, "q": self.q, "r": self.r}


def make_rotation(D: int, p: int, q: int, r: int) -> RotationNumber:
    """Build a normalized irrational rotation number from (p + q*sqrt(D))/r.

    The value is reduced mod 1 and reflected (omega -> 1 - omega) when it
    exceeds 1/2; both operations conjugate the rotation to an equivalent one.
    """
    if r == 0:
        raise ZeroDenominator("r must be nonzero")
    if q == 0 or D < 1:
        raise RationalRotation(f"(p + q*sqrt(D))/r with q={q}, D={D} is rational")
    s, core = _split_square(D)
    if core == 1:
        raise RationalRotation(f"D={D} is a perfect square")
    q *= s
    D = core
    if r < 0:
        p, q, r = -p, -q, -r
    p -= floor_quadratic(Fraction(p, r), Fraction(q, r), D) * r
    if sign_quadratic(2 * p - r, 2 * q, D) > 0:
        p, q = r - p, -q
    g = math.gcd(math.gcd(p, q), r)
    return RotationNumber(D, p // g, q // g, r // g)


class OrbitNumber:
    """The real number a + b*omega with rational a, b.

    Integer pairs house the projected lattice {n*omega + m}; rational
    coefficients appear for midpoints and rational test windows.
    Equality is coefficient equality, which is exact because omega is
    irrational.
    """

    __slots__ = ("a", "b", "omega", "_f", "_m")

    def __init__(self, a: Rational, b: Rational, omega: RotationNumber):
        a = a if type(a) is int else _rat(a)
        b = b if type(b) is int else _rat(b)
        self.a = a
        self.b = b
        self.omega = omega
        fa, fb = float(a), float(b)
        self._f = fa + fb * omega.value
        self._m = abs(fa) + abs(fb)

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> "OrbitNumber":
        if isinstance(other, OrbitNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return OrbitNumber(other, 0, self.omega)
        raise TypeError(f"cannot combine OrbitNumber with {type(other).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        return OrbitNumber(self.a + o.a, self.b + o.b, self.omega)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return OrbitNumber(self.a - o.a, self.b - o.b, self.omega)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return OrbitNumber(-self.a, -self.b, self.omega)

    def __mul__(self, s):
        if not isinstance(s, (int, Fraction)):
            raise TypeError("OrbitNumber can only be scaled by rationals")
        return OrbitNumber(self.a * s, self.b * s, self.omega)

    __rmul__ = __mul__

    def __truediv__(self, s):
        if not isinstance(s, (int, Fraction)):
            raise TypeError("OrbitNumber can only be divided by rationals")
        return OrbitNumber(Fraction(self.a) / s, Fraction(self.b) / s, self.omega)

    # exact order ------------------------------------------------------------
    def _cmp(self, other) -> int:
        o = self._coerce(other)
        d = self._f - o._f
        tol = (self._m + o._m) * 1e-15 + 1e-300
        if d > tol:
            return 1
        if d < -tol:
            return -1
        da = self.a - o.a
        db = self.b - o.b
        if db == 0:
            return (da > 0) - (da < 0)
        w = self.omega
        return sign_quadratic(da * w.r + db * w.p, db * w.q, w.D)

    def sign(self) -> int:
        return self._cmp(0)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, OrbitNumber):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b))

    # floors and the circle --------------------------------------------------
    def floor(self) -> int:
        f = math.floor(self._f)
        tol = self._m * 1e-15 + 1e-300
        if f + tol < self._f < f + 1 - tol:
            return f
        w = self.omega
        return floor_quadratic(self.a + Fraction(self.b * w.p, w.r), Fraction(self.b * w.q, w.r), w.D)

    def mod1(self) -> "OrbitNumber":
        """Canonical circle representative with value in [0, 1)."""
        f = self.floor()
        return self if f == 0 else OrbitNumber(self.a - f, self.b, self.omega)

    def same_mod1(self, other: "OrbitNumber") -> bool:
        d = self.a - other.a
        return self.b == other.b and (type(d) is int or Fraction(d).denominator == 1)

    def to_quad(self) -> Quad:
        w = self.omega
        return Quad(self.a + Fraction(self.b * w.p, w.r), Fraction(self.b * w.q, w.r), w.D)

    @property
    def value(self) -> float:
        return self._f

    def __float__(self):
        return self._f

    def as_dict(self) -> dict:
        return {"a": _json_rat(self.a), "b": _json_rat(self.b)}

    def __repr__(self):
        return f"OrbitNumber({self.a}, {self.b})"


def _json_rat(x: Rational):
    return x if isinstance(x, int) else f"{x.numerator}/{x.denominator}"


def circle_distance(x: OrbitNumber, y: OrbitNumber) -> OrbitNumber:
    """Distance between x and y on R/Z."""
    d = (x - y).mod1()
    e = (y - x).mod1()
    return d if d <= e else e


def norm_to_integer(x: OrbitNumber) -> OrbitNumber:
    """Distance from x to the nearest integer."""
    return circle_distance(x, x.omega.zero)


# ---------------------------------------------------------------------------
# Interval sets on the circle
# ---------------------------------------------------------------------------

Arc = tuple  # (lo, hi) with hi - lo in (0, 1]


class IntervalSet:
    """A finite union of closed arcs of R/Z, kept in canonical form.

    Components are stored as pairs 0 <= lo < hi <= 1, sorted and pairwise
    disjoint; an arc through 0 is stored split as [lo, 1] and [0, hi].
    Only regular closed sets are represented: degenerate pieces are dropped
    and the complement is the closure of the set-theoretic complement.
    """

    __slots__ = ("omega", "components", "_los")

    def __init__(self, omega: RotationNumber, components: Sequence[Arc] = (), _canonical: bool = False):
        self.omega = omega
        comps = tuple(components) if _canonical else self._normalize(omega, components)
        self.components = comps
        self._los = [c[0] for c in comps]

    # construction -------------------------------------------------------------
    @staticmethod
    def _normalize(omega: RotationNumber, pieces: Iterable[Arc]) -> tuple:
        zero, one = omega.zero, omega.one
        flat = []
        for lo, hi in pieces:
            if not (lo < hi):
                continue
            if hi - lo >= 1:
                return ((zero, one),)
            f = lo.floor()
            if f:
                lo, hi = lo - f, hi - f
            if hi <= one:
                flat.append((lo, hi))
            else:
                flat.append((lo, one))
                flat.append((zero, hi - 1))
        flat.sort(key=lambda c: c[0])
        merged: list = []
        for lo, hi in flat:
            if not (lo < hi):
                continue
            if merged and lo <= merged[-1][1]:
                if hi > merged[-1][1]:
                    merged[-1] = (merged[-1][0], hi)
            else:
                merged.append((lo, hi))
        return tuple(merged)

    @classmethod
    def empty(cls, omega: RotationNumber) -> "IntervalSet":
        return cls(omega, (), _canonical=True)

    @classmethod
    def full(cls, omega: RotationNumber) -> "IntervalSet":
        return cls(omega, ((omega.zero, omega.one),), _canonical=True)

    @classmethod
    def from_arcs(cls, omega: RotationNumber, arcs: Iterable[Arc]) -> "IntervalSet":
        """Union of the arcs [lo, hi] (counterclockwise from lo to hi)."""
        return cls(omega, [(_on(omega, lo), _on(omega, hi)) for lo, hi in arcs])

    @classmethod
    def interval(cls, omega: RotationNumber, lo, hi) -> "IntervalSet":
        return cls.from_arcs(omega, [(lo, hi)])

    # predicates -----------------------------------------------------------------
    def is_empty(self) -> bool:
        return not self.components

    def is_full(self) -> bool:
        c = self.components
        return len(c) == 1 and c[0][0] == 0 and c[0][1] == 1

    def __eq__(self, other):
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __len__(self):
        return len(self.components)

    def __iter__(self) -> Iterator[Arc]:
        return iter(self.components)

    def __repr__(self):
        inner = ", ".join(f"[{lo.value:.6g}, {hi.value:.6g}]" for lo, hi in self.arcs())
        return f"IntervalSet({inner})"

    def _locate(self, x: OrbitNumber) -> int:
        """Index of the last component with lo <= x, or -1."""
        return bisect_right(self._los, x) - 1

    def contains(self, x) -> bool:
        x = _on(self.omega, x).mod1()
        i = self._locate(x)
        if i >= 0 and x <= self.components[i][1]:
            return True
        return x == 0 and bool(self.components) and self.components[-1][1] == 1

    def interior_contains(self, x) -> bool:
        x = _on(self.omega, x).mod1()
        c = self.components
        if not c:
            return False
        if x == 0:
            return c[0][0] == 0 and c[-1][1] == 1
        i = self._locate(x)
        return i >= 0 and c[i][0] < x < c[i][1]

    # measure and boundary ---------------------------------------------------------
    def measure(self) -> OrbitNumber:
        total = self.omega.zero
        for lo, hi in self.components:
            total = total + (hi - lo)
        return total

    def arcs(self) -> list:
        """Components as arcs with the split at 0 rejoined (hi may exceed 1)."""
        c = list(self.components)
        if len(c) >= 2 and c[0][0] == 0 and c[-1][1] == 1:
            first = c.pop(0)
            last = c.pop()
            c.append((last[0], first[1] + 1))
            c.sort(key=lambda a: a[0])
        return c

    def boundary_points(self) -> list:
        """Topological boundary as sorted canonical circle points."""
        if self.is_full():
            return []
        pts = []
        for lo, hi in self.arcs():
            pts.append(lo.mod1())
            pts.append(hi.mod1())
        pts.sort()
        return pts

    # set algebra --------------------------------------------------------------------
    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.omega, list(self.components) + list(other.components))

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        small, big = (self, other) if len(self.components) <= len(other.components) else (other, self)
        A, B = small.components, big.components
        out = []
        if len(B) > 8 * len(A):
            # few small pieces against many: locate each by bisection
            for lo, hi in A:
                j = max(big._locate(lo), 0)
                while j < len(B) and B[j][0] < hi:
                    l2, h2 = B[j]
                    nlo = lo if lo >= l2 else l2
                    nhi = hi if hi <= h2 else h2
                    if nlo < nhi:
                        out.append((nlo, nhi))
                    j += 1
        else:
            i = j = 0
            while i < len(A) and j < len(B):
                l1, h1 = A[i]
                l2, h2 = B[j]
                nlo = l1 if l1 >= l2 else l2
                nhi = h1 if h1 <= h2 else h2
                if nlo < nhi:
                    out.append((nlo, nhi))
                if h1 <= h2:
                    i += 1
                else:
                    j += 1
        out.sort(key=lambda c: c[0])
        return IntervalSet(self.omega, out, _canonical=True)

    def complement(self) -> "IntervalSet":
        zero, one = self.omega.zero, self.omega.one
        out = []
        prev = zero
        for lo, hi in self.components:
            if prev < lo:
                out.append((prev, lo))
            prev = hi
        if prev < one:
            out.append((prev, one))
        return IntervalSet(self.omega, out, _canonical=True)

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        """Closure of self minus other."""
        return self.intersect(other.complement())

    def translate(self, t) -> "IntervalSet":
        t = _on(self.omega, t)
        return IntervalSet(self.omega, [(lo + t, hi + t) for lo, hi in self.components])

    def thicken(self, eps) -> "IntervalSet":
        """Closed eps-neighbourhood B_eps(self)."""
        eps = _on(self.omega, eps)
        if eps.sign() < 0:
            raise PreconditionViolated("thickening radius must be nonnegative")
        return IntervalSet(self.omega, [(lo - eps, hi + eps) for lo, hi in self.components])

    def restrict(self, lo, hi) -> "IntervalSet":
        """Intersection with the closed arc [lo, hi]."""
        return self.intersect(IntervalSet.interval(self.omega, lo, hi))

    def reflect(self) -> "IntervalSet":
        """Image under x -> -x."""
        return IntervalSet(self.omega, [(-hi, -lo) for lo, hi in self.components])


def _on(omega: RotationNumber, x) -> OrbitNumber:
    return x if isinstance(x, OrbitNumber) else OrbitNumber(x, 0, omega)


# ---------------------------------------------------------------------------
# First orbit hits
# ---------------------------------------------------------------------------

_HALF = Fraction(1, 2)


def _ceil_open(x: Quad, closed: bool) -> int:
    """Smallest integer k with k >= x (closed) or k > x (open)."""
    f = x.floor()
    if x.is_rational() and x.x == f:
        return f if closed else f + 1
    return f + 1


def first_hit(theta: Quad, a: Quad, b: Quad, lo_closed: bool = True, hi_closed: bool = True,
              budget: int | None = None, max_levels: int = 400) -> int | None:
    """Least k >= 0 with frac(k*theta) in the interval <a, b> of [0, 1).

    The flags say whether each end is closed. Uses the continued-fraction
    descent: when no multiple of theta lands in the target before wrapping,
    the question becomes the same one for the rotation by frac(-1/theta)
    acting on the set of wrap counts, with a target scaled by 1/theta.
    Returns None if the answer exceeds ``budget``.
    """
    if not a < b:
        raise PreconditionViolated("first_hit needs a nondegenerate target")
    frames = []
    k = None
    for _ in range(max_levels):
        if a.sign() == 0 and lo_closed:
            k = 0
            break
        phi = theta.inverse()
        k0 = _ceil_open(a * phi, lo_closed)
        s = (theta * k0 - b).sign()
        if s < 0 or (s == 0 and hi_closed):
            k = k0
            break
        # No multiple lands before the first wrap: solve for the wrap count j.
        L = (b - a) * phi
        c = (-(a * phi)).frac()
        na = c if c.sign() == 0 else 1 - c
        nb = na + L
        frames.append((a, phi, lo_closed))
        if na.sign() == 0 and lo_closed:
            k = 0
            break
        theta2 = (-phi).frac()
        if theta2 > _HALF:
            # frac(j*t) = 1 - frac(j*(1-t)) for j >= 1; j = 0 was ruled out above
            theta2 = 1 - theta2
            na, nb = 1 - nb, 1 - na
            lo_closed, hi_closed = hi_closed, lo_closed
            if na.sign() == 0:
                lo_closed = False
        theta, a, b = theta2, na, nb
    if k is None:
        return None
    for a_i, phi_i, lc in reversed(frames):
        k = _ceil_open((a_i + k) * phi_i, lc)
        if budget is not None and k > budget:
            return None
    if budget is not None and k > budget:
        return None
    return k


def nearest_orbit_hit(omega: RotationNumber, lo: OrbitNumber, hi: OrbitNumber,
                      lo_closed: bool = True, hi_closed: bool = True,
                      budget: int | None = None) -> int | None:
    """Orbit index k of least |k| with {k*omega} in the arc <lo, hi>.

    The arc runs counterclockwise from lo to hi, with 0 < hi - lo < 1.
    Ties between k and -k go to the positive index.
    """
    length = hi - lo
    if not (0 < length < 1):
        raise PreconditionViolated("arc length must lie strictly between 0 and 1")
    lo = lo.mod1()
    hi = lo + length
    if (lo == 0 and lo_closed) or (hi == 1 and hi_closed):
        return 0
    if hi <= 1:
        pieces = [(lo, hi, lo_closed, hi_closed)]
    else:
        pieces = [(lo, omega.one, lo_closed, False), (omega.zero, hi - 1, True, hi_closed)]
    theta = omega.quad
    best = None
    for sgn in (1, -1):
        # frac(-k*omega) = frac(k*(1 - omega))
        th = theta if sgn == 1 else 1 - theta
        for a, b, lc, hc in pieces:
            cap = budget
            if best is not None:
                cap = abs(best) if cap is None else min(cap, abs(best))
            k = first_hit(th, a.to_quad(), b.to_quad(), lc, hc, budget=cap)
            if k is None:
                continue
            cand = sgn * k
            if best is None or abs(cand) < abs(best):
                best = cand
    return best
