"""Planar cut-and-project sets over a circle rotation, and the fibres of their hulls.

The lattice is {(n*a11 + m*a12, n*omega + m)}. A circle window is lifted to
the real line by unrolling each arc from its left endpoint in [0, 1), so the
internal window is a compact subset of [0, 2). A lattice point belongs to
the model set when its star n*omega + m lies in the lifted window shifted
by t.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .circle import IntervalSet, OrbitNumber, Quad, RotationNumber
from .errors import EmptyWindow, GermUndecidable, PreconditionViolated
from .windows import WindowSpec, local_germ


@dataclass(frozen=True)
class PlanarCPS:
    """Lattice generated by the columns (a11, omega) and (a12, 1)."""

    a11: Quad
    a12: Quad
    omega: RotationNumber

    def __post_init__(self):
        for a in (self.a11, self.a12):
            if not a.is_rational() and a.D != self.omega.D:
                raise PreconditionViolated("external entries must lie in the field of omega")
        if self.a12.sign() == 0 or (self.a11 / self.a12).is_rational():
            raise PreconditionViolated("a11/a12 must be irrational")
        if self.slope.sign() == 0:
            raise PreconditionViolated("a11 - omega*a12 vanishes; external projection of the window strip is unbounded")

    @property
    def slope(self) -> Quad:
        """External coordinate gained per unit of n along a fixed star value."""
        return self.a11 - self.omega.quad * self.a12

    def external(self, n: int, m: int) -> Quad:
        return self.a11 * n + self.a12 * m

    def star(self, n: int, m: int) -> OrbitNumber:
        return OrbitNumber(m, n, self.omega)


def default_cps(omega: RotationNumber) -> PlanarCPS:
    """a11 = 1, a12 = sqrt(D)."""
    return PlanarCPS(Quad(1, 0, omega.D), Quad(0, 1, omega.D), omega)


class LiftedWindow:
    """The window as disjoint closed arcs in [0, 2), each with open-end flags.

    The full circle lifts to [0, 1) so that every n contributes exactly one
    point and no spurious boundary appears.
    """

    def __init__(self, W: WindowSpec):
        S = W.set
        if S.is_empty():
            self.arcs = []
        elif S.is_full():
            self.arcs = [(W.omega.zero, W.omega.one, False, True)]
        else:
            self.arcs = [(lo, hi, lo.mod1() in W.open_points, hi.mod1() in W.open_points) for lo, hi in S.arcs()]
        self.los = [a[0] for a in self.arcs]
        self.lo_f = np.array([a[0].value for a in self.arcs])
        self.hi_f = np.array([a[1].value for a in self.arcs])

    def member(self, y: OrbitNumber) -> tuple[bool, bool]:
        """(member, on_boundary) for y, exact."""
        i = bisect_right(self.los, y) - 1
        if i < 0:
            return False, False
        lo, hi, lo_open, hi_open = self.arcs[i]
        if y > hi:
            return False, False
        if y == lo:
            return (not lo_open), True
        if y == hi:
            return (not hi_open), True
        return True, False


@dataclass
class PointPatch:
    radius: Quad
    t: OrbitNumber
    window: WindowSpec
    points: list  # (n, m) sorted
    boundary: list  # parallel flags: star on the boundary of the shifted window
    cps: PlanarCPS

    def externals(self) -> list:
        return [self.cps.external(n, m) for n, m in self.points]

    def external_floats(self) -> list:
        return [float(x) for x in self.externals()]

    def point_set(self) -> frozenset:
        return frozenset(self.points)

    def interior_points(self) -> list:
        return [p for p, b in zip(self.points, self.boundary) if not b]

    def min_gap(self) -> float:
        xs = sorted(self.external_floats())
        return min((b - a for a, b in zip(xs, xs[1:])), default=math.inf)


def _as_radius(R) -> Quad:
    return R if isinstance(R, Quad) else Quad(R, 0, 2)


def model_set(cps: PlanarCPS, W: WindowSpec, t: OrbitNumber, R) -> PointPatch:
    """All lattice points with |external| <= R whose star lies in the lifted W + t."""
    if W.set.is_empty():
        raise EmptyWindow("window has empty interior")
    R = _as_radius(R)
    if R.sign() <= 0:
        raise PreconditionViolated("radius must be positive")
    lw = LiftedWindow(W)
    omega = cps.omega
    slope = abs(float(cps.slope))
    a12 = abs(float(cps.a12))
    tf = float(t)
    nb = int(math.ceil((float(R) + (abs(tf) + 3.0) * a12) / slope)) + 2
    ns = np.arange(-nb, nb + 1, dtype=np.int64)
    # float prefilter on y0 = frac(n*omega - t); stars are y0 + j with j in {0, 1}
    raw = ns * omega.value - tf
    fl = np.floor(raw)
    y0 = raw - fl
    tol = 1e-9
    pts = []
    flags = []
    for j in (0, 1):
        y = y0 + j
        idx = np.searchsorted(lw.lo_f, y + tol, side="right") - 1
        ok = idx >= 0
        near = np.zeros_like(ok)
        near[ok] = y[ok] <= lw.hi_f[idx[ok]] + tol
        for i in np.nonzero(near)[0]:
            n = int(ns[i])
            m = -int(fl[i]) + j
            inside, on_b = lw.member(OrbitNumber(m, n, omega) - t)
            if inside and abs(cps.external(n, m)) <= R:
                pts.append((n, m))
                flags.append(on_b)
    order = sorted(range(len(pts)), key=lambda i: pts[i])
    return PointPatch(R, t, W, [pts[i] for i in order], [flags[i] for i in order], cps)


def brute_model_set(cps: PlanarCPS, W: WindowSpec, t: OrbitNumber, R, n_bound: int, m_bound: int) -> list:
    """Reference model set by an exhaustive double loop over |n| <= n_bound, |m| <= m_bound."""
    R = _as_radius(R)
    lw = LiftedWindow(W)
    out = []
    for n in range(-n_bound, n_bound + 1):
        for m in range(-m_bound, m_bound + 1):
            if abs(cps.external(n, m)) > R:
                continue
            if lw.member(OrbitNumber(m, n, cps.omega) - t)[0]:
                out.append((n, m))
    return sorted(out)


# ---------------------------------------------------------------------------
# Codings and critical shifts (circle semantics)
# ---------------------------------------------------------------------------

def coding_word(W: WindowSpec, t: OrbitNumber, k0: int, k1: int) -> str:
    """w_k = 1 iff {k*omega} lies in W + t, for k0 <= k <= k1."""
    if k0 > k1:
        raise PreconditionViolated("k0 must not exceed k1")
    omega = W.omega
    return "".join("1" if W.contains(omega.orbit_point(k) - t) else "0" for k in range(k0, k1 + 1))


def critical_points(W: WindowSpec, t: OrbitNumber, K: int) -> list:
    """All |k| <= K with {k*omega} on the boundary of W + t, exactly.

    {k*omega} = e + t (mod 1) forces the omega-coefficient k = b(e) + b(t)
    and an integral constant part, so no search is needed.
    """
    hits = set()
    for e in W.boundary:
        s = e + t
        if _is_int(s.a) and _is_int(s.b) and abs(s.b) <= K:
            hits.add(int(s.b))
    return sorted(hits)


def _is_int(x) -> bool:
    return isinstance(x, int) or x.denominator == 1


def _hit_point(W: WindowSpec, t: OrbitNumber, k: int) -> OrbitNumber:
    """The boundary point of W that {k*omega} - t lands on."""
    return (W.omega.orbit_point(k) - t).mod1()


def germ_radius(W: WindowSpec, e: OrbitNumber) -> OrbitNumber:
    """Half the distance from the boundary point e to the nearest other boundary point."""
    pts = W.boundary
    if len(pts) < 2:
        return OrbitNumber(1, 0, W.omega) / 4
    i = bisect_left(pts, e)
    if i >= len(pts) or pts[i] != e:
        raise PreconditionViolated("germ requested at a point off the boundary")
    left = pts[i - 1] if i > 0 else pts[-1] - 1
    right = pts[i + 1] if i + 1 < len(pts) else pts[0] + 1
    d = min(e - left, right - e)
    return d / 2


def _checked_radius(W: WindowSpec, eps: OrbitNumber) -> OrbitNumber:
    if W.resolution is not None and eps < W.resolution:
        raise GermUndecidable(f"germ radius {eps.value:.3e} below depth resolution {W.resolution.value:.3e}")
    return eps


def similarity_classes(W: WindowSpec, t: OrbitNumber, hits: list) -> list:
    """Partition hits by exact equality of their window germs.

    Each germ is (B_eps(x) intersect (W + t)) - x at the hit x = {k*omega};
    a pair is compared at the smaller of the two germ radii.
    """
    pts = {k: _hit_point(W, t, k) for k in hits}
    radii = {k: _checked_radius(W, germ_radius(W, pts[k])) for k in hits}
    classes: list[list[int]] = []
    for k in hits:
        for cls in classes:
            rep = cls[0]
            eps = min(radii[k], radii[rep])
            if local_germ(W.set, pts[k], eps) == local_germ(W.set, pts[rep], eps):
                cls.append(k)
                break
        else:
            classes.append([k])
    return classes


def check_ldc(W: WindowSpec, t: OrbitNumber, hits: list, exhaustive: bool = False) -> tuple[bool, dict]:
    """Locally disjoint complements: complement germs of every pair of hits share no interior.

    Returns the verdict and, per checked pair, the radius used and whether
    the pair passed. Unless ``exhaustive`` is set, checking stops at the
    first failing pair.
    """
    comp = W.set.complement()
    pts = {k: _hit_point(W, t, k) for k in hits}
    radii = {k: _checked_radius(W, germ_radius(W, pts[k])) for k in hits}
    ok = True
    report = {}
    for i, k1 in enumerate(hits):
        for k2 in hits[i + 1:]:
            eps = min(radii[k1], radii[k2])
            g1 = local_germ(comp, pts[k1], eps)
            g2 = local_germ(comp, pts[k2], eps)
            disjoint = g1.intersect(g2).is_empty()
            report[(k1, k2)] = (eps, disjoint)
            if not disjoint:
                ok = False
                if not exhaustive:
                    return ok, report
    return ok, report


@dataclass
class FiberReport:
    t: OrbitNumber
    critical: bool
    hits: list  # lattice points (n, m) with star on the boundary, in range
    classes: list  # lists of indices into hits
    candidates: list  # frozensets of included hits
    bound: int
    ldc: bool
    over_approximation: bool
    base: list = field(default_factory=list)  # interior points, in every candidate

    def candidate_points(self, i: int) -> list:
        return sorted(set(self.base) | set(self.candidates[i]))


def fiber_enumerate(cps: PlanarCPS, W: WindowSpec, t: OrbitNumber, R) -> FiberReport:
    """Admissible point sets over the shift t, restricted to |external| <= R.

    Candidates contain every interior point and a subset of the boundary
    hits that is constant on similarity classes. With locally disjoint
    complements the candidates are the maximal set and the maximal set minus
    one hit.
    """
    patch = model_set(cps, W, t, R)
    base = patch.interior_points()
    hits = [p for p, b in zip(patch.points, patch.boundary) if b]
    if not hits:
        return FiberReport(t, False, [], [], [frozenset()], 1, True, False, base)
    ks = [n for n, _ in hits]
    classes_k = similarity_classes(W, t, ks)
    by_k = {}
    for i, (n, _) in enumerate(hits):
        by_k.setdefault(n, []).append(i)
    classes = [[i for k in cls for i in by_k[k]] for cls in classes_k]
    ldc, _ = check_ldc(W, t, ks)
    full = frozenset(hits)
    if ldc:
        cands = [full] + [full - {h} for h in hits]
        over = False
    else:
        cands = []
        for choice in product((True, False), repeat=len(classes)):
            cands.append(frozenset(hits[i] for cls, keep in zip(classes, choice) if keep for i in cls))
        over = len(classes) > 1
    return FiberReport(t, True, hits, classes, cands, 2 ** len(classes), ldc, over, base)
