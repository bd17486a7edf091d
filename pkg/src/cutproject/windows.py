"""Window families on the circle and their exact bookkeeping.

Three windows come from a finite-depth Cantor set C_L:
the self-similar window (C_L plus its even-level gaps), the window with
locally disjoint complements (the circle minus one gap of each level), and
bit-string fillings (C_L plus the gaps selected by a 0/1 sequence).
Plain intervals and arbitrary interval sets are supported as well.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property

from .cantor import CantorApprox, Gap
from .circle import IntervalSet, OrbitNumber, RotationNumber
from .errors import PreconditionViolated

KINDS = ("W", "V", "Wx", "interval", "custom")


@dataclass(frozen=True, eq=False)
class WindowSpec:
    """A closed window on the circle together with how it was made.

    ``open_points`` lists boundary points excluded from the window; it is only
    used for half-open interval windows and affects pointwise membership,
    never measures or cells.
    """

    kind: str
    omega: RotationNumber
    set: IntervalSet
    depth: int = 0
    gaps: tuple = ()  # (Gap, filled) pairs in canonical order
    open_points: frozenset = frozenset()
    resolution: OrbitNumber | None = None
    params: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PreconditionViolated(f"unknown window kind {self.kind!r}")

    @cached_property
    def boundary(self) -> list:
        return self.set.boundary_points()

    def param(self, key, default=None):
        return dict(self.params).get(key, default)

    def contains(self, x: OrbitNumber) -> bool:
        x = x.mod1()
        return self.set.contains(x) and x not in self.open_points

    def interior_contains(self, x: OrbitNumber) -> bool:
        return self.set.interior_contains(x)

    def measure(self) -> OrbitNumber:
        return self.set.measure()

    def is_proper(self) -> bool:
        """Closure of the interior equals the set; true for every nonempty canonical set."""
        return not self.set.is_empty()

    def __eq__(self, other):
        if not isinstance(other, WindowSpec):
            return NotImplemented
        return (self.kind, self.omega, self.set, self.depth, self.open_points) == (
            other.kind, other.omega, other.set, other.depth, other.open_points)

    def __hash__(self):
        return hash((self.kind, self.set))


def _gap_set(omega: RotationNumber, gaps) -> IntervalSet:
    return IntervalSet(omega, [(g.lo, g.hi) for g in gaps])


def window_W(C: CantorApprox) -> WindowSpec:
    """C_L together with every gap of even level."""
    gaps = C.canonical_gaps()
    filled = [g for g in gaps if g.level % 2 == 0]
    S = C.body.union(_gap_set(C.omega, filled))
    return WindowSpec("W", C.omega, S, C.depth, tuple((g, g.level % 2 == 0) for g in gaps),
                      resolution=C.resolution, params=_cantor_params(C))


def gap_distance(A: Gap, B: Gap) -> tuple[OrbitNumber, bool]:
    """Nearest-endpoint distance between two gaps and whether B lies clockwise of A."""
    if A.lo == B.lo:
        return A.lo.omega.zero, True
    cw = (A.lo - B.hi).mod1()  # walking from A in the decreasing direction
    ccw = (B.lo - A.hi).mod1()
    return (cw, True) if cw <= ccw else (ccw, False)


def removed_gaps_V(C: CantorApprox) -> list:
    """For k = 2..L, the level-k gap nearest to the k-th gap of the canonical enumeration.

    Ties are broken towards the clockwise candidate, then by position.
    """
    gaps = C.canonical_gaps()
    if len(gaps) < C.depth:
        raise PreconditionViolated("fewer gaps than levels; cannot build the LDC window")
    chosen = []
    for k in range(2, C.depth + 1):
        target = gaps[k - 1]
        best = None
        for g in gaps:
            if g.level != k:
                continue
            d, cw = gap_distance(target, g)
            key = (d, not cw, g.lo)
            if best is None or key < best[0]:
                best = (key, g)
        if best is None:
            raise PreconditionViolated(f"no gap of level {k}")
        chosen.append(best[1])
    return chosen


def window_V(C: CantorApprox) -> WindowSpec:
    """The circle minus exactly one gap of each level 2..L."""
    chosen = removed_gaps_V(C)
    S = _gap_set(C.omega, chosen).complement()
    keep = {g.lo for g in chosen}
    gaps = tuple((g, g.lo not in keep) for g in C.canonical_gaps())
    return WindowSpec("V", C.omega, S, C.depth, gaps, resolution=C.resolution, params=_cantor_params(C))


def window_random(C: CantorApprox, bits: str = "", seed: int | None = 0) -> WindowSpec:
    """C_L plus the gaps J_n with x_n = 1, in canonical gap order.

    Positions beyond ``bits`` are filled by fair bits from ``random.Random(seed)``;
    with ``seed=None`` they are left unfilled.
    """
    gaps = C.canonical_gaps()
    if len(bits) > len(gaps):
        raise PreconditionViolated(f"{len(bits)} bits given but only {len(gaps)} gaps")
    if any(ch not in "01" for ch in bits):
        raise PreconditionViolated("bits must be a 0/1 string")
    x = [ch == "1" for ch in bits]
    if seed is not None:
        rng = random.Random(seed)
        x += [rng.getrandbits(1) == 1 for _ in range(len(gaps) - len(bits))]
    else:
        x += [False] * (len(gaps) - len(bits))
    filled = [g for g, f in zip(gaps, x) if f]
    S = C.body.union(_gap_set(C.omega, filled))
    params = _cantor_params(C) + (("bits", bits), ("seed", seed))
    return WindowSpec("Wx", C.omega, S, C.depth, tuple(zip(gaps, x)), resolution=C.resolution, params=params)


def window_from_filling(C: CantorApprox, filling) -> WindowSpec:
    """C_L plus the gaps flagged in a full-length boolean filling (canonical order)."""
    bits = "".join("1" if f else "0" for f in filling)
    return window_random(C, bits, seed=None)


def filling_of(W: WindowSpec) -> list:
    """The gap filling vector of a Cantor-based window, in canonical order."""
    return [bool(f) for _, f in W.gaps]


def _cantor_params(C: CantorApprox) -> tuple:
    return (("epsilon", str(C.plan.epsilon)), ("n_seq", tuple(C.plan.n_seq)), ("rule", C.rule))


def interval_window(omega: RotationNumber, lo, hi, open_lo: bool = False, open_hi: bool = False) -> WindowSpec:
    """The arc from lo to hi; open ends are excluded from pointwise membership."""
    lo, hi = _pt(omega, lo), _pt(omega, hi)
    S = IntervalSet.interval(omega, lo, hi)
    opens = set()
    if open_lo:
        opens.add(lo.mod1())
    if open_hi:
        opens.add(hi.mod1())
    return WindowSpec("interval", omega, S, open_points=frozenset(opens))


def _pt(omega: RotationNumber, x) -> OrbitNumber:
    return x if isinstance(x, OrbitNumber) else omega.point(x)


def full_window(omega: RotationNumber) -> WindowSpec:
    return WindowSpec("custom", omega, IntervalSet.full(omega))


def empty_window(omega: RotationNumber) -> WindowSpec:
    return WindowSpec("custom", omega, IntervalSet.empty(omega))


def custom_window(S: IntervalSet) -> WindowSpec:
    return WindowSpec("custom", S.omega, S)


def local_germ(S: IntervalSet, x: OrbitNumber, eps: OrbitNumber) -> IntervalSet:
    """(B_eps(x) intersect S) - x, a set near 0."""
    return S.restrict(x - eps, x + eps).translate(-x)


def check_irredundant(W: WindowSpec, bound: int | None = None) -> dict:
    """Search the nonzero periods h (h + W = W) among boundary-point differences.

    Candidates are e - e0 for a fixed boundary point e0; only those whose
    omega-coefficient is at most ``bound`` in size are tried. A full or empty
    window is reported as degenerate.
    """
    S = W.set
    if S.is_full() or S.is_empty():
        return {"degenerate": True, "periods": "all", "candidates": 0}
    pts = W.boundary
    e0 = pts[0]
    arcs = S.arcs()
    n = len(arcs)
    # circular sequence of (arc length, following gap length) tokens; a period
    # must rotate it onto itself, so only multiples of its minimal period qualify
    pieces = []
    for i, (lo, hi) in enumerate(arcs):
        nxt = arcs[(i + 1) % n][0] + (1 if i + 1 == n else 0)
        pieces.append((hi - lo, nxt - hi))
    ids: dict = {}
    seq = [ids.setdefault(pc, len(ids)) for pc in pieces]
    period = _min_rotation_period(seq)
    arc_index = {lo.mod1(): i for i, (lo, _) in enumerate(arcs)}
    periods = []
    tried = 0
    for e in pts[1:]:
        h = e - e0
        if bound is not None and abs(h.b) > bound:
            continue
        tried += 1
        j = arc_index.get((arcs[0][0] + h).mod1())
        if j is None or j % period:
            continue
        if S.translate(h) == S:
            periods.append(h.mod1())
    return {"degenerate": False, "periods": periods, "candidates": tried}


def _min_rotation_period(seq: list) -> int:
    """Least p dividing len(seq) such that seq is invariant under rotation by p."""
    n = len(seq)
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k and seq[i] != seq[k]:
            k = fail[k - 1]
        if seq[i] == seq[k]:
            k += 1
        fail[i] = k
    p = n - fail[-1]
    return p if n % p == 0 else n
