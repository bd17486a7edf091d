"""Independence sets for window translates, free-set checks and the measure estimate.

An independence set is a finite S of orbit indices such that every 0/1
assignment a on S is realized by some shift h with {t*omega} + h in the
interior of V_{a_t} for all t in S. The builder keeps, for every prefix
assignment a, a closed interval U_a of admissible h and refines all of
them at once by one new orbit index.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .circle import IntervalSet, OrbitNumber, RotationNumber, circle_distance, floor_quadratic, nearest_orbit_hit
from .complexity import cell_sweep, unpack_word
from .errors import PreconditionViolated, SearchExhausted
from .windows import WindowSpec

DEFAULT_ORBIT_BUDGET = 10**12


@dataclass
class IndependenceCertificate:
    omega: RotationNumber
    S: list
    witnesses: dict  # bit string -> (lo, hi), hi - lo in (0, 1)
    V0: IntervalSet
    V1: IntervalSet
    depth: int = 0
    params: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.S)

    def leaves(self) -> dict:
        return {a: u for a, u in self.witnesses.items() if len(a) == self.n}


def _switch_points(V0: WindowSpec, V1: WindowSpec) -> list:
    """Boundary points shared by V0 and V1; one side of each lies in int V0, the other in int V1."""
    return sorted(set(V0.boundary) & set(V1.boundary))


def _points_in_arc(pts: list, lo: OrbitNumber, hi: OrbitNumber) -> list:
    """Members of the sorted circle points pts inside the open arc (lo, hi), lifted past lo.

    Requires 0 <= lo < 1 and lo < hi <= lo + 1.
    """
    out = pts[bisect_right(pts, lo):bisect_left(pts, hi)]
    if hi > 1:
        out = out + [p + 1 for p in pts[:bisect_left(pts, hi - 1)]]
    return out


_FIXED_BITS = 128


def _floats(xs) -> np.ndarray:
    """Float values of orbit numbers with b*omega taken from a 128-bit fixed point.

    Plain float evaluation loses about |b| ulps, which at |b| ~ 10^6 is
    larger than the cells being compared.
    """
    out = np.empty(len(xs))
    for i, x in enumerate(xs):
        w = x.omega
        fixed = floor_quadratic(Fraction(w.p << _FIXED_BITS, w.r), Fraction(w.q << _FIXED_BITS, w.r), w.D)
        out[i] = float(Fraction(x.a) + Fraction(x.b * fixed, 1 << _FIXED_BITS))
    return out


class _CellTree:
    """Open cells of the arrangement cut by V-boundaries shifted by -{t*omega}, t in S.

    Level j holds the surviving cells for the first j indices; every cell
    above the deepest level keeps children carrying both labels 0 and 1.
    """

    def __init__(self, omega: RotationNumber):
        self.omega = omega
        # per level: lo, hi (exact), parent index, label bit
        self.levels = [([omega.zero], [omega.one], [-1], [None])]

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def leaves(self):
        return self.levels[-1]

    def copy(self) -> "_CellTree":
        other = _CellTree.__new__(_CellTree)
        other.omega, other.levels = self.omega, list(self.levels)
        return other

    def cap(self, width: int) -> None:
        """Keep the ``width`` longest deepest cells per assignment, then prune."""
        codes = [0]
        for j in range(1, self.depth + 1):
            _, _, parent, bit = self.levels[j]
            codes = [2 * codes[p] + b for p, b in zip(parent, bit)]
        lo, hi, parent, bit = self.levels[-1]
        by_code: dict = {}
        for i, c in enumerate(codes):
            by_code.setdefault(c, []).append(i)
        keep = sorted(i for ids in by_code.values()
                      for i in sorted(ids, key=lambda i: (-(hi[i] - lo[i]).value, i))[:width])
        self.levels[-1] = ([lo[i] for i in keep], [hi[i] for i in keep],
                           [parent[i] for i in keep], [bit[i] for i in keep])
        self.prune()

    def leaf_floats(self):
        lo, hi = self.leaves()[:2]
        return _floats(lo), _floats(hi)

    def good_root(self, leaf_good: np.ndarray) -> bool:
        """Propagate goodness upwards: a cell is good if good children of both labels exist."""
        good = leaf_good
        for j in range(self.depth, 0, -1):
            _, _, parent, bit = self.levels[j]
            parent = np.asarray(parent)
            bit = np.asarray(bit, dtype=np.int8)
            n_up = len(self.levels[j - 1][0])
            has0 = np.zeros(n_up, dtype=bool)
            has1 = np.zeros(n_up, dtype=bool)
            has0[parent[good & (bit == 0)]] = True
            has1[parent[good & (bit == 1)]] = True
            good = has0 & has1
        return bool(good[0])

    def grow(self, cuts: list, shift: OrbitNumber, V0: IntervalSet, V1: IntervalSet) -> None:
        """Split every leaf at the new cut points and label the pieces exactly."""
        lo_l, hi_l = self.leaves()[:2]
        nlo, nhi, npar, nbit = [], [], [], []
        for i, (lo, hi) in enumerate(zip(lo_l, hi_l)):
            edges = [lo] + _points_in_arc(cuts, lo, hi) + [hi]
            for a, b in zip(edges, edges[1:]):
                y = (a + b) / 2 + shift
                if V1.interior_contains(y):
                    bit = 1
                elif V0.interior_contains(y):
                    bit = 0
                else:
                    continue
                am = a.mod1()
                nlo.append(am)
                nhi.append(am + (b - a))
                npar.append(i)
                nbit.append(bit)
        self.levels.append((nlo, nhi, npar, nbit))
        self.prune()

    def prune(self) -> None:
        """Drop cells that cannot carry a full subtree, then renumber."""
        keep = np.ones(len(self.levels[-1][0]), dtype=bool)
        keeps = [keep]
        for j in range(self.depth, 0, -1):
            _, _, parent, bit = self.levels[j]
            parent = np.asarray(parent)
            bit = np.asarray(bit, dtype=np.int8)
            n_up = len(self.levels[j - 1][0])
            has0 = np.zeros(n_up, dtype=bool)
            has1 = np.zeros(n_up, dtype=bool)
            has0[parent[keep & (bit == 0)]] = True
            has1[parent[keep & (bit == 1)]] = True
            keep = has0 & has1
            keeps.append(keep)
        keeps.reverse()
        # a cell survives only if its parent survives as well
        for j in range(1, self.depth + 1):
            parent = np.asarray(self.levels[j][2])
            keeps[j] &= keeps[j - 1][parent]
        new_levels = []
        remap_prev = None
        for j, (lo, hi, parent, bit) in enumerate(self.levels):
            idx = np.nonzero(keeps[j])[0]
            remap = -np.ones(len(lo), dtype=np.int64)
            remap[idx] = np.arange(len(idx))
            par = [int(remap_prev[parent[i]]) if j else -1 for i in idx]
            new_levels.append(([lo[i] for i in idx], [hi[i] for i in idx], par, [bit[i] for i in idx]))
            remap_prev = remap
        self.levels = new_levels

    def extract(self) -> dict:
        """One cell per pattern, nested, with closed witness intervals built bottom-up."""
        chosen = {"": 0}
        by_level = [chosen]
        for j in range(1, self.depth + 1):
            lo, hi, parent, bit = self.levels[j]
            kids: dict = {}
            for i, (p, b) in enumerate(zip(parent, bit)):
                kids.setdefault((p, b), []).append(i)
            nxt = {}
            for a, node in by_level[-1].items():
                for b in (0, 1):
                    cand = kids[(node, b)]
                    nxt[a + str(b)] = max(cand, key=lambda i: (hi[i] - lo[i], -i))
            by_level.append(nxt)
        witness = {}
        lo, hi = self.levels[-1][:2]
        for a, i in by_level[-1].items():
            q = (hi[i] - lo[i]) / 4
            witness[a] = (lo[i] + q, hi[i] - q)
        for j in range(self.depth - 1, 0, -1):
            plo = self.levels[j][0]
            for a, i in by_level[j].items():
                base = plo[i]
                ends = []
                for b in "01":
                    clo, chi = witness[a + b]
                    shift = (clo - base).floor()
                    ends.append((clo - shift, chi - shift))
                wlo = min(e[0] for e in ends)
                whi = max(e[1] for e in ends)
                witness[a] = (wlo, whi)
        return witness


def build_independence_set(V0: WindowSpec, V1: WindowSpec, n: int, width: int = 4,
                           budget: int = DEFAULT_ORBIT_BUDGET) -> IndependenceCertificate:
    """Orbit indices t_1..t_n with nested witness intervals for every assignment.

    Shifts h are organised by the open cells of the arrangement of the points
    e - {t*omega}, e on the boundary of V0 or V1, kept as a tree in which
    every cell has surviving children of both labels. At most ``width``
    cells are kept per assignment. The next index k must split, for every
    assignment, one of its cells at a point where V0 meets V1. The set of
    such shifts {k*omega} is computed as a float interval set, shrunk by a
    safety margin, and its orbit hits of least |k| are confirmed in exact
    arithmetic.
    """
    if n < 1:
        raise PreconditionViolated("n must be at least 1")
    omega = V1.omega
    if V0.omega != omega:
        raise PreconditionViolated("windows over different rotations")
    if not V0.set.intersect(V1.set).is_empty():
        raise PreconditionViolated("interiors of V0 and V1 intersect")
    switch = _switch_points(V0, V1)
    if not switch:
        raise PreconditionViolated("V0 and V1 share no boundary point")
    fences = sorted(set(V0.boundary) | set(V1.boundary))
    switch_f = _floats(switch)
    tree = _CellTree(omega)
    S: list[int] = []
    confirmed = 0
    for _ in range(n):
        k, tree, tries = _next_index(tree, switch_f, fences, V0.set, V1.set, S, budget)
        confirmed += tries
        S.append(k)
        tree.cap(width)
    return IndependenceCertificate(omega, S, tree.extract(), V0.set, V1.set, V1.depth,
                                   {"orbit_budget": budget, "width": width,
                                    "exact_confirmations": confirmed, "switch_points": len(switch)})


_MARGIN = 1e-9


def _next_index(tree: _CellTree, switch_f, fences, V0: IntervalSet, V1: IntervalSet, S: list, budget: int):
    omega = tree.omega
    if tree.depth == 0:
        cands = [0]  # every index refines the single root cell
    else:
        cands = _orbit_candidates(omega, _admissible_shifts(tree, switch_f), budget)
    tries = 0
    for k in cands:
        if k in S:
            continue
        tries += 1
        shift = omega.orbit_point(k)
        cuts = sorted((f - shift).mod1() for f in fences)
        trial = tree.copy()
        trial.grow(cuts, shift, V0, V1)
        if trial.levels[0][0]:
            return k, trial, tries
    if not cands:
        raise SearchExhausted(f"after {len(S)} indices no shift splits a cell of every assignment at a V0/V1 switch")
    raise SearchExhausted(f"none of the {tries} nearest candidate indices (budget {budget}) survived exact refinement")


_SCAN_LIMIT = 1 << 27
_SCAN_CHUNK = 1 << 22
_MAX_CANDIDATES = 64


def _orbit_candidates(omega: RotationNumber, X, budget: int) -> list:
    """Orbit indices k, by increasing |k|, whose point {k*omega} lies in the arcs X.

    {k*omega} is evaluated in 64-bit fixed point, accurate to about k * 2^-64,
    which is far below the safety margin; hits are confirmed exactly anyway.
    Past the scan limit each arc falls back to its exact nearest hit.
    """
    L, H = X
    keep = H - L > 2 * _MARGIN
    L, H = L[keep] + _MARGIN, H[keep] - _MARGIN
    if len(L) == 0:
        return []
    step = np.uint64(floor_quadratic(Fraction(omega.p << 64, omega.r), Fraction(omega.q << 64, omega.r),
                                     omega.D) % (1 << 64))
    scale = 2.0 ** -64
    found: list = []
    limit = min(budget, _SCAN_LIMIT)
    start = 0
    while start <= limit and len(found) < _MAX_CANDIDATES:
        ks = np.arange(start, min(start + _SCAN_CHUNK, limit + 1), dtype=np.uint64)
        fwd = ks * step  # wraps modulo 2^64
        for sign, frac in ((1, fwd.astype(np.float64) * scale),
                           (-1, (np.uint64(0) - fwd).astype(np.float64) * scale)):
            idx = np.searchsorted(L, frac, side="right") - 1
            ok = (idx >= 0) & (frac < H[np.maximum(idx, 0)])
            found.extend(sign * int(k) for k in ks[ok])
        start += _SCAN_CHUNK
    if found:
        return sorted(set(found), key=lambda k: (abs(k), -k))[:_MAX_CANDIDATES]
    widest = np.argsort(L - H)[:_MAX_CANDIDATES]
    out = set()
    for i in widest:
        k = nearest_orbit_hit(omega, OrbitNumber(Fraction(float(L[i])), 0, omega),
                              OrbitNumber(Fraction(float(H[i])), 0, omega), budget=budget)
        if k is not None:
            out.add(k)
    return sorted(out, key=lambda k: (abs(k), -k))


def _arcs_norm(L: np.ndarray, H: np.ndarray):
    """Sorted disjoint arcs of [0, 1) covering the given ones (with H - L < 1)."""
    keep = H > L
    L, H = L[keep], H[keep]
    f = np.floor(L)
    L, H = L - f, H - f
    wrap = H > 1
    L = np.concatenate([L, np.zeros(wrap.sum())])
    H = np.concatenate([np.minimum(H, 1.0), H[wrap] - 1.0])
    return _arcs_merge(L, H)


def _arcs_merge(L: np.ndarray, H: np.ndarray):
    if len(L) == 0:
        return L, H
    order = np.argsort(L, kind="stable")
    L, H = L[order], H[order]
    reach = np.maximum.accumulate(H)
    start = np.ones(len(L), dtype=bool)
    start[1:] = L[1:] > reach[:-1]
    idx = np.nonzero(start)[0]
    return L[idx], np.maximum.reduceat(H, idx)


def _arcs_intersect(A, B):
    AL, AH = A
    BL, BH = B
    if len(AL) == 0 or len(BL) == 0:
        return np.empty(0), np.empty(0)
    j0 = np.searchsorted(BH, AL, side="right")
    j1 = np.searchsorted(BL, AH, side="left")
    cnt = np.maximum(j1 - j0, 0)
    ia = np.repeat(np.arange(len(AL)), cnt)
    jb = np.concatenate([np.arange(x, y) for x, y in zip(j0, j1) if y > x]) if cnt.sum() else np.empty(0, dtype=int)
    L = np.maximum(AL[ia], BL[jb])
    H = np.minimum(AH[ia], BH[jb])
    keep = H > L
    return L[keep], H[keep]


def _admissible_shifts(tree: _CellTree, switch_f: np.ndarray):
    """Shifts s for which the refined tree keeps its root, as float arcs of [0, 1)."""
    lo_f, hi_f = tree.leaf_floats()
    sets = []
    for lo, hi in zip(lo_f, hi_f):
        # some switch point e in the open cell (lo, hi) + s
        sets.append(_arcs_norm(switch_f - hi + _MARGIN, switch_f - lo - _MARGIN))
    for j in range(tree.depth, 0, -1):
        _, _, parent, bit = tree.levels[j]
        n_up = len(tree.levels[j - 1][0])
        groups: dict = {}
        for i, (p, b) in enumerate(zip(parent, bit)):
            groups.setdefault((p, b), []).append(sets[i])
        up = []
        for p in range(n_up):
            pair = []
            for b in (0, 1):
                parts = groups.get((p, b), [])
                if parts:
                    pair.append(_arcs_merge(np.concatenate([q[0] for q in parts]),
                                            np.concatenate([q[1] for q in parts])))
                else:
                    pair.append((np.empty(0), np.empty(0)))
            up.append(_arcs_intersect(*pair))
        sets = up
    return sets[0]


# ---------------------------------------------------------------------------
# Free sets
# ---------------------------------------------------------------------------

def verify_free_set(W: WindowSpec, S: list) -> dict:
    """Check that every P in S is cut out by some shift h.

    The pattern of h is (h in W - {s*omega} for s in S); all patterns are
    read off the cells of the arrangement of the points e - {s*omega},
    e on the boundary of W. Cells are open, so every realized pattern holds
    on an interval, and in particular at shifts avoiding the countably many
    boundary-orbit points.
    """
    S = list(S)
    total = 2 ** len(S)
    if not S:
        return {"free": True, "realized": 1, "total": 1, "missing": [], "witness": {}}
    sweep = cell_sweep(W, S)
    if sweep is None:
        word = "1" * len(S) if W.set.is_full() else "0" * len(S)
        realized = {word: W.omega.zero}
    else:
        uniq, first = np.unique(sweep.words, axis=0, return_index=True)
        realized = {}
        for row, c in zip(uniq, first):
            realized[unpack_word(row, len(S))] = -sweep.midpoint(int(c))
    missing = []
    for bits in product("01", repeat=len(S)):
        w = "".join(bits)
        if w not in realized:
            missing.append([s for s, b in zip(S, w) if b == "1"])
            if len(missing) >= 16:
                break
    return {
        "free": len(realized) == total,
        "realized": len(realized),
        "total": total,
        "missing": missing,
        "witness": {w: h.mod1() for w, h in realized.items()},
    }


# ---------------------------------------------------------------------------
# Measure of intersections of nearby translates
# ---------------------------------------------------------------------------

def _words(n: int):
    for length in range(1, n + 1):
        for bits in product("01", repeat=length):
            yield "".join(bits)


def measure_estimate_check(C: IntervalSet, xi: dict, eps: list) -> dict:
    """Both sides of the lower bound for the measure of intersected translates, exactly.

    With gamma_a the sum of xi over the prefixes of a, delta_j the tail sum
    eps_j + ... + eps_n and eta(d) = |B_d(C)|/|C| - 1, the claim is
    |intersection over |a| = n of (C - gamma_a)| >= |C| (1 - sum_j 2^(j-1) eta(delta_j)).
    The right side is evaluated as |C| - sum_j 2^(j-1) (|B_{delta_j}(C)| - |C|).
    """
    omega = C.omega
    n = len(eps)
    if n < 1:
        raise PreconditionViolated("need at least one radius")
    theta = C.measure()
    if theta.sign() <= 0:
        raise PreconditionViolated("C must have positive measure")
    eps_pts = [e if isinstance(e, OrbitNumber) else omega.point(Fraction(e)) for e in eps]
    xi = {a: (x if isinstance(x, OrbitNumber) else omega.point(Fraction(x))) for a, x in xi.items()}
    for a in _words(n):
        if a not in xi:
            raise PreconditionViolated(f"xi is missing the word {a!r}")
        if circle_distance(omega.zero, xi[a]) > eps_pts[len(a) - 1]:
            raise PreconditionViolated(f"eps_{len(a)} is smaller than the distance of xi_{a} from 0")
    inter = IntervalSet.full(omega)
    for bits in product("01", repeat=n):
        a = "".join(bits)
        gamma = omega.zero
        for j in range(1, n + 1):
            gamma = gamma + xi[a[:j]]
        inter = inter.intersect(C.translate(-gamma))
    lhs = inter.measure()
    rhs = theta
    etas = []
    for j in range(1, n + 1):
        delta = omega.zero
        for e in eps_pts[j - 1:]:
            delta = delta + e
        excess = C.thicken(delta).measure() - theta
        etas.append(excess.to_quad() / theta.to_quad())
        rhs = rhs - excess * 2 ** (j - 1)
    return {"lhs": lhs, "rhs": rhs, "holds": lhs >= rhs, "eta": etas}


def random_xi_family(n: int, scale: Fraction, rng) -> tuple[dict, list]:
    """Rational offsets xi_a in [-scale, scale] for every word of length <= n, and tight radii.

    eps_l is the largest |xi_a| over words of length l, so the radius
    precondition of measure_estimate_check holds with equality somewhere.
    """
    scale = Fraction(scale)
    xi = {}
    for a in _words(n):
        xi[a] = Fraction(rng.randint(-1000, 1000), 1000) * scale
    eps = [max(abs(xi[a]) for a in _words(n) if len(a) == j) for j in range(1, n + 1)]
    return xi, eps
