"""Finite-depth self-similar Cantor sets built from the rotation partitions.

C_1 is the whole circle. C_{l+1} is obtained from C_l by cutting each
level-n_l tile into level-n_{l+1} tiles and deleting the interiors of one
or two of them at each end. How many go from each end depends on whether
the tile abuts a gap and on the parity of that gap's level, which is what
makes the limit set perfectly self-similar along the orbit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .circle import IntervalSet, OrbitNumber, RotationNumber
from .errors import DepthOverflow, PreconditionViolated
from .partitions import DEFAULT_INT_BUDGET, Partition, ReturnData, Tile, refine_ends

RULE_ADJACENT = "adjacent"
RULE_OPPOSITE = "opposite"


@dataclass(frozen=True)
class ConstructionPlan:
    omega: RotationNumber
    epsilon: Fraction
    depth: int
    beta: tuple
    n_seq: tuple

    def total_budget(self) -> Fraction:
        return sum((3 * b for b in self.beta), Fraction(0))


def plan_parameters(epsilon, depth: int, omega: RotationNumber, n1: int = 1,
                    int_budget: int = DEFAULT_INT_BUDGET) -> tuple[ConstructionPlan, ReturnData]:
    """Choose beta_l = eps / (6 * 2^l) and the partition levels n_1 < ... < n_L.

    n_{l+1} is the least level at least n_l + 6 with
    |I_{n_l + 1}| / |I_{n_{l+1}}| > 1 / beta_l, checked exactly.
    """
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 1:
        raise PreconditionViolated("epsilon must lie strictly between 0 and 1")
    if depth < 2:
        raise PreconditionViolated("depth must be at least 2")
    beta = tuple(epsilon / (6 * 2**l) for l in range(1, depth + 1))
    N = n1 + 8
    rd = ReturnData(omega, N, int_budget)
    n_seq = [n1]
    for l in range(1, depth):
        b = beta[l - 1]
        n = n_seq[-1] + 6
        while True:
            while n + 2 > rd.N:
                N = rd.N + 8
                rd = ReturnData(omega, N, int_budget)
            if rd.length(n_seq[-1] + 1) * b > rd.length(n):
                break
            n += 1
        n_seq.append(n)
    while n_seq[-1] + 2 > rd.N:
        rd = ReturnData(omega, rd.N + 4, int_budget)
    return ConstructionPlan(omega, epsilon, depth, beta, tuple(n_seq)), rd


@dataclass
class Component:
    """A component of C_l: an arc whose endpoints are orbit points."""

    left_index: int
    right_index: int
    lo: OrbitNumber
    hi: OrbitNumber
    left_level: int | None = None
    right_level: int | None = None


@dataclass(frozen=True)
class Gap:
    lo: OrbitNumber
    hi: OrbitNumber
    level: int
    lo_index: int
    hi_index: int

    @property
    def length(self) -> OrbitNumber:
        return self.hi - self.lo


@dataclass
class CantorApprox:
    plan: ConstructionPlan
    returns: ReturnData
    body: IntervalSet
    components: list
    gaps: list
    accessible_tiles: list
    removed: list
    history: list = field(default_factory=list)
    rule: str = RULE_ADJACENT

    @property
    def omega(self) -> RotationNumber:
        return self.plan.omega

    @property
    def depth(self) -> int:
        return self.plan.depth

    @property
    def resolution(self) -> OrbitNumber:
        """Length of the finest partition arcs used, |I_{n_L + 1}|."""
        return self.returns.length(self.plan.n_seq[-1] + 1)

    def canonical_gaps(self) -> list:
        """Gaps sorted by (level, left endpoint); position i is the 1-based index minus one."""
        return sorted(self.gaps, key=lambda g: (g.level, g.lo))

    def measure(self) -> OrbitNumber:
        return self.body.measure()


def removal_counts(access, level: int, rule: str = RULE_ADJACENT) -> tuple[int, int]:
    """Subtiles (left, right) removed from a tile when passing from C_level.

    ``access`` is None or (side, k) for a tile k-accessible from ``side``.
    When level - k is even, two subtiles go on one side and one on the
    other; ``rule`` picks whether the pair sits at the accessible side
    (default) or at the opposite one.
    """
    if access is None:
        return 1, 1
    side, k = access
    if (level - k) % 2:
        return 1, 1
    near_two = (rule == RULE_ADJACENT)
    if side == "left":
        return (2, 1) if near_two else (1, 2)
    return (1, 2) if near_two else (2, 1)


def build_cantor(plan: ConstructionPlan, rd: ReturnData, rule: str = RULE_ADJACENT,
                 tile_budget: int = 5_000_000) -> CantorApprox:
    """Run the construction to depth L, keeping exact gap and accessibility records."""
    if rule not in (RULE_ADJACENT, RULE_OPPOSITE):
        raise PreconditionViolated(f"unknown removal rule {rule!r}")
    omega = plan.omega
    if plan.n_seq[-1] + 1 > rd.N:
        raise DepthOverflow("return data too shallow for the plan")
    history = [IntervalSet.full(omega)]
    removed = []
    comps: list[Component] | None = None  # None encodes C_1 = circle
    work = 0
    for l in range(1, plan.depth):
        n_here, n_next = plan.n_seq[l - 1], plan.n_seq[l]
        P = Partition(rd, n_here)
        # each entry: (tile sequence, left gap level, right gap level)
        if comps is None:
            sequences = [(P.cyclic_order(tile_budget), None, None)]
        else:
            sequences = []
            for c in comps:
                tiles = P.walk(c.left_index, c.right_index, tile_budget)
                sequences.append((tiles, c.left_level, c.right_level))
                work += len(tiles)
                if work > tile_budget:
                    raise DepthOverflow("construction exceeded its tile budget")
        blocks = []  # (left_index, right_index, lo, hi, seq_id, pos)
        before = history[-1].measure()
        for sid, (tiles, llev, rlev) in enumerate(sequences):
            s = len(tiles)
            if comps is not None and s < 2:
                raise AssertionError("a component reduced to a single tile would be accessible from both sides")
            for i, T in enumerate(tiles):
                access = None
                if i == 0 and llev is not None:
                    access = ("left", llev)
                if i == s - 1 and rlev is not None:
                    access = ("right", rlev)
                cl, cr = removal_counts(access, l, rule)
                left, right = refine_ends(rd, T, n_next, 2)
                lidx = left[cl - 1].right_index
                ridx = right[-cr].left_index
                cut = sum((t.length for t in left[:cl]), omega.zero) + sum((t.length for t in right[-cr:]), omega.zero)
                lo = omega.orbit_point(lidx)
                hi = lo + (T.length - cut)
                blocks.append((lidx, ridx, lo, hi, sid, i))
        # gaps between consecutive blocks (cyclic); interior ones are new
        blocks.sort(key=lambda b: b[2])
        new_comps = []
        gaps = []
        nb = len(blocks)
        for i in range(nb):
            cur = blocks[i]
            nxt = blocks[(i + 1) % nb]
            same_parent = (cur[4] == nxt[4] and (nxt[5] == cur[5] + 1 or (comps is None and nxt[5] == 0 and cur[5] == len(sequences[0][0]) - 1)))
            # a gap inside one old component is new; otherwise it widens an old gap
            level = l + 1 if same_parent else sequences[cur[4]][2]
            ghi = nxt[2] if i + 1 < nb else nxt[2] + 1
            glo = cur[3].mod1()
            gaps.append(Gap(glo, glo + (ghi - cur[3]), level, cur[1], nxt[0]))
        for i in range(nb):
            b = blocks[i]
            new_comps.append(Component(b[0], b[1], b[2], b[3], gaps[i - 1].level, gaps[i].level))
        comps = new_comps
        body = IntervalSet(omega, [(c.lo, c.hi) for c in comps])
        history.append(body)
        removed.append(before - body.measure())
        current_gaps = gaps
    # accessible tiles at the finest level
    Pn = Partition(rd, plan.n_seq[-1])
    acc = []
    for c in comps:
        first = Pn.tile_starting_at(c.left_index)
        last = Pn.tile_ending_at(c.right_index)
        acc.append((first, ("left", c.left_level)))
        acc.append((last, ("right", c.right_level)))
    return CantorApprox(plan, rd, history[-1], comps, current_gaps, acc, removed, history, rule)
