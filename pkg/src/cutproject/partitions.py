"""Closest return times of a rotation and the three-distance partitions they generate.

For each level n the arcs R^j(I_n), 1 <= j <= q_{n+1}, and R^j(I_{n+1}),
1 <= j <= q_n, tile the circle, where I_n is the arc between 0 and
{q_n * omega}. Tiles are handled through the orbit indices of their
endpoints, so walking a partition never needs a global sort.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .circle import OrbitNumber, Quad, RotationNumber
from .errors import DepthOverflow, PreconditionViolated

DEFAULT_INT_BUDGET = 2**62
DEFAULT_TILE_BUDGET = 2_000_000


@dataclass(frozen=True)
class Tile:
    """The arc R^j(I_base) = {j*omega} + I_base."""

    base: int
    j: int
    left_index: int
    right_index: int
    lo: OrbitNumber  # canonical left endpoint in [0, 1)
    hi: OrbitNumber  # lo + length; may exceed 1 when the arc wraps

    @property
    def length(self) -> OrbitNumber:
        return self.hi - self.lo


class ReturnData:
    """Return times q_0 = 1 < q_1 < ... < q_N with the lengths |I_n| = ||q_n omega||.

    Index 0 is the trivial return q_0 = 1 with |I_0| = omega. The sequence is
    produced by the Euclidean algorithm on (1, omega): the distances shrink
    by the partial quotients and the return times follow the usual
    convergent recursion.
    """

    def __init__(self, omega: RotationNumber, N: int, int_budget: int = DEFAULT_INT_BUDGET):
        if N < 1:
            raise PreconditionViolated("need at least one return time")
        self.omega = omega
        self.int_budget = int_budget
        q = [1]
        lens: list[OrbitNumber] = [omega.orbit_point(1)]
        prev_q, prev_d = 0, omega.one  # d_{-1} = 1
        cur_q, cur_d = 1, omega.orbit_point(1)
        while len(q) <= N:
            a = _floor_ratio(prev_d, cur_d)
            nxt_q = a * cur_q + prev_q
            nxt_d = prev_d - cur_d * a
            if nxt_q > int_budget:
                raise DepthOverflow(f"return time {nxt_q} exceeds the integer budget {int_budget}")
            q.append(nxt_q)
            lens.append(nxt_d)
            prev_q, prev_d, cur_q, cur_d = cur_q, cur_d, nxt_q, nxt_d
        self._q = q
        self._lens = lens
        self._sign = []
        for qn in q:
            # +1: {q_n omega} sits just right of 0, so I_n = [0, |I_n|]
            self._sign.append(1 if omega.orbit_point(qn) < OrbitNumber(1, 0, omega) / 2 else -1)

    @property
    def N(self) -> int:
        return len(self._q) - 1

    @property
    def q(self) -> list[int]:
        """Return times q_1..q_N."""
        return self._q[1:]

    @property
    def lens(self) -> list[OrbitNumber]:
        """Lengths |I_1|..|I_N|."""
        return self._lens[1:]

    def qn(self, n: int) -> int:
        self._need(n)
        return self._q[n]

    def length(self, n: int) -> OrbitNumber:
        self._need(n)
        return self._lens[n]

    def orientation(self, n: int) -> int:
        """+1 if I_n lies to the right of 0, -1 if to the left."""
        self._need(n)
        return self._sign[n]

    def _need(self, n: int) -> None:
        if not 0 <= n <= self.N:
            raise DepthOverflow(f"level {n} beyond computed depth {self.N}; compute more return times")

    def interval(self, n: int) -> tuple[OrbitNumber, OrbitNumber]:
        """I_n as an arc (lo, hi)."""
        d = self.length(n)
        if self.orientation(n) > 0:
            return self.omega.zero, d
        return -d, self.omega.zero

    def identity_holds(self, n: int) -> bool:
        """q_{n+1}|I_n| + q_n|I_{n+1}| = 1, checked exactly."""
        return self.length(n) * self.qn(n + 1) + self.length(n + 1) * self.qn(n) == 1


def _floor_ratio(x: OrbitNumber, y: OrbitNumber) -> int:
    """floor(x / y) for positive x, y."""
    return (x.to_quad() / y.to_quad()).floor()


def return_times(omega: RotationNumber, N: int, int_budget: int = DEFAULT_INT_BUDGET) -> ReturnData:
    return ReturnData(omega, N, int_budget)


class Partition:
    """The level-n partition, addressed through endpoint orbit indices.

    Its endpoints are exactly the points {k*omega} for 1 <= k <= q_n + q_{n+1};
    every such point is the left endpoint of one tile and the right endpoint
    of another.
    """

    def __init__(self, rd: ReturnData, n: int):
        if n < 0 or n + 1 > rd.N:
            raise DepthOverflow(f"partition level {n} needs return data to depth {n + 1}")
        self.rd = rd
        self.n = n
        self.omega = rd.omega
        self.size = rd.qn(n) + rd.qn(n + 1)
        # jmax for tiles based on I_n and I_{n+1}
        self._jmax = {n: rd.qn(n + 1), n + 1: rd.qn(n)}

    def tile(self, base: int, j: int) -> Tile:
        rd = self.rd
        qb = rd.qn(base)
        if rd.orientation(base) > 0:
            li, ri = j, j + qb
        else:
            li, ri = j + qb, j
        lo = self.omega.orbit_point(li)
        return Tile(base, j, li, ri, lo, lo + rd.length(base))

    def _valid(self, base: int, j: int) -> bool:
        return 1 <= j <= self._jmax[base]

    def tile_starting_at(self, k: int) -> Tile:
        """The tile whose left endpoint is {k*omega}."""
        found = []
        for b in (self.n, self.n + 1):
            j = k if self.rd.orientation(b) > 0 else k - self.rd.qn(b)
            if self._valid(b, j):
                found.append((b, j))
        if len(found) != 1:
            raise AssertionError(f"index {k} is the left end of {len(found)} tiles at level {self.n}")
        return self.tile(*found[0])

    def tile_ending_at(self, k: int) -> Tile:
        """The tile whose right endpoint is {k*omega}."""
        found = []
        for b in (self.n, self.n + 1):
            j = k - self.rd.qn(b) if self.rd.orientation(b) > 0 else k
            if self._valid(b, j):
                found.append((b, j))
        if len(found) != 1:
            raise AssertionError(f"index {k} is the right end of {len(found)} tiles at level {self.n}")
        return self.tile(*found[0])

    def tiles(self, budget: int = DEFAULT_TILE_BUDGET) -> list[Tile]:
        """All tiles, in the order I_n-translates then I_{n+1}-translates."""
        if self.size > budget:
            raise DepthOverflow(f"partition level {self.n} has {self.size} tiles, budget {budget}")
        out = [self.tile(self.n, j) for j in range(1, self._jmax[self.n] + 1)]
        out += [self.tile(self.n + 1, j) for j in range(1, self._jmax[self.n + 1] + 1)]
        return out

    def walk(self, start: int, stop: int, budget: int = DEFAULT_TILE_BUDGET) -> list[Tile]:
        """Consecutive tiles from left endpoint index ``start`` to right endpoint index ``stop``.

        With start == stop the whole circle is walked once.
        """
        out = []
        k = start
        while True:
            t = self.tile_starting_at(k)
            out.append(t)
            k = t.right_index
            if k == stop:
                return out
            if len(out) > budget:
                raise DepthOverflow("tile walk exceeded its budget")

    def cyclic_order(self, budget: int = DEFAULT_TILE_BUDGET) -> list[Tile]:
        """All tiles in counterclockwise order, starting with the one at index 1."""
        if self.size > budget:
            raise DepthOverflow(f"partition level {self.n} has {self.size} tiles, budget {budget}")
        return self.walk(1, 1, budget)


def _unit_tile(rd: ReturnData, base: int) -> tuple[int, int]:
    """Endpoint indices of R^1(I_base)."""
    qb = rd.qn(base)
    return (1, 1 + qb) if rd.orientation(base) > 0 else (1 + qb, 1)


def refine(rd: ReturnData, J: Tile, m: int, budget: int = DEFAULT_TILE_BUDGET) -> list[Tile]:
    """Tiles of the level-m partition that make up J (left to right).

    Works for any translate J = R^j(I_b) with m >= b - 1 by refining R^1(I_b)
    and translating, which is the self-similarity of the partitions.
    """
    if m < J.base - 1:
        raise PreconditionViolated(f"cannot refine a level-{J.base} tile to coarser level {m}")
    P = Partition(rd, m)
    li, ri = _unit_tile(rd, J.base)
    shift = J.j - 1
    unit = P.walk(li, ri, budget)
    return [P.tile(t.base, t.j + shift) if shift else t for t in unit]


def refine_ends(rd: ReturnData, J: Tile, m: int, count: int) -> tuple[list[Tile], list[Tile]]:
    """The first and last ``count`` level-m tiles inside J, without walking the middle.

    J must be a tile of some partition of level <= m whose endpoint indices
    are endpoints of the level-m partition.
    """
    P = Partition(rd, m)
    left, right = [], []
    k = J.left_index
    for _ in range(count):
        t = P.tile_starting_at(k)
        left.append(t)
        k = t.right_index
    k = J.right_index
    for _ in range(count):
        t = P.tile_ending_at(k)
        right.append(t)
        k = t.left_index
    right.reverse()
    return left, right


def brute_return_times(omega: RotationNumber, limit: int) -> list[int]:
    """Successive minimizers of ||l*omega|| over 1 <= l <= limit, by exhaustive scan."""
    from .circle import norm_to_integer

    out = []
    best = omega.one
    for l in range(1, limit + 1):
        d = norm_to_integer(omega.orbit_point(l))
        if d < best:
            best = d
            out.append(l)
    return out
