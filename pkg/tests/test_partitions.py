from fractions import Fraction

import pytest

from cutproject.circle import make_rotation
from cutproject.errors import DepthOverflow
from cutproject.partitions import Partition, brute_return_times, refine, return_times

# successive minimizers of ||l (sqrt2 - 1)|| for l <= 10^5, frozen from an exhaustive scan
SILVER_RETURNS = [2, 5, 12, 29, 70, 169, 408, 985, 2378, 5741, 13860, 33461, 80782]
GOLDEN_RETURNS = [2, 3, 5, 8, 13, 21, 34, 55, 89, 144]


def test_silver_return_times(omega):
    rd = return_times(omega, 13)
    assert rd.q == SILVER_RETURNS


def test_silver_return_times_against_scan(omega):
    # the scan also reports the trivial return time 1
    assert brute_return_times(omega, 3000) == [1] + [q for q in SILVER_RETURNS if q <= 3000]


def test_golden_return_times(golden):
    assert return_times(golden, 10).q == GOLDEN_RETURNS


@pytest.mark.parametrize("D,p,q,r", [(2, -1, 1, 1), (5, -1, 1, 2), (3, -1, 1, 1), (7, 0, 1, 5), (13, -3, 1, 2)])
def test_length_identity(D, p, q, r):
    rd = return_times(make_rotation(D, p, q, r), 12)
    for n in range(11):
        assert rd.identity_holds(n)


def test_lengths_are_the_orbit_distances(omega):
    from cutproject.circle import norm_to_integer

    rd = return_times(omega, 8)
    for n in range(1, 9):
        assert rd.length(n) == norm_to_integer(omega.orbit_point(rd.qn(n)))
        assert rd.length(n) < rd.length(n - 1)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_partition_tiles_the_circle(omega, n):
    rd = return_times(omega, n + 2)
    P = Partition(rd, n)
    tiles = P.cyclic_order()
    assert len(tiles) == rd.qn(n) + rd.qn(n + 1)
    assert sum((t.length for t in tiles), omega.zero) == 1
    for a, b in zip(tiles, tiles[1:] + tiles[:1]):
        assert a.right_index == b.left_index
        assert a.hi.same_mod1(b.lo)
    lengths = {t.length for t in tiles}
    assert lengths == {rd.length(n), rd.length(n + 1)}


def test_refinement_is_a_subdivision(omega):
    rd = return_times(omega, 8)
    T = Partition(rd, 2).cyclic_order()[3]
    sub = refine(rd, T, 5)
    assert sub[0].left_index == T.left_index
    assert sub[-1].right_index == T.right_index
    assert sum((t.length for t in sub), omega.zero) == T.length


def test_level_beyond_depth_is_reported(omega):
    rd = return_times(omega, 3)
    with pytest.raises(DepthOverflow):
        rd.length(9)


def test_integer_budget(omega):
    with pytest.raises(DepthOverflow):
        return_times(omega, 40, int_budget=10**6)


def test_golden_lengths_are_powers(golden):
    # the lengths |I_n| for the golden rotation shrink geometrically by the golden mean
    rd = return_times(golden, 6)
    ratios = {(rd.length(n + 1).to_quad() / rd.length(n).to_quad()) for n in range(1, 6)}
    assert len(ratios) == 1
    assert abs(float(next(iter(ratios))) - (5 ** 0.5 - 1) / 2) < 1e-12
