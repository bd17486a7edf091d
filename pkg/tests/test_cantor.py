from fractions import Fraction

import pytest

from cutproject.cantor import RULE_OPPOSITE, build_cantor, plan_parameters, removal_counts
from cutproject.circle import IntervalSet, make_rotation
from cutproject.errors import PreconditionViolated


def test_plan_for_silver_rotation(cantor3):
    plan = cantor3.plan
    assert plan.n_seq == (1, 8, 16)
    assert plan.beta == (Fraction(1, 120), Fraction(1, 240), Fraction(1, 480))
    rd = cantor3.returns
    for l in range(1, plan.depth):
        assert rd.length(plan.n_seq[l - 1] + 1) * plan.beta[l - 1] > rd.length(plan.n_seq[l])
        assert plan.n_seq[l] >= plan.n_seq[l - 1] + 6


@pytest.mark.parametrize("fixture", ["cantor2", "cantor3"])
def test_measure_lower_bound(fixture, request):
    C = request.getfixturevalue(fixture)
    assert C.measure() >= 1 - C.plan.total_budget()
    assert C.measure() >= 1 - C.plan.epsilon


def test_removed_per_step_below_budget(cantor3):
    assert len(cantor3.removed) == cantor3.depth - 1
    for l, r in enumerate(cantor3.removed, start=1):
        assert 0 < r < 3 * cantor3.plan.beta[l - 1]
        assert cantor3.history[l - 1].measure() - cantor3.history[l].measure() == r


def test_sets_are_nested(cantor3):
    for a, b in zip(cantor3.history, cantor3.history[1:]):
        assert b.difference(a).is_empty()


def test_no_tile_accessible_from_both_sides(cantor3):
    tiles = [t for t, _ in cantor3.accessible_tiles]
    assert len(tiles) == 2 * len(cantor3.components)
    assert len(set(tiles)) == len(tiles)


def test_gap_length_determines_level(cantor3):
    by_level = {}
    for g in cantor3.gaps:
        by_level.setdefault(g.level, set()).add(g.length)
    assert sorted(by_level) == [2, 3]
    assert all(len(v) == 1 for v in by_level.values())
    lengths = [next(iter(v)) for v in by_level.values()]
    assert len(set(lengths)) == len(lengths)


def test_opposite_rule_breaks_length_level_equivalence(omega):
    plan, rd = plan_parameters(Fraction(1, 10), 3, omega)
    C = build_cantor(plan, rd, rule=RULE_OPPOSITE)
    assert len({g.length for g in C.gaps if g.level == 3}) == 2


def test_gaps_and_body_partition_the_circle(cantor3):
    omega = cantor3.omega
    G = IntervalSet(omega, [(g.lo, g.hi) for g in cantor3.gaps])
    assert G.measure() + cantor3.measure() == 1
    assert cantor3.body.intersect(G).measure() == 0


def test_endpoints_are_orbit_points(cantor3):
    omega = cantor3.omega
    for g in cantor3.gaps[:200]:
        assert g.lo.same_mod1(omega.orbit_point(g.lo_index))
        assert g.hi.same_mod1(omega.orbit_point(g.hi_index))


def test_golden_rotation_construction(golden):
    plan, rd = plan_parameters(Fraction(1, 4), 3, golden)
    C = build_cantor(plan, rd)
    assert C.measure() >= 1 - plan.total_budget()
    for lev in (2, 3):
        assert len({g.length for g in C.gaps if g.level == lev}) == 1


def test_removal_counts():
    assert removal_counts(None, 2) == (1, 1)
    assert removal_counts(("left", 2), 2) == (2, 1)
    assert removal_counts(("right", 2), 2) == (1, 2)
    assert removal_counts(("left", 1), 2) == (1, 1)
    assert removal_counts(("left", 2), 2, RULE_OPPOSITE) == (1, 2)


def test_bad_parameters(omega):
    with pytest.raises(PreconditionViolated):
        plan_parameters(Fraction(3, 2), 3, omega)
    with pytest.raises(PreconditionViolated):
        plan_parameters(Fraction(1, 10), 1, omega)
    plan, rd = plan_parameters(Fraction(1, 10), 2, omega)
    with pytest.raises(PreconditionViolated):
        build_cantor(plan, rd, rule="sideways")


def test_depth_two_has_seven_gaps(cantor2):
    # level-1 tiles of the silver rotation: q_1 + q_2 = 7
    assert len(cantor2.gaps) == 7
    assert make_rotation(2, -1, 1, 1) == cantor2.omega
