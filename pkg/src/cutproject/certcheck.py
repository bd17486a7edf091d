"""Standalone validation of serialized independence certificates.

Works from the JSON form alone and shares no code with the builder: only
the exact circle arithmetic is imported. Checked for every witness U_a:

* U_a is a closed arc of length in (0, 1) and lies inside U_b for its
  parent prefix b;
* for each position l <= |a| the translate U_a + {t_l * omega} lies in
  the interior of V_{a_l}.
"""

from __future__ import annotations

import json
from bisect import bisect_left
from fractions import Fraction
from itertools import product

from .circle import IntervalSet, OrbitNumber, RotationNumber
from .errors import PreconditionViolated


def _num(v):
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise PreconditionViolated(f"bad number {v!r}")
    return Fraction(v)


def _pt(d: dict, omega: RotationNumber) -> OrbitNumber:
    return OrbitNumber(_num(d["a"]), _num(d["b"]), omega)


def _set(items: list, omega: RotationNumber) -> IntervalSet:
    return IntervalSet.from_arcs(omega, [(_pt(c["lo"], omega), _pt(c["hi"], omega)) for c in items])


def arc_in_interior(V: IntervalSet, lo: OrbitNumber, hi: OrbitNumber, boundary: list) -> bool:
    """Closed arc [lo, hi] (0 < hi - lo < 1) inside int V, exactly."""
    if not V.interior_contains(lo):
        return False
    if V.is_full():
        return True
    start = lo.mod1()
    end = start + (hi - lo)
    # no boundary point may lie in [start, end] on the lifted line
    i = bisect_left(boundary, start)
    if i < len(boundary) and boundary[i] <= end:
        return False
    return not (end >= 1 and boundary and boundary[0] <= end - 1)


def _inside(lo: OrbitNumber, hi: OrbitNumber, plo: OrbitNumber, phi: OrbitNumber) -> bool:
    """Arc [lo, hi] contained in arc [plo, phi]."""
    off = (lo - plo).mod1()
    return off + (hi - lo) <= phi - plo


def check_certificate(data: dict, max_failures: int = 20) -> dict:
    """Report with ``ok`` true exactly when every invariant holds."""
    failures: list = []

    def fail(msg):
        if len(failures) < max_failures:
            failures.append(msg)

    w = data["omega"]
    omega = RotationNumber(int(w["D"]), int(w["p"]), int(w["q"]), int(w["r"]))
    S = [int(k) for k in data["S"]]
    n = len(S)
    if len(set(S)) != n:
        fail("repeated orbit index in S")
    V = (_set(data["V0"], omega), _set(data["V1"], omega))
    if not V[0].intersect(V[1]).is_empty():
        fail("V0 and V1 have intersecting interiors")
    bnd = (V[0].boundary_points(), V[1].boundary_points())
    wit = {}
    for item in data["witnesses"]:
        a = item["bits"]
        if not a or any(c not in "01" for c in a) or len(a) > n:
            fail(f"bad witness label {a!r}")
            continue
        wit[a] = (_pt(item["lo"], omega), _pt(item["hi"], omega))
    shifts = [omega.orbit_point(k) for k in S]
    checked = 0
    for length in range(1, n + 1):
        for bits in product("01", repeat=length):
            a = "".join(bits)
            if a not in wit:
                fail(f"missing witness for {a}")
                continue
            lo, hi = wit[a]
            span = hi - lo
            if not (0 < span < 1):
                fail(f"witness {a} is not a proper arc")
                continue
            if length > 1 and a[:-1] in wit and not _inside(lo, hi, *wit[a[:-1]]):
                fail(f"witness {a} not nested in {a[:-1]}")
            for pos, c in enumerate(a):
                j = int(c)
                if not arc_in_interior(V[j], lo + shifts[pos], hi + shifts[pos], bnd[j]):
                    fail(f"witness {a} leaves int V{j} at position {pos + 1}")
            checked += 1
    return {"ok": not failures and checked == 2 ** (n + 1) - 2, "n": n, "checked": checked, "failures": failures}


def check_file(path: str) -> dict:
    with open(path) as fh:
        return check_certificate(json.load(fh))
