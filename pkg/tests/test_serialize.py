import json
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from cutproject.complexity import patch_complexity
from cutproject.independence import build_independence_set
from cutproject.serialize import (certificate_from_json, certificate_to_json, complexity_csv, dumps, num_from_json,
                                  num_to_json, points_svg, set_from_json, set_to_json, window_from_json,
                                  window_svg, window_to_json)
from cutproject.windows import custom_window, interval_window


@given(st.fractions(max_denominator=10**9))
def test_number_round_trip(x):
    v = num_to_json(x)
    assert isinstance(v, (int, str))
    assert Fraction(num_from_json(v)) == x


def test_window_round_trip_is_byte_identical(win_W, win_V, win_random):
    for W in (win_W, win_V, win_random):
        text = dumps(window_to_json(W))
        back = window_from_json(json.loads(text))
        assert back == W
        assert back.gaps == W.gaps
        assert dumps(window_to_json(back)) == text


def test_half_open_interval_round_trip(omega):
    W = interval_window(omega, Fraction(1, 5), omega.point(0, 1), open_lo=True)
    back = window_from_json(json.loads(dumps(window_to_json(W))))
    assert back == W
    assert not back.contains(omega.point(Fraction(1, 5)))


def test_no_floats_in_exact_state(win_V):
    def walk(x):
        if isinstance(x, float):
            raise AssertionError("float in stored state")
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        if isinstance(x, list):
            for v in x:
                walk(v)

    walk(window_to_json(win_V))


def test_set_round_trip(omega):
    S = interval_window(omega, Fraction(9, 10), Fraction(13, 10)).set
    assert set_from_json(set_to_json(S), omega) == S


def test_certificate_round_trip(omega):
    V1 = interval_window(omega, 0, Fraction(1, 2))
    cert = build_independence_set(custom_window(V1.set.complement()), V1, 2)
    text = dumps(certificate_to_json(cert))
    back = certificate_from_json(json.loads(text))
    assert back.S == cert.S and back.witnesses == cert.witnesses
    assert dumps(certificate_to_json(back)) == text


def test_csv_and_svg(win_V):
    csv = complexity_csv(patch_complexity(win_V, 3))
    assert csv == "n,p_n\n1,2\n2,3\n3,4\n"
    svg = window_svg(win_V)
    assert svg.startswith("<svg") and svg.count("<rect") == 1 + len(win_V.set.components)
    assert points_svg([]).startswith("<svg")
    assert points_svg([(0.0, 1.0), (2.0, -1.0)]).count("<circle") == 2
