"""Exact JSON forms of the core objects, plus CSV tables and SVG plots.

Rationals are written as integers or "p/q" strings, so nothing stored
passes through a float. Floats only appear in display columns and plots.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .cantor import Gap
from .circle import IntervalSet, OrbitNumber, RotationNumber
from .complexity import ComplexityTable
from .errors import PreconditionViolated
from .independence import IndependenceCertificate
from .windows import WindowSpec

SCHEMA_VERSION = 1


def num_to_json(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def num_from_json(v):
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise PreconditionViolated(f"expected an integer or 'p/q' string, got {v!r}")
    x = Fraction(v)
    return x.numerator if x.denominator == 1 else x


def omega_to_json(w: RotationNumber) -> dict:
    return {"D": w.D, "p": w.p, "q": w.q, "r": w.r}


def omega_from_json(d: dict) -> RotationNumber:
    return RotationNumber(int(d["D"]), int(d["p"]), int(d["q"]), int(d["r"]))


def orbit_to_json(x: OrbitNumber) -> dict:
    return {"a": num_to_json(x.a), "b": num_to_json(x.b)}


def orbit_from_json(d: dict, omega: RotationNumber) -> OrbitNumber:
    return OrbitNumber(num_from_json(d["a"]), num_from_json(d["b"]), omega)


def set_to_json(S: IntervalSet) -> list:
    return [{"lo": orbit_to_json(lo), "hi": orbit_to_json(hi)} for lo, hi in S.components]


def set_from_json(items: list, omega: RotationNumber) -> IntervalSet:
    return IntervalSet.from_arcs(omega, [(orbit_from_json(c["lo"], omega), orbit_from_json(c["hi"], omega))
                                         for c in items])


def _param_to_json(v):
    if isinstance(v, tuple):
        return [_param_to_json(x) for x in v]
    return v


def _param_from_json(v):
    if isinstance(v, list):
        return tuple(_param_from_json(x) for x in v)
    return v


def window_to_json(W: WindowSpec) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": W.kind,
        "omega": omega_to_json(W.omega),
        "depth": W.depth,
        "components": set_to_json(W.set),
        "gaps": [{"lo": orbit_to_json(g.lo), "hi": orbit_to_json(g.hi), "level": g.level,
                  "lo_index": g.lo_index, "hi_index": g.hi_index, "filled": bool(f)} for g, f in W.gaps],
        "open_points": [orbit_to_json(x) for x in sorted(W.open_points)],
        "resolution": None if W.resolution is None else orbit_to_json(W.resolution),
        "params": [[k, _param_to_json(v)] for k, v in W.params],
    }


def window_from_json(d: dict) -> WindowSpec:
    omega = omega_from_json(d["omega"])
    gaps = tuple((Gap(orbit_from_json(g["lo"], omega), orbit_from_json(g["hi"], omega), int(g["level"]),
                      int(g["lo_index"]), int(g["hi_index"])), bool(g["filled"])) for g in d.get("gaps", []))
    res = d.get("resolution")
    return WindowSpec(
        kind=d["kind"],
        omega=omega,
        set=set_from_json(d["components"], omega),
        depth=int(d.get("depth", 0)),
        gaps=gaps,
        open_points=frozenset(orbit_from_json(x, omega) for x in d.get("open_points", [])),
        resolution=None if res is None else orbit_from_json(res, omega),
        params=tuple((k, _param_from_json(v)) for k, v in d.get("params", [])),
    )


def certificate_to_json(cert: IndependenceCertificate) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "S": list(cert.S),
        "omega": omega_to_json(cert.omega),
        "depth": cert.depth,
        "V0": set_to_json(cert.V0),
        "V1": set_to_json(cert.V1),
        "witnesses": [{"bits": a, "lo": orbit_to_json(lo), "hi": orbit_to_json(hi)}
                      for a, (lo, hi) in sorted(cert.witnesses.items(), key=lambda kv: (len(kv[0]), kv[0]))],
        "params": {k: v for k, v in sorted(cert.params.items())},
    }


def certificate_from_json(d: dict) -> IndependenceCertificate:
    omega = omega_from_json(d["omega"])
    wit = {w["bits"]: (orbit_from_json(w["lo"], omega), orbit_from_json(w["hi"], omega)) for w in d["witnesses"]}
    return IndependenceCertificate(omega, [int(k) for k in d["S"]], wit, set_from_json(d["V0"], omega),
                                   set_from_json(d["V1"], omega), int(d.get("depth", 0)), dict(d.get("params", {})))


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def csv_text(header: list, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(str(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def complexity_csv(table: ComplexityTable) -> str:
    return csv_text(["n", "p_n"], table.rows())


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def window_svg(W: WindowSpec, width: int = 800, height: int = 60) -> str:
    """The window as filled bars over [0, 1]."""
    bars = []
    for lo, hi in W.set.components:
        x0, x1 = float(lo) * width, float(hi) * width
        bars.append(f'<rect x="{_fmt(x0)}" y="10" width="{_fmt(max(x1 - x0, 0.5))}" height="{height - 20}" '
                    f'fill="black"/>')
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">'
            f'<rect x="0" y="10" width="{width}" height="{height - 20}" fill="none" stroke="gray"/>'
            + "".join(bars) + "</svg>\n")


def points_svg(points: list, size: int = 600) -> str:
    """Scatter plot of 1D (x) or 2D (x, y) float points scaled to the frame."""
    pts = [(p, 0.0) if not isinstance(p, (tuple, list)) else (p[0], p[1]) for p in points]
    if not pts:
        return f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}"></svg>\n'
    span = max(max(abs(x), abs(y)) for x, y in pts) or 1.0
    scale = (size / 2 - 10) / span
    dots = [f'<circle cx="{_fmt(size / 2 + x * scale)}" cy="{_fmt(size / 2 - y * scale)}" r="2"/>' for x, y in pts]
    return f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">' + "".join(dots) + "</svg>\n"
