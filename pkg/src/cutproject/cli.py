"""Command-line front end.

Every run resolves its flags (optionally overridden by ``--config``) into
a plain JSON config, writes its artifacts and a manifest holding the
config, its hash, library versions and output hashes. ``replay`` reruns a
manifest into a scratch directory and compares the output bytes.

Exit codes: 0 success, 1 a check reported failure, 2 precondition
violated, 3 budget exhausted. Errors go to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import platform
import random
import sys
import tempfile
from fractions import Fraction
from importlib import metadata

from . import __version__
from .birkhoff import birkhoff_fiber_agreement
from .cantor import build_cantor, plan_parameters
from .certcheck import check_file
from .circle import OrbitNumber, RotationNumber, make_rotation
from .complexity import entropy_semicontinuity_experiment, patch_complexity
from .cps import check_ldc, coding_word, critical_points, default_cps, fiber_enumerate, model_set
from .errors import BudgetExceeded, PreconditionViolated
from .independence import (build_independence_set, measure_estimate_check, random_xi_family,
                           verify_free_set)
from .pseudolines import decompose, default_cps3
from .serialize import (certificate_to_json, complexity_csv, csv_text, dumps, num_to_json,
                        orbit_to_json, points_svg, window_from_json, window_svg, window_to_json)
from .windows import custom_window, interval_window, window_random, window_V, window_W

OUTPUT_KEYS = ("out", "csv", "svg")
INPUT_KEYS = ("window", "cert")


class CheckFailed(Exception):
    """A verification command found a violation."""


# ---------------------------------------------------------------------------
# parsing helpers

def parse_omega(text: str) -> RotationNumber:
    D, p, q, r = (int(x) for x in text.split(","))
    return make_rotation(D, p, q, r)


def parse_shift(text: str, W) -> OrbitNumber:
    """"a,b" for a + b*omega, "orbit:k" for {k omega}, "crit:i[:k]" for {k omega} - e_i."""
    omega = W.omega
    if text.startswith("orbit:"):
        return omega.orbit_point(int(text[6:]))
    if text.startswith("crit:"):
        parts = text[5:].split(":")
        i = int(parts[0])
        k = int(parts[1]) if len(parts) > 1 else 0
        bnd = W.boundary
        if not 0 <= i < len(bnd):
            raise PreconditionViolated(f"window has {len(bnd)} boundary points, index {i} requested")
        return omega.orbit_point(k) - bnd[i]
    a, _, b = text.partition(",")
    return OrbitNumber(Fraction(a), Fraction(b or 0), omega)


def _ints(text: str) -> list:
    return [int(x) for x in text.split(",") if x.strip()]


def _load_window(path: str):
    with open(path) as fh:
        return window_from_json(json.load(fh))


def _cantor(cfg: dict):
    omega = parse_omega(cfg["omega"])
    plan, rd = plan_parameters(Fraction(cfg["eps"]), int(cfg["depth"]), omega)
    return build_cantor(plan, rd)


def _orbit_view(x: OrbitNumber) -> dict:
    return {**orbit_to_json(x), "float": round(float(x), 12)}


# ---------------------------------------------------------------------------
# commands: each takes the resolved config and returns {name: text} artifacts

def cmd_construct(cfg: dict) -> dict:
    kind = cfg["kind"]
    if kind == "interval":
        omega = parse_omega(cfg["omega"])
        W = interval_window(omega, Fraction(cfg["lo"]), Fraction(cfg["hi"]))
    else:
        C = _cantor(cfg)
        if kind == "W":
            W = window_W(C)
        elif kind == "V":
            W = window_V(C)
        elif kind == "Wx":
            W = window_random(C, cfg.get("bits") or "", int(cfg["seed"]))
        elif kind == "complement-W":
            W = custom_window(window_W(C).set.complement())
        else:
            raise PreconditionViolated(f"unknown window kind {kind!r}")
    out = {"out": dumps(window_to_json(W))}
    if cfg.get("svg"):
        out["svg"] = window_svg(W)
    return out


def cmd_measure(cfg: dict) -> dict:
    W = _load_window(cfg["window"])
    m = W.measure()
    return {"out": dumps({"measure": _orbit_view(m), "components": len(W.set.components),
                          "boundary_points": len(W.boundary)})}


def cmd_modelset(cfg: dict) -> dict:
    W = _load_window(cfg["window"])
    t = parse_shift(cfg["t"], W)
    patch = model_set(default_cps(W.omega), W, t, Fraction(cfg["R"]))
    xs = patch.external_floats()
    out = {"out": dumps({"t": orbit_to_json(t), "R": num_to_json(Fraction(cfg["R"])),
                         "points": [[n, m, bool(b)] for (n, m), b in zip(patch.points, patch.boundary)]})}
    if cfg.get("csv"):
        out["csv"] = csv_text(["n", "m", "boundary", "x_float"],
                              [(n, m, int(b), f"{x:.12f}") for (n, m), b, x in zip(patch.points, patch.boundary, xs)])
    if cfg.get("svg"):
        out["svg"] = points_svg(xs)
    return out


def cmd_coding(cfg: dict) -> dict:
    W = _load_window(cfg["window"])
    t = parse_shift(cfg["t"], W)
    word = coding_word(W, t, int(cfg["k0"]), int(cfg["k1"]))
    return {"out": dumps({"t": orbit_to_json(t), "k0": int(cfg["k0"]), "k1": int(cfg["k1"]), "word": word})}


def cmd_complexity(cfg: dict) -> dict:
    W = _load_window(cfg["window"])
    table = patch_complexity(W, int(cfg["nmax"]))
    out = {"csv": complexity_csv(table)}
    if cfg.get("out"):
        out["out"] = dumps({"n": table.n, "p": table.p, "cells": table.cells,
                            "monotone": table.is_monotone(), "subadditive": table.is_subadditive()})
    return out


def cmd_fiber(cfg: dict) -> dict:
    W = _load_window(cfg["window"])
    t = parse_shift(cfg["t"], W)
    rep = fiber_enumerate(default_cps(W.omega), W, t, Fraction(cfg["R"]))
    return {"out": dumps({"t": orbit_to_json(t), "critical": rep.critical, "hits": [list(h) for h in rep.hits],
                          "classes": rep.classes, "bound": rep.bound, "ldc": rep.ldc,
                          "over_approximation": rep.over_approximation,
                          "candidates": [sorted(list(h) for h in c) for c in rep.candidates]})}


def cmd_ldc_check(cfg: dict) -> dict:
    W = _load_window(cfg["window"])
    t = parse_shift(cfg["t"], W)
    hits = critical_points(W, t, int(cfg["K"]))
    ok, report = check_ldc(W, t, hits, exhaustive=True)
    pairs = [{"pair": list(pair), "radius": orbit_to_json(eps), "disjoint": d} for pair, (eps, d) in report.items()]
    text = dumps({"t": orbit_to_json(t), "hits": hits, "ldc": ok, "pairs": pairs})
    if not ok:
        raise CheckFailed(text)
    return {"out": text}


def cmd_independence(cfg: dict) -> dict:
    W = _load_window(cfg["window"])
    V0 = custom_window(W.set.complement())
    cert = build_independence_set(V0, W, int(cfg["n"]), width=int(cfg["width"]))
    return {"out": dumps(certificate_to_json(cert))}


def cmd_verify_cert(cfg: dict) -> dict:
    rep = check_file(cfg["cert"])
    text = dumps(rep)
    if not rep["ok"]:
        raise CheckFailed(text)
    return {"out": text}


def cmd_free_set(cfg: dict) -> dict:
    W = _load_window(cfg["window"])
    rep = verify_free_set(W, _ints(cfg["S"]))
    rep = {k: v for k, v in rep.items() if k != "witness"}
    text = dumps(rep)
    if not rep["free"]:
        raise CheckFailed(text)
    return {"out": text}


def cmd_measure_estimate(cfg: dict) -> dict:
    C = _cantor(cfg)
    rng = random.Random(int(cfg["seed"]))
    rows = []
    for i in range(int(cfg["families"])):
        xi, eps = random_xi_family(int(cfg["n"]), Fraction(cfg["scale"]), rng)
        r = measure_estimate_check(C.body, xi, eps)
        rows.append((i, f"{float(r['lhs']):.12f}", f"{float(r['rhs']):.12f}", int(r["holds"])))
    text = csv_text(["family", "lhs_float", "rhs_float", "holds"], rows)
    if not all(r[3] for r in rows):
        raise CheckFailed(text)
    return {"csv": text}


def cmd_birkhoff(cfg: dict) -> dict:
    W = _load_window(cfg["window"])
    t = parse_shift(cfg["t"], W)
    rep = birkhoff_fiber_agreement(default_cps(W.omega), W, t, Fraction(cfg["g0"]), Fraction(cfg["eps"]),
                                   int(cfg["N"]), cfg["observable"])
    rep = {**rep, "averages": [f"{a:.15f}" for a in rep["averages"]],
           "deviation": f"{rep['deviation']:.15e}", "bound": f"{rep['bound']:.15e}"}
    text = dumps(rep)
    if not rep["holds"]:
        raise CheckFailed(text)
    return {"out": text}


def cmd_pseudolines(cfg: dict) -> dict:
    W = _load_window(cfg["window"])
    t = parse_shift(cfg["t"], W)
    cps3 = default_cps3(W.omega)
    dec = decompose(cps3, W, t, int(cfg["M"]))
    rows = []
    pts2 = []
    for pl in dec.lines:
        for n, k, m in pl.points:
            x1, x2 = (float(v) for v in cps3.external(n, k, m))
            rows.append((m, n, k, f"{x1:.12f}", f"{x2:.12f}"))
            pts2.append((x1, x2))
    out = {"csv": csv_text(["m", "n", "k", "x1_float", "x2_float"], rows)}
    if cfg.get("out"):
        out["out"] = dumps({"M": dec.M, "points": len(rows), "lines_meeting_ball": dec.count(),
                            "kappa": f"{dec.kappa:.12f}", "tube_radius": f"{dec.tube_radius:.12f}",
                            "spacing": f"{dec.spacing:.12f}", "count_bound": f"{2 * dec.M * dec.kappa:.12f}"})
    if cfg.get("svg"):
        out["svg"] = points_svg(pts2)
    return out


def cmd_semicontinuity(cfg: dict) -> dict:
    C = _cantor(cfg)
    rows = entropy_semicontinuity_experiment(C, _ints(cfg["prefixes"]), int(cfg["nword"]), int(cfg["seed"]))
    return {"csv": csv_text(["n_prefix", "p_xy", "p_yx", "p_x", "p_y"],
                            [(r["n_prefix"], r["p_xy"], r["p_yx"], r["p_x"], r["p_y"]) for r in rows])}


COMMANDS = {
    "construct": cmd_construct,
    "measure": cmd_measure,
    "modelset": cmd_modelset,
    "coding": cmd_coding,
    "complexity": cmd_complexity,
    "fiber": cmd_fiber,
    "ldc-check": cmd_ldc_check,
    "independence": cmd_independence,
    "verify-cert": cmd_verify_cert,
    "free-set": cmd_free_set,
    "measure-estimate": cmd_measure_estimate,
    "birkhoff": cmd_birkhoff,
    "pseudolines": cmd_pseudolines,
    "semicontinuity": cmd_semicontinuity,
}


# ---------------------------------------------------------------------------
# argument parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cutproject", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out_default=None):
        sp.add_argument("--config", help="JSON file whose keys override the flags")
        sp.add_argument("--out", default=out_default, help="main JSON output path")
        sp.add_argument("--manifest", help="manifest path (default: next to the output)")
        sp.add_argument("--threads", type=int, default=1, help="worker cap; results do not depend on it")
        return sp

    def cantor_flags(sp):
        sp.add_argument("--omega", default="2,-1,1,1", help="D,p,q,r for (p + q sqrt D)/r")
        sp.add_argument("--eps", default="1/10")
        sp.add_argument("--depth", type=int, default=3)

    def window_flags(sp, shift=True):
        sp.add_argument("--window", required=False, help="WindowSpec JSON")
        if shift:
            sp.add_argument("--t", default="0,0", help='"a,b", "orbit:k" or "crit:i[:k]"')

    sp = common(sub.add_parser("construct", help="build a window and write its JSON"))
    cantor_flags(sp)
    sp.add_argument("--window", dest="kind", default="W", choices=["W", "V", "Wx", "interval", "complement-W"])
    sp.add_argument("--bits", default="")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--lo", default="0")
    sp.add_argument("--hi", default="1/2")
    sp.add_argument("--svg")

    window_flags(common(sub.add_parser("measure", help="exact measure of a window")), shift=False)

    sp = common(sub.add_parser("modelset", help="model set points in [-R, R]"))
    window_flags(sp)
    sp.add_argument("--R", default="50")
    sp.add_argument("--csv")
    sp.add_argument("--svg")

    sp = common(sub.add_parser("coding", help="coding word on orbit indices k0..k1-1"))
    window_flags(sp)
    sp.add_argument("--k0", type=int, default=0)
    sp.add_argument("--k1", type=int, default=64)

    sp = common(sub.add_parser("complexity", help="word complexity table"))
    window_flags(sp, shift=False)
    sp.add_argument("--nmax", type=int, default=20)
    sp.add_argument("--csv")

    sp = common(sub.add_parser("fiber", help="fiber candidates over a shift"))
    window_flags(sp)
    sp.add_argument("--R", default="100")

    sp = common(sub.add_parser("ldc-check", help="locally disjoint complements at a shift"))
    window_flags(sp)
    sp.add_argument("--K", type=int, default=10000)

    sp = common(sub.add_parser("independence", help="nested independence certificate"))
    window_flags(sp, shift=False)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--width", type=int, default=4)

    sp = common(sub.add_parser("verify-cert", help="standalone certificate check"))
    sp.add_argument("cert")

    sp = common(sub.add_parser("free-set", help="check that S is free for a window"))
    window_flags(sp, shift=False)
    sp.add_argument("--S", required=False, default="")

    sp = common(sub.add_parser("measure-estimate", help="randomized measure estimate families"))
    cantor_flags(sp)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--families", type=int, default=10)
    sp.add_argument("--scale", default="1/1000")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--csv")

    sp = common(sub.add_parser("birkhoff", help="bump averages over fiber candidates"))
    window_flags(sp)
    sp.add_argument("--g0", default="0")
    sp.add_argument("--eps", default="1/10")
    sp.add_argument("--N", type=int, default=10000)
    sp.add_argument("--observable", default="bump", choices=["bump", "one"])

    sp = common(sub.add_parser("pseudolines", help="pseudoline decomposition in the plane"))
    window_flags(sp)
    sp.add_argument("--M", type=int, default=20)
    sp.add_argument("--csv")
    sp.add_argument("--svg")

    sp = common(sub.add_parser("semicontinuity", help="complexity of spliced fillings"))
    cantor_flags(sp)
    sp.add_argument("--prefixes", default="0,4,16,64")
    sp.add_argument("--nword", type=int, default=32)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--csv")

    sp = sub.add_parser("replay", help="rerun a manifest and compare output bytes")
    sp.add_argument("manifest")
    return p


# ---------------------------------------------------------------------------
# running, manifests, replay

def _sha(text: str | bytes) -> str:
    data = text.encode() if isinstance(text, str) else text
    return hashlib.sha256(data).hexdigest()


def _versions() -> dict:
    try:
        pkg = metadata.version("artifact")
    except metadata.PackageNotFoundError:
        pkg = __version__
    import numpy
    return {"artifact": pkg, "python": platform.python_version(), "numpy": numpy.__version__}


def resolve_config(args: argparse.Namespace) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("config", "manifest", "command")}
    if args.config:
        with open(args.config) as fh:
            override = json.load(fh)
        for k, v in override.items():
            cfg[k.replace("-", "_")] = v
    return cfg


def execute(command: str, cfg: dict, manifest_path: str | None = None) -> dict:
    """Run one command, write artifacts and the manifest; returns the manifest."""
    artifacts = COMMANDS[command](cfg)
    written = {}
    for i, (key, text) in enumerate(artifacts.items()):
        path = cfg.get(key)
        if not path:
            if i == 0:
                sys.stdout.write(text)  # the primary artifact falls back to stdout
            continue
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
        written[key] = {"path": path, "sha256": _sha(text)}
    cfg_text = json.dumps({"command": command, "config": cfg}, sort_keys=True)
    inputs = {}
    for key in INPUT_KEYS:
        if cfg.get(key) and os.path.exists(cfg[key]):
            with open(cfg[key], "rb") as fh:
                inputs[key] = {"path": cfg[key], "sha256": _sha(fh.read())}
    manifest = {
        "command": command,
        "config": cfg,
        "config_sha256": _sha(cfg_text),
        "versions": _versions(),
        "seeds": {k: cfg[k] for k in ("seed",) if k in cfg},
        "threads": cfg.get("threads", 1),
        "inputs": inputs,
        "outputs": written,
    }
    if manifest_path is None:
        anchor = next((cfg[k] for k in OUTPUT_KEYS if cfg.get(k)), None)
        if anchor:
            manifest_path = anchor + ".manifest.json"
        else:
            os.makedirs("runs", exist_ok=True)
            manifest_path = os.path.join("runs", f"{command}-{_sha(cfg_text)[:12]}.manifest.json")
    with open(manifest_path, "w", newline="\n") as fh:
        fh.write(dumps(manifest))
    manifest["path"] = manifest_path
    return manifest


def replay(manifest_path: str) -> dict:
    """Rerun into a scratch directory and compare every output hash."""
    with open(manifest_path) as fh:
        man = json.load(fh)
    cfg = dict(man["config"])
    with tempfile.TemporaryDirectory() as tmp:
        for key in OUTPUT_KEYS:
            if cfg.get(key):
                cfg[key] = os.path.join(tmp, f"{key}_{os.path.basename(cfg[key])}")
        new = execute(man["command"], cfg, os.path.join(tmp, "replay.manifest.json"))
    results = {}
    for key, rec in man["outputs"].items():
        got = new["outputs"].get(key, {}).get("sha256")
        results[key] = {"path": rec["path"], "identical": got == rec["sha256"]}
    return {"manifest": manifest_path, "identical": all(r["identical"] for r in results.values()),
            "outputs": results}


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")
    return code


def main(argv: list | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "replay":
            rep = replay(args.manifest)
            sys.stdout.write(dumps(rep))
            return 0 if rep["identical"] else 1
        cfg = resolve_config(args)
        for key in INPUT_KEYS:
            if key in cfg and cfg[key] is None:
                raise PreconditionViolated(f"--{key} is required")
        execute(args.command, cfg, args.manifest)
        return 0
    except CheckFailed as exc:
        sys.stdout.write(str(exc))
        return _fail(1, "CheckFailed", "verification reported a violation")
    except PreconditionViolated as exc:
        return _fail(2, type(exc).__name__, str(exc))
    except BudgetExceeded as exc:
        return _fail(3, type(exc).__name__, str(exc))
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        return _fail(2, type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
