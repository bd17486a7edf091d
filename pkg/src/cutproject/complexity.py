"""Word complexity of rotation codings by cell counting.

The length-n word seen from shift t has bit k = [{k*omega} in W + t].
Bit k changes exactly when t crosses a point k*omega - e with e on the
boundary of W, so those cut points split the circle into cells on which
the word is constant. Walking the cells in circular order and toggling
bits gives every word; p(n) counts the distinct ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circle import OrbitNumber
from .errors import DepthOverflow, PreconditionViolated
from .windows import WindowSpec

DEFAULT_CUT_BUDGET = 20_000_000


@dataclass
class ComplexityTable:
    n: list
    p: list
    cells: list = field(default_factory=list)

    def log_slopes(self) -> list:
        """log p(n) / n, the entropy surrogate at each length."""
        return [math.log(p) / n for n, p in zip(self.n, self.p)]

    def value(self, n: int) -> int:
        return self.p[self.n.index(n)]

    def is_monotone(self) -> bool:
        return all(a <= b for a, b in zip(self.p, self.p[1:]))

    def is_subadditive(self) -> bool:
        """p(n + m) <= p(n) p(m) for every pair inside the table."""
        table = dict(zip(self.n, self.p))
        for a in self.n:
            for b in self.n:
                if a + b in table and table[a + b] > table[a] * table[b]:
                    return False
        return True

    def rows(self) -> list:
        return list(zip(self.n, self.p))


def _cut_points(W: WindowSpec, ks) -> dict:
    """Distinct cut points k*omega - e with the bit positions flipped there.

    The point depends on (k - b(e), a(e) mod 1) only, which is the exact key.
    Bit i belongs to the i-th index in ``ks``.
    """
    flips: dict = {}
    for e in W.boundary:
        a = e.a
        amod = a - math.floor(a) if not isinstance(a, int) else 0
        for i, k in enumerate(ks):
            flips.setdefault((k - e.b, amod), []).append(i)
    return flips


def _exact_pos(omega, key) -> OrbitNumber:
    s, a = key
    return OrbitNumber(-a, s, omega).mod1()


def _sorted_positions(omega, keys: list) -> list:
    """Order the cut points {s*omega - a} around [0, 1), exactly.

    Float positions are trusted only where neighbours are further apart
    than their rounding error; clusters and points near 0 are settled with
    exact comparisons.
    """
    s = np.array([float(k[0]) for k in keys])
    a = np.array([float(k[1]) for k in keys])
    pos = np.mod(s * omega.value - a, 1.0)
    tol = (np.abs(s).max() + 2.0) * 1e-14 + 1e-12
    for i in np.nonzero((pos < tol) | (pos > 1 - tol))[0]:
        pos[i] = _exact_pos(omega, keys[i]).value
    order = list(np.argsort(pos, kind="stable"))
    close = np.diff(pos[order]) <= tol
    i, n = 0, len(order)
    while i < n - 1:
        if not close[i]:
            i += 1
            continue
        j = i
        while j < n - 1 and close[j]:
            j += 1
        order[i:j + 1] = sorted(order[i:j + 1], key=lambda c: _exact_pos(omega, keys[c]))
        i = j + 1
    return order


def _pack(bits: list, width: int) -> np.ndarray:
    """Bit i goes to column i // 64 at position 63 - i % 64, so rows sort as prefixes."""
    out = np.zeros((width + 63) // 64, dtype=np.uint64)
    for i in bits:
        out[i // 64] ^= np.uint64(1) << np.uint64(63 - i % 64)
    return out


def unpack_word(row: np.ndarray, width: int) -> str:
    return "".join("1" if (int(row[i // 64]) >> (63 - i % 64)) & 1 else "0" for i in range(width))


@dataclass
class CellSweep:
    """Words on the cells cut out by the points k*omega - e, k in ``ks``.

    ``words[c]`` is the word on the open cell following the c-th cut point in
    circular order; ``points[c]`` is that cut point.
    """

    ks: list
    points: list
    words: np.ndarray
    first_k: np.ndarray  # position in ks of the earliest index creating each cut point

    def midpoint(self, c: int) -> OrbitNumber:
        lo = self.points[c]
        hi = self.points[(c + 1) % len(self.points)]
        if hi <= lo:
            hi = hi + 1
        return ((lo + hi) / 2).mod1()


def cell_sweep(W: WindowSpec, ks) -> CellSweep | None:
    """Sweep the shift t once around the circle; None if W has no boundary."""
    ks = list(ks)
    if not W.boundary:
        return None
    omega = W.omega
    flips = _cut_points(W, ks)
    keys = list(flips)
    order = _sorted_positions(omega, keys)
    points = [_exact_pos(omega, keys[c]) for c in order]
    m = len(order)
    width = len(ks)
    cols = (width + 63) // 64
    masks = np.zeros((m, cols), dtype=np.uint64)
    for r, c in enumerate(order):
        masks[r] = _pack(flips[keys[c]], width)
    sweep = CellSweep(ks, points, np.zeros((m, cols), dtype=np.uint64),
                      np.array([min(flips[keys[c]]) for c in order]))
    t_mid = sweep.midpoint(0)
    base = _pack([i for i, k in enumerate(ks) if W.set.contains(omega.orbit_point(k) - t_mid)], width)
    # crossing a cut point toggles exactly the bits recorded there
    words = np.empty((m, cols), dtype=np.uint64)
    words[0] = base
    if m > 1:
        words[1:] = np.bitwise_xor.accumulate(masks[1:], axis=0) ^ base
    sweep.words = words
    return sweep


def patch_complexity(W: WindowSpec, n_max: int, cut_budget: int = DEFAULT_CUT_BUDGET) -> ComplexityTable:
    """Exact p(n) for 1 <= n <= n_max, with the cell count at each n."""
    if n_max < 1:
        raise PreconditionViolated("n_max must be at least 1")
    ns = list(range(1, n_max + 1))
    if not W.boundary:
        return ComplexityTable(ns, [1] * n_max, [1] * n_max)
    if len(W.boundary) * n_max > cut_budget:
        raise DepthOverflow(f"{len(W.boundary) * n_max} cut points exceed the budget {cut_budget}")
    sweep = cell_sweep(W, range(n_max))
    cells = np.cumsum(np.bincount(sweep.first_k, minlength=n_max))[:n_max].tolist()
    uniq = np.unique(sweep.words, axis=0)
    return ComplexityTable(ns, _prefix_counts(uniq, n_max), cells)


def _prefix_counts(sorted_rows: np.ndarray, n_max: int) -> list:
    """p(n) = 1 + #{adjacent rows whose first difference lies before bit n}."""
    if len(sorted_rows) <= 1:
        return [len(sorted_rows)] * n_max
    a, b = sorted_rows[:-1], sorted_rows[1:]
    x = a ^ b
    nz = x != 0
    col = nz.argmax(axis=1)
    v = x[np.arange(len(x)), col]
    lead = np.array([int(t).bit_length() for t in v])
    first = col * 64 + (64 - lead)
    hist = np.bincount(first, minlength=n_max)[:n_max]
    return (1 + np.cumsum(hist)).tolist()


def brute_complexity(W: WindowSpec, n: int, shifts) -> int:
    """Distinct length-n words over an explicit list of shifts (reference oracle)."""
    omega = W.omega
    seen = set()
    pts = [omega.orbit_point(k) for k in range(n)]
    for t in shifts:
        seen.add(tuple(W.set.contains(x - t) for x in pts))
    return len(seen)


def splice(x: list, y: list, n: int) -> list:
    """z(n; x, y): the first n entries of x followed by the rest of y."""
    return list(x[:n]) + list(y[n:])


def entropy_semicontinuity_experiment(C, n_prefixes, n_word: int, seed: int = 0) -> list:
    """p(n_word) for windows built from spliced gap fillings.

    x is the filling of the self-similar window and y a seeded random
    filling. Each row reports the complexity of W(z(n; x, y)) and
    W(z(n; y, x)) next to those of x and y themselves.
    """
    from .windows import filling_of, window_W, window_from_filling, window_random

    x = filling_of(window_W(C))
    y = filling_of(window_random(C, "", seed))
    px = patch_complexity(window_from_filling(C, x), n_word).value(n_word)
    py = patch_complexity(window_from_filling(C, y), n_word).value(n_word)
    rows = []
    for n in n_prefixes:
        pxy = patch_complexity(window_from_filling(C, splice(x, y, n)), n_word).value(n_word)
        pyx = patch_complexity(window_from_filling(C, splice(y, x, n)), n_word).value(n_word)
        rows.append({"n_prefix": n, "p_xy": pxy, "p_yx": pyx, "p_x": px, "p_y": py})
    return rows
