"""The conjugacy ``h`` between the tent map and a skew tent map.

``h`` is the increasing homeomorphism with ``h(f(x)) = f_v(h(x))``.  On
dyadic points it is computed exactly from the two-branch recurrence; at
other points it is enclosed between neighbouring dyadic values.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction

from .exactnum import Dyadic, as_rat, binary_digits, is_dyadic
from .plmap import PLFunction, PLMap, skew_tent, split_unimodal, tent

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class GridLevel:
    n: int
    points: tuple


def build_A(n: int) -> GridLevel:
    """Dyadic grid ``{k / 2**(n-1)}``: the zeros of ``f**n``."""
    if n < 1:
        raise ValueError("grid level must be at least 1")
    e = n - 1
    return GridLevel(n, tuple(Dyadic(k, e) for k in range((1 << e) + 1)))


def _branches(g: PLFunction):
    top, left, right = split_unimodal(g)
    if g.xs[0] != 0 or g.xs[-1] != 1 or g.eval(0) != 0 or g.eval(1) != 0:
        raise ValueError("expected g(0) = g(1) = 0")
    if g.eval(top) != 1:
        raise ValueError("expected the maximum value 1")
    if left.has_flat_piece() or right.has_flat_piece():
        raise ValueError("branches must be strictly monotone")
    return top, left.inverse(), right.inverse()


def _next_level(prev, left_inv, right_inv):
    pts = set()
    for y in prev:
        pts.add(left_inv.eval(y))
        pts.add(right_inv.eval(y))
    return sorted(pts)


def build_B(g: PLFunction, n: int) -> GridLevel:
    """Sorted zeros of ``g**n`` for a unimodal map with monotone branches."""
    if n < 1:
        raise ValueError("grid level must be at least 1")
    _, left_inv, right_inv = _branches(g)
    level = [Fraction(0), Fraction(1)]
    for _ in range(n - 1):
        level = _next_level(level, left_inv, right_inv)
    return GridLevel(n, tuple(level))


class ConjSystem:
    """The pair (tent map, skew tent map with top at ``v``)."""

    def __init__(self, v):
        v = as_rat(v)
        if not 0 < v < 1:
            raise ValueError("skew parameter must satisfy 0 < v < 1")
        self.v = v
        self.g = skew_tent(v)
        _, self._left_inv, self._right_inv = _branches(self.g)
        self._levels = [(Fraction(0), Fraction(1))]
        self._lock = threading.Lock()

    def B(self, n: int) -> tuple:
        """Grid level ``B_n`` (cached, extended on demand)."""
        if n < 1:
            raise ValueError("grid level must be at least 1")
        with self._lock:
            while len(self._levels) < n:
                nxt = _next_level(self._levels[-1], self._left_inv, self._right_inv)
                self._levels.append(tuple(nxt))
            return self._levels[n - 1]

    def h(self, x) -> Fraction:
        return h_on_dyadic(self, x)


def _h_affine_walk(v: Fraction, x: Fraction) -> Fraction:
    # h(x) = (A + B*h(x')) / D in integers, with x' = k/N moving under f
    p, q = v.numerator, v.denominator
    w = q - p
    k, big_n = x.numerator, x.denominator
    a, b, d = 0, 1, 1
    while True:
        if k == 0:
            return Fraction(a, d)
        if k == big_n:
            return Fraction(a + b, d)
        if 2 * k <= big_n:
            a, b, d = a * q, b * p, d * q
            k = 2 * k
        else:
            a, b, d = (a + b) * q, -b * w, d * q
            k = 2 * big_n - 2 * k


def h_on_dyadic(sys: ConjSystem, x) -> Fraction:
    """Exact ``h(x)`` at a dyadic point."""
    x = as_rat(x)
    if not 0 <= x <= 1 or not is_dyadic(x):
        raise ValueError(f"{x} is not a dyadic point of [0, 1]")
    return _h_affine_walk(sys.v, x)


def h_n_approx(sys: ConjSystem, n: int) -> PLMap:
    """Piecewise-linear interpolation of ``h`` through ``A_n`` and ``B_n``."""
    a = build_A(n).points
    b = sys.B(n)
    return PLMap(zip((p.to_rat() for p in a), b))


def _bracket(v: Fraction, x: Fraction, level: int):
    scale = 1 << (level - 1)
    k = math.floor(x * scale)
    left = Fraction(k, scale)
    right = Fraction(k + 1, scale)
    return _h_affine_walk(v, left), _h_affine_walk(v, min(right, Fraction(1)))


def h_eval(sys: ConjSystem, x, tol) -> tuple[Fraction, Fraction]:
    """Enclosure of ``h(x)``: ``(midpoint, half-width)`` with half-width below ``tol``."""
    x, tol = as_rat(x), as_rat(tol)
    if not 0 <= x <= 1:
        raise ValueError("x must lie in [0, 1]")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if is_dyadic(x):
        return h_on_dyadic(sys, x), Fraction(0)
    contraction = max(sys.v, 1 - sys.v)
    # gaps of B_n are at most contraction**(n-1), so start near the final level
    level = 2 + max(0, math.ceil(math.log(float(2 * tol)) / math.log(float(contraction))))
    while True:
        lo, hi = _bracket(sys.v, x, level)
        half = (hi - lo) / 2
        if half < tol:
            return (lo + hi) / 2, half
        level += 1


def h_general_on_dyadic(g: PLFunction, x) -> Fraction:
    """Value at a dyadic point of the would-be conjugacy from the tent map to ``g``."""
    x = as_rat(x)
    if not 0 <= x <= 1 or not is_dyadic(x):
        raise ValueError(f"{x} is not a dyadic point of [0, 1]")
    _, left_inv, right_inv = _branches(g)
    path = []
    while x not in (0, 1):
        left = x <= HALF
        path.append(left)
        x = 2 * x if left else 2 - 2 * x
    y = Fraction(x)
    for left in reversed(path):
        y = left_inv.eval(y) if left else right_inv.eval(y)
    return y


@dataclass
class GapReport:
    gaps: list
    ratios: list = field(default_factory=list)

    def max_ratio(self):
        return max(self.ratios) if self.ratios else None


def ulam_gap_report(g: PLFunction, n: int) -> GapReport:
    """Largest gaps ``d_1..d_n`` of the levels ``B_k`` and their successive ratios."""
    _, left_inv, right_inv = _branches(g)
    level = [Fraction(0), Fraction(1)]
    gaps = []
    for k in range(1, n + 1):
        if k > 1:
            level = _next_level(level, left_inv, right_inv)
        gaps.append(max(b - a for a, b in zip(level, level[1:])))
    ratios = [b / a for a, b in zip(gaps, gaps[1:])]
    return GapReport(gaps, ratios)


def zeta(n: int, k: int, v) -> Fraction:
    """Absolute slope of the ``k``-th monotone branch (1-based) of ``f_v**n``."""
    v = as_rat(v)
    if n < 1 or not 1 <= k <= (1 << n):
        raise ValueError("branch index out of range")
    digits = binary_digits(Fraction(k - 1, 1 << n), n)
    inv_v, inv_w = 1 / v, 1 / (1 - v)
    prod = Fraction(1)
    prev = 0
    for d in digits:
        prod *= inv_v if d == prev else inv_w
        prev = d
    return prod


def h_explicit(v, x, n: int) -> Fraction:
    """Sum of the branch widths of ``f_v**n`` to the left of ``x``."""
    v, x = as_rat(v), as_rat(x)
    if not 0 <= x <= 1:
        raise ValueError("x must lie in [0, 1]")
    if n < 1:
        raise ValueError("n must be at least 1")
    count = math.floor(x * (1 << n))
    # 1/zeta = v**same * (1-v)**(n-same); sum numerators over the common q**n
    p, q = v.numerator, v.denominator
    w = q - p
    p_pow = [p**i for i in range(n + 1)]
    w_pow = [w**i for i in range(n + 1)]
    total = 0
    for t in range(count):
        prev, same = 0, 0
        for i in range(n - 1, -1, -1):
            d = (t >> i) & 1
            same += d == prev
            prev = d
        total += p_pow[same] * w_pow[n - same]
    return Fraction(total, q**n)