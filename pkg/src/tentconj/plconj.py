"""Piecewise-linear maps conjugate to the tent map.

A unimodal PL map ``g`` is PL-conjugate to the tent map when either of its
halves determines the rest: the left half through the slope at 0, the
right half through the slopes around its fixed point.  This module
extends halves, classifies and synthesizes linearity types, and builds
perturbations of the tent map that are not conjugate to it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exactnum import as_rat
from .plmap import (
    PLFunction,
    PLMap,
    compose,
    identity,
    is_unimodal,
    iterate,
    split_unimodal,
    tent,
)

HALF = Fraction(1, 2)
TWO_THIRDS = Fraction(2, 3)
MAX_STEPS = 64

LEFT_BRANCH = PLFunction([(0, 0), (HALF, 1)])
RIGHT_BRANCH = PLFunction([(HALF, 1), (1, 0)])


@dataclass(frozen=True)
class HalfMap:
    """One monotone half of a unimodal map, on ``[0, v]`` or ``[v, 1]``."""

    side: str
    map: PLFunction

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        a, b = self.map.domain
        if (self.side == "left" and a != 0) or (self.side == "right" and b != 1):
            raise ValueError(f"a {self.side} half must end at the domain boundary")

    @property
    def v(self) -> Fraction:
        return self.map.xs[-1] if self.side == "left" else self.map.xs[0]


@dataclass(frozen=True)
class LinearityType:
    p: int
    q: int


def _common_violations(hm: HalfMap, start, end, monotone) -> list[str]:
    g = hm.map
    out = []
    if not 0 < hm.v < 1:
        out.append("top location outside (0, 1)")
    if g.eval(g.xs[0]) != start or g.eval(g.xs[-1]) != end:
        out.append(f"endpoint values must be {start} and {end}")
    if not monotone(g):
        out.append("not strictly monotone")
    return out


def validate_left(hm: HalfMap) -> list[str]:
    """Violations of the left-half hypotheses; an empty list means valid."""
    if hm.side != "left":
        raise ValueError("expected a left half")
    out = _common_violations(hm, 0, 1, PLFunction.is_increasing)
    if hm.map.slopes()[0] != 2:
        out.append("slope-at-zero != 2")
    return out


def right_fixed_point(g_r: PLFunction) -> Fraction:
    pts = [p for p in g_r.fixed_points() if not isinstance(p, tuple)]
    if len(pts) != 1:
        raise ValueError("right half has no isolated fixed point")
    return pts[0]


def validate_right(hm: HalfMap) -> list[str]:
    """Violations of the right-half hypotheses; an empty list means valid."""
    if hm.side != "right":
        raise ValueError("expected a right half")
    out = _common_violations(hm, 1, 0, PLFunction.is_decreasing)
    if out:
        return out
    g = hm.map
    x0 = right_fixed_point(g)
    if not g.xs[0] < x0 < g.xs[-1]:
        raise ValueError("no fixed point inside (v, 1)")
    a1, a2 = g.slope_at(x0, "left"), g.slope_at(x0, "right")
    if a1 * a2 != 4:
        out.append(f"slope product at the fixed point is {a1 * a2}, not 4")
    return out


def slope_at_zero(g_l: HalfMap) -> Fraction:
    """Stable value of ``2**n * g_l**(-n)(1)``: the slope of ``h`` at 0."""
    return _stabilize_left(g_l.map)[0]


def _stabilize_left(g: PLFunction):
    inv = g.inverse()
    eps = g.xs[1]
    y = Fraction(1)
    prev = None
    for n in range(1, MAX_STEPS + 1):
        y = inv.eval(y)
        k = y * (1 << n)
        if k == prev and y <= eps:
            return k, n, y
        prev = k
    raise ValueError("2**n * g_l**(-n)(1) did not stabilize; invalid left half")


def _require_homeomorphism(h: PLFunction):
    if h.domain != (0, 1) or h.eval(0) != 0 or h.eval(1) != 1 or not h.is_increasing():
        raise ValueError("propagation produced a non-monotone h; invalid input")


def extend_left(g_l: HalfMap) -> tuple[PLMap, PLMap]:
    """Unique unimodal ``g`` with the given left half, and ``h`` with ``h o f = g o h``."""
    problems = validate_left(g_l)
    if problems:
        raise ValueError("; ".join(problems))
    gl = g_l.map
    k, n, y = _stabilize_left(gl)
    h = PLFunction([(0, 0), (Fraction(1, 1 << n), y)])
    for _ in range(n):
        # h(2x) = g_l(h(x)) doubles the domain
        h = compose(gl, h.affine_pre(HALF, 0))
    _require_homeomorphism(h)
    v = g_l.v
    h_inv = h.inverse()
    g_r = compose(h, compose(RIGHT_BRANCH, h_inv.restrict(v, 1)))
    return PLMap(gl.join(g_r).points), PLMap(h.points)


def _right_seed(gr: PLFunction, inv: PLFunction, x0: Fraction):
    x, y = Fraction(1), Fraction(1)
    traj = [(x, y)]
    for _ in range(MAX_STEPS + 2):
        x, y = 1 - x / 2, inv.eval(y)
        traj.append((x, y))
    for n in range(1, MAX_STEPS + 1):
        (xa, ya), (xb, yb) = traj[n], traj[n + 1]
        pts = sorted([(xa, ya), (xb, yb), (TWO_THIRDS, x0)])
        h0 = PLFunction(pts)
        lo, hi = pts[0][0], pts[-1][0]
        inner = h0.restrict(min(xb, traj[n + 2][0]), max(xb, traj[n + 2][0]))
        if min(inner.ys) < gr.xs[0]:
            continue
        if compose(gr, inner.affine_pre(-HALF, 1)) == h0:
            return h0
    raise ValueError("trajectory slope ratio did not stabilize; invalid right half")


def extend_right(g_r: HalfMap) -> tuple[PLMap, PLMap]:
    """Unique unimodal ``g`` with the given right half, and its conjugacy ``h``."""
    problems = validate_right(g_r)
    if problems:
        raise ValueError("; ".join(problems))
    gr = g_r.map
    x0 = right_fixed_point(gr)
    h = _right_seed(gr, gr.inverse(), x0)
    while h.domain != (0, 1):
        if min(h.ys) < gr.xs[0]:
            raise ValueError("propagation left the right half's domain; invalid input")
        # h(y) = g_r(h(1 - y/2)) on the image of the current domain under f_r
        h = compose(gr, h.affine_pre(-HALF, 1))
    _require_homeomorphism(h)
    v = g_r.v
    if h.eval(HALF) != v:
        raise ValueError("propagated h does not send 1/2 to the top")
    g_l = compose(h, compose(LEFT_BRANCH, h.inverse().restrict(0, v)))
    return PLMap(g_l.join(gr).points), PLMap(h.points)


def linearity_type(g: PLFunction) -> LinearityType:
    """Piece counts of the increasing and decreasing parts."""
    _, left, right = split_unimodal(g)
    return LinearityType(len(left.points) - 1, len(right.points) - 1)


def check_conjugacy(g: PLFunction, h: PLFunction) -> bool:
    """Exact test of ``h o f = g o h`` for a PL homeomorphism ``h``."""
    if h.domain != (0, 1) or h.eval(0) != 0 or h.eval(1) != 1 or not h.is_increasing():
        raise ValueError("h must be an increasing homeomorphism of [0, 1]")
    if g.domain != (0, 1):
        return False
    return compose(h, tent()) == compose(g, h)


def halves(g: PLFunction) -> tuple[HalfMap, HalfMap]:
    _, left, right = split_unimodal(g)
    return HalfMap("left", left), HalfMap("right", right)


# synthesis of prescribed linearity types --------------------------------

def _conjugate_of_h(h: PLFunction) -> PLMap:
    # g = h o f o h^{-1}
    return PLMap(compose(h, compose(tent(), h.inverse())).points)


def _normalized_h(breaks, seeds) -> PLFunction:
    widths = [b - a for a, b in zip(breaks, breaks[1:])]
    total = sum((Fraction(r) * w for r, w in zip(seeds, widths)), Fraction(0))
    pts = [(breaks[0], Fraction(0))]
    for b, r, w in zip(breaks[1:], seeds, widths):
        pts.append((b, pts[-1][1] + Fraction(r) * w / total))
    return PLFunction(pts)


def _scale_breaks(q: int):
    # [0, 2^{-(q-1)}], then [2^{t}/2^{q}, 2^{t+1}/2^{q}] for t = 1..q-1
    n = q + 1
    return [Fraction(0)] + [Fraction(1 << t, 1 << (n - 1)) for t in range(1, n)]


def _greedy_seeds(p: int, q: int) -> list[int]:
    seeds = [1, 2]
    for t in range(1, q - 1):
        prev, cur = seeds[t - 1], seeds[t]
        collapse = Fraction(cur * cur, prev)
        if t <= q - p:
            seeds.append(int(collapse))
        else:
            c = 1
            while c == cur or c == collapse:
                c += 1
            seeds.append(c)
    return seeds[:q]


def _mirror_breaks(p: int):
    # [0, 1/2] and the preimages of [0, 1/2] under the right branch that
    # accumulate at 2/3, closed by the central interval around 2/3
    n = p + 1
    cuts = {Fraction(0), HALF, Fraction(1)}
    for depth in range(1, n - 2):
        a, b = Fraction(0), HALF
        for _ in range(depth):
            a, b = 1 - b / 2, 1 - a / 2
        cuts.update((a, b))
    return sorted(cuts)


def _compositions(total: int, parts: int):
    for cut in itertools.combinations(range(1, total), parts - 1):
        bounds = (0, *cut, total)
        yield [b - a for a, b in zip(bounds, bounds[1:])]


def _mirror_search(p: int, q: int):
    breaks = _mirror_breaks(p)
    pieces = len(breaks) - 1
    target = LinearityType(p, q)
    for total in range(pieces, pieces + 40):
        for seeds in _compositions(total, pieces):
            if any(a == b for a, b in zip(seeds, seeds[1:])):
                continue
            h = _normalized_h(breaks, seeds)
            g = _conjugate_of_h(h)
            if is_unimodal(g) is not None and linearity_type(g) == target:
                return g, h
    raise ValueError(f"no seed found for linearity type ({p}, {q})")


@lru_cache(maxsize=None)
def _construct_cached(p: int, q: int):
    if (p, q) == (1, 1):
        return tent(), identity()
    if p < 2 or q < 2:
        raise ValueError(f"linearity type ({p}, {q}) is not admissible")
    if p <= q:
        h = _normalized_h(_scale_breaks(q), _greedy_seeds(p, q))
        g = _conjugate_of_h(h)
    else:
        g, h = _mirror_search(p, q)
    h = PLMap(h.points)
    if linearity_type(g) != LinearityType(p, q) or not check_conjugacy(g, h):
        raise AssertionError(f"construction for ({p}, {q}) failed self-check")
    return g, h


def construct_type(p: int, q: int) -> tuple[PLMap, PLMap]:
    """A map of linearity type ``(p, q)`` PL-conjugate to the tent map, with its conjugacy."""
    return _construct_cached(int(p), int(q))


# non-conjugate perturbation -------------------------------------------------

@dataclass
class Perturbation:
    """Perturbed tent map and the exact evidence that it is not conjugate to ``f``."""

    g: PLMap
    kind: str
    period: int | None = None
    periodic_point: Fraction | None = None
    delta: Fraction | None = None
    slope: Fraction | None = None
    exponent: int | None = None
    g_fixed_intervals: list = field(default_factory=list)
    f_fixed_intervals: list = field(default_factory=list)
    max_value: Fraction | None = None

    @property
    def certified(self) -> bool:
        if self.kind == "peak":
            return self.max_value < 1
        return bool(self.g_fixed_intervals) and not self.f_fixed_intervals


def _tent_value(x):
    return 2 * x if x <= HALF else 2 - 2 * x


def _periodic_candidates(n: int, lo: Fraction, hi: Fraction, left: Fraction, right: Fraction):
    """Period-``n`` points in ``[lo, hi]`` that lie strictly inside ``(left, right)``."""
    size = 1 << n
    out = []
    for j in range(max(0, int(lo * size) - 1), min(size, int(hi * size) + 2)):
        # f^n is 2^n x - j on even cells, j + 1 - 2^n x on odd cells
        x = Fraction(j, size - 1) if j % 2 == 0 else Fraction(j + 1, size + 1)
        inside = left < x < right and lo <= x <= hi
        if Fraction(j, size) <= x <= Fraction(j + 1, size) and inside:
            out.append(x)
    return sorted(set(out))


def _minimal_period(x: Fraction) -> int:
    y, n = _tent_value(x), 1
    while y != x:
        y, n = _tent_value(y), n + 1
    return n


def perturb_non_conjugate(x0, eps) -> Perturbation:
    """Tent map modified inside ``(x0 - eps, x0 + eps)`` so that it is not conjugate to it."""
    x0, eps = as_rat(x0), as_rat(eps)
    if not 0 <= x0 <= 1 or eps <= 0:
        raise ValueError("need 0 <= x0 <= 1 and eps > 0")
    if x0 == HALF:
        e = min(eps, Fraction(1, 4))
        g = PLMap([(0, 0), (HALF - e, 1 - 2 * e), (HALF, 1 - e / 2), (HALF + e, 1 - 2 * e), (1, 0)])
        return Perturbation(g, "peak", max_value=max(g.ys))
    if x0 < HALF:
        lo, hi = max(Fraction(0), x0 - eps), min(HALF, x0 + eps)
    else:
        lo, hi = max(HALF, x0 - eps), min(Fraction(1), x0 + eps)
    for n in range(1, MAX_STEPS + 1):
        cands = [
            x for x in _periodic_candidates(n, lo, hi, x0 - eps, x0 + eps)
            if _minimal_period(x) == n
        ]
        if cands:
            star = cands[0]
            break
    else:
        raise ValueError("no periodic point found in the window")
    orbit = [star]
    for _ in range(n - 1):
        orbit.append(_tent_value(orbit[-1]))
    # the modification occupies [star, star + 2 delta]
    gaps = [min(star - (x0 - eps), x0 + eps - star) / 2, (1 - star) / 2]
    gaps += [abs(p - star) / 3 for p in orbit[1:]]
    gaps += [abs(p - HALF) / 3 for p in orbit]
    delta = min(gaps)
    fprime = Fraction(2) if star < HALF else Fraction(-2)
    sign = 1
    for p in orbit:
        sign *= 1 if p < HALF else -1
    c = fprime / (1 << (2 * n)) if sign < 0 else fprime / (1 << n)
    exponent = 2 * n
    base = _tent_value(star)
    pts = [(Fraction(0), Fraction(0))]
    if star < HALF:
        if star > 0:
            pts.append((star, base))
        pts += [(star + delta, base + c * delta), (star + 2 * delta, _tent_value(star + 2 * delta))]
        pts += [(HALF, Fraction(1)), (Fraction(1), Fraction(0))]
    else:
        pts += [(HALF, Fraction(1)), (star, base)]
        pts += [(star + delta, base + c * delta), (star + 2 * delta, _tent_value(star + 2 * delta))]
        if star + 2 * delta < 1:
            pts.append((Fraction(1), Fraction(0)))
    g = PLMap(pts)
    g_fixed = [p for p in iterate(g, exponent).fixed_points() if isinstance(p, tuple)]
    f_fixed = [p for p in iterate(tent(), exponent).fixed_points() if isinstance(p, tuple)]
    return Perturbation(
        g, "periodic", n, star, delta, c, exponent, g_fixed, f_fixed, max(g.ys)
    )
