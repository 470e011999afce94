"""Exact continuous piecewise-linear maps.

A :class:`PLFunction` is a continuous function on a closed interval given by
its breakpoints; :class:`PLMap` is the special case of a self-map of
``[0, 1]``.  Every instance is stored in canonical form (collinear interior
breakpoints removed), so two instances describe the same function exactly
when their breakpoint tuples are equal.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .exactnum import as_rat, format_rat, parse_rat

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def _canonical(points):
    pts = [(as_rat(x), as_rat(y)) for x, y in points]
    if len(pts) < 2:
        raise ValueError("a piecewise-linear function needs at least two breakpoints")
    for (x0, _), (x1, _) in zip(pts, pts[1:]):
        if not x0 < x1:
            raise ValueError("breakpoint x-coordinates must be strictly increasing")
    out = [pts[0]]
    for i in range(1, len(pts) - 1):
        (xa, ya), (xb, yb), (xc, yc) = out[-1], pts[i], pts[i + 1]
        # drop b if it lies on the segment from a to c
        if (yb - ya) * (xc - xa) != (yc - ya) * (xb - xa):
            out.append(pts[i])
    out.append(pts[-1])
    return tuple(out)


class PLFunction:
    """Continuous piecewise-linear function on ``[xs[0], xs[-1]]``."""

    __slots__ = ("points", "xs", "ys")

    def __init__(self, points: Iterable[Sequence]):
        self.points = _canonical(points)
        self.xs = tuple(p[0] for p in self.points)
        self.ys = tuple(p[1] for p in self.points)

    # construction helpers -------------------------------------------------
    @classmethod
    def linear(cls, a, b, ya, yb):
        return cls([(a, ya), (b, yb)])

    @property
    def domain(self):
        return self.xs[0], self.xs[-1]

    @property
    def image(self):
        return min(self.ys), max(self.ys)

    def __eq__(self, other):
        return isinstance(other, PLFunction) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        body = ", ".join(f"({format_rat(x)}, {format_rat(y)})" for x, y in self.points)
        return f"{type(self).__name__}([{body}])"

    def __call__(self, x):
        return self.eval(x)

    # queries ------------------------------------------------------------
    def eval(self, x) -> Fraction:
        x = as_rat(x)
        xs = self.xs
        if x < xs[0] or x > xs[-1]:
            raise ValueError(f"{x} outside the domain [{xs[0]}, {xs[-1]}]")
        i = bisect_right(xs, x)
        if i == len(xs):
            return self.ys[-1]
        x0, x1 = xs[i - 1], xs[i]
        y0, y1 = self.ys[i - 1], self.ys[i]
        if x == x0:
            return y0
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def slopes(self) -> list[Fraction]:
        return [
            (y1 - y0) / (x1 - x0)
            for (x0, y0), (x1, y1) in zip(self.points, self.points[1:])
        ]

    def pieces(self):
        """Yield ``(x0, x1, y0, y1)`` for every linear piece."""
        for (x0, y0), (x1, y1) in zip(self.points, self.points[1:]):
            yield x0, x1, y0, y1

    def slope_at(self, x, side: str = "right") -> Fraction:
        """Slope of the piece just to the right (or left) of ``x``."""
        x = as_rat(x)
        xs = self.xs
        if side == "right":
            i = bisect_right(xs, x) - 1
            i = min(i, len(xs) - 2)
        else:
            i = bisect_left(xs, x) - 1
            i = max(i, 0)
        return (self.ys[i + 1] - self.ys[i]) / (xs[i + 1] - xs[i])

    def is_increasing(self) -> bool:
        return all(y0 < y1 for y0, y1 in zip(self.ys, self.ys[1:]))

    def is_decreasing(self) -> bool:
        return all(y0 > y1 for y0, y1 in zip(self.ys, self.ys[1:]))

    def has_flat_piece(self) -> bool:
        return any(y0 == y1 for y0, y1 in zip(self.ys, self.ys[1:]))

    def preimages(self, y) -> list[Fraction]:
        """Sorted solutions of ``self(x) = y``; flat hits contribute both ends."""
        return self.preimage_data(y)[0]

    def flat_segments(self, y) -> list[tuple[Fraction, Fraction]]:
        """Pieces on which the function is constantly ``y``."""
        return self.preimage_data(y)[1]

    def preimage_data(self, y):
        y = as_rat(y)
        found = set()
        flats = []
        for x0, x1, y0, y1 in self.pieces():
            if y0 == y1:
                if y0 == y:
                    found.update((x0, x1))
                    flats.append((x0, x1))
                continue
            lo, hi = (y0, y1) if y0 < y1 else (y1, y0)
            if lo <= y <= hi:
                found.add(x0 + (y - y0) * (x1 - x0) / (y1 - y0))
        return sorted(found), flats

    def fixed_points(self):
        """Solutions of ``self(x) = x``: points, or ``(a, b)`` tuples for diagonal pieces."""
        intervals = []
        points = set()
        for x0, x1, y0, y1 in self.pieces():
            d0, d1 = y0 - x0, y1 - x1
            if d0 == 0 and d1 == 0:
                if intervals and intervals[-1][1] == x0:
                    intervals[-1] = (intervals[-1][0], x1)
                else:
                    intervals.append((x0, x1))
            elif d0 == 0:
                points.add(x0)
            elif d1 == 0:
                points.add(x1)
            elif (d0 < 0) != (d1 < 0):
                points.add(x0 - d0 * (x1 - x0) / (d1 - d0))
        points = {
            p for p in points if not any(a <= p <= b for a, b in intervals)
        }
        items = [(p, p) for p in points] + intervals
        items.sort()
        return [a if a == b else (a, b) for a, b in items]

    # algebra --------------------------------------------------------------
    def restrict(self, a, b) -> "PLFunction":
        a, b = as_rat(a), as_rat(b)
        if not (self.xs[0] <= a < b <= self.xs[-1]):
            raise ValueError("restriction interval must lie inside the domain")
        inner = [p for p in self.points if a < p[0] < b]
        return _make([(a, self.eval(a)), *inner, (b, self.eval(b))])

    def inverse(self) -> "PLFunction":
        """Inverse of a strictly monotone function."""
        if self.is_increasing():
            return _make([(y, x) for x, y in self.points])
        if self.is_decreasing():
            return _make([(y, x) for x, y in reversed(self.points)])
        raise ValueError("only strictly monotone functions are invertible")

    def join(self, other: "PLFunction") -> "PLFunction":
        """Concatenate with a function whose domain starts where this one ends."""
        if self.xs[-1] != other.xs[0] or self.ys[-1] != other.ys[0]:
            raise ValueError("pieces do not meet continuously")
        return _make(list(self.points) + list(other.points[1:]))

    def affine_pre(self, a, b) -> "PLFunction":
        """``x -> self(a*x + b)`` on the preimage of the domain."""
        a, b = as_rat(a), as_rat(b)
        if a == 0:
            raise ValueError("degenerate affine change of variable")
        pts = [((x - b) / a, y) for x, y in self.points]
        if a < 0:
            pts.reverse()
        return _make(pts)

    def affine_post(self, a, b) -> "PLFunction":
        """``x -> a*self(x) + b``."""
        a, b = as_rat(a), as_rat(b)
        return _make([(x, a * y + b) for x, y in self.points])


class PLMap(PLFunction):
    """Piecewise-linear self-map of ``[0, 1]``."""

    __slots__ = ()

    def __init__(self, points):
        super().__init__(points)
        if self.xs[0] != 0 or self.xs[-1] != 1:
            raise ValueError("a PLMap must be defined on [0, 1]")
        if min(self.ys) < 0 or max(self.ys) > 1:
            raise ValueError("a PLMap must take values in [0, 1]")


def _make(points) -> PLFunction:
    """Build a PLMap when the data allows it, otherwise a plain PLFunction."""
    f = PLFunction(points)
    if f.xs[0] == 0 and f.xs[-1] == 1 and min(f.ys) >= 0 and max(f.ys) <= 1:
        return PLMap(f.points)
    return f


def tent() -> PLMap:
    return PLMap([(0, 0), (HALF, 1), (1, 0)])


def skew_tent(v) -> PLMap:
    v = as_rat(v)
    if not 0 < v < 1:
        raise ValueError("skew parameter must satisfy 0 < v < 1")
    return PLMap([(0, 0), (v, 1), (1, 0)])


def identity() -> PLMap:
    return PLMap([(0, 0), (1, 1)])


def constant(c) -> PLMap:
    return PLMap([(0, c), (1, c)])


def eval_map(m: PLFunction, x) -> Fraction:
    return m.eval(x)


def compose(outer: PLFunction, inner: PLFunction) -> PLFunction:
    """Exact ``outer o inner``; the image of ``inner`` must fit outer's domain."""
    lo, hi = inner.image
    if lo < outer.xs[0] or hi > outer.xs[-1]:
        raise ValueError("inner image leaves the outer domain")
    oxs = outer.xs
    xs = []
    for x0, x1, y0, y1 in inner.pieces():
        xs.append(x0)
        if y0 == y1:
            continue
        a, b = (y0, y1) if y0 < y1 else (y1, y0)
        cuts = oxs[bisect_right(oxs, a): bisect_left(oxs, b)]
        if y0 > y1:
            cuts = reversed(cuts)
        scale = (x1 - x0) / (y1 - y0)
        xs.extend(x0 + (c - y0) * scale for c in cuts)
    xs.append(inner.xs[-1])
    return _make([(x, outer.eval(inner.eval(x))) for x in xs])


def iterate(m: PLFunction, n: int) -> PLFunction:
    """``n``-fold composition of ``m`` with itself; ``n = 0`` gives the identity."""
    if n < 0:
        raise ValueError("iteration count must be non-negative")
    a, b = m.domain
    result = _make([(a, a), (b, b)])
    power = m
    while n:
        if n & 1:
            result = compose(power, result)
        n >>= 1
        if n:
            power = compose(power, power)
    return result


def is_unimodal(m: PLFunction):
    """Location of the interior maximum of an up-then-down map, else ``None``."""
    ys = m.ys
    top = max(range(len(ys)), key=lambda i: ys[i])
    if top == 0 or top == len(ys) - 1:
        return None
    rising = all(ys[i] < ys[i + 1] for i in range(top))
    falling = all(ys[i] > ys[i + 1] for i in range(top, len(ys) - 1))
    return m.xs[top] if rising and falling else None


def fixed_points(m: PLFunction):
    return m.fixed_points()


def preimages(m: PLFunction, y) -> list[Fraction]:
    return m.preimages(y)


def binary_shift(bits: Sequence[int]) -> list[int]:
    """Digit action of the tent map: drop the first bit, complement if it was 1."""
    if not bits:
        raise ValueError("empty bit sequence")
    head, rest = bits[0], list(bits[1:])
    return [1 - b for b in rest] if head else rest


def split_unimodal(g: PLFunction):
    """Return ``(top, left, right)`` branches of a unimodal map."""
    top = is_unimodal(g)
    if top is None:
        raise ValueError("map is not unimodal")
    return top, g.restrict(g.xs[0], top), g.restrict(top, g.xs[-1])


# text I/O ---------------------------------------------------------------

HEADER = "plmap 1"


def dumps(m: PLFunction) -> str:
    lines = [HEADER]
    lines += [f"{format_rat(x)} {format_rat(y)}" for x, y in m.points]
    return "\n".join(lines) + "\n"


def loads(text: str) -> PLFunction:
    rows = []
    header_seen = False
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not header_seen:
            if line.split() != HEADER.split():
                raise ValueError(f"expected header {HEADER!r}, got {line!r}")
            header_seen = True
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ValueError(f"expected two fields per line, got {line!r}")
        rows.append((parse_rat(fields[0]), parse_rat(fields[1])))
    if not header_seen:
        raise ValueError("missing plmap header")
    return _make(rows)


def read_plmap(path) -> PLFunction:
    return loads(Path(path).read_text())


def write_plmap(m: PLFunction, path) -> None:
    Path(path).write_text(dumps(m), newline="\n")
