"""Piecewise-linear maps whose iterates form a finite group.

If ``m**n = m`` for some ``n >= 2`` then already ``m**3 = m``.  Such a map
either fixes its image pointwise (``m**2 = m``) or acts on its image as a
decreasing involution.  Two such maps are conjugate exactly when their
extremum data are ordered alike.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .plmap import PLFunction, PLMap, compose, iterate


def iterate_equals(m: PLFunction, n: int) -> bool:
    if n < 2:
        raise ValueError("n must be at least 2")
    return iterate(m, n) == m


@dataclass(frozen=True)
class GroupClass:
    kind: str  # "NotFinite", "Idempotent" or "Order3"
    a: Fraction | None = None
    b: Fraction | None = None

    @property
    def finite(self) -> bool:
        return self.kind != "NotFinite"


def _is_identity_on(m: PLFunction, a, b) -> bool:
    if a == b:
        return m.eval(a) == a
    return m.restrict(a, b) == PLFunction([(a, a), (b, b)])


def classify_finite_group(m: PLFunction) -> GroupClass:
    a, b = m.image
    m2 = compose(m, m)
    if m2 == m:
        if not _is_identity_on(m, a, b):
            raise AssertionError("idempotent map is not the identity on its image")
        return GroupClass("Idempotent", a, b)
    if compose(m, m2) == m:
        if a == b:
            raise AssertionError("constant maps are idempotent")
        phi = m.restrict(a, b)
        if not phi.is_decreasing() or not _is_identity_on(compose(phi, phi), a, b):
            raise AssertionError("middle part is not a decreasing involution")
        return GroupClass("Order3", a, b)
    return GroupClass("NotFinite")


def minimal_group_exponent(m: PLFunction, n_max: int) -> int | None:
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    power = m
    for n in range(2, n_max + 1):
        power = compose(m, power)
        if power == m:
            return n
    return None


@dataclass(frozen=True)
class ExtremaVector:
    points: tuple
    v_tilde: tuple  # (m(a_i), m(m(a_i))) per extremum

    def flat(self) -> list:
        return [c for pair in self.v_tilde for c in pair]


def _turning_points(m: PLFunction) -> set:
    slopes = m.slopes()
    out = set()
    for i in range(1, len(slopes)):
        # a sign change, with flat pieces taking the sign of their neighbours
        left = next((s for s in reversed(slopes[:i]) if s != 0), 0)
        if slopes[i] != 0 and left != 0 and (left > 0) != (slopes[i] > 0):
            out.add(m.xs[i])
    return out


def extrema_vectors(m: PLFunction) -> ExtremaVector:
    """Extrema (ends of ``[0, 1]``, turning points, ends of fixed intervals of ``m**2``)."""
    if not classify_finite_group(m).finite:
        raise ValueError("the map does not generate a finite group")
    pts = {m.xs[0], m.xs[-1]} | _turning_points(m)
    for item in compose(m, m).fixed_points():
        if isinstance(item, tuple):
            pts.update(item)
    pts = sorted(pts)
    return ExtremaVector(tuple(pts), tuple((m.eval(p), m.eval(m.eval(p))) for p in pts))


def co_ordered(u, w) -> bool:
    """Whether ``u_i <= u_j`` exactly when ``w_i <= w_j``, for all ``i, j``."""
    if len(u) != len(w):
        raise ValueError("vectors must have equal length")
    n = len(u)
    return all(
        (u[i] <= u[j]) == (w[i] <= w[j]) for i in range(n) for j in range(n)
    )


def mirror(m: PLFunction) -> PLMap:
    """``x -> 1 - m(1 - x)``: conjugation by the reflection of ``[0, 1]``."""
    return PLMap([(1 - x, 1 - y) for x, y in reversed(m.points)])


def _increasing_match(m1: PLFunction, m2: PLFunction) -> bool:
    e1, e2 = extrema_vectors(m1), extrema_vectors(m2)
    if len(e1.points) != len(e2.points):
        return False
    c1, c2 = classify_finite_group(m1), classify_finite_group(m2)
    if c1.kind != c2.kind:
        return False

    def ends(e, c):
        return [i for i, (y, _) in enumerate(e.v_tilde) if y in (c.a, c.b)]

    if ends(e1, c1) != ends(e2, c2):
        return False
    u = list(e1.points) + e1.flat()
    w = list(e2.points) + e2.flat()
    return co_ordered(u, w)


def conjugate_finite_group(m1: PLFunction, m2: PLFunction) -> str:
    """``"Increasing"``, ``"Decreasing"`` or ``"No"``."""
    for m in (m1, m2):
        if not classify_finite_group(m).finite:
            raise ValueError("both maps must generate finite groups")
    if _increasing_match(m1, m2):
        return "Increasing"
    if _increasing_match(m1, mirror(m2)):
        return "Decreasing"
    return "No"


def idempotent_example() -> PLMap:
    """Folds both ends onto the fixed middle interval ``[1/4, 3/4]``."""
    return PLMap([(0, Fraction(3, 4)), (Fraction(1, 4), Fraction(1, 4)),
                  (Fraction(3, 4), Fraction(3, 4)), (1, Fraction(1, 2))])


def order3_example() -> PLMap:
    """Ends mapped into ``[1/4, 3/4]``, where the map is ``x -> 1 - x``."""
    return PLMap([(0, Fraction(1, 4)), (Fraction(1, 4), Fraction(3, 4)),
                  (Fraction(3, 4), Fraction(1, 4)), (1, Fraction(1, 2))])
