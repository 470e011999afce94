"""Derivatives, graph lengths and log-scale diagnostics of the conjugacy ``h``."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .conjugacy import ConjSystem, _h_affine_walk, h_eval, h_n_approx
from .exactnum import as_rat, binary_digits, is_dyadic


@dataclass(frozen=True)
class AlphaFactors:
    x_digits: tuple
    v: Fraction
    factors: tuple

    def product(self) -> Fraction:
        return _digit_product(self.v, self.x_digits)


def _digit_product(v: Fraction, digits) -> Fraction:
    same = 0
    prev = 0
    for d in digits:
        same += d == prev
        prev = d
    return (2 * v) ** same * (2 * (1 - v)) ** (len(digits) - same)


def alpha_factors(v, digits: Sequence[int]) -> AlphaFactors:
    """Per-digit slope multipliers: ``2v`` when a digit repeats its predecessor."""
    v = as_rat(v)
    prev = 0
    factors = []
    for d in digits:
        factors.append(2 * v if d == prev else 2 * (1 - v))
        prev = d
    return AlphaFactors(tuple(digits), v, tuple(factors))


def hn_derivative(v, x, n: int) -> Fraction:
    """Slope of ``h_n`` at ``x``; ``x`` is a point off the grid or its digit list."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if isinstance(x, (list, tuple)):
        if len(x) < n - 1:
            raise ValueError(f"need at least {n - 1} digits")
        digits = list(x[: n - 1])
    else:
        r = as_rat(x)
        if not 0 <= r <= 1:
            raise ValueError("x must lie in [0, 1]")
        if (r * (1 << (n - 1))).denominator == 1:
            raise ValueError("x is a breakpoint of h_n; the slope is undefined there")
        digits = binary_digits(r, n - 1)
    return _digit_product(as_rat(v), digits)


@dataclass(frozen=True)
class SlopeRange:
    min: Fraction
    max: Fraction
    exhaustive_checked: bool


def derivative_scan(v, n: int, check_limit: int = 12) -> SlopeRange:
    """Smallest and largest slope of ``h_n`` over its ``2**(n-1)`` pieces."""
    v = as_rat(v)
    if n < 2:
        raise ValueError("n must be at least 2")
    lo, hi = sorted((2 * v, 2 * (1 - v)))
    smallest, largest = lo ** (n - 1), hi ** (n - 1)
    checked = False
    if n <= check_limit:
        slopes = h_n_approx(ConjSystem(v), n).slopes() if v != Fraction(1, 2) else [Fraction(1)]
        if min(slopes) != smallest or max(slopes) != largest:
            raise AssertionError("closed-form slope extremes disagree with enumeration")
        checked = True
    return SlopeRange(smallest, largest, checked)


@dataclass
class DerivativeEvidence:
    """Classification claimed for rational points, with the numerical record."""

    v: Fraction
    x0: Fraction
    claimed: str
    observed: str
    contradiction: bool
    depths: list = field(default_factory=list)
    right_quotients: list = field(default_factory=list)
    left_quotients: list = field(default_factory=list)


def _quotient(sys: ConjSystem, x0: Fraction, h0: Fraction, step: Fraction, m: int):
    x = x0 + step
    if not 0 <= x <= 1:
        return None
    if is_dyadic(x):
        hx = _h_affine_walk(sys.v, x)
    else:
        # any interval of width 2**-m gains at least min(v,1-v)**(m+1) in h
        floor = min(sys.v, 1 - sys.v) ** (m + 1)
        hx, _ = h_eval(sys, x, floor / 10**6)
    return float((hx - h0) / step)


def _trend(values, low, high, window):
    tail = [q for q in values if q is not None][-window:]
    if len(tail) < window:
        return "Undetermined"
    dec = all(a >= b for a, b in zip(tail, tail[1:]))
    inc = all(a <= b for a, b in zip(tail, tail[1:]))
    if dec and tail[-1] < low:
        return "Zero"
    if inc and tail[-1] > high:
        return "Infinite"
    return "Undetermined"


def derivative_classify(
    v,
    x0,
    depth: int = 40,
    window: int = 10,
    low: float = 1e-3,
    high: float = 1e3,
) -> DerivativeEvidence:
    """Dichotomy for rational points (``Infinite`` if v < 1/2, ``Zero`` if v > 1/2)
    together with one-sided difference quotients of ``h`` at ``x0``.

    ``observed`` is read from the last ``window`` quotients on each side; any
    side that trends against the claim sets ``contradiction``.
    """
    v, x0 = as_rat(v), as_rat(x0)
    if v == Fraction(1, 2):
        raise ValueError("h is the identity at v = 1/2; there is no dichotomy")
    if not 0 <= x0 <= 1:
        raise ValueError("x0 must lie in [0, 1]")
    claimed = "Infinite" if v < Fraction(1, 2) else "Zero"
    sys = ConjSystem(v)
    if is_dyadic(x0):
        h0 = _h_affine_walk(v, x0)
    else:
        h0, _ = h_eval(sys, x0, min(v, 1 - v) ** (depth + 1) / 10**6)
    depths = list(range(1, depth + 1))
    right = [_quotient(sys, x0, h0, Fraction(1, 1 << m), m) for m in depths]
    left = [_quotient(sys, x0, h0, -Fraction(1, 1 << m), m) for m in depths]
    sides = [_trend(right, low, high, window), _trend(left, low, high, window)]
    seen = {s for s in sides if s != "Undetermined"} or {"Undetermined"}
    observed = seen.pop() if len(seen) == 1 else "Mixed"
    contradiction = any(s not in (claimed, "Undetermined") for s in sides)
    return DerivativeEvidence(v, x0, claimed, observed, contradiction, depths, right, left)


def flattening_fraction(v, bits: int, samples: int, seed: int, threshold=Fraction(1, 1000)) -> float:
    """Share of random ``bits``-digit points where the slope of ``h_{bits+1}`` is below ``threshold``."""
    v, threshold = as_rat(v), as_rat(threshold)
    rng = random.Random(seed)
    hits = 0
    for _ in range(samples):
        digits = [rng.getrandbits(1) for _ in range(bits)]
        hits += _digit_product(v, digits) < threshold
    return hits / samples


# graph length ---------------------------------------------------------------

def graph_length_polyline(v, n: int) -> float:
    """Length of the graph of ``h_n``: exact squared segments, double sqrt, fsum."""
    if n < 1:
        raise ValueError("n must be at least 1")
    v = as_rat(v)
    dx2 = Fraction(1, 1 << (2 * (n - 1)))
    ys = ConjSystem(v).B(n)
    return math.fsum(
        math.sqrt(dx2 + (b - a) ** 2) for a, b in zip(ys, ys[1:])
    )


def _softplus(z: float) -> float:
    return max(z, 0.0) + math.log1p(math.exp(-abs(z)))


def graph_length_formula(v: float, n: int) -> float:
    """Closed-form length of ``h_{n+1}``, summed in log space."""
    v = float(v)
    if not 0 < v < 1:
        raise ValueError("v must lie in (0, 1)")
    if n < 0:
        raise ValueError("n must be non-negative")
    lv, lw, l2 = math.log(v), math.log1p(-v), math.log(2.0)
    lgn = math.lgamma(n + 1)
    logs = []
    for k in range(n + 1):
        log_binom = lgn - math.lgamma(k + 1) - math.lgamma(n - k + 1)
        z = 2 * n * l2 + 2 * k * lv + 2 * (n - k) * lw
        logs.append(log_binom - n * l2 + 0.5 * _softplus(z))
    top = max(logs)
    return math.exp(top) * math.fsum(math.exp(t - top) for t in logs)


@dataclass(frozen=True)
class LengthReport:
    n: int
    v: object
    polyline: float | None
    formula: float
    terms: int


def length_report(v, n: int) -> LengthReport:
    """Both length computations for ``h_{n+1}``; the polyline only for small ``n``."""
    poly = graph_length_polyline(as_rat(v), n + 1) if n <= 16 else None
    return LengthReport(n + 1, v, poly, graph_length_formula(float(as_rat(v)), n), n + 1)


# log-scale periodic factor ------------------------------------------------

def omega1_extract(v, x, tol) -> float:
    """Periodic factor ``h(x) * x**log2(v)``; equals 1 at powers of two."""
    v, x = as_rat(v), as_rat(x)
    if not 0 < x <= 1:
        raise ValueError("x must lie in (0, 1]")
    hx, _ = h_eval(ConjSystem(v), x, tol)
    return float(hx) * float(x) ** math.log2(float(v))


@dataclass(frozen=True)
class HtildeExtremum:
    t: float
    violation: bool
    interval: tuple


def htilde_extremum(v: float, n: int, k: int) -> HtildeExtremum:
    """Extremum of the log-domain interpolant of ``h_n`` on grid interval ``k``.

    Interval ``k`` joins the ``k``-th and ``(k+1)``-th points of ``A_n``
    (0-based, so ``k`` runs from 1 to ``2**(n-1) - 1``).  The interpolant is
    ``v**(-t) * (a t + b)`` in ``t = log2 x``; a stationary point strictly
    inside the interval means it is not monotone there.
    """
    vf = float(v)
    if not 0 < vf < 1:
        raise ValueError("v must lie in (0, 1)")
    size = 1 << (n - 1)
    if n < 2 or not 1 <= k <= size - 1:
        raise ValueError("interval index out of range")
    vr = as_rat(v)
    xs = (Fraction(k, size), Fraction(k + 1, size))
    hs = [_h_affine_walk(vr, x) for x in xs]
    ts = [math.log2(float(x)) for x in xs]
    ws = [float(hv) * vf**t for hv, t in zip(hs, ts)]
    if ws[1] == ws[0]:
        raise ValueError("degenerate interval: zero slope in the log domain")
    a = (ws[1] - ws[0]) / (ts[1] - ts[0])
    b_over_a = (ws[0] * ts[1] - ws[1] * ts[0]) / (ws[1] - ws[0])
    t = 1.0 / math.log(vf) - b_over_a
    return HtildeExtremum(t, ts[0] < t < ts[1], (ts[0], ts[1]))


def htilde_threshold(n: int, k: int, lo: float, hi: float, tol: float = 1e-7):
    """Bisect on ``v`` for the change of monotonicity on interval ``k``.

    Returns the final bracket ``(lo, hi)``; the two ends have different
    violation flags.
    """
    flo = htilde_extremum(lo, n, k).violation
    fhi = htilde_extremum(hi, n, k).violation
    if flo == fhi:
        raise ValueError("the violation flag does not change over the bracket")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if htilde_extremum(mid, n, k).violation == flo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def slope_table(v, n: int):
    """All ``2**(n-1)`` slopes of ``h_n`` from the digit rule, left to right."""
    v = as_rat(v)
    return [_digit_product(v, d) for d in itertools.product((0, 1), repeat=n - 1)]
