"""Self-semiconjugations of the tent map and their transport to skew tents.

The nonconstant continuous solutions of ``xi o f = f o xi`` are the
zigzag maps.  On the finite grids ``A_n`` the equation has many more
solutions ("admissible" tables); the ones that extend to a continuous
solution are "continuable".  Counts are always computed by direct
enumeration; closed-form counts are reported next to them for comparison.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .conjugacy import ConjSystem, h_eval
from .exactnum import as_rat
from .plmap import PLFunction, PLMap, compose, tent

HALF = Fraction(1, 2)
FIXED_POINTS = (Fraction(0), Fraction(2, 3))
MAX_ADMISSIBLE_LEVEL = 5


def _f(x: Fraction) -> Fraction:
    return 2 * x if x <= HALF else 2 - 2 * x


def _f_pre(y: Fraction) -> list[Fraction]:
    """Tent-map preimages of ``y``, increasing."""
    a, b = y / 2, 1 - y / 2
    return [a] if a == b else [a, b]


def grid(n: int) -> list[Fraction]:
    size = 1 << (n - 1)
    return [Fraction(k, size) for k in range(size + 1)]


def zigzag(k: int) -> PLMap:
    """The ``k``-tooth sawtooth: 0 at even multiples of ``1/k``, 1 at odd ones."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return PLMap([(Fraction(t, k), t % 2) for t in range(k + 1)])


def zigzag_value(k: int, x) -> Fraction:
    """Closed form ``(1 - (-1)**[kx]) / 2 + (-1)**[kx] * {kx}``."""
    kx = k * as_rat(x)
    whole = math.floor(kx)
    frac = kx - whole
    return frac if whole % 2 == 0 else 1 - frac


def is_self_semiconj(xi: PLFunction) -> bool:
    """Exact test of ``xi o f = f o xi``."""
    f = tent()
    return compose(xi, f) == compose(f, xi)


@dataclass(frozen=True)
class GridSemiconj:
    """A solution of the grid equation on ``A_n``, values listed along the grid."""

    n: int
    values: tuple

    def as_dict(self) -> dict:
        return dict(zip(grid(self.n), self.values))

    def is_admissible(self) -> bool:
        table = self.as_dict()
        return all(table[_f(x)] == _f(y) for x, y in table.items())


def _depth_order(n: int) -> list[Fraction]:
    # 0 first, then points whose image is already placed
    order = [Fraction(0)]
    for m in range(1, n + 1):
        size = 1 << (m - 1)
        order += [Fraction(k, size) for k in range(1, size + 1, 2 if m > 1 else 1)]
    return order


def _check_level(n: int):
    if not 1 <= n <= MAX_ADMISSIBLE_LEVEL:
        raise ValueError(f"supported grid levels are 1..{MAX_ADMISSIBLE_LEVEL}")


def iter_admissible(n: int) -> Iterator[GridSemiconj]:
    """Depth-first enumeration of admissible tables on ``A_n``."""
    _check_level(n)
    order = _depth_order(n)
    pts = grid(n)

    def walk(pos, table):
        if pos == len(order):
            yield GridSemiconj(n, tuple(table[x] for x in pts))
            return
        x = order[pos]
        choices = FIXED_POINTS if x == 0 else _f_pre(table[_f(x)])
        for y in choices:
            table[x] = y
            yield from walk(pos + 1, table)
        del table[x]

    yield from walk(0, {})


def enumerate_admissible(n: int) -> tuple[int, Iterator[GridSemiconj]]:
    """Number of admissible tables on ``A_n`` and an iterator over them."""
    count = sum(1 for _ in iter_admissible(n))
    return count, iter_admissible(n)


def enumerate_admissible_product(n: int) -> set:
    """Independent count: filter the full product of candidate value sets."""
    if not 1 <= n <= 3:
        raise ValueError("the product enumerator is limited to n <= 3")
    pts = grid(n)

    def depth(x):
        d = 0
        while x != 0:
            x, d = _f(x), d + 1
        return d

    def backward(targets, d):
        out = set(targets)
        for _ in range(d):
            out = {p for y in out for p in _f_pre(y)}
        return sorted(out)

    pools = [backward(FIXED_POINTS, depth(x)) for x in pts]
    found = set()
    for values in itertools.product(*pools):
        table = dict(zip(pts, values))
        if all(table[_f(x)] == _f(y) for x, y in table.items()):
            found.add(tuple(values))
    return found


def admissible_count_formula(n: int) -> int:
    """Closed-form count ``sum_k 2**(k+1) * C(n, k)`` (reported, not trusted)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return sum(2 ** (k + 1) * math.comb(n, k) for k in range(n + 1))


# continuable tables -----------------------------------------------------

@dataclass(frozen=True)
class ContinuableTable:
    table: GridSemiconj
    witness: int
    congruence_ok: bool


def _congruence_solutions(n: int, s: int, p: int) -> set:
    """Residues ``k mod 2**n`` with ``k (2s+1) = +-p (mod 2**n)``."""
    mod = 1 << n
    inv = pow(2 * s + 1, -1, mod)
    return {(p * inv) % mod, (-p * inv) % mod}


def enumerate_continuable(n: int) -> list[ContinuableTable]:
    """Distinct restrictions of zigzag maps to ``A_n`` with their smallest ``k``.

    For ``n >= 2`` each table is cross-checked against the slope congruence
    at the grid point ``1 / 2**(n-1)``: the witness must solve it, and every
    ``k`` that solves it must produce the same table.
    """
    if not 1 <= n <= 12:
        raise ValueError("supported grid levels are 1..12")
    pts = grid(n)
    mod = 1 << n
    witnesses = {}
    for k in range(1, (1 << (n + 1)) + 1):
        values = tuple(zigzag_value(k, x) for x in pts)
        witnesses.setdefault(values, []).append(k)
    out = []
    for values, ks in witnesses.items():
        ok = True
        if n >= 2:
            p = values[1] * (1 << (n - 1))
            sols = _congruence_solutions(n, 0, int(p))
            ok = ks[0] % mod in sols and {k % mod for k in ks} == sols
        out.append(ContinuableTable(GridSemiconj(n, values), ks[0], ok))
    out.sort(key=lambda c: c.witness)
    return out


def continuable_count_formula(n: int) -> int:
    """Closed-form count ``2**(n-1)`` (reported, not trusted)."""
    return 1 << (n - 1)


@dataclass
class Census:
    n: int
    admissible: int
    admissible_formula: int
    admissible_second: int | None
    continuable: int
    continuable_formula: int
    tables: list = field(default_factory=list)

    @property
    def admissible_matches_formula(self) -> bool:
        return self.admissible == self.admissible_formula

    @property
    def continuable_matches_formula(self) -> bool:
        return self.continuable == self.continuable_formula

    @property
    def enumerators_agree(self):
        if self.admissible_second is None:
            return None
        return self.admissible == self.admissible_second


def census(n: int) -> Census:
    count, _ = enumerate_admissible(n)
    second = len(enumerate_admissible_product(n)) if n <= 3 else None
    cont = enumerate_continuable(n)
    return Census(
        n,
        count,
        admissible_count_formula(n),
        second,
        len(cont),
        continuable_count_formula(n),
        cont,
    )


# bit-sequence description ---------------------------------------------

def _phi_inv(bit: int, y: Fraction) -> Fraction:
    return y / 2 if bit == 0 else 1 - y / 2


def decode(bits, start: Fraction) -> Fraction:
    """Apply the inverse branches named by ``bits`` (first bit first) to ``start``."""
    y = start
    for b in bits:
        y = _phi_inv(b, y)
    return y


FORCING_RULES = ("leading", "input-zero", "output-zero", "none")


@dataclass(frozen=True)
class BitSeqMap:
    """Prefix-consistent relabelling of binary words of length ``<= n``.

    ``labels`` pairs every word with the output bit at its last position;
    the image of a word is read off along its prefixes.  ``i0`` selects the
    fixed point that output words start from (0 -> 0, 1 -> 2/3).
    """

    n: int
    i0: int
    labels: tuple

    def _images(self) -> dict:
        lab = dict(self.labels)
        images = {(): ()}
        for word in _all_words(self.n):
            images[word] = images[word[:-1]] + (lab[word],)
        del images[()]
        return images

    def image(self, word) -> tuple:
        return self._images()[tuple(word)]

    def respects(self, rule: str) -> bool:
        return _respects(self.n, self.i0, self._images(), rule)

    def table(self):
        """Grid table on ``A_n``, or ``None`` when two words of one point disagree.

        Words of every length ``m <= n`` are decoded, so a point of ``A_m``
        is reached both by its short words and by their zero-padded forms.
        """
        return _table(self.n, self.i0, self._images())


def _respects(n, i0, images, rule) -> bool:
    if rule == "none":
        return True
    for word, out in images.items():
        if len(word) != n:
            continue
        leading = True
        for j, i in zip(word, out):
            leading = leading and j == 0
            if rule == "leading" and leading and i != i0:
                return False
            if rule == "input-zero" and j == 0 and i != i0:
                return False
            if rule == "output-zero" and i == 0 and j != i0:
                return False
    return True


def _table(n, i0, images):
    start = FIXED_POINTS[i0]
    values = {Fraction(0): start}
    for word, out in images.items():
        x = decode(word, Fraction(0))
        y = decode(out, start)
        if values.setdefault(x, y) != y:
            return None
    return GridSemiconj(n, tuple(values[x] for x in grid(n)))


def _all_words(n: int):
    return [w for m in range(1, n + 1) for w in itertools.product((0, 1), repeat=m)]


def iter_bitseq_maps(n: int) -> Iterator[BitSeqMap]:
    words = _all_words(n)
    for i0 in (0, 1):
        for bits in itertools.product((0, 1), repeat=len(words)):
            yield BitSeqMap(n, i0, tuple(zip(words, bits)))


@dataclass(frozen=True)
class ForcingResolution:
    """Outcome of one forcing rule: how many relabellings obey it, how many
    of those are well defined on the grid, and the tables they produce."""

    rule: str
    maps: int
    well_defined: int
    tables: frozenset
    matches_brute_force: bool


def resolve_forcing_rule(n: int) -> list[ForcingResolution]:
    """Compare the tables produced under each forcing rule with brute force."""
    if not 1 <= n <= 3:
        raise ValueError("bit-sequence enumeration is limited to n <= 3")
    truth = {t.values for t in iter_admissible(n)}
    words = _all_words(n)
    stats = {rule: [0, 0, set()] for rule in FORCING_RULES}
    for i0 in (0, 1):
        for bits in itertools.product((0, 1), repeat=len(words)):
            lab = dict(zip(words, bits))
            images = {}
            for word in words:
                images[word] = images.get(word[:-1], ()) + (lab[word],)
            table = _table(n, i0, images)
            for rule in FORCING_RULES:
                if _respects(n, i0, images, rule):
                    entry = stats[rule]
                    entry[0] += 1
                    if table is not None:
                        entry[1] += 1
                        entry[2].add(table.values)
    return [
        ForcingResolution(rule, maps, ok, frozenset(tables), tables == truth)
        for rule, (maps, ok, tables) in stats.items()
    ]


# transport to the skew tent ------------------------------------------------

def semiconj_to_skew(v, k: int, x, tol) -> Fraction:
    """``h(zigzag_k(x))``: a semiconjugacy from the tent map to the skew tent."""
    x = as_rat(x)
    if not 0 <= x <= 1:
        raise ValueError("x must lie in [0, 1]")
    value, _ = h_eval(ConjSystem(v), zigzag_value(k, x), tol)
    return value
