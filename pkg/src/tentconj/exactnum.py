"""Exact scalars: rationals (``fractions.Fraction``) and dyadic rationals.

``Rat`` is an alias for :class:`fractions.Fraction`; it already keeps
numerator and denominator coprime with a positive denominator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

Rat = Fraction

_RAT_RE = re.compile(r"^[+-]?(\d+(/\d+)?|\d*\.\d+|\d+\.\d*)$")


def parse_rat(text: str) -> Fraction:
    """Parse ``"p/q"``, an integer or a finite decimal into an exact rational."""
    s = text.strip()
    if not _RAT_RE.match(s):
        raise ValueError(f"malformed rational: {text!r}")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator: {text!r}") from None


def as_rat(value) -> Fraction:
    """Coerce ints, Fractions, Dyadics and rational strings to ``Fraction``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Dyadic):
        return value.to_rat()
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rat(value)
    if isinstance(value, float):
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def format_rat(r: Fraction) -> str:
    """Exact text form: ``"p/q"``, or ``"p"`` for integers."""
    r = Fraction(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def format_decimal(r: Fraction, digits: int) -> str:
    """Fixed-point text with ``digits`` fractional digits, rounding half to even."""
    if digits < 0:
        raise ValueError("digits must be non-negative")
    scaled = round(Fraction(r) * 10**digits)  # Fraction.__round__ is half-even
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    if digits == 0:
        return f"{sign}{scaled}"
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


@dataclass(frozen=True, order=False)
class Dyadic:
    """The number ``num / 2**exp`` in ``[0, 1]``, stored in lowest terms."""

    num: int
    exp: int

    def __post_init__(self):
        num, exp = self.num, self.exp
        if exp < 0 or num < 0 or num > (1 << exp):
            raise ValueError(f"dyadic {num}/2^{exp} outside [0, 1]")
        if num == 0:
            exp = 0
        else:
            while exp > 0 and num % 2 == 0:
                num //= 2
                exp -= 1
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    @classmethod
    def from_rat(cls, r) -> "Dyadic":
        r = as_rat(r)
        d = r.denominator
        if d & (d - 1):
            raise ValueError(f"{r} is not dyadic")
        return cls(r.numerator, d.bit_length() - 1)

    def to_rat(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def __float__(self):
        return self.num / (1 << self.exp)

    def _key(self):
        return self.to_rat()

    def __lt__(self, other):
        return self._key() < as_rat(other)

    def __le__(self, other):
        return self._key() <= as_rat(other)

    def __gt__(self, other):
        return self._key() > as_rat(other)

    def __ge__(self, other):
        return self._key() >= as_rat(other)

    def __str__(self):
        return format_rat(self.to_rat())


def is_dyadic(r) -> bool:
    d = as_rat(r).denominator
    return d & (d - 1) == 0


def binary_digits(x, count: int) -> list[int]:
    """First ``count`` digits of the terminating binary expansion of ``x < 1``."""
    if count < 1:
        raise ValueError("count must be at least 1")
    r = as_rat(x)
    if r >= 1 or r < 0:
        raise ValueError("binary digits are defined for 0 <= x < 1 only")
    bits = []
    for _ in range(count):
        r *= 2
        bit = 1 if r >= 1 else 0
        bits.append(bit)
        r -= bit
    return bits


def from_binary_digits(bits) -> Fraction:
    """Inverse of :func:`binary_digits` for a finite digit list."""
    value = Fraction(0)
    for i, bit in enumerate(bits, start=1):
        if bit:
            value += Fraction(1, 1 << i)
    return value
