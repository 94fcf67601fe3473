"""Exact dyadic rationals m/2^e.

Every coordinate in the toolkit is a :class:`Dyadic`. Denominators are kept as
exponents and never materialized, so values produced by deep compositions with
exponents in the thousands stay cheap. There is deliberately no division:
slopes are powers of two and are applied with :meth:`Dyadic.mul_pow2`.
"""
from __future__ import annotations

import re
from enum import IntEnum
from typing import Union

from services.errors import DyadicError

_DYADIC_RE = re.compile(r"\A\s*(?P<num>[-+]?\d+)(?:\s*/\s*(?P<den>\d+))?\s*\Z")


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _trailing_zeros(n: int) -> int:
    return (n & -n).bit_length() - 1


class Dyadic:
    """An exact value numerator / 2**exponent in canonical form.

    Canonical form: the numerator is odd whenever the exponent is positive, and
    zero is stored as 0/2**0. Structural equality is therefore value equality.
    """

    __slots__ = ("_numerator", "_exponent")

    def __init__(self, numerator: int = 0, exponent: int = 0):
        if exponent < 0:
            raise DyadicError(f"exponent must be non-negative, got {exponent}")
        if numerator == 0:
            exponent = 0
        elif exponent:
            shift = min(_trailing_zeros(numerator), exponent)
            if shift:
                numerator >>= shift
                exponent -= shift
        self._numerator = numerator
        self._exponent = exponent

    @classmethod
    def _raw(cls, numerator: int, exponent: int) -> "Dyadic":
        # caller guarantees canonical form
        obj = object.__new__(cls)
        obj._numerator = numerator
        obj._exponent = exponent
        return obj

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        """Parse ``"3/8"``, ``"-2"`` or ``"2/4"``; the denominator must be a power of two."""
        if not isinstance(text, str):
            raise DyadicError(f"expected a dyadic string, got {type(text).__name__}")
        match = _DYADIC_RE.match(text)
        if not match:
            raise DyadicError(f"not a dyadic rational: {text!r}")
        numerator = int(match.group("num"))
        den_text = match.group("den")
        if den_text is None:
            return cls(numerator, 0)
        den = int(den_text)
        if den <= 0 or den & (den - 1):
            raise DyadicError(f"denominator must be a power of two: {text!r}")
        return cls(numerator, den.bit_length() - 1)

    @classmethod
    def coerce(cls, value: Union["Dyadic", int, str]) -> "Dyadic":
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, bool):
            raise DyadicError("booleans are not dyadic rationals")
        if isinstance(value, int):
            return cls._raw(value, 0)
        if isinstance(value, str):
            return cls.parse(value)
        raise DyadicError(f"cannot interpret {value!r} as a dyadic rational")

    @property
    def numerator(self) -> int:
        return self._numerator

    @property
    def exponent(self) -> int:
        return self._exponent

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: Union["Dyadic", int]) -> "Dyadic":
        if isinstance(other, int):
            other = Dyadic._raw(other, 0)
        elif not isinstance(other, Dyadic):
            return NotImplemented
        e1, e2 = self._exponent, other._exponent
        if e1 == e2:
            return Dyadic(self._numerator + other._numerator, e1)
        if e1 > e2:
            # numerator stays odd: odd + even
            return Dyadic._raw(self._numerator + (other._numerator << (e1 - e2)), e1)
        return Dyadic._raw((self._numerator << (e2 - e1)) + other._numerator, e2)

    __radd__ = __add__

    def __neg__(self) -> "Dyadic":
        return Dyadic._raw(-self._numerator, self._exponent)

    def __pos__(self) -> "Dyadic":
        return self

    def __abs__(self) -> "Dyadic":
        return -self if self._numerator < 0 else self

    def __sub__(self, other: Union["Dyadic", int]) -> "Dyadic":
        if isinstance(other, int):
            other = Dyadic._raw(other, 0)
        elif not isinstance(other, Dyadic):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: int) -> "Dyadic":
        if isinstance(other, int):
            return Dyadic._raw(other, 0) - self
        return NotImplemented

    def __mul__(self, other: Union["Dyadic", int]) -> "Dyadic":
        if isinstance(other, int):
            return Dyadic(self._numerator * other, self._exponent)
        if not isinstance(other, Dyadic):
            return NotImplemented
        return Dyadic(self._numerator * other._numerator, self._exponent + other._exponent)

    __rmul__ = __mul__

    def mul_pow2(self, k: int) -> "Dyadic":
        """Return self * 2**k for any integer k."""
        if k == 0 or self._numerator == 0:
            return self
        if k < 0:
            if self._exponent:
                return Dyadic._raw(self._numerator, self._exponent - k)
            return Dyadic(self._numerator, -k)
        if k <= self._exponent:
            return Dyadic._raw(self._numerator, self._exponent - k)
        return Dyadic._raw(self._numerator << (k - self._exponent), 0)

    def floor(self) -> int:
        return self._numerator >> self._exponent

    def is_integer(self) -> bool:
        return self._exponent == 0

    def sign(self) -> int:
        return (self._numerator > 0) - (self._numerator < 0)

    # -- ordering -----------------------------------------------------------

    def _cmp(self, other: "Dyadic") -> int:
        e1, e2 = self._exponent, other._exponent
        a, b = self._numerator, other._numerator
        if e1 > e2:
            b <<= e1 - e2
        elif e2 > e1:
            a <<= e2 - e1
        return (a > b) - (a < b)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Dyadic):
            return self._numerator == other._numerator and self._exponent == other._exponent
        if isinstance(other, int) and not isinstance(other, bool):
            return self._exponent == 0 and self._numerator == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._exponent == 0:
            return hash(self._numerator)
        return hash((self._numerator, self._exponent))

    def __lt__(self, other: Union["Dyadic", int]) -> bool:
        return self._cmp(Dyadic.coerce(other)) < 0

    def __le__(self, other: Union["Dyadic", int]) -> bool:
        return self._cmp(Dyadic.coerce(other)) <= 0

    def __gt__(self, other: Union["Dyadic", int]) -> bool:
        return self._cmp(Dyadic.coerce(other)) > 0

    def __ge__(self, other: Union["Dyadic", int]) -> bool:
        return self._cmp(Dyadic.coerce(other)) >= 0

    def __bool__(self) -> bool:
        return self._numerator != 0

    # -- text ---------------------------------------------------------------

    def __str__(self) -> str:
        if self._exponent == 0:
            return str(self._numerator)
        return f"{self._numerator}/{1 << self._exponent}"

    def __repr__(self) -> str:
        return f"Dyadic('{self}')"

    def to_json(self) -> str:
        return str(self)


ZERO = Dyadic._raw(0, 0)
ONE = Dyadic._raw(1, 0)
HALF = Dyadic._raw(1, 1)


def normalize(numerator: int, exponent: int) -> Dyadic:
    """Canonical form of numerator / 2**exponent; a negative exponent is a usage error."""
    return Dyadic(numerator, exponent)


def add(x: Dyadic, y: Dyadic) -> Dyadic:
    return x + y


def mul(x: Dyadic, y: Dyadic) -> Dyadic:
    return x * y


def mul_pow2(x: Dyadic, k: int) -> Dyadic:
    return x.mul_pow2(k)


def compare(x: Dyadic, y: Dyadic) -> Ordering:
    return Ordering(x._cmp(y))


def pow2(k: int) -> Dyadic:
    """2**k for any integer k."""
    return ONE.mul_pow2(k)


def slope_exponent(dx: Dyadic, dy: Dyadic) -> Union[int, None]:
    """Return k with dy == 2**k * dx, or None when dy/dx is not a power of two.

    Both arguments must be positive.
    """
    a, b = dy._numerator, dx._numerator
    ta, tb = _trailing_zeros(a), _trailing_zeros(b)
    if (a >> ta) != (b >> tb):
        return None
    return (ta - dy._exponent) - (tb - dx._exponent)
