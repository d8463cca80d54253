"""Exact necessity/possibility degrees.

A :class:`Degree` is a value in [0, 1] held as an integer count of
millionths, so values such as ``0.968`` or ``0.96775`` compare and print
exactly. Products are rounded half-even back to six fractional digits.
"""

from __future__ import annotations

import functools
from decimal import ROUND_HALF_EVEN, Decimal, InvalidOperation

from .errors import DegreeOutOfRange

SCALE = 10**6
_QUANTUM = Decimal(1).scaleb(-6)


def _to_micro(value) -> int:
    if isinstance(value, Degree):
        return value.micro
    if isinstance(value, bool):
        raise TypeError("bool is not a degree")
    if isinstance(value, int):
        micro = value * SCALE
    else:
        if isinstance(value, float):
            value = repr(value)
        try:
            dec = Decimal(value)
        except (InvalidOperation, TypeError, ValueError):
            raise DegreeOutOfRange(f"not a decimal degree: {value!r}") from None
        if not dec.is_finite():
            raise DegreeOutOfRange(f"not a finite degree: {value!r}")
        micro = int((dec * SCALE).to_integral_value(rounding=ROUND_HALF_EVEN))
    if not 0 <= micro <= SCALE:
        raise DegreeOutOfRange(f"degree {value} outside [0, 1]")
    return micro


@functools.total_ordering
class Degree:
    """A degree in [0, 1] with six exact fractional digits.

    >>> Degree("0.25") * Degree("0.967")
    Degree('0.24175')
    >>> str(Degree(1))
    '1.0'
    """

    __slots__ = ("_micro",)

    def __init__(self, value=0):
        object.__setattr__(self, "_micro", _to_micro(value))

    def __setattr__(self, name, value):
        raise AttributeError("Degree is immutable")

    @classmethod
    def from_micro(cls, micro: int) -> Degree:
        if not 0 <= micro <= SCALE:
            raise DegreeOutOfRange(f"degree {micro}/{SCALE} outside [0, 1]")
        obj = cls.__new__(cls)
        object.__setattr__(obj, "_micro", micro)
        return obj

    @property
    def micro(self) -> int:
        return self._micro

    def complement(self) -> Degree:
        """1 - self, exact."""
        return Degree.from_micro(SCALE - self._micro)

    def as_decimal(self) -> Decimal:
        return Decimal(self._micro).scaleb(-6)

    def __mul__(self, other) -> Degree:
        if not isinstance(other, Degree):
            other = Degree(other)
        product = Decimal(self._micro * other._micro).scaleb(-12)
        return Degree(product.quantize(_QUANTUM, rounding=ROUND_HALF_EVEN))

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Degree):
            return self._micro == other._micro
        if isinstance(other, (int, Decimal)) and not isinstance(other, bool):
            return self.as_decimal() == other
        return NotImplemented

    def __lt__(self, other):
        if not isinstance(other, Degree):
            other = Degree(other)
        return self._micro < other._micro

    def __hash__(self):
        return hash(self.as_decimal())

    def __float__(self):
        return self._micro / SCALE

    def __bool__(self):
        return self._micro != 0

    def __str__(self):
        text = format(self.as_decimal(), "f")
        if "." in text:
            text = text.rstrip("0")
            if text.endswith("."):
                text += "0"
        else:
            text += ".0"
        return text

    def __repr__(self):
        return f"Degree({str(self)!r})"

    def __reduce__(self):
        return (Degree.from_micro, (self._micro,))


ZERO = Degree.from_micro(0)
ONE = Degree.from_micro(SCALE)
