"""Scalars: exact rationals (``fractions.Fraction``) or IEEE binary64 floats.

Every algorithm in the package is written once against plain arithmetic
operators, so the mode is decided only by what the caller feeds in.
``SubtractionFree`` is a rational that refuses ``-`` altogether; running a
transform on it proves at run time that no scalar was ever subtracted.
"""
from __future__ import annotations

import enum
import operator
import re
from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, float]

_RATIONAL = re.compile(r"^(-?[0-9]+)(?:/([0-9]+))?$")


class ParseError(ValueError):
    """Malformed scalar literal."""


class ZeroDenominator(ParseError):
    """A literal of the form ``n/0``."""


class DivisionByZero(ZeroDivisionError):
    pass


class ScalarMode(enum.Enum):
    EXACT = "exact"
    FLOAT64 = "f64"

    @classmethod
    def from_name(cls, name: str) -> "ScalarMode":
        aliases = {"exact": cls.EXACT, "f64": cls.FLOAT64, "float": cls.FLOAT64, "float64": cls.FLOAT64}
        try:
            return aliases[name.lower()]
        except KeyError:
            raise ValueError(f"unknown scalar mode {name!r}") from None


def parse_rational(text: str) -> Fraction:
    """Parse ``-?digits`` or ``-?digits/digits`` into a reduced Fraction.

    The denominator must be unsigned, so ``"-14/-21"`` is rejected.
    """
    if not isinstance(text, str):
        raise ParseError(f"expected a string literal, got {type(text).__name__}")
    m = _RATIONAL.match(text.strip())
    if m is None:
        raise ParseError(f"malformed rational literal {text!r}")
    num, den = m.groups()
    if den is None:
        return Fraction(int(num))
    if int(den) == 0:
        raise ZeroDenominator(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den))


def parse_float(text: str) -> float:
    """Parse a rational literal or a decimal float literal into binary64.

    Rational literals are rounded once (correctly) from their exact value.
    """
    try:
        return float(parse_rational(text))
    except ZeroDenominator:
        raise
    except ParseError:
        pass
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise ParseError(f"malformed scalar literal {text!r}") from None
    if value != value or value in (float("inf"), float("-inf")):
        raise ParseError(f"non-finite scalar literal {text!r}")
    return value


def parse_scalar(text: str, mode: ScalarMode = ScalarMode.EXACT) -> Scalar:
    if mode is ScalarMode.EXACT:
        return parse_rational(text)
    return parse_float(text)


def format_rational(x: Fraction) -> str:
    """Canonical text: ``n`` for integers, else ``n/d`` (Fraction keeps it reduced)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_scalar(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return format_rational(x)


def convert(x, mode: ScalarMode) -> Scalar:
    """Bring a number (int, Fraction, float or literal) into the given mode."""
    if isinstance(x, str):
        return parse_scalar(x, mode)
    if mode is ScalarMode.EXACT:
        if isinstance(x, float):
            raise TypeError("refusing to convert a float into exact mode")
        return Fraction(x)
    return float(x)


def mode_of(x) -> ScalarMode:
    return ScalarMode.FLOAT64 if isinstance(x, float) else ScalarMode.EXACT


_OPS = {"add": operator.add, "mul": operator.mul, "div": operator.truediv}


def rat_arith(a: Fraction, b: Fraction, op: str) -> Fraction:
    """The three field operations the transforms rely on: add, mul, div."""
    if op not in _OPS:
        raise ValueError(f"unsupported operation {op!r}; only add, mul, div are part of the contract")
    if op == "div" and b == 0:
        raise DivisionByZero("division by zero")
    return _OPS[op](Fraction(a), Fraction(b))


class SubtractionFree:
    """Exact rational restricted to ``+``, ``*`` and ``/``.

    Negation and subtraction raise ``TypeError``. Comparison with zero is
    allowed because the transforms test divisors before dividing.
    """

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value.value if isinstance(value, SubtractionFree) else Fraction(value)

    @staticmethod
    def _unwrap(other):
        if isinstance(other, SubtractionFree):
            return other.value
        if isinstance(other, (int, Fraction)):
            return Fraction(other)
        return NotImplemented

    def __add__(self, other):
        o = self._unwrap(other)
        return NotImplemented if o is NotImplemented else SubtractionFree(self.value + o)

    __radd__ = __add__

    def __mul__(self, other):
        o = self._unwrap(other)
        return NotImplemented if o is NotImplemented else SubtractionFree(self.value * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._unwrap(other)
        return NotImplemented if o is NotImplemented else SubtractionFree(self.value / o)

    def __rtruediv__(self, other):
        o = self._unwrap(other)
        return NotImplemented if o is NotImplemented else SubtractionFree(o / self.value)

    def _forbidden(self, *args):
        raise TypeError("subtraction is not available on SubtractionFree scalars")

    __sub__ = __rsub__ = __neg__ = __isub__ = _forbidden

    def __eq__(self, other):
        o = self._unwrap(other)
        return NotImplemented if o is NotImplemented else self.value == o

    def __lt__(self, other):
        o = self._unwrap(other)
        return NotImplemented if o is NotImplemented else self.value < o

    def __gt__(self, other):
        o = self._unwrap(other)
        return NotImplemented if o is NotImplemented else self.value > o

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"SubtractionFree({format_rational(self.value)})"
