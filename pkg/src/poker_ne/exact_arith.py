"""Exact rational helpers.

All finite-deck computation runs on :class:`fractions.Fraction`, which
already keeps values in lowest terms with a positive denominator.  This
module adds the parsing/formatting conventions used throughout the package
and a decimal renderer meant for display only.
"""

from __future__ import annotations

import decimal
import operator
from fractions import Fraction
from typing import Iterable, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]

__all__ = [
    "Rational",
    "DivisionByZero",
    "to_rational",
    "rat_arith",
    "format_rational",
    "parse_rational",
    "to_decimal",
    "is_canonical",
    "format_vector",
]


class DivisionByZero(ZeroDivisionError):
    """Raised when an exact division has a zero divisor."""


def to_rational(x: RationalLike) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to a Fraction.

    Floats are rejected: they would smuggle rounding error into exact code.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    # numpy integers and gmpy2 values expose numerator/denominator
    num = getattr(x, "numerator", None)
    den = getattr(x, "denominator", None)
    if num is not None and den is not None and not isinstance(x, float):
        return Fraction(int(num), int(den))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


_OPS = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
}


def rat_arith(op: str, a: RationalLike, b: RationalLike | None = None):
    """Apply ``op`` in {add, sub, mul, div, neg, cmp} to exact operands.

    ``cmp`` returns -1, 0 or 1.
    """
    a = to_rational(a)
    if op == "neg":
        return -a
    if b is None:
        raise ValueError(f"operation {op!r} needs two operands")
    b = to_rational(b)
    if op in _OPS:
        return _OPS[op](a, b)
    if op == "div":
        if b == 0:
            raise DivisionByZero(f"division of {format_rational(a)} by zero")
        return a / b
    if op == "cmp":
        return (a > b) - (a < b)
    raise ValueError(f"unknown operation {op!r}")


def format_rational(x: RationalLike) -> str:
    """Render as "p/q", or "p" when the denominator is 1."""
    x = to_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    num, sep, den = s.partition("/")
    try:
        if not sep:
            return Fraction(int(num))
        d = int(den)
    except ValueError:
        raise ValueError(f"not an exact rational: {s!r}") from None
    if d == 0:
        raise DivisionByZero(f"zero denominator in {s!r}")
    return Fraction(int(num), d)


def to_decimal(x: RationalLike, digits: int = 10) -> str:
    """Decimal rendering with ``digits`` significant digits, round-half-even.

    For display only; never feed the result back into computation.
    """
    x = to_rational(x)
    if x == 0:
        return "0"
    ctx = decimal.Context(prec=digits, rounding=decimal.ROUND_HALF_EVEN)
    d = ctx.divide(decimal.Decimal(x.numerator), decimal.Decimal(x.denominator))
    out = format(d, "f")
    if "." in out:
        out = out.rstrip("0").rstrip(".")
    return out


def is_canonical(x: Fraction) -> bool:
    from math import gcd

    return x.denominator > 0 and gcd(abs(x.numerator), x.denominator) == 1


def format_vector(v: Iterable[RationalLike]) -> str:
    return "[" + ", ".join(format_rational(x) for x in v) + "]"
