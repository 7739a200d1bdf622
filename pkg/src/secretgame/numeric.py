"""Exact/inexact number handling shared by every module.

Probabilities supplied as decimal strings become :class:`fractions.Fraction`
(rational mode). Binary floats are accepted but mark the value as inexact;
decisions on inexact values use :data:`FLOAT_MARGIN`.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

Number = Union[Fraction, float]

#: strictness margin for float-mode comparisons
FLOAT_MARGIN = 1e-12


class NumericallyAmbiguous(ArithmeticError):
    """A strict comparison in float mode fell inside the margin."""


def parse_number(value) -> Number:
    """Turn a JSON/CLI value into a Fraction (exact) or float (inexact).

    Strings are read exactly: ``"0.99"`` -> ``Fraction(99, 100)`` and
    ``"15/29"`` -> ``Fraction(15, 29)``. Python floats stay floats.
    """
    if isinstance(value, bool):
        raise TypeError(f"not a number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse number {value!r}") from exc
    raise TypeError(f"not a number: {value!r}")


def is_exact(x) -> bool:
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)


def all_exact(values: Iterable) -> bool:
    return all(is_exact(v) for v in values)


def _terminates(q: Fraction) -> bool:
    d = q.denominator
    for f in (2, 5):
        while d % f == 0:
            d //= f
    return d == 1


def format_number(x) -> str:
    """Lossless string form.

    Terminating rationals print as plain decimals (``"0.756"``), other
    rationals as ``"15/29"``, floats via ``repr``.
    """
    if isinstance(x, float):
        return repr(x)
    q = Fraction(x)
    if q.denominator == 1:
        return str(q.numerator)
    if not _terminates(q):
        return f"{q.numerator}/{q.denominator}"
    sign = "-" if q < 0 else ""
    q = abs(q)
    whole, rem = divmod(q.numerator, q.denominator)
    digits = []
    while rem:
        rem *= 10
        d, rem = divmod(rem, q.denominator)
        digits.append(str(d))
    return f"{sign}{whole}.{''.join(digits)}"


def format_vector(xs: Sequence) -> list[str]:
    return [format_number(x) for x in xs]


def to_float_mode(x) -> float:
    return float(x)


def strictly_greater(a, b, *, exact: bool) -> bool:
    """``a > b``; in float mode raise if |a - b| is within the margin."""
    if exact:
        return a > b
    diff = float(a) - float(b)
    if abs(diff) <= FLOAT_MARGIN:
        raise NumericallyAmbiguous(f"cannot decide {a!r} > {b!r} within {FLOAT_MARGIN}")
    return diff > 0


def ipow(base, exp: int):
    """Integer power by repeated squaring (works for Fraction and float)."""
    if exp < 0:
        raise ValueError("negative exponent")
    result = Fraction(1) if is_exact(base) else 1.0
    while exp:
        if exp & 1:
            result = result * base
        base = base * base
        exp >>= 1
    return result
