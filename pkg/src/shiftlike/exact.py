"""Exact rational arithmetic helpers.

Everything user-facing in this package is a positive rational (stored as
``fractions.Fraction``) or the symbol +inf.  Floats never enter the exact
code paths; they are produced only by explicit ``float()`` views.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

RationalLike = Union[int, Fraction, str]


class SpecValidationError(ValueError):
    """Raised when input data violates a documented precondition."""


class InvariantViolation(AssertionError):
    """Raised when an internal consistency check fails (a bug, not bad input)."""


def parse_rational(value: RationalLike, *, field: str = "value") -> Fraction:
    """Parse an exact rational from an int, Fraction, or "num/den" string.

    Floats are rejected outright: a float literal has already lost exactness
    before we see it, so accepting one would silently poison every downstream
    comparison.
    """
    if isinstance(value, bool):
        raise SpecValidationError(f"{field}: booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise SpecValidationError(
            f"{field}: float literal {value!r} rejected; use an exact string rational like \"1/3\""
        )
    if isinstance(value, str):
        text = value.strip()
        try:
            if "/" in text:
                num, den = text.split("/", 1)
                return Fraction(int(num.strip()), int(den.strip()))
            return Fraction(int(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecValidationError(f"{field}: malformed rational {value!r}: {exc}") from exc
    raise SpecValidationError(f"{field}: cannot interpret {type(value).__name__} as exact rational")


def format_rational(value: Fraction) -> str:
    """Render a Fraction as the canonical "num/den" (or bare integer) string."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def require_positive(value: Fraction, *, field: str) -> Fraction:
    if value <= 0:
        raise SpecValidationError(f"{field}: must be strictly positive, got {format_rational(value)}")
    return value


def pow_fraction(base: Fraction, exponent: int) -> Fraction:
    """base**exponent for integer exponent, exact."""
    if exponent >= 0:
        return base**exponent
    return 1 / (base ** (-exponent))


def compare_pow(x: Fraction, c: Fraction, p: Fraction) -> int:
    """Exactly compare x against c**p for positive rationals x, c and rational p.

    Returns -1, 0, or 1.  Since t -> t**(1/(p.denominator)) is monotone on the
    positives, x >= c**p iff x**den >= c**num where p = num/den in lowest terms.
    """
    if x <= 0 or c <= 0:
        raise ValueError("compare_pow expects positive operands")
    lhs = x**p.denominator
    rhs = c**p.numerator
    return (lhs > rhs) - (lhs < rhs)


class ExtendedRational:
    """A nonnegative rational extended with +inf, under measure conventions.

    Sums and products involving +inf are +inf (no 0*inf arises here: all
    finite operands in this package are measures, hence >= 0, and products
    with +inf only occur against strictly positive factors).
    """

    __slots__ = ("_value",)

    def __init__(self, value: Union[Fraction, int, None]):
        if value is None:
            self._value = None
        else:
            value = Fraction(value)
            if value < 0:
                raise ValueError("ExtendedRational holds nonnegative values only")
            self._value = value

    @classmethod
    def infinity(cls) -> "ExtendedRational":
        return cls(None)

    @property
    def is_finite(self) -> bool:
        return self._value is not None

    @property
    def value(self) -> Fraction:
        if self._value is None:
            raise ValueError("+inf has no finite value")
        return self._value

    def __add__(self, other: "ExtendedRational") -> "ExtendedRational":
        other = _coerce(other)
        if self._value is None or other._value is None:
            return ExtendedRational.infinity()
        return ExtendedRational(self._value + other._value)

    __radd__ = __add__

    def __mul__(self, other) -> "ExtendedRational":
        other = _coerce(other)
        if self._value is None or other._value is None:
            if (self._value is not None and self._value == 0) or (
                other._value is not None and other._value == 0
            ):
                raise ValueError("0 * inf is undefined")
            return ExtendedRational.infinity()
        return ExtendedRational(self._value * other._value)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        try:
            other = _coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self._value == other._value

    def __lt__(self, other) -> bool:
        other = _coerce(other)
        if self._value is None:
            return False
        if other._value is None:
            return True
        return self._value < other._value

    def __le__(self, other) -> bool:
        return self == other or self < other

    def __hash__(self) -> int:
        return hash(self._value)

    def __float__(self) -> float:
        return float("inf") if self._value is None else float(self._value)

    def __repr__(self) -> str:
        return "ExtendedRational(inf)" if self._value is None else f"ExtendedRational({self._value!r})"

    def __str__(self) -> str:
        return "inf" if self._value is None else format_rational(self._value)


def _coerce(value) -> ExtendedRational:
    if isinstance(value, ExtendedRational):
        return value
    if isinstance(value, (int, Fraction)):
        return ExtendedRational(value)
    raise TypeError(f"cannot coerce {type(value).__name__} to ExtendedRational")
