"""Exact scalars of the form r * q**(1/p).

Applying a weighted shift, the factor map, or the conjugacy isometry
multiplies coefficients by p-th roots of rationals.  Tracking the rational
part ``r`` and the radicand ``q`` separately keeps every identity in this
package exactly checkable:

* equality: r1*q1**(1/p) == r2*q2**(1/p) iff the signs agree and
  |r1|**a * q1**b == |r2|**a * q2**b with p = a/b in lowest terms
  (raising to the power p*b = a is monotone on the nonnegatives);
* p-th powers of magnitudes: |r*q**(1/p)|**p = |r|**p * q, which is the
  rational |r|**p * q when p is an integer, and otherwise is kept as the
  formal pair (|r|, q) inside :func:`norm_terms` sums.

Addition is supported only between scalars sharing the same radicand
(or zero); that covers every operation in this package, where sums mix
coefficients living on a common cell level.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, int, float, "RadicalScalar"]


@dataclass(frozen=True)
class RadicalScalar:
    """Exact value r * q**(1/p) with r rational and q a positive rational."""

    r: Fraction
    q: Fraction
    p: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        object.__setattr__(self, "q", Fraction(self.q))
        object.__setattr__(self, "p", Fraction(self.p))
        if self.q <= 0:
            raise ValueError("radicand must be positive")
        if self.r == 0 and self.q != 1:
            object.__setattr__(self, "q", Fraction(1))

    @classmethod
    def of(cls, value, p) -> "RadicalScalar":
        if isinstance(value, RadicalScalar):
            return value
        return cls(Fraction(value), Fraction(1), Fraction(p))

    def is_zero(self) -> bool:
        return self.r == 0

    def times_rational(self, s) -> "RadicalScalar":
        return RadicalScalar(self.r * Fraction(s), self.q, self.p)

    def times_root(self, q) -> "RadicalScalar":
        """Multiply by q**(1/p) for a positive rational q."""
        return RadicalScalar(self.r, self.q * Fraction(q), self.p)

    def __add__(self, other: "RadicalScalar") -> "RadicalScalar":
        if not isinstance(other, RadicalScalar):
            other = RadicalScalar.of(other, self.p)
        if self.p != other.p:
            raise ValueError("cannot add scalars with different exponents")
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.q != other.q:
            raise ValueError(
                "cannot add exact scalars with different radicands "
                f"({self.q} vs {other.q}); use float mode for this computation"
            )
        return RadicalScalar(self.r + other.r, self.q, self.p)

    def __neg__(self) -> "RadicalScalar":
        return RadicalScalar(-self.r, self.q, self.p)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RadicalScalar.of(other, self.p)
        if not isinstance(other, RadicalScalar):
            return NotImplemented
        if self.p != other.p:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        if (self.r > 0) != (other.r > 0):
            return False
        a, b = self.p.numerator, self.p.denominator
        return abs(self.r) ** a * self.q**b == abs(other.r) ** a * other.q**b

    def __hash__(self):
        return hash((self.r, self.q, self.p))

    def abs_pth_power_term(self) -> tuple[Fraction, Fraction]:
        """|self|**p as the formal pair (base, mult) meaning base**p * mult."""
        return abs(self.r), self.q

    def abs_pth_power_exact(self) -> Fraction:
        """|self|**p as a Fraction; requires integer p."""
        if self.p.denominator != 1:
            raise ValueError("exact p-th power needs integer p")
        return abs(self.r) ** self.p.numerator * self.q

    def __float__(self) -> float:
        return float(self.r) * float(self.q) ** (1.0 / float(self.p))

    def __repr__(self) -> str:
        if self.q == 1:
            return f"RadicalScalar({self.r})"
        return f"RadicalScalar({self.r} * ({self.q})**(1/{self.p}))"


def scalar_is_exact(value: Scalar) -> bool:
    return isinstance(value, (int, Fraction, RadicalScalar))


def scalar_float(value: Scalar) -> float:
    return float(value)


def scalar_times_root(value: Scalar, q: Fraction, p: Fraction) -> Scalar:
    """Multiply a coefficient by q**(1/p), staying exact when the input is."""
    if isinstance(value, float):
        return value * float(q) ** (1.0 / float(p))
    return RadicalScalar.of(value, p).times_root(q)


def scalar_abs_pth_power(value: Scalar, p: Fraction) -> Union[Fraction, float]:
    """|value|**p, exact (Fraction) when possible, else float.

    Exact cases: any exact scalar with integer p, and plain rationals whose
    p-th power happens to be rational are NOT chased beyond that; callers
    needing exact comparisons at fractional p use :func:`norm_terms` instead.
    """
    if isinstance(value, float):
        return abs(value) ** float(p)
    rs = RadicalScalar.of(value, p)
    if p.denominator == 1:
        return rs.abs_pth_power_exact()
    base, mult = rs.abs_pth_power_term()
    return abs(float(base)) ** float(p) * float(mult)


class NormTerms:
    """Formal sum of terms base**p * mult with rational base >= 0 and mult.

    Comparing two such sums term-by-term (after merging equal bases) is a
    sound exactness check: the identities verified in this package hold with
    matching bases on both sides, so formal equality is also complete for
    them.  With integer p the sum collapses to a single Fraction.
    """

    def __init__(self, p: Fraction):
        self.p = Fraction(p)
        self._terms: dict[Fraction, Fraction] = {}

    def add(self, value: Scalar, mult: Fraction) -> None:
        base, extra = RadicalScalar.of(value, self.p).abs_pth_power_term()
        if base == 0 or mult == 0:
            return
        key = base
        self._terms[key] = self._terms.get(key, Fraction(0)) + extra * Fraction(mult)
        if self._terms[key] == 0:
            del self._terms[key]

    def collapse_exact(self) -> Fraction:
        if self.p.denominator != 1:
            raise ValueError("exact collapse needs integer p")
        return sum((b ** self.p.numerator * m for b, m in self._terms.items()), Fraction(0))

    def __float__(self) -> float:
        return sum(float(b) ** float(self.p) * float(m) for b, m in self._terms.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, NormTerms):
            return NotImplemented
        if self.p != other.p:
            return False
        if self.p.denominator == 1:
            return self.collapse_exact() == other.collapse_exact()
        return self._terms == other._terms

    def __hash__(self):
        return hash((self.p, tuple(sorted(self._terms.items()))))
