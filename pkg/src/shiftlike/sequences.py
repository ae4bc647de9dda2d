"""Two-sided eventually periodic rational sequences.

A :class:`PeriodicSeq` stores explicit values on a finite core window
``[k_min, k_max]`` and tiles a finite period array on each side:

* for ``k > k_max`` the value is ``right[(k - k_max - 1) % len(right)]``,
  i.e. the right period is read left-to-right starting just past the core;
* for ``k < k_min`` the value is ``left[(k - k_min) % len(left)]``,
  i.e. the left period tiles leftward with its *last* entry adjacent to
  the core.

All values are strictly positive Fractions, so min/max over core and
periods bound the whole sequence away from 0 and infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .exact import SpecValidationError, pow_fraction, require_positive


def _validated_values(values: Iterable, *, field: str) -> tuple[Fraction, ...]:
    out = tuple(Fraction(v) for v in values)
    for idx, v in enumerate(out):
        require_positive(v, field=f"{field}[{idx}]")
    return out


@dataclass(frozen=True)
class PeriodicSeq:
    """An eventually periodic sequence of positive rationals over the integers."""

    k_min: int
    core: tuple[Fraction, ...]
    left: tuple[Fraction, ...]
    right: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.core:
            raise SpecValidationError("core: must be nonempty")
        if not self.left or not self.right:
            raise SpecValidationError("left/right periods must be nonempty")
        object.__setattr__(self, "core", _validated_values(self.core, field="core"))
        object.__setattr__(self, "left", _validated_values(self.left, field="left_period"))
        object.__setattr__(self, "right", _validated_values(self.right, field="right_period"))

    @property
    def k_max(self) -> int:
        return self.k_min + len(self.core) - 1

    def lookup(self, k: int) -> Fraction:
        """Value at any integer index; total over all of Z."""
        if k < self.k_min:
            return self.left[(k - self.k_min) % len(self.left)]
        if k > self.k_max:
            return self.right[(k - self.k_max - 1) % len(self.right)]
        return self.core[k - self.k_min]

    def left_product(self) -> Fraction:
        return math.prod(self.left, start=Fraction(1))

    def right_product(self) -> Fraction:
        return math.prod(self.right, start=Fraction(1))

    def bounds(self) -> tuple[Fraction, Fraction]:
        values = self.core + self.left + self.right
        return min(values), max(values)

    def prefix_product(self, k: int) -> Fraction:
        """Product of lookup(1..k) for k >= 0, reciprocal of lookup(k+1..0) for k < 0.

        Satisfies prefix_product(k) / prefix_product(k-1) == lookup(k) for all k,
        with prefix_product(0) == 1.  Tail runs collapse to period-product powers
        so far indices stay cheap.
        """
        if k == 0:
            return Fraction(1)
        if k > 0:
            return self.range_product(1, k)
        return 1 / self.range_product(k + 1, 0)

    def range_product(self, lo: int, hi: int) -> Fraction:
        """Product of lookup(j) for j in [lo, hi], exact, with geometric shortcuts."""
        if lo > hi:
            return Fraction(1)
        total = Fraction(1)
        # left tail portion, below the core
        if lo < self.k_min:
            tail_hi = min(hi, self.k_min - 1)
            total *= self._tail_product_left(lo, tail_hi)
            lo = tail_hi + 1
            if lo > hi:
                return total
        # core portion
        if lo <= self.k_max:
            for j in range(lo, min(hi, self.k_max) + 1):
                total *= self.core[j - self.k_min]
            lo = self.k_max + 1
            if lo > hi:
                return total
        # right tail portion
        return total * self._tail_product_right(lo, hi)

    def _tail_product_left(self, lo: int, hi: int) -> Fraction:
        period = self.left
        plen = len(period)
        count = hi - lo + 1
        full, rem = divmod(count, plen)
        total = pow_fraction(self.left_product(), full)
        # remaining indices are lo .. lo+rem-1 (any contiguous run works; use lo side)
        for j in range(lo, lo + rem):
            total *= period[(j - self.k_min) % plen]
        return total

    def _tail_product_right(self, lo: int, hi: int) -> Fraction:
        period = self.right
        plen = len(period)
        count = hi - lo + 1
        full, rem = divmod(count, plen)
        total = pow_fraction(self.right_product(), full)
        for j in range(lo, lo + rem):
            total *= period[(j - self.k_max - 1) % plen]
        return total

    def scaled(self, factor: Fraction) -> "PeriodicSeq":
        factor = Fraction(factor)
        require_positive(factor, field="scale factor")
        return PeriodicSeq(
            self.k_min,
            tuple(v * factor for v in self.core),
            tuple(v * factor for v in self.left),
            tuple(v * factor for v in self.right),
        )

    def __eq__(self, other) -> bool:
        """Semantic equality: same function on all of Z.

        Beyond both cores each side is periodic with the lcm of the two
        period lengths, so agreement on the combined core plus one lcm
        period per side implies agreement everywhere.
        """
        if not isinstance(other, PeriodicSeq):
            return NotImplemented
        lo = min(self.k_min, other.k_min) - math.lcm(len(self.left), len(other.left))
        hi = max(self.k_max, other.k_max) + math.lcm(len(self.right), len(other.right))
        return all(self.lookup(k) == other.lookup(k) for k in range(lo, hi + 1))

    def __hash__(self):
        return hash((self.k_min, self.core))


def periodic_from_function(
    fn: Callable[[int], Fraction],
    k_min: int,
    k_max: int,
    left_len: int,
    right_len: int,
) -> PeriodicSeq:
    """Build a PeriodicSeq by sampling ``fn``.

    The caller guarantees ``fn`` is left-periodic with period ``left_len``
    for k < k_min and right-periodic with period ``right_len`` for k > k_max;
    the periods are sampled immediately outside the core so the tiling
    conventions line up by construction.
    """
    core = tuple(fn(k) for k in range(k_min, k_max + 1))
    left = tuple(fn(k) for k in range(k_min - left_len, k_min))
    right = tuple(fn(k) for k in range(k_max + 1, k_max + 1 + right_len))
    return PeriodicSeq(k_min, core, left, right)


@dataclass(frozen=True)
class GeometricTailSeq:
    """A positive sequence with explicit core values and periodic step *ratios*
    on each tail (so the values themselves are eventually geometric).

    * for ``k >= k_max``: ``value(k+1) = value(k) * rratio[(k - k_max) % len(rratio)]``
    * for ``k <= k_min``: ``value(k-1) = value(k) * lratio[(k_min - k) % len(lratio)]``
    """

    k_min: int
    core: tuple[Fraction, ...]
    lratio: tuple[Fraction, ...]
    rratio: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.core:
            raise SpecValidationError("core: must be nonempty")
        if not self.lratio or not self.rratio:
            raise SpecValidationError("tail ratio arrays must be nonempty")
        object.__setattr__(self, "core", _validated_values(self.core, field="core"))
        object.__setattr__(self, "lratio", _validated_values(self.lratio, field="left_ratios"))
        object.__setattr__(self, "rratio", _validated_values(self.rratio, field="right_ratios"))

    @property
    def k_max(self) -> int:
        return self.k_min + len(self.core) - 1

    def left_period_product(self) -> Fraction:
        """Per-period multiplicative growth stepping toward -inf."""
        return math.prod(self.lratio, start=Fraction(1))

    def right_period_product(self) -> Fraction:
        """Per-period multiplicative growth stepping toward +inf."""
        return math.prod(self.rratio, start=Fraction(1))

    def lookup(self, k: int) -> Fraction:
        if self.k_min <= k <= self.k_max:
            return self.core[k - self.k_min]
        if k > self.k_max:
            dist = k - self.k_max
            full, rem = divmod(dist, len(self.rratio))
            value = self.core[-1] * pow_fraction(self.right_period_product(), full)
            for j in range(rem):
                value *= self.rratio[j]
            return value
        dist = self.k_min - k
        full, rem = divmod(dist, len(self.lratio))
        value = self.core[0] * pow_fraction(self.left_period_product(), full)
        for j in range(rem):
            value *= self.lratio[j]
        return value

    def __eq__(self, other) -> bool:
        """Semantic equality as functions on Z (same window+period argument as
        PeriodicSeq, applied to the step-ratio sequences)."""
        if not isinstance(other, GeometricTailSeq):
            return NotImplemented
        lo = min(self.k_min, other.k_min) - math.lcm(len(self.lratio), len(other.lratio))
        hi = max(self.k_max, other.k_max) + math.lcm(len(self.rratio), len(other.rratio))
        return all(self.lookup(k) == other.lookup(k) for k in range(lo, hi + 1))

    def __hash__(self):
        return hash((self.k_min, self.core))


def geometric_from_function(
    fn: Callable[[int], Fraction],
    k_min: int,
    k_max: int,
    left_len: int,
    right_len: int,
) -> GeometricTailSeq:
    """Sample ``fn`` into a GeometricTailSeq; the caller guarantees the step
    ratios of ``fn`` are periodic outside [k_min, k_max] with the given lengths."""
    core = tuple(fn(k) for k in range(k_min, k_max + 1))
    lratio = tuple(fn(k_min - j - 1) / fn(k_min - j) for j in range(left_len))
    rratio = tuple(fn(k_max + j + 1) / fn(k_max + j) for j in range(right_len))
    return GeometricTailSeq(k_min, core, lratio, rratio)
