"""Data model: weight sequences, dissipative measure systems, iterate measures.

Three equivalent views of the same dynamical data, with exact conversions:

* :class:`WeightSpec` - the weight sequence of a bilateral weighted backward
  shift, stored as p-th powers w_k**p so every comparison downstream is a
  rational comparison.
* :class:`DissipativeModel` - an atomic measure system (atoms B_1..B_m of a
  generating set W, per-atom measure-ratio sequences), the domain a
  composition operator acts on.
* :class:`MeasureSeq` - the normalized iterate-measure sequence
  nu(k) = mu(f^k(W)) / mu(W), eventually geometric, anchored at nu(0) = 1.

The representable class is eventually periodic weight data, which makes all
limit/sup/series criteria in the classifier exactly decidable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import (
    ExtendedRational,
    InvariantViolation,
    SpecValidationError,
    format_rational,
    pow_fraction,
    require_positive,
)
from .sequences import GeometricTailSeq, PeriodicSeq, geometric_from_function, periodic_from_function


def _validate_exponent(p) -> Fraction:
    p = Fraction(p)
    if p < 1:
        raise SpecValidationError(f"p: exponent must be >= 1, got {format_rational(p)}")
    return p


@dataclass(frozen=True)
class WeightSpec:
    """Eventually periodic weights of an invertible weighted backward shift.

    ``seq`` stores w_k**p.  Positivity of every stored value bounds the
    weights away from 0 and infinity (so the shift is invertible); the
    float view ``weight_float`` is the only place a p-th root is taken.
    """

    p: Fraction
    seq: PeriodicSeq

    def __post_init__(self):
        object.__setattr__(self, "p", _validate_exponent(self.p))
        lo, hi = self.seq.bounds()
        if not (0 < lo <= hi):
            raise InvariantViolation("weight powers must be positive and bounded")

    @classmethod
    def build(cls, p, k_min: int, core: Sequence, left_period: Sequence, right_period: Sequence) -> "WeightSpec":
        return cls(Fraction(p), PeriodicSeq(k_min, tuple(map(Fraction, core)), tuple(map(Fraction, left_period)), tuple(map(Fraction, right_period))))

    @classmethod
    def constant(cls, p, wpow) -> "WeightSpec":
        wpow = Fraction(wpow)
        return cls.build(p, 0, [wpow], [wpow], [wpow])

    def weight_pow(self, k: int) -> Fraction:
        """w_k**p, exact."""
        return self.seq.lookup(k)

    def weight_float(self, k: int) -> float:
        """w_k as a float (p-th root of the stored power)."""
        return float(self.seq.lookup(k)) ** (1.0 / float(self.p))

    def product_pow(self, k: int, n: int) -> Fraction:
        """(w_{k+1} * ... * w_{k+n})**p for n >= 0, exact."""
        if n < 0:
            raise ValueError("n must be >= 0")
        return self.seq.range_product(k + 1, k + n)

    def scaled_pow(self, factor_pow: Fraction) -> "WeightSpec":
        """Scale every weight by factor_pow**(1/p), i.e. multiply stored powers."""
        return WeightSpec(self.p, self.seq.scaled(Fraction(factor_pow)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightSpec):
            return NotImplemented
        return self.p == other.p and self.seq == other.seq

    def __hash__(self):
        return hash((self.p, self.seq))


@dataclass(frozen=True)
class MeasureSeq:
    """nu(k) = mu(f^k(W)) / mu(W): positive, eventually geometric, nu(0) = 1."""

    seq: GeometricTailSeq

    def __post_init__(self):
        if not (self.seq.k_min <= 0 <= self.seq.k_max):
            raise SpecValidationError("measure sequence core window must contain index 0")
        if self.seq.lookup(0) != 1:
            raise SpecValidationError("measure sequence must be normalized to value 1 at index 0")

    def value(self, k: int) -> Fraction:
        return self.seq.lookup(k)

    def left_rate(self) -> Fraction:
        """Per-period multiplicative growth of nu stepping toward -inf."""
        return self.seq.left_period_product()

    def right_rate(self) -> Fraction:
        """Per-period multiplicative growth of nu stepping toward +inf."""
        return self.seq.right_period_product()

    @property
    def k_min(self) -> int:
        return self.seq.k_min

    @property
    def k_max(self) -> int:
        return self.seq.k_max

    @property
    def left_len(self) -> int:
        return len(self.seq.lratio)

    @property
    def right_len(self) -> int:
        return len(self.seq.rratio)

    def sum_all(self) -> ExtendedRational:
        """Sum of nu(k) over all integers; +inf unless both tails decay.

        Each tail is a union of geometric series with common ratio equal to
        the per-period product, so the sum has a closed form.
        """
        qL = self.left_rate()
        qR = self.right_rate()
        if qL >= 1 or qR >= 1:
            return ExtendedRational.infinity()
        total = sum((self.seq.core[i] for i in range(len(self.seq.core))), Fraction(0))
        right_block = sum(
            (self.value(self.k_max + 1 + j) for j in range(self.right_len)), Fraction(0)
        )
        left_block = sum(
            (self.value(self.k_min - 1 - j) for j in range(self.left_len)), Fraction(0)
        )
        total += right_block / (1 - qR) + left_block / (1 - qL)
        return ExtendedRational(total)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MeasureSeq):
            return NotImplemented
        return self.seq == other.seq

    def __hash__(self):
        return hash(self.seq)


@dataclass(frozen=True)
class DissipativeModel:
    """Atomic model of a dissipative system of bounded distortion.

    ``atom_measures[i]`` is mu(B_i); ``atom_ratio_seqs[i].lookup(k)`` is the
    step ratio mu(f^k(B_i)) / mu(f^{k-1}(B_i)).  The cells f^k(B_i) partition
    the space, so every measure quantity is a finite sum of exact products.

    Construct through :func:`build_model`, which performs the admissibility
    checks; direct construction skips them (used only by tests probing the
    rejected class).
    """

    p: Fraction
    atom_measures: tuple[Fraction, ...]
    atom_ratio_seqs: tuple[PeriodicSeq, ...]

    def __post_init__(self):
        object.__setattr__(self, "p", _validate_exponent(self.p))
        object.__setattr__(self, "atom_measures", tuple(Fraction(v) for v in self.atom_measures))

    @property
    def num_atoms(self) -> int:
        return len(self.atom_measures)

    def mu_generator(self) -> Fraction:
        """mu(W) = sum of atom measures."""
        return sum(self.atom_measures, Fraction(0))

    def mu_cell(self, k: int, i: int) -> Fraction:
        """mu(f^k(B_i)) = mu(B_i) * (product of step ratios from 0 to k)."""
        return self.atom_measures[i] * self.atom_ratio_seqs[i].prefix_product(k)

    def mu_iterate(self, k: int) -> Fraction:
        """mu(f^k(W)) = sum over atoms of mu(f^k(B_i))."""
        return sum((self.mu_cell(k, i) for i in range(self.num_atoms)), Fraction(0))

    def core_window(self) -> tuple[int, int]:
        lo = min(s.k_min for s in self.atom_ratio_seqs)
        hi = max(s.k_max for s in self.atom_ratio_seqs)
        return lo, hi

    def period_lcms(self) -> tuple[int, int]:
        left = math.lcm(*(len(s.left) for s in self.atom_ratio_seqs))
        right = math.lcm(*(len(s.right) for s in self.atom_ratio_seqs))
        return left, right


def build_model(p, atom_measures: Sequence, atom_ratio_seqs: Sequence[PeriodicSeq]) -> DissipativeModel:
    """Validate and build a DissipativeModel.

    Rejects empty atom lists, nonpositive data, and atom ratio tails whose
    normalized per-period products disagree: in that case the measure ratio
    of one atom against the aggregate drifts geometrically, the distortion
    constant diverges, and the system leaves the bounded-distortion class.
    The rejection message carries a finite certificate window exhibiting the
    drift.
    """
    if len(atom_measures) == 0:
        raise SpecValidationError("atoms: at least one atom required")
    if len(atom_measures) != len(atom_ratio_seqs):
        raise SpecValidationError("atoms and ratio_seqs must have equal length")
    measures = tuple(Fraction(v) for v in atom_measures)
    for i, v in enumerate(measures):
        require_positive(v, field=f"atoms[{i}]")
    model = DissipativeModel(Fraction(p), measures, tuple(atom_ratio_seqs))
    _check_comparable_tails(model)
    return model


def _check_comparable_tails(model: DissipativeModel) -> None:
    """All atoms must share normalized per-period tail products on each side."""
    lcm_left, lcm_right = model.period_lcms()
    for side, lcm_len in (("right", lcm_right), ("left", lcm_left)):
        normalized: list[Fraction] = []
        for seq in model.atom_ratio_seqs:
            if side == "right":
                product, plen = seq.right_product(), len(seq.right)
            else:
                product, plen = seq.left_product(), len(seq.left)
            normalized.append(pow_fraction(product, lcm_len // plen))
        baseline = normalized[0]
        for i, q in enumerate(normalized):
            if q != baseline:
                raise SpecValidationError(
                    f"atom ratio tails are not comparable on the {side} side: "
                    f"atom 0 grows by {format_rational(baseline)} per {lcm_len} steps, "
                    f"atom {i} by {format_rational(q)}; the distortion bound diverges "
                    f"(certificate window: k = 1..{4 * lcm_len} {'' if side == 'right' else 'mirrored'})"
                )


def distortion_constant(model: DissipativeModel) -> ExtendedRational:
    """Minimal K >= 1 bounding mu(f^k(B))/mu(B) against mu(f^k(W))/mu(W).

    For B a union of atoms, mu(f^k(B))/mu(B) is a weighted mean (weights
    mu(B_i)) of the single-atom ratios, so it lies between their min and max:
    the extremal deviation over all measurable B <= W is attained on single
    atoms, and it suffices to scan those.

    In k, every single-atom ratio against the aggregate is exactly periodic
    beyond the core (validated tails share per-period products), so the sup
    over all k is attained on the core window widened by one lcm period per
    side.  Hence K is always finite here; +inf cannot occur.
    """
    lo, hi = model.core_window()
    lcm_left, lcm_right = model.period_lcms()
    mu_w = model.mu_generator()
    best = Fraction(1)
    for k in range(lo - lcm_left, hi + lcm_right + 1):
        nu_k = model.mu_iterate(k) / mu_w
        for i in range(model.num_atoms):
            c = (model.mu_cell(k, i) / model.atom_measures[i]) / nu_k
            best = max(best, c, 1 / c)
    return ExtendedRational(best)


def weights_from_model(model: DissipativeModel) -> WeightSpec:
    """w_k**p = mu(f^{k-1}(W)) / mu(f^k(W)), exact."""
    lo, hi = model.core_window()
    lcm_left, lcm_right = model.period_lcms()

    def wpow(k: int) -> Fraction:
        return model.mu_iterate(k - 1) / model.mu_iterate(k)

    # Beyond the shared core every atom steps periodically, so the aggregate
    # ratio is periodic for k <= lo and for k >= hi + 1.
    seq = periodic_from_function(wpow, lo, hi + 1, lcm_left, lcm_right)
    return WeightSpec(model.p, seq)


def measure_seq_from_model(model: DissipativeModel) -> MeasureSeq:
    """nu(k) = mu(f^k(W)) / mu(W), exact."""
    lo, hi = model.core_window()
    lcm_left, lcm_right = model.period_lcms()
    mu_w = model.mu_generator()

    def nu(k: int) -> Fraction:
        return model.mu_iterate(k) / mu_w

    # The step from index k down to k-1 divides by the atom ratios at index
    # k, so steps are periodic only from one index below the atom cores on.
    lo = min(lo - 1, 0)
    hi = max(hi, 0)
    return MeasureSeq(geometric_from_function(nu, lo, hi, lcm_left, lcm_right))


def measure_seq_from_weights(w: WeightSpec) -> MeasureSeq:
    """nu(0) = 1, nu(k) = nu(k-1) / w_k**p, exact.

    Unwinds to nu(k) = 1/(w_1...w_k)**p for k > 0 and
    nu(k) = (w_{k+1}...w_0)**p for k < 0.
    """

    def nu(k: int) -> Fraction:
        return 1 / w.product_pow(0, k) if k >= 0 else w.seq.range_product(k + 1, 0)

    lo = min(0, w.seq.k_min - 1)
    hi = max(0, w.seq.k_max)
    return MeasureSeq(geometric_from_function(nu, lo, hi, len(w.seq.left), len(w.seq.right)))


def weights_from_measure_seq(nu: MeasureSeq, p) -> WeightSpec:
    """w_k**p = nu(k-1) / nu(k), exact."""

    def wpow(k: int) -> Fraction:
        return nu.value(k - 1) / nu.value(k)

    seq = periodic_from_function(wpow, nu.k_min, nu.k_max + 1, nu.left_len, nu.right_len)
    return WeightSpec(Fraction(p), seq)


def model_from_weights(w: WeightSpec) -> DissipativeModel:
    """Canonical single-atom model conjugate to the shift: mu(W) = 1 and
    mu(f^k(W)) = nu(k), so the distortion constant is exactly 1."""

    def ratio(k: int) -> Fraction:
        # step ratio nu(k)/nu(k-1) = 1 / w_k**p
        return 1 / w.weight_pow(k)

    seq = periodic_from_function(ratio, w.seq.k_min, w.seq.k_max, len(w.seq.left), len(w.seq.right))
    return build_model(w.p, (Fraction(1),), (seq,))


def mu_total(model: DissipativeModel) -> ExtendedRational:
    """mu(X) = sum over k of mu(f^k(W)); +inf unless both iterate-measure
    tails decay geometrically."""
    return measure_seq_from_model(model).sum_all() * ExtendedRational(model.mu_generator())
