"""Exact decision procedures for the dynamical properties.

Every decider works on exact rational data: the iterate-measure sequence
(for the chaos-family and expansivity criteria) or the weight powers (for
the shadowing trichotomy).  On eventually periodic specs each criterion
reduces to finitely many rational comparisons:

* the tails of the measure sequence are geometric, so limits, liminfs,
  sups, and series against the tails are governed by the per-period
  products compared against 1;
* quantifiers over all integers reduce to the core window widened by one
  period (or one lcm of periods) per side, by periodicity.

Verdicts are tri-state; every yes/no carries a certificate that
:func:`verify_certificate` can recheck with independent, definition-level
computations (direct lookups and brute-force window sups, not the decision
tables used here).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .exact import InvariantViolation, format_rational
from .model import (
    DissipativeModel,
    MeasureSeq,
    WeightSpec,
    measure_seq_from_model,
    measure_seq_from_weights,
    weights_from_model,
)

YES = "yes"
NO = "no"
INCONCLUSIVE = "inconclusive"

PROPERTY_NAMES = (
    "li_yorke",
    "hypercyclic",
    "mixing",
    "chaotic",
    "frequently_hypercyclic",
    "expansive",
    "uniformly_expansive",
    "shadowing",
    "generalized_hyperbolic",
)


@dataclass(frozen=True)
class Verdict:
    value: str
    certificate: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.value not in (YES, NO, INCONCLUSIVE):
            raise ValueError(f"bad verdict value {self.value!r}")

    def __bool__(self) -> bool:
        return self.value == YES


@dataclass(frozen=True)
class TailRates:
    """Per-period products of the stored weight powers over each tail.

    Comparisons against 1 are exact: the per-step geometric-mean rate is
    product**(1/(len*p)), which is >, =, < 1 exactly when the product is.
    """

    left_product: Fraction
    left_len: int
    right_product: Fraction
    right_len: int

    def left_vs_one(self) -> int:
        return (self.left_product > 1) - (self.left_product < 1)

    def right_vs_one(self) -> int:
        return (self.right_product > 1) - (self.right_product < 1)


def tail_rates(w: WeightSpec) -> TailRates:
    return TailRates(
        left_product=w.seq.left_product(),
        left_len=len(w.seq.left),
        right_product=w.seq.right_product(),
        right_len=len(w.seq.right),
    )


@dataclass(frozen=True)
class PropertyReport:
    li_yorke: Verdict
    hypercyclic: Verdict
    mixing: Verdict
    chaotic: Verdict
    frequently_hypercyclic: Verdict
    expansive: Verdict
    uniformly_expansive: Verdict
    shadowing: Verdict
    generalized_hyperbolic: Verdict
    notes: tuple[str, ...] = ()

    def verdicts(self) -> dict[str, Verdict]:
        return {name: getattr(self, name) for name in PROPERTY_NAMES}

    def check_hierarchy(self) -> None:
        """Enforce the implication structure every report must satisfy."""
        v = self.verdicts()
        if v["chaotic"].value != v["frequently_hypercyclic"].value:
            raise InvariantViolation("chaotic and frequently hypercyclic verdicts must coincide")
        chain = ("chaotic", "mixing", "hypercyclic", "li_yorke")
        for stronger, weaker in zip(chain, chain[1:]):
            if v[stronger].value == YES and v[weaker].value != YES:
                raise InvariantViolation(f"{stronger}=yes requires {weaker}=yes")
        if v["uniformly_expansive"].value == YES and v["expansive"].value != YES:
            raise InvariantViolation("uniform expansivity requires expansivity")
        if v["shadowing"].value != v["generalized_hyperbolic"].value:
            raise InvariantViolation(
                "on this spec class the shadowing trichotomy and the splitting "
                "criterion coincide; differing verdicts indicate a bug"
            )


def _rate_cert(nu: MeasureSeq) -> dict:
    return {
        "left_rate": format_rational(nu.left_rate()),
        "left_len": nu.left_len,
        "right_rate": format_rational(nu.right_rate()),
        "right_len": nu.right_len,
    }


def is_li_yorke(nu: MeasureSeq) -> Verdict:
    """Irregular-vector criterion, decided on the measure sequence.

    Condition (a): liminf of nu toward -inf is 0, which for a geometric left
    tail means the per-period product stepping left is < 1.
    Condition (b): sup over h, n >= 1 of nu(h) / nu(h+n) is infinite.  With
    geometric tails that sup is infinite exactly when the right tail decays
    (fix h, grow n) or the left tail grows toward -inf (fix h+n, shrink h);
    otherwise nu is bounded above on every left ray and bounded below away
    from 0 on every right ray, making all drop ratios bounded.  The full
    nine-case table (left rate, right rate) x (<1, =1, >1) is in the README
    and validated against a brute-force sup in the tests.
    """
    qL, qR = nu.left_rate(), nu.right_rate()
    cert = _rate_cert(nu)
    cond_a = qL < 1
    cond_b = qR < 1 or qL > 1
    if cond_a and cond_b:
        cert["condition_a"] = "left tail of nu decays toward -inf"
        cert["condition_b"] = (
            "right tail decays: take h fixed, n -> +inf"
            if qR < 1
            else "left tail grows: take h -> -inf with h+n fixed"
        )
        return Verdict(YES, cert)
    cert["failed"] = "(a)" if not cond_a else "(b)"
    return Verdict(NO, cert)


def is_hypercyclic(nu: MeasureSeq) -> Verdict:
    """Needs nu(n) -> 0 along some sequence going to +inf and -inf
    simultaneously with all window offsets; with geometric tails this holds
    exactly when both per-period products are < 1."""
    qL, qR = nu.left_rate(), nu.right_rate()
    cert = _rate_cert(nu)
    if qL < 1 and qR < 1:
        return Verdict(YES, cert)
    cert["obstruction"] = ("left" if qL >= 1 else "right") + " tail of nu does not vanish"
    return Verdict(NO, cert)


def is_mixing(nu: MeasureSeq) -> Verdict:
    """nu(n) -> 0 as |n| -> inf.  On eventually geometric data convergence
    along all n coincides with convergence along a subsequence, so mixing and
    hypercyclicity coincide for this class; the report carries the note."""
    verdict = is_hypercyclic(nu)
    cert = dict(verdict.certificate)
    cert["note"] = "coincides with hypercyclicity on eventually periodic specs"
    return Verdict(verdict.value, cert)


def is_chaotic_fh(nu: MeasureSeq) -> Verdict:
    """Chaos and frequent hypercyclicity hold together, exactly when the
    total mass of nu over Z is finite (a pair of geometric series)."""
    total = nu.sum_all()
    cert = _rate_cert(nu)
    if total.is_finite:
        cert["nu_total"] = format_rational(total.value)
        return Verdict(YES, cert)
    cert["obstruction"] = "nu has infinite total mass"
    return Verdict(NO, cert)


def is_expansive(nu: MeasureSeq) -> Verdict:
    """sup over n of nu(n) is infinite iff some tail grows per period; a
    finite core and product-<=1 tails keep the sequence bounded."""
    qL, qR = nu.left_rate(), nu.right_rate()
    cert = _rate_cert(nu)
    if qL > 1 or qR > 1:
        cert["growing_tail"] = "left" if qL > 1 else "right"
        return Verdict(YES, cert)
    sup, arg = _bounded_sup(nu)
    cert["sup_nu"] = format_rational(sup)
    cert["sup_at"] = arg
    return Verdict(NO, cert)


def _bounded_sup(nu: MeasureSeq) -> tuple[Fraction, int]:
    """Max of nu and its argmax when both tail products are <= 1 (then the
    sup over each tail is attained within its first period)."""
    lo = nu.k_min - nu.left_len
    hi = nu.k_max + nu.right_len
    best_k = max(range(lo, hi + 1), key=lambda k: nu.value(k))
    return nu.value(best_k), best_k


def uniform_expansivity_bound(nu: MeasureSeq) -> int:
    """Search bound for the witness exponent: beyond one lcm of the tail
    periods past the core, the per-exponent check repeats, so a fixed
    multiple of the structure size is searched before answering
    inconclusive."""
    span = nu.k_max - nu.k_min
    return span + 4 * math.lcm(nu.left_len, nu.right_len) + 8


def _uniform_check_at(nu: MeasureSeq, n: int, cp_num: int, cp_den: int, c: Fraction) -> Optional[int]:
    """Exact forall-i check of max(nu(i-n), nu(i+n)) >= c**p * nu(i).

    Returns None if the check holds for every integer i, else a failing i.
    For |i| beyond the core widened by n, all three indices sit in one tail
    and the ratios are periodic in i, so scanning one extra period per side
    decides the quantifier.
    """
    lo = nu.k_min - n - nu.left_len
    hi = nu.k_max + n + nu.right_len
    for i in range(lo, hi + 1):
        ratio = max(nu.value(i - n), nu.value(i + n)) / nu.value(i)
        # ratio >= c**p iff ratio**den >= c**num (p = num/den in lowest terms)
        if ratio**cp_den < c**cp_num:
            return i
    return None


def is_uniformly_expansive(nu: MeasureSeq, p, c=Fraction(2)) -> Verdict:
    """Is there a single exponent n >= 1 with max(nu(i-n), nu(i+n)) >= c**p * nu(i)
    for every i?  (The basis-vector dichotomy with threshold c, compared in
    p-th powers so the check is exact for rational p.)

    If both tails have per-period product <= 1 the sequence attains a finite
    maximum, where both ratios are <= 1 < c**p for every n: definitive no.
    Otherwise exponents are searched up to a structure-determined bound and
    the answer is inconclusive if the bound is exhausted - an honest output,
    never a guess.
    """
    c = Fraction(c)
    if c <= 1:
        raise ValueError("threshold c must be > 1")
    p = Fraction(p)
    qL, qR = nu.left_rate(), nu.right_rate()
    cert = _rate_cert(nu)
    cert["c"] = format_rational(c)
    if qL <= 1 and qR <= 1:
        sup, arg = _bounded_sup(nu)
        cert["argmax"] = arg
        cert["sup_nu"] = format_rational(sup)
        cert["reason"] = "at the argmax of nu both ratios are <= 1 < c**p for every exponent"
        return Verdict(NO, cert)
    n_max = uniform_expansivity_bound(nu)
    pb = p.numerator, p.denominator
    for n in range(1, n_max + 1):
        failing = _uniform_check_at(nu, n, pb[0], pb[1], c)
        if failing is None:
            cert["witness_n"] = n
            return Verdict(YES, cert)
    cert["searched_up_to"] = n_max
    return Verdict(INCONCLUSIVE, cert)


def has_shadowing(w: WeightSpec) -> Verdict:
    """Trichotomy on the tail rates of the weight powers.

    Writing gm for the per-period product of w**p over a tail:

    * contraction: both gm < 1 (forward orbits of basis vectors decay
      uniformly);
    * expansion: both gm > 1 (backward orbits decay uniformly);
    * splitting: left gm < 1 < right gm.  The backward shift maps
      span{e_k : k <= 0} into itself and contracts it iff the left rate is
      < 1, and its inverse maps span{e_k : k >= 1} into itself and contracts
      it iff the right rate is > 1.  The mirrored arrangement leaves neither
      half invariant in the contracted direction and is classified no.

    Unit rates are strict failures: a tail with per-period product exactly 1
    yields orbit norms bounded away from 0 and infinity along that tail, and
    bounded pseudo-orbit errors accumulate linearly (the window-optimizer
    oracle exhibits the growth).  Core transients only change equivalent-norm
    constants, never the verdict.
    """
    rates = tail_rates(w)
    cert = {
        "left_rate": format_rational(rates.left_product),
        "left_len": rates.left_len,
        "right_rate": format_rational(rates.right_product),
        "right_len": rates.right_len,
    }
    lv, rv = rates.left_vs_one(), rates.right_vs_one()
    if lv < 0 and rv < 0:
        cert["condition"] = "A"
        return Verdict(YES, cert)
    if lv > 0 and rv > 0:
        cert["condition"] = "B"
        return Verdict(YES, cert)
    if lv < 0 and rv > 0:
        cert["condition"] = "C"
        cert["splitting_index"] = 0
        return Verdict(YES, cert)
    if lv == 0 or rv == 0:
        cert["unit_rate_side"] = "left" if lv == 0 else "right"
        return Verdict(NO, cert)
    cert["obstruction"] = "expanding toward -inf and contracting toward +inf (mirrored splitting)"
    return Verdict(NO, cert)


def is_generalized_hyperbolic(w: WeightSpec) -> Verdict:
    """Invariant-splitting criterion: same trichotomy as shadowing, with the
    splitting recorded (trivial whole/zero splittings for the uniform cases,
    index 0 for the genuine one)."""
    base = has_shadowing(w)
    cert = dict(base.certificate)
    if base.value == YES:
        cond = cert["condition"]
        cert["splitting"] = {
            "A": "whole space contracted forward (unstable part trivial)",
            "B": "whole space contracted backward (stable part trivial)",
            "C": "stable span{e_k : k <= 0}, unstable span{e_k : k >= 1}",
        }[cond]
        return Verdict(YES, cert)
    return Verdict(NO, cert)


def _classify_measure_side(nu: MeasureSeq, p, c) -> dict[str, Verdict]:
    chaotic = is_chaotic_fh(nu)
    return {
        "li_yorke": is_li_yorke(nu),
        "hypercyclic": is_hypercyclic(nu),
        "mixing": is_mixing(nu),
        "chaotic": chaotic,
        "frequently_hypercyclic": chaotic,
        "expansive": is_expansive(nu),
        "uniformly_expansive": is_uniformly_expansive(nu, p, c),
    }


def classify(spec: Union[WeightSpec, DissipativeModel], c=Fraction(2)) -> PropertyReport:
    """Run all deciders on a weight spec or a dissipative model.

    Model input is ingested along both conversion routes (directly to the
    measure sequence, and through the derived weights back to the measure
    sequence); the routes must agree exactly or an invariant violation is
    raised.
    """
    notes = ["hypercyclicity and mixing coincide on eventually periodic specs"]
    if isinstance(spec, DissipativeModel):
        nu = measure_seq_from_model(spec)
        w = weights_from_model(spec)
        if measure_seq_from_weights(w) != nu:
            raise InvariantViolation("model and weight ingestion disagree on the measure sequence")
        p = spec.p
    elif isinstance(spec, WeightSpec):
        w = spec
        nu = measure_seq_from_weights(w)
        p = w.p
    else:
        raise TypeError(f"cannot classify {type(spec).__name__}")
    verdicts = _classify_measure_side(nu, p, c)
    verdicts["shadowing"] = has_shadowing(w)
    verdicts["generalized_hyperbolic"] = is_generalized_hyperbolic(w)
    report = PropertyReport(notes=tuple(notes), **verdicts)
    report.check_hierarchy()
    return report


def verify_certificate(spec: Union[WeightSpec, DissipativeModel], name: str, verdict: Verdict) -> bool:
    """Recheck a verdict's certificate by independent definition-level
    computation (direct lookups, window sups, witness evaluation).

    Inconclusive verdicts carry no claim and verify trivially; a certificate
    missing the fields its verdict requires fails verification.
    """
    if verdict.value == INCONCLUSIVE:
        return True
    try:
        return _verify_certificate(spec, name, verdict)
    except KeyError:
        return False


def _verify_certificate(spec: Union[WeightSpec, DissipativeModel], name: str, verdict: Verdict) -> bool:
    if isinstance(spec, DissipativeModel):
        nu = measure_seq_from_model(spec)
        w = weights_from_model(spec)
        p = spec.p
    else:
        w = spec
        nu = measure_seq_from_weights(spec)
        p = w.p
    cert = verdict.certificate

    def rates_match() -> bool:
        # recompute per-period products by direct stepping, not via the seq fields
        lL, lR = nu.left_len, nu.right_len
        probe_left = nu.value(nu.k_min - lL) / nu.value(nu.k_min)
        probe_right = nu.value(nu.k_max + lR) / nu.value(nu.k_max)
        return (
            probe_left == Fraction(cert["left_rate"]) and probe_right == Fraction(cert["right_rate"])
            if name not in ("shadowing", "generalized_hyperbolic")
            else True
        )

    if name in ("li_yorke", "hypercyclic", "mixing", "chaotic", "frequently_hypercyclic", "expansive"):
        if not rates_match():
            return False
        qL, qR = nu.left_rate(), nu.right_rate()
        if name == "li_yorke":
            expected = YES if (qL < 1 and (qR < 1 or qL > 1)) else NO
        elif name in ("hypercyclic", "mixing"):
            expected = YES if (qL < 1 and qR < 1) else NO
        elif name in ("chaotic", "frequently_hypercyclic"):
            expected = YES if nu.sum_all().is_finite else NO
            if expected == YES and "nu_total" in cert:
                if nu.sum_all().value != Fraction(cert["nu_total"]):
                    return False
        else:  # expansive
            expected = YES if (qL > 1 or qR > 1) else NO
            if expected == NO:
                # the recorded sup must dominate a brute-force window scan
                sup = Fraction(cert["sup_nu"])
                window = range(nu.k_min - 3 * nu.left_len, nu.k_max + 3 * nu.right_len + 1)
                if any(nu.value(k) > sup for k in window):
                    return False
        return verdict.value == expected
    if name == "uniformly_expansive":
        c = Fraction(cert["c"])
        if verdict.value == YES:
            n = cert["witness_n"]
            return _uniform_check_at(nu, n, Fraction(p).numerator, Fraction(p).denominator, c) is None
        argmax = cert["argmax"]
        window = range(nu.k_min - 3 * nu.left_len, nu.k_max + 3 * nu.right_len + 1)
        return all(nu.value(k) <= nu.value(argmax) for k in window)
    if name in ("shadowing", "generalized_hyperbolic"):
        rates = tail_rates(w)
        if Fraction(cert["left_rate"]) != rates.left_product:
            return False
        if Fraction(cert["right_rate"]) != rates.right_product:
            return False
        lv, rv = rates.left_vs_one(), rates.right_vs_one()
        expected = YES if (lv < 0 and rv < 0) or (lv > 0 and rv > 0) or (lv < 0 < rv) else NO
        if verdict.value != expected:
            return False
        if verdict.value == YES:
            cond = cert["condition"]
            return cond == {(-1, -1): "A", (1, 1): "B", (-1, 1): "C"}[(lv, rv)]
        return True
    raise ValueError(f"unknown property {name!r}")


def scale_weights(w: WeightSpec, factor: Fraction) -> WeightSpec:
    """Replace w by factor*w.  Requires factor**p rational (always true for
    integer p); use :meth:`WeightSpec.scaled_pow` to scale stored powers
    directly at fractional p."""
    factor = Fraction(factor)
    p = w.p
    if p.denominator != 1:
        raise ValueError("scale_weights needs integer p; use scaled_pow for stored powers")
    return w.scaled_pow(factor**p.numerator)
