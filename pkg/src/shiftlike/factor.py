"""The factor map from the composition operator onto its conjugate shift.

``factor_map`` averages a simple function over the generating set at each
iterate level and rescales, producing a finitely supported sequence; it is
linear, onto, and intertwines the composition operator with the weighted
backward shift.  ``selector`` is its norm-preserving right inverse: the
function constant on each iterate image whose iterate norms match the shift
orbit norms level by level, exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from .exact import InvariantViolation
from .model import DissipativeModel, distortion_constant, weights_from_model
from .operators import (
    LpFunction,
    ShiftVector,
    apply_composition,
    apply_weighted_shift,
    ell_p_norm_terms,
    lp_norm_terms,
    lp_norm_p,
    ell_p_norm_p,
)
from .scalars import RadicalScalar, Scalar, scalar_abs_pth_power, scalar_times_root


@dataclass(frozen=True)
class ComparisonWitness:
    """Record of an lhs ~_L rhs check: pass iff lhs <= L*rhs and rhs <= L*lhs."""

    lhs: float
    rhs: float
    constant: float
    passed: bool
    detail: str = ""


def factor_map(model: DissipativeModel, phi: LpFunction) -> ShiftVector:
    """Project a simple function to a sequence.

    At level k the coefficient is mu(f^k(W))**(1/p) / mu(W) times the
    W-average of the level-k cell coefficients weighted by atom measures.
    Exact coefficients stay exact (the root enters as a radical factor).
    """
    mu_w = model.mu_generator()
    exact = all(not isinstance(v, float) for v in phi.coeffs.values())
    out: dict[int, Scalar] = {}
    for k in phi.levels():
        if exact:
            acc = RadicalScalar.of(0, model.p)
            for i in range(model.num_atoms):
                v = phi.get(k, i)
                if _is_zero(v):
                    continue
                acc = acc + RadicalScalar.of(v, model.p).times_rational(model.atom_measures[i])
            if acc.is_zero():
                continue
            out[k] = acc.times_rational(1 / mu_w).times_root(model.mu_iterate(k))
        else:
            acc_f = sum(
                float(phi.get(k, i)) * float(model.atom_measures[i])
                for i in range(model.num_atoms)
            )
            if acc_f == 0.0:
                continue
            out[k] = acc_f / float(mu_w) * float(model.mu_iterate(k)) ** (1.0 / float(model.p))
    return ShiftVector(out)


def _is_zero(v: Scalar) -> bool:
    if isinstance(v, RadicalScalar):
        return v.is_zero()
    return v == 0


def selector(model: DissipativeModel, x: ShiftVector) -> LpFunction:
    """Right inverse of the factor map: constant value x_k / mu(f^k(W))**(1/p)
    on every atom cell at level k; factor_map(selector(x)) == x exactly."""
    coeffs: dict[tuple[int, int], Scalar] = {}
    for k, v in x.coeffs.items():
        value = scalar_times_root(v, 1 / model.mu_iterate(k), model.p)
        for i in range(model.num_atoms):
            coeffs[(k, i)] = value
    return LpFunction(coeffs)


def strong_selector_check(model: DissipativeModel, x: ShiftVector, n_range: Sequence[int]) -> ComparisonWitness:
    """Verify that selector orbits match shift orbits in p-th-power norm,
    for every n in n_range, with comparison constant exactly 1.

    Exact coefficients are compared formally (term by term in p-th powers),
    which decides equality for any rational p; float coefficients compare to
    1e-12 relative tolerance.  Reports the first failing n.
    """
    w = weights_from_model(model)
    phi = selector(model, x)
    exact = all(not isinstance(v, float) for v in x.coeffs.values())
    for n in n_range:
        lhs_vec = apply_composition(model, phi, n)
        rhs_vec = apply_weighted_shift(w, x, n)
        if exact:
            lhs = lp_norm_terms(model, lhs_vec)
            rhs = ell_p_norm_terms(rhs_vec, model.p)
            if lhs != rhs:
                return ComparisonWitness(float(lhs), float(rhs), 1.0, False, f"first failure at n={n}")
        else:
            lhs_f = float(lp_norm_p(model, lhs_vec))
            rhs_f = float(ell_p_norm_p(rhs_vec, model.p))
            scale = max(abs(lhs_f), abs(rhs_f), 1.0)
            if abs(lhs_f - rhs_f) > 1e-12 * scale:
                return ComparisonWitness(lhs_f, rhs_f, 1.0, False, f"first failure at n={n}")
    last = n_range[-1] if len(n_range) else 0
    lhs_f = float(lp_norm_p(model, apply_composition(model, phi, last)))
    return ComparisonWitness(lhs_f, lhs_f, 1.0, True, f"equal over {len(n_range)} exponents")


@lru_cache(maxsize=512)
def comparison_constant(model: DissipativeModel) -> Fraction:
    """The constant for the iterate-integral comparison below.

    The defining distortion bound controls mu(f^k(B))/mu(B) against the
    aggregate ratio within K on both sides; dividing two such bounds gives
    mu(f^m(B))/mu(f^l(B)) within K**2 of mu(f^m(W))/mu(f^l(W)), so L = K**2
    works.  (Tests probe tightness; any counterexample would be a finding.)
    """
    k = distortion_constant(model)
    if not k.is_finite:
        raise InvariantViolation("distortion constant must be finite for validated models")
    return k.value**2


def distortion_norm_comparison(
    model: DissipativeModel, phi: LpFunction, k: int, n: int
) -> ComparisonWitness:
    """Check the two-sided bound between the integral of |phi|**p o f^n over
    f^k(W) and the measure-ratio-scaled integral of |phi|**p over f^{k+n}(W),
    with constant L = K**2.

    Both integrals are finite sums over level-(k+n) coefficients; with exact
    coefficients and integer p the comparison is exact rational arithmetic.
    """
    L = comparison_constant(model)
    exact = model.p.denominator == 1 and all(not isinstance(v, float) for v in phi.coeffs.values())
    if exact:
        lhs = Fraction(0)
        rhs = Fraction(0)
        for i in range(model.num_atoms):
            c = phi.get(k + n, i)
            if _is_zero(c):
                continue
            power = scalar_abs_pth_power(c, model.p)
            lhs += power * model.mu_cell(k, i)
            rhs += power * model.mu_cell(k + n, i)
        rhs_scaled = rhs * model.mu_iterate(k) / model.mu_iterate(k + n)
        passed = lhs <= L * rhs_scaled and rhs_scaled <= L * lhs
        return ComparisonWitness(float(lhs), float(rhs_scaled), float(L), passed)
    lhs_f = 0.0
    rhs_f = 0.0
    for i in range(model.num_atoms):
        c = phi.get(k + n, i)
        if _is_zero(c):
            continue
        power = float(scalar_abs_pth_power(c, model.p))
        lhs_f += power * float(model.mu_cell(k, i))
        rhs_f += power * float(model.mu_cell(k + n, i))
    rhs_f *= float(model.mu_iterate(k) / model.mu_iterate(k + n))
    guard = 1.0 + 1e-9
    passed = lhs_f <= float(L) * rhs_f * guard and rhs_f <= float(L) * lhs_f * guard
    return ComparisonWitness(lhs_f, rhs_f, float(L), passed)


def semiconjugacy_residual(model: DissipativeModel, phi: LpFunction) -> Union[Fraction, float]:
    """Norm of factor_map(T phi) - B(factor_map(phi)); zero when the diagram
    commutes.  Exact mode decides entrywise equality exactly and returns
    Fraction(0) on success; float mode returns the p-norm of the difference."""
    w = weights_from_model(model)
    lhs = factor_map(model, apply_composition(model, phi, 1))
    rhs = apply_weighted_shift(w, factor_map(model, phi), 1)
    exact = all(not isinstance(v, float) for v in phi.coeffs.values())
    if exact:
        keys = set(lhs.coeffs) | set(rhs.coeffs)
        for key in keys:
            a = RadicalScalar.of(lhs.get(key), model.p)
            b = RadicalScalar.of(rhs.get(key), model.p)
            if a != b:
                return abs(float(a) - float(b))
        return Fraction(0)
    keys = set(lhs.coeffs) | set(rhs.coeffs)
    total = 0.0
    for key in keys:
        total += abs(float(lhs.get(key)) - float(rhs.get(key))) ** float(model.p)
    return total ** (1.0 / float(model.p))
