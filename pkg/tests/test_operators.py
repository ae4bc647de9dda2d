"""Operator actions and norms, exact-mode and float-mode.

Derived values come from a weight-product oracle written here: the p-th
power norm of the n-th shift iterate of a basis vector is the exact product
of the traversed weight powers.
"""

import random
from fractions import Fraction

import pytest

from shiftlike.corpus import random_shift_vector, random_weight_spec
from shiftlike.model import WeightSpec, build_model, measure_seq_from_weights
from shiftlike.operators import (
    LpFunction,
    ShiftVector,
    apply_composition,
    apply_weighted_shift,
    conjugacy_isometry,
    ell_p_norm_p,
    ell_p_norm_terms,
    lp_norm_p,
    orbit_norms,
    shift_orbit_translate,
)
from shiftlike.scalars import RadicalScalar
from shiftlike.sequences import PeriodicSeq

F = Fraction


def weight_product_oracle(w: WeightSpec, k: int, n: int) -> Fraction:
    """(w_{k-n+1} ... w_k)**p by one-at-a-time lookup: the p-th power norm of
    the n-th forward iterate of e_k (n >= 0)."""
    prod = F(1)
    for j in range(k - n + 1, k + 1):
        prod *= w.weight_pow(j)
    return prod


def const_seq(value):
    v = F(value)
    return PeriodicSeq(0, (v,), (v,), (v,))


# ------------------------------------------------------ composition operator


def test_apply_composition_identity_and_single_cell():
    model = build_model(1, [F(1, 2), F(1, 2)], [const_seq(1), const_seq(1)])
    phi = LpFunction({(1, 0): F(1)})
    assert apply_composition(model, phi, 0) is phi
    shifted = apply_composition(model, phi, 1)
    assert shifted.coeffs == {(0, 0): F(1)}


def test_apply_composition_inverse_roundtrip():
    model = build_model(1, [F(1)], [const_seq(2)])
    rng = random.Random(3)
    for _ in range(20):
        phi = LpFunction({(rng.randint(-5, 5), 0): F(rng.randint(-3, 3)) for _ in range(4)})
        n = rng.randint(-6, 6)
        assert apply_composition(model, apply_composition(model, phi, n), -n) == phi


def test_apply_composition_is_linear():
    model = build_model(2, [F(1, 3), F(2, 3)], [const_seq(2), const_seq(2)])
    rng = random.Random(11)
    for _ in range(10):
        phi = LpFunction({(rng.randint(-4, 4), rng.randrange(2)): F(rng.randint(-2, 2)) for _ in range(4)})
        psi = LpFunction({(rng.randint(-4, 4), rng.randrange(2)): F(rng.randint(-2, 2)) for _ in range(4)})
        a, b = F(3), F(-1, 2)
        lhs = apply_composition(model, phi.scale(a) + psi.scale(b), 2)
        rhs = apply_composition(model, phi, 2).scale(a) + apply_composition(model, psi, 2).scale(b)
        assert lhs == rhs


def test_lp_norm_examples():
    model = build_model(1, [F(1)], [const_seq(2)])  # mu(f^k(W)) = 2^k
    assert lp_norm_p(model, LpFunction()) == 0
    unit = build_model(1, [F(1)], [const_seq(1)])
    assert lp_norm_p(unit, LpFunction.indicator_generator(unit)) == 1
    # coefficient 3 on the level-1 cell: 3 * mu(f^1(W)) = 3 * 2 = 6
    phi = LpFunction({(1, 0): F(3)})
    assert lp_norm_p(model, phi) == 6


# ---------------------------------------------------------- weighted shift


def test_apply_weighted_shift_definition():
    w = WeightSpec.constant(1, 2)
    out = apply_weighted_shift(w, ShiftVector.basis(1))
    assert out.support() == [0]
    assert RadicalScalar.of(F(2), F(1)) == out.get(0)


def test_apply_weighted_shift_inverse_roundtrip():
    rng = random.Random(5)
    for index in range(15):
        w = random_weight_spec(rng, index)
        x = random_shift_vector(rng)
        n = rng.randint(-5, 5)
        back = apply_weighted_shift(w, apply_weighted_shift(w, x, n), -n)
        assert set(back.coeffs) == set(x.coeffs)
        for k, v in x.coeffs.items():
            assert RadicalScalar.of(v, w.p) == RadicalScalar.of(back.coeffs[k], w.p)


def test_shift_orbit_norm_matches_weight_product_oracle():
    w = WeightSpec.constant(1, 2)
    for n in range(0, 8):
        expected = weight_product_oracle(w, 0, n)
        assert expected == F(2) ** n
        assert ell_p_norm_p(apply_weighted_shift(w, ShiftVector.basis(0), n), w.p) == expected


def test_norm_equivariance_identity():
    # p-th power norm of the n-th iterate of e_k equals nu(k-n)/nu(k)
    rng = random.Random(17)
    for index in range(12):
        w = random_weight_spec(rng, index)
        nu = measure_seq_from_weights(w)
        k = rng.randint(-4, 4)
        for n in range(-6, 7):
            vec = apply_weighted_shift(w, ShiftVector.basis(k), n)
            got = ell_p_norm_terms(vec, w.p)
            expect = ell_p_norm_terms(
                ShiftVector.basis(0, RadicalScalar(F(1), nu.value(k - n) / nu.value(k), w.p)), w.p
            )
            assert got == expect


def test_orbit_norms_shapes_and_values():
    w = WeightSpec.constant(1, 2)
    zero = orbit_norms(w, ShiftVector(), range(-3, 4))
    assert all(v == 0 for _, v in zero)
    vals = dict(orbit_norms(w, ShiftVector.basis(0), range(-3, 4)))
    for n in range(-3, 4):
        if n >= 0:
            assert vals[n] == weight_product_oracle(w, 0, n)
        else:
            assert vals[n] == 1 / weight_product_oracle(w, -n, -n) * 1  # backward: 2**n
            assert vals[n] == F(2) ** n


# ------------------------------------------------------- conjugacy isometry


def test_conjugacy_isometry_examples():
    unit = measure_seq_from_weights(WeightSpec.constant(2, 1))
    x = ShiftVector({3: F(5), -2: F(-1, 2)})
    out = conjugacy_isometry(unit, x, 2)
    for k, v in x.coeffs.items():
        assert RadicalScalar.of(v, F(2)) == out.get(k)
    # nu(i) = 4, p = 2: the factor is 4**(1/2) = 2
    w = WeightSpec.build(2, 0, [F(1, 4)], [F(1, 4)], [F(1, 4)])
    nu = measure_seq_from_weights(w)
    assert nu.value(1) == 4
    out = conjugacy_isometry(nu, ShiftVector.basis(1), 2)
    assert RadicalScalar.of(F(2), F(2)) == out.get(1)


def test_isometry_preserves_weighted_norm():
    from shiftlike.operators import lp_norm_p_weighted

    rng = random.Random(23)
    for index in range(12):
        w = random_weight_spec(rng, index)
        nu = measure_seq_from_weights(w)
        x = random_shift_vector(rng)
        lhs = ell_p_norm_terms(conjugacy_isometry(nu, x, w.p), w.p)
        rhs = ell_p_norm_terms(
            ShiftVector({i: RadicalScalar(v, nu.value(i), w.p) for i, v in x.coeffs.items()}), w.p
        )
        assert lhs == rhs
        if w.p.denominator == 1:
            # direct expansion: the image's plain norm equals sum |x_i|^p nu(i)
            assert ell_p_norm_p(conjugacy_isometry(nu, x, w.p), w.p) == lp_norm_p_weighted(nu, x, w.p)


def test_isometry_intertwines_translation_with_shift():
    # shift-norm of the isometry image equals the isometry image of the
    # translated sequence, in exact p-th powers, for |n| <= 10
    rng = random.Random(29)
    for index in range(10):
        w = random_weight_spec(rng, index)
        nu = measure_seq_from_weights(w)
        x = random_shift_vector(rng)
        for n in range(-10, 11):
            lhs = ell_p_norm_terms(apply_weighted_shift(w, conjugacy_isometry(nu, x, w.p), n), w.p)
            rhs = ell_p_norm_terms(conjugacy_isometry(nu, shift_orbit_translate(x, n), w.p), w.p)
            assert lhs == rhs


def test_orbit_norms_match_across_the_factor_map():
    # the composition-operator orbit of a selected sequence has the same
    # p-th power norms as the shift orbit of the sequence itself, exactly
    from shiftlike.corpus import random_two_atom_model
    from shiftlike.factor import selector
    from shiftlike.model import weights_from_model

    rng = random.Random(211)
    for _ in range(10):
        model = random_two_atom_model(rng, p=rng.choice((1, 2, 3)))
        x = random_shift_vector(rng)
        w = weights_from_model(model)
        lhs = orbit_norms(model, selector(model, x), range(-6, 7))
        rhs = orbit_norms(w, x, range(-6, 7))
        assert lhs == rhs


def test_float_mode_matches_exact_mode():
    rng = random.Random(31)
    for index in range(8):
        w = random_weight_spec(rng, index)
        x = random_shift_vector(rng)
        xf = ShiftVector({k: float(v) for k, v in x.coeffs.items()})
        for n in (-3, -1, 0, 2, 4):
            exact = ell_p_norm_p(apply_weighted_shift(w, x, n), w.p)
            approx = ell_p_norm_p(apply_weighted_shift(w, xf, n), w.p)
            assert approx == pytest.approx(float(exact), rel=1e-9)
