"""Finitely supported vectors and the operators acting on them.

Two vector kinds:

* :class:`ShiftVector` - finitely supported two-sided sequence, acted on by
  the weighted backward shift ``(B x)(i) = w_{i+1} x_{i+1}`` and its inverse.
* :class:`LpFunction` - simple function on the dissipative model, a finite
  map (k, i) -> coefficient on the cell f^k(B_i), acted on by the
  composition operator (an index shift of coefficients).

Coefficients may be floats (oracle mode) or exact scalars; exact-mode
p-th-power norms stay rational for integer p, and all identity checks
compare p-th powers so no root is ever taken in exact mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .model import DissipativeModel, MeasureSeq, WeightSpec
from .scalars import NormTerms, RadicalScalar, Scalar, scalar_abs_pth_power, scalar_times_root


def _clean(items: Iterable[tuple]) -> dict:
    return {k: v for k, v in items if not _is_zero(v)}


def _is_zero(value: Scalar) -> bool:
    if isinstance(value, RadicalScalar):
        return value.is_zero()
    return value == 0


@dataclass(frozen=True)
class ShiftVector:
    """Finitely supported x: Z -> coefficients."""

    coeffs: Mapping[int, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _clean(dict(self.coeffs).items()))

    @classmethod
    def basis(cls, k: int, value: Scalar = 1) -> "ShiftVector":
        return cls({k: value})

    def support(self) -> list[int]:
        return sorted(self.coeffs)

    def get(self, k: int) -> Scalar:
        return self.coeffs.get(k, 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def map_values(self, fn) -> "ShiftVector":
        return ShiftVector({k: fn(k, v) for k, v in self.coeffs.items()})

    def __add__(self, other: "ShiftVector") -> "ShiftVector":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return ShiftVector(out)

    def scale(self, s) -> "ShiftVector":
        return ShiftVector({
            k: v.times_rational(s) if isinstance(v, RadicalScalar) else v * s
            for k, v in self.coeffs.items()
        })


@dataclass(frozen=True)
class LpFunction:
    """Simple function sum of c_{k,i} * indicator(f^k(B_i)), finite support."""

    coeffs: Mapping[tuple[int, int], Scalar] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _clean(dict(self.coeffs).items()))

    @classmethod
    def cell(cls, k: int, i: int, value: Scalar = 1) -> "LpFunction":
        return cls({(k, i): value})

    @classmethod
    def indicator_generator(cls, model: DissipativeModel, value: Scalar = 1) -> "LpFunction":
        """The indicator of W (all atoms at level k=0), scaled by ``value``."""
        return cls({(0, i): value for i in range(model.num_atoms)})

    def get(self, k: int, i: int) -> Scalar:
        return self.coeffs.get((k, i), 0)

    def levels(self) -> list[int]:
        return sorted({k for k, _ in self.coeffs})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "LpFunction") -> "LpFunction":
        out = dict(self.coeffs)
        for key, v in other.coeffs.items():
            out[key] = out[key] + v if key in out else v
        return LpFunction(out)

    def scale(self, s) -> "LpFunction":
        return LpFunction({
            key: v.times_rational(s) if isinstance(v, RadicalScalar) else v * s
            for key, v in self.coeffs.items()
        })


def apply_composition(model: DissipativeModel, phi: LpFunction, n: int = 1) -> LpFunction:
    """Apply the n-th power of the composition operator (phi -> phi o f^n).

    On cell coefficients this is a pure reindexing: the result has, at cell
    (k, i), the old coefficient at (k + n, i); negative n applies the inverse.
    """
    if n == 0:
        return phi
    return LpFunction({(k - n, i): v for (k, i), v in phi.coeffs.items()})


def lp_norm_p(model: DissipativeModel, phi: LpFunction) -> Union[Fraction, float]:
    """p-th power of the L^p norm: sum |c_{k,i}|**p * mu(f^k(B_i)).

    Exact (Fraction) when all coefficients are exact and p is an integer;
    float otherwise.
    """
    exact = model.p.denominator == 1 and all(not isinstance(v, float) for v in phi.coeffs.values())
    if exact:
        total = Fraction(0)
        for (k, i), v in phi.coeffs.items():
            total += scalar_abs_pth_power(v, model.p) * model.mu_cell(k, i)
        return total
    return sum(
        scalar_abs_pth_power(v, model.p) * float(model.mu_cell(k, i))
        for (k, i), v in phi.coeffs.items()
    )


def lp_norm_terms(model: DissipativeModel, phi: LpFunction) -> NormTerms:
    """Formal p-th-power norm of an exact-coefficient function (any rational p)."""
    terms = NormTerms(model.p)
    for (k, i), v in phi.coeffs.items():
        terms.add(v, model.mu_cell(k, i))
    return terms


def apply_weighted_shift(w: WeightSpec, x: ShiftVector, n: int = 1) -> ShiftVector:
    """Apply the n-th power of the weighted backward shift.

    n = 1 sends x to (i -> w_{i+1} x_{i+1}); negative n applies the exact
    inverse (i -> x_{i-1} / w_i).  The weight enters as a p-th root, so exact
    coefficients become radical scalars scaled by the stored w**p values.
    """
    if n == 0:
        return x
    step = 1 if n > 0 else -1
    out = x
    for _ in range(abs(n)):
        coeffs = {}
        for i, v in out.coeffs.items():
            if step == 1:
                coeffs[i - 1] = scalar_times_root(v, w.weight_pow(i), w.p)
            else:
                coeffs[i + 1] = scalar_times_root(v, 1 / w.weight_pow(i + 1), w.p)
        out = ShiftVector(coeffs)
    return out


def shift_orbit_translate(x: ShiftVector, n: int) -> ShiftVector:
    """The plain +1-map composition operator on sequences: (x o g^n)(i) = x(i + n)."""
    if n == 0:
        return x
    return ShiftVector({i - n: v for i, v in x.coeffs.items()})


def lp_norm_p_weighted(nu: MeasureSeq, x: ShiftVector, p: Fraction) -> Union[Fraction, float]:
    """p-th power norm in L^p(Z, nu): sum |x_i|**p * nu(i)."""
    exact = Fraction(p).denominator == 1 and all(not isinstance(v, float) for v in x.coeffs.values())
    if exact:
        return sum(
            (scalar_abs_pth_power(v, Fraction(p)) * nu.value(i) for i, v in x.coeffs.items()),
            Fraction(0),
        )
    return sum(scalar_abs_pth_power(v, Fraction(p)) * float(nu.value(i)) for i, v in x.coeffs.items())


def ell_p_norm_p(x: ShiftVector, p: Fraction) -> Union[Fraction, float]:
    """p-th power of the plain ell^p norm."""
    exact = Fraction(p).denominator == 1 and all(not isinstance(v, float) for v in x.coeffs.values())
    if exact:
        return sum((scalar_abs_pth_power(v, Fraction(p)) for v in x.coeffs.values()), Fraction(0))
    return sum(scalar_abs_pth_power(v, Fraction(p)) for v in x.coeffs.values())


def ell_p_norm_terms(x: ShiftVector, p: Fraction) -> NormTerms:
    terms = NormTerms(Fraction(p))
    for v in x.coeffs.values():
        terms.add(v, Fraction(1))
    return terms


def conjugacy_isometry(nu: MeasureSeq, x: ShiftVector, p) -> ShiftVector:
    """The isometry L^p(Z, nu) -> ell^p(Z): (x_i) -> (x_i * nu(i)**(1/p)).

    Intertwines the +1-map composition operator with the weighted backward
    shift whose weights are derived from nu.
    """
    p = Fraction(p)
    return x.map_values(lambda i, v: scalar_times_root(v, nu.value(i), p))


def orbit_norms(
    spec: Union[WeightSpec, DissipativeModel],
    vector: Union[ShiftVector, LpFunction],
    n_range: Sequence[int],
) -> list[tuple[int, Union[Fraction, float]]]:
    """p-th-power norms of the n-th iterate of ``vector`` for n in ``n_range``.

    Accepts a WeightSpec with a ShiftVector or a DissipativeModel with an
    LpFunction.
    """
    out = []
    if isinstance(spec, WeightSpec):
        if not isinstance(vector, ShiftVector):
            raise TypeError("WeightSpec orbits act on ShiftVector")
        for n in n_range:
            out.append((n, ell_p_norm_p(apply_weighted_shift(spec, vector, n), spec.p)))
    elif isinstance(spec, DissipativeModel):
        if not isinstance(vector, LpFunction):
            raise TypeError("DissipativeModel orbits act on LpFunction")
        for n in n_range:
            out.append((n, lp_norm_p(spec, apply_composition(spec, vector, n))))
    else:
        raise TypeError(f"unsupported spec type {type(spec).__name__}")
    return out
