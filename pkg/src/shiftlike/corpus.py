"""Canonical and seeded random spec corpora.

The random generator is calibrated for the desk-scale oracles: tail period
products are kept away from 1 (|product| a factor >= 2 from 1, period
length <= 3) and core values are gentle, so probe windows of n_max = 40 and
N = 64 comfortably resolve every generated spec.  Unit-rate tails come from
a fixed list of exactly-product-one periods.
"""

from __future__ import annotations

import os
import random
from fractions import Fraction
from typing import Iterator, Optional

from .model import DissipativeModel, WeightSpec, build_model
from .operators import LpFunction, ShiftVector
from .sequences import PeriodicSeq
from .specio import SystemSpec, dump_spec, load_spec

CORPUS_ENV_VAR = "SHIFTLIKE_CORPUS_DIR"
DEFAULT_CORPUS_SEED = 20240311
CORPUS_SIZE = 100

# per-step rates; the per-period product is rate**length, keeping every tail
# a factor >= 2 per step away from 1 so the finite-window oracles saturate
# well inside their calibrated windows
_DECAY_STEPS = (Fraction(1, 2), Fraction(2, 5), Fraction(1, 3))
_GROWTH_STEPS = (Fraction(2), Fraction(5, 2), Fraction(3))
_UNIT_PERIODS = (
    (Fraction(1),),
    (Fraction(2), Fraction(1, 2)),
    (Fraction(1, 2), Fraction(2)),
    (Fraction(3, 2), Fraction(2, 3)),
)
_ENTRY_POOL = (
    Fraction(1, 2),
    Fraction(2, 3),
    Fraction(3, 4),
    Fraction(1),
    Fraction(4, 3),
    Fraction(3, 2),
    Fraction(2),
)
_CORE_POOL = (Fraction(1, 2), Fraction(2, 3), Fraction(1), Fraction(3, 2), Fraction(2))
_P_CYCLE = (Fraction(1), Fraction(2), Fraction(3), Fraction(3, 2))

_BOUND_LO, _BOUND_HI = Fraction(1, 8), Fraction(8)


def _period_with_product(
    rng: random.Random, step: Fraction, length: int
) -> tuple[Fraction, ...]:
    """A period of the given length with product exactly step**length and
    every entry inside the headroom bounds (constant period as fallback)."""
    target = step**length
    for _ in range(64):
        entries = [rng.choice(_ENTRY_POOL) for _ in range(length - 1)]
        last = target
        for e in entries:
            last /= e
        if _BOUND_LO <= last <= _BOUND_HI:
            return tuple(entries + [last])
    return (step,) * length


def _random_period(rng: random.Random, kind: str) -> tuple[Fraction, ...]:
    if kind in ("decay", "growth"):
        step = rng.choice(_DECAY_STEPS if kind == "decay" else _GROWTH_STEPS)
        return _period_with_product(rng, step, rng.choice((1, 2, 3)))
    return rng.choice(_UNIT_PERIODS)


def _random_core(rng: random.Random) -> tuple[int, tuple[Fraction, ...]]:
    length = rng.randint(1, 4)
    k_min = rng.randint(-2, 2)
    return k_min, tuple(rng.choice(_CORE_POOL) for _ in range(length))


_CLASS_CYCLE = (
    ("decay", "decay"),    # uniform contraction
    ("growth", "growth"),  # uniform expansion
    ("decay", "growth"),   # genuine splitting
    ("growth", "decay"),   # mirrored arrangement: no shadowing
    ("unit", "unit"),      # unit rates: no shadowing
)


def random_weight_spec(rng: random.Random, index: int = 0) -> WeightSpec:
    left_kind, right_kind = _CLASS_CYCLE[index % len(_CLASS_CYCLE)]
    if index % len(_CLASS_CYCLE) == 4 and rng.random() < 0.5:
        # mix: one unit-rate side against a decisive side
        if rng.random() < 0.5:
            left_kind = rng.choice(("decay", "growth"))
        else:
            right_kind = rng.choice(("decay", "growth"))
    p = _P_CYCLE[index % len(_P_CYCLE)]
    k_min, core = _random_core(rng)
    return WeightSpec(
        p,
        PeriodicSeq(k_min, core, _random_period(rng, left_kind), _random_period(rng, right_kind)),
    )


def random_two_atom_model(rng: random.Random, p=None) -> DissipativeModel:
    """A valid two-atom model with genuinely distinct atoms.

    The second atom reuses cyclic rotations of the first atom's periods
    (same per-period products, so the tails are comparable and the model is
    admissible) under an independent core, giving distortion constants > 1.
    """
    if p is None:
        p = rng.choice(_P_CYCLE)
    left = _random_period(rng, rng.choice(("decay", "growth", "unit")))
    right = _random_period(rng, rng.choice(("decay", "growth", "unit")))

    def rotate(period: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
        shift = rng.randrange(len(period))
        return period[shift:] + period[:shift]

    k1, core1 = _random_core(rng)
    k2, core2 = _random_core(rng)
    seq1 = PeriodicSeq(k1, core1, left, right)
    seq2 = PeriodicSeq(k2, core2, rotate(left), rotate(right))
    measures = (rng.choice(_CORE_POOL), rng.choice(_CORE_POOL))
    return build_model(p, measures, (seq1, seq2))


def random_shift_vector(rng: random.Random, span: int = 6, entries: int = 4) -> ShiftVector:
    pool = (Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2), Fraction(2), Fraction(-3), Fraction(1, 3))
    coeffs = {}
    for _ in range(entries):
        coeffs[rng.randint(-span, span)] = rng.choice(pool)
    return ShiftVector(coeffs)


def random_lp_function(rng: random.Random, model: DissipativeModel, span: int = 5, entries: int = 5) -> LpFunction:
    pool = (Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-2), Fraction(3), Fraction(-1, 3))
    coeffs = {}
    for _ in range(entries):
        k = rng.randint(-span, span)
        i = rng.randrange(model.num_atoms)
        coeffs[(k, i)] = rng.choice(pool)
    return LpFunction(coeffs)


def canonical_specs() -> list[SystemSpec]:
    """The four golden specs: constant unit weights, constant doubling
    weights, and the two one-sided split arrangements."""

    def wspec(core, left, right) -> WeightSpec:
        return WeightSpec(Fraction(1), PeriodicSeq(0, core, left, right))

    half, one, two = Fraction(1, 2), Fraction(1), Fraction(2)
    return [
        SystemSpec("canon-unit", wspec((one,), (one,), (one,))),
        SystemSpec("canon-double", wspec((two,), (two,), (two,))),
        SystemSpec("canon-contract-expand", wspec((half,), (half,), (two,))),
        SystemSpec("canon-expand-contract", wspec((two,), (two,), (half,))),
    ]


def corpus_dir(override: Optional[str] = None) -> str:
    if override:
        return override
    return os.environ.get(CORPUS_ENV_VAR, os.path.join(os.getcwd(), "corpus"))


def generate_corpus(directory: Optional[str] = None, seed: int = DEFAULT_CORPUS_SEED) -> list[str]:
    """Write the canonical specs plus the seeded random corpus; returns the
    file paths.  Identical seeds produce byte-identical files."""
    directory = corpus_dir(directory)
    os.makedirs(directory, exist_ok=True)
    paths = []
    for spec in canonical_specs():
        path = os.path.join(directory, f"{spec.spec_id}.json")
        dump_spec(spec, path)
        paths.append(path)
    rng = random.Random(seed)
    for index in range(CORPUS_SIZE):
        spec = SystemSpec(f"rand-{index:03d}", random_weight_spec(rng, index))
        path = os.path.join(directory, f"{spec.spec_id}.json")
        dump_spec(spec, path)
        paths.append(path)
    return paths


def iter_corpus(directory: Optional[str] = None) -> Iterator[SystemSpec]:
    directory = corpus_dir(directory)
    for name in sorted(os.listdir(directory)):
        if name.endswith(".json"):
            yield load_spec(os.path.join(directory, name))
