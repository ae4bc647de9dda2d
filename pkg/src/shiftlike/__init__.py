"""Exact classification and numerical verification of shift-type operator
dynamics on eventually periodic weight data."""

from .exact import ExtendedRational, InvariantViolation, SpecValidationError, parse_rational
from .sequences import GeometricTailSeq, PeriodicSeq
from .model import (
    DissipativeModel,
    MeasureSeq,
    WeightSpec,
    build_model,
    distortion_constant,
    measure_seq_from_model,
    measure_seq_from_weights,
    model_from_weights,
    mu_total,
    weights_from_measure_seq,
    weights_from_model,
)
from .operators import (
    LpFunction,
    ShiftVector,
    apply_composition,
    apply_weighted_shift,
    conjugacy_isometry,
    ell_p_norm_p,
    lp_norm_p,
    orbit_norms,
    shift_orbit_translate,
)
from .factor import (
    ComparisonWitness,
    distortion_norm_comparison,
    factor_map,
    selector,
    semiconjugacy_residual,
    strong_selector_check,
)
from .classify import (
    PropertyReport,
    TailRates,
    Verdict,
    classify,
    has_shadowing,
    is_chaotic_fh,
    is_expansive,
    is_generalized_hyperbolic,
    is_hypercyclic,
    is_li_yorke,
    is_mixing,
    is_uniformly_expansive,
    scale_weights,
    tail_rates,
    verify_certificate,
)
from .oracles import (
    ProbeEvidence,
    PseudoOrbit,
    ShadowingResult,
    expansivity_probe,
    hypercyclicity_sweep,
    li_yorke_probe,
    random_pseudo_orbit,
    shadowing_solve_splitting,
    shadowing_window_optimize,
    uniform_expansivity_probe,
)
from .specio import LIBRARY_VERSION, SystemSpec, load_spec, parse_spec_dict

__version__ = LIBRARY_VERSION
