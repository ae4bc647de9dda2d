"""Command-line entry point.

Subcommands:

* ``classify``     - decide all properties of a spec, with certificates
* ``shadow``       - run the shadowing solvers on seeded pseudo-orbits
* ``probe``        - run the definitional probes against the classifier
* ``factor-check`` - residuals and witnesses for the factor-map identities
* ``gen-examples`` - write the canonical + random corpus

Exit codes: 0 success, 1 validation error (bad spec or arguments),
2 internal invariant violation (a reproduction bundle is dumped with the
spec, seed, and failing check).  Identical configuration and seed produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .classify import PROPERTY_NAMES, classify
from .corpus import corpus_dir, generate_corpus, random_lp_function, random_shift_vector
from .exact import InvariantViolation, SpecValidationError, parse_rational
from .factor import distortion_norm_comparison, semiconjugacy_residual, strong_selector_check
from .model import DissipativeModel, WeightSpec, model_from_weights, weights_from_model
from .oracles import (
    expansivity_probe,
    hypercyclicity_sweep,
    li_yorke_probe,
    random_pseudo_orbit,
    shadowing_solve_splitting,
    shadowing_window_optimize,
    uniform_expansivity_probe,
)
from .model import measure_seq_from_weights
from .operators import LpFunction, ShiftVector
from .specio import LIBRARY_VERSION, load_spec, write_csv


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters shared by all subcommands."""

    command: str
    spec_path: Optional[str]
    output_format: str = "table"
    window: int = 64
    trials: int = 20
    seed: int = 0
    mode: str = "exact"
    threshold: Fraction = Fraction(2)
    properties: tuple[str, ...] = PROPERTY_NAMES
    output: Optional[str] = None
    method: str = "splitting"
    n_max: int = 40

    def __post_init__(self):
        if self.window < 8:
            raise SpecValidationError("--window: must be >= 8")
        if self.trials < 1:
            raise SpecValidationError("--trials: must be >= 1")
        if self.threshold <= 1:
            raise SpecValidationError("--c: must be > 1")
        for name in self.properties:
            if name not in PROPERTY_NAMES:
                raise SpecValidationError(f"--properties: unknown property {name!r}")


def config_from_args(args: argparse.Namespace) -> RunConfig:
    properties = PROPERTY_NAMES
    if getattr(args, "properties", ""):
        properties = tuple(p.strip() for p in args.properties.split(",") if p.strip())
    return RunConfig(
        command=args.command,
        spec_path=getattr(args, "spec", None),
        output_format=getattr(args, "format", "table"),
        window=getattr(args, "window", 64),
        trials=getattr(args, "trials", 20),
        seed=getattr(args, "seed", 0),
        mode=getattr(args, "mode", "exact"),
        threshold=parse_rational(getattr(args, "c", "2"), field="--c"),
        properties=properties,
        output=getattr(args, "output", None),
        method=getattr(args, "method", "splitting"),
        n_max=getattr(args, "n_max", 40),
    )


def _render_cert(cert: dict) -> str:
    parts = []
    for key in sorted(cert):
        value = cert[key]
        if isinstance(value, dict):
            value = json.dumps(value, sort_keys=True)
        parts.append(f"{key}={value}")
    return "|".join(parts)


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_classify(config: RunConfig) -> int:
    spec = load_spec(config.spec_path)
    report = classify(spec.payload, c=config.threshold)
    rows = []
    for name in config.properties:
        verdict = getattr(report, name)
        rows.append(
            {
                "spec_id": spec.spec_id,
                "seed": config.seed,
                "version": LIBRARY_VERSION,
                "property": name,
                "verdict": verdict.value,
                "certificate": _render_cert(verdict.certificate),
            }
        )
    if config.output_format == "csv":
        _emit(
            write_csv(rows, ["spec_id", "seed", "version", "property", "verdict", "certificate"]),
            config.output,
        )
    elif config.output_format == "json":
        payload = {
            "spec_id": spec.spec_id,
            "seed": config.seed,
            "version": LIBRARY_VERSION,
            "verdicts": {
                name: {
                    "verdict": getattr(report, name).value,
                    "certificate": getattr(report, name).certificate,
                }
                for name in config.properties
            },
            "notes": list(report.notes),
        }
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", config.output)
    else:
        width = max(len(n) for n in config.properties)
        lines = [f"spec {spec.spec_id} (version {LIBRARY_VERSION})"]
        for row in rows:
            lines.append(f"  {row['property']:<{width}}  {row['verdict']:<13} {row['certificate']}")
        _emit("\n".join(lines) + "\n", config.output)
    return 0


def _spec_weights(payload) -> WeightSpec:
    return payload if isinstance(payload, WeightSpec) else weights_from_model(payload)


def _cmd_shadow(config: RunConfig) -> int:
    spec = load_spec(config.spec_path)
    w = _spec_weights(spec.payload)
    methods = {
        "splitting": ("splitting",),
        "optimizer": ("window-optimizer",),
        "both": ("splitting", "window-optimizer"),
    }[config.method]
    rows = []
    for trial in range(config.trials):
        pseudo = random_pseudo_orbit(config.window, config.seed + trial)
        for method in methods:
            if method == "splitting":
                result = shadowing_solve_splitting(w, pseudo, keep_orbit=False)
            else:
                result = shadowing_window_optimize(w, pseudo)
            rows.append(
                {
                    "spec_id": spec.spec_id,
                    "method": result.method,
                    "N": result.window,
                    "ratio": f"{result.ratio:.12g}",
                    "flag": "converged" if result.converged else "non-convergent",
                    "seed": pseudo.seed,
                    "version": LIBRARY_VERSION,
                }
            )
    _emit(write_csv(rows, ["spec_id", "method", "N", "ratio", "flag", "seed", "version"]), config.output)
    return 0


def _cmd_probe(config: RunConfig) -> int:
    spec = load_spec(config.spec_path)
    w = _spec_weights(spec.payload)
    nu = measure_seq_from_weights(w)
    report = classify(spec.payload, c=config.threshold)
    rows = []

    def add(method: str, window: int, ratio, evidence) -> None:
        rows.append(
            {
                "spec_id": spec.spec_id,
                "method": method,
                "N": window,
                "ratio": ratio,
                "flag": evidence.flag,
                "seed": config.seed,
                "version": LIBRARY_VERSION,
            }
        )

    exp = expansivity_probe(w, n_max=config.n_max)
    add(exp.method, config.n_max, f"{exp.details['max_growth_pow']:.6g}", exp)
    witness = report.uniformly_expansive.certificate.get("witness_n", 1)
    uep = uniform_expansivity_probe(w, config.threshold, witness)
    add(uep.method, witness, "", uep)
    sweep = hypercyclicity_sweep(nu, [Fraction(1, 10), Fraction(1, 100)], [1, config.window])
    witnesses = [row["witness_k"] for row in sweep.details["table"]]
    add(sweep.method, config.window, ";".join(str(k) for k in witnesses), sweep)
    ly = li_yorke_probe(w, nu, window=config.window)
    ratio = ""
    if "window_max" in ly.details:
        ratio = f"{ly.details['window_max']:.6g}/{ly.details['window_min']:.6g}"
    add(ly.method, config.window, ratio, ly)
    _emit(write_csv(rows, ["spec_id", "method", "N", "ratio", "flag", "seed", "version"]), config.output)
    return 0


def _cmd_factor_check(config: RunConfig) -> int:
    spec = load_spec(config.spec_path)
    model = (
        spec.payload
        if isinstance(spec.payload, DissipativeModel)
        else model_from_weights(spec.payload)
    )
    rng = random.Random(config.seed)
    exact = config.mode == "exact"
    rows = []
    failures = []
    for trial in range(config.trials):
        phi = random_lp_function(rng, model)
        x = random_shift_vector(rng)
        if not exact:
            phi = LpFunction({key: float(v) for key, v in phi.coeffs.items()})
            x = ShiftVector({k: float(v) for k, v in x.coeffs.items()})
        residual = semiconjugacy_residual(model, phi)
        passed = float(residual) <= (0.0 if exact else 1e-10)
        if not passed:
            failures.append(("semiconjugacy", trial))
        rows.append(
            {
                "spec_id": spec.spec_id,
                "check": "semiconjugacy",
                "trial": trial,
                "n": 1,
                "k": "",
                "lhs": f"{float(residual):.12g}",
                "rhs": "0",
                "constant": "",
                "passed": passed,
                "seed": config.seed,
                "version": LIBRARY_VERSION,
            }
        )
        witness = strong_selector_check(model, x, range(-5, 6))
        if not witness.passed:
            failures.append(("strong-selector", trial))
        rows.append(
            {
                "spec_id": spec.spec_id,
                "check": "strong-selector",
                "trial": trial,
                "n": "[-5,5]",
                "k": "",
                "lhs": f"{witness.lhs:.12g}",
                "rhs": f"{witness.rhs:.12g}",
                "constant": "1",
                "passed": witness.passed,
                "seed": config.seed,
                "version": LIBRARY_VERSION,
            }
        )
        k = rng.randint(-4, 4)
        n = rng.randint(-4, 4)
        comparison = distortion_norm_comparison(model, phi, k, n)
        if not comparison.passed:
            failures.append(("distortion-comparison", trial))
        rows.append(
            {
                "spec_id": spec.spec_id,
                "check": "distortion-comparison",
                "trial": trial,
                "n": n,
                "k": k,
                "lhs": f"{comparison.lhs:.12g}",
                "rhs": f"{comparison.rhs:.12g}",
                "constant": f"{comparison.constant:.12g}",
                "passed": comparison.passed,
                "seed": config.seed,
                "version": LIBRARY_VERSION,
            }
        )
    header = ["spec_id", "check", "trial", "n", "k", "lhs", "rhs", "constant", "passed", "seed", "version"]
    _emit(write_csv(rows, header), config.output)
    if failures:
        # these identities hold on every valid model; a failure is a bug
        raise InvariantViolation(f"factor-map identity failures: {failures[:5]}")
    return 0


def _cmd_gen_examples(args: argparse.Namespace) -> int:
    paths = generate_corpus(args.out, seed=args.seed)
    sys.stdout.write(f"wrote {len(paths)} spec files to {corpus_dir(args.out)}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shiftlike", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("table", "csv", "json"), default="table")
        p.add_argument("--window", type=int, default=64, help="window size (>= 8)")
        p.add_argument("--trials", type=int, default=20, help="number of seeded trials (>= 1)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--mode", choices=("exact", "float"), default="exact")
        p.add_argument("--c", default="2", help="expansivity threshold, rational > 1")
        p.add_argument("--properties", default="", help="comma-separated property subset")
        p.add_argument("--output", default=None, help="write to file instead of stdout")

    p_classify = sub.add_parser("classify", help="decide all properties of a spec")
    p_classify.add_argument("spec")
    common(p_classify)
    p_classify.set_defaults(func=_cmd_classify)

    p_shadow = sub.add_parser("shadow", help="run the shadowing solvers")
    p_shadow.add_argument("spec")
    common(p_shadow)
    p_shadow.add_argument("--method", choices=("splitting", "optimizer", "both"), default="splitting")
    p_shadow.set_defaults(func=_cmd_shadow)

    p_probe = sub.add_parser("probe", help="run definitional probes")
    p_probe.add_argument("spec")
    common(p_probe)
    p_probe.add_argument("--n-max", type=int, default=40, dest="n_max")
    p_probe.set_defaults(func=_cmd_probe)

    p_factor = sub.add_parser("factor-check", help="factor-map residuals and witnesses")
    p_factor.add_argument("spec")
    common(p_factor)
    p_factor.set_defaults(func=_cmd_factor_check)

    p_gen = sub.add_parser("gen-examples", help="write the canonical + random corpus")
    p_gen.add_argument("--out", default=None, help="corpus directory (default $SHIFTLIKE_CORPUS_DIR or ./corpus)")
    p_gen.add_argument("--seed", type=int, default=20240311)
    p_gen.set_defaults(func=_cmd_gen_examples)
    return parser


def _dump_repro_bundle(config: Optional[RunConfig], args: argparse.Namespace, error: Exception) -> str:
    bundle = {
        "error": str(error),
        "failing_check": type(error).__name__,
        "command": getattr(args, "command", None),
        "spec_path": getattr(args, "spec", None),
        "seed": getattr(args, "seed", None),
        "version": LIBRARY_VERSION,
    }
    spec_path = getattr(args, "spec", None)
    if spec_path:
        try:
            with open(spec_path, "r", encoding="utf-8") as fh:
                bundle["spec"] = json.load(fh)
        except Exception:
            bundle["spec"] = None
    path = "shiftlike-repro-bundle.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(bundle, fh, indent=2, sort_keys=True)
    return path


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = None
    try:
        if args.command == "gen-examples":
            return args.func(args)
        config = config_from_args(args)
        return args.func(config)
    except SpecValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except InvariantViolation as exc:
        path = _dump_repro_bundle(config, args, exc)
        sys.stderr.write(f"internal invariant violation: {exc}\nreproduction bundle: {path}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
