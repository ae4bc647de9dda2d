"""JSON system-spec grammar and CSV/JSON serialization.

A system spec file is a JSON object with the fields

* ``p``: exact rational as a string ("2", "3/2") or JSON integer;
* either ``weights``: a sequence object, or both ``atoms`` (array of
  rationals) and ``ratio_seqs`` (array of sequence objects);
* optional ``spec_id``: string label echoed into outputs.

A sequence object is ``{"k_min": int, "core": [...], "left_period": [...],
"right_period": [...]}`` with rational entries.  Rationals must be strings
in "num/den" form (or bare integer strings) or JSON integers; JSON floats
are rejected everywhere - a float literal has already lost exactness, and
silently accepting one is the failure mode this format exists to exclude.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .exact import SpecValidationError, format_rational, parse_rational
from .model import DissipativeModel, WeightSpec, build_model
from .operators import LpFunction, ShiftVector
from .sequences import PeriodicSeq

LIBRARY_VERSION = "0.1.0"


@dataclass(frozen=True)
class SystemSpec:
    """A parsed spec file: a weight spec or a model, plus its label."""

    spec_id: str
    payload: Union[WeightSpec, DissipativeModel]


class _StrictFloatRejection(json.JSONDecoder):
    def __init__(self, *args, **kwargs):
        kwargs["parse_float"] = self._reject
        super().__init__(*args, **kwargs)

    @staticmethod
    def _reject(text: str):
        raise SpecValidationError(
            f"float literal {text} in spec file; use exact string rationals like \"1/3\""
        )


def _parse_seq(obj, *, field: str) -> PeriodicSeq:
    if not isinstance(obj, dict):
        raise SpecValidationError(f"{field}: expected an object with k_min/core/left_period/right_period")
    missing = {"k_min", "core", "left_period", "right_period"} - set(obj)
    if missing:
        raise SpecValidationError(f"{field}: missing keys {sorted(missing)}")
    k_min = obj["k_min"]
    if not isinstance(k_min, int) or isinstance(k_min, bool):
        raise SpecValidationError(f"{field}.k_min: expected an integer")

    def rationals(key: str) -> tuple[Fraction, ...]:
        raw = obj[key]
        if not isinstance(raw, list) or not raw:
            raise SpecValidationError(f"{field}.{key}: expected a nonempty array")
        return tuple(parse_rational(v, field=f"{field}.{key}[{i}]") for i, v in enumerate(raw))

    return PeriodicSeq(k_min, rationals("core"), rationals("left_period"), rationals("right_period"))


def parse_spec_dict(data: dict, *, default_id: str = "spec") -> SystemSpec:
    if not isinstance(data, dict):
        raise SpecValidationError("spec: top level must be a JSON object")
    spec_id = data.get("spec_id", default_id)
    if not isinstance(spec_id, str):
        raise SpecValidationError("spec_id: expected a string")
    if "p" not in data:
        raise SpecValidationError("p: missing")
    p = parse_rational(data["p"], field="p")
    has_weights = "weights" in data
    has_model = "atoms" in data or "ratio_seqs" in data
    if has_weights and has_model:
        raise SpecValidationError("give either weights or atoms+ratio_seqs, not both")
    if has_weights:
        seq = _parse_seq(data["weights"], field="weights")
        return SystemSpec(spec_id, WeightSpec(p, seq))
    if not ("atoms" in data and "ratio_seqs" in data):
        raise SpecValidationError("spec needs weights, or both atoms and ratio_seqs")
    atoms_raw = data["atoms"]
    if not isinstance(atoms_raw, list) or not atoms_raw:
        raise SpecValidationError("atoms: expected a nonempty array")
    atoms = [parse_rational(v, field=f"atoms[{i}]") for i, v in enumerate(atoms_raw)]
    seqs_raw = data["ratio_seqs"]
    if not isinstance(seqs_raw, list) or len(seqs_raw) != len(atoms):
        raise SpecValidationError("ratio_seqs: expected one sequence object per atom")
    seqs = [_parse_seq(obj, field=f"ratio_seqs[{i}]") for i, obj in enumerate(seqs_raw)]
    return SystemSpec(spec_id, build_model(p, atoms, seqs))


def load_spec(path: str) -> SystemSpec:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh, cls=_StrictFloatRejection)
        except json.JSONDecodeError as exc:
            raise SpecValidationError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    default_id = os.path.splitext(os.path.basename(path))[0]
    return parse_spec_dict(data, default_id=default_id)


def _seq_to_dict(seq: PeriodicSeq) -> dict:
    return {
        "k_min": seq.k_min,
        "core": [format_rational(v) for v in seq.core],
        "left_period": [format_rational(v) for v in seq.left],
        "right_period": [format_rational(v) for v in seq.right],
    }


def spec_to_dict(spec: SystemSpec) -> dict:
    payload = spec.payload
    if isinstance(payload, WeightSpec):
        return {
            "spec_id": spec.spec_id,
            "p": format_rational(payload.p),
            "weights": _seq_to_dict(payload.seq),
        }
    return {
        "spec_id": spec.spec_id,
        "p": format_rational(payload.p),
        "atoms": [format_rational(v) for v in payload.atom_measures],
        "ratio_seqs": [_seq_to_dict(s) for s in payload.atom_ratio_seqs],
    }


def dump_spec(spec: SystemSpec, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spec_to_dict(spec), fh, indent=2, sort_keys=True)
        fh.write("\n")


def shift_vector_to_json(x: ShiftVector, exact: bool = True) -> list:
    """Serialize as an array of (index, value) pairs, sorted by index."""
    out = []
    for k in x.support():
        v = x.coeffs[k]
        if exact and isinstance(v, (int, Fraction)):
            out.append([k, format_rational(Fraction(v))])
        else:
            out.append([k, float(v)])
    return out


def shift_vector_from_json(data: Sequence, exact: bool = True) -> ShiftVector:
    coeffs = {}
    for item in data:
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise SpecValidationError("vector: expected (index, value) pairs")
        k, v = item
        if not isinstance(k, int) or isinstance(k, bool):
            raise SpecValidationError("vector: index must be an integer")
        coeffs[k] = parse_rational(v, field=f"vector[{k}]") if exact else float(v)
    return ShiftVector(coeffs)


def lp_function_to_json(phi: LpFunction, exact: bool = True) -> list:
    """Serialize as an array of (level, atom, value) triples."""
    out = []
    for (k, i) in sorted(phi.coeffs):
        v = phi.coeffs[(k, i)]
        if exact and isinstance(v, (int, Fraction)):
            out.append([k, i, format_rational(Fraction(v))])
        else:
            out.append([k, i, float(v)])
    return out


def lp_function_from_json(data: Sequence, exact: bool = True) -> LpFunction:
    coeffs = {}
    for item in data:
        if not isinstance(item, (list, tuple)) or len(item) != 3:
            raise SpecValidationError("function: expected (level, atom, value) triples")
        k, i, v = item
        if not isinstance(k, int) or not isinstance(i, int):
            raise SpecValidationError("function: level and atom must be integers")
        coeffs[(k, i)] = parse_rational(v, field=f"function[{k},{i}]") if exact else float(v)
    return LpFunction(coeffs)


def write_csv(rows: Sequence[dict], header: Sequence[str]) -> str:
    """Render rows (dicts) as a deterministic CSV string with the given header."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([row.get(col, "") for col in header])
    return buf.getvalue()


def write_orbit_csv(norms: Sequence[tuple[int, object]]) -> str:
    """CSV of orbit p-th power norms with header n,norm_p."""
    rows = [{"n": n, "norm_p": _render_number(v)} for n, v in norms]
    return write_csv(rows, ["n", "norm_p"])


def _render_number(value) -> str:
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, int):
        return str(value)
    return repr(float(value))
