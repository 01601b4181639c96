"""JSON encoding and decoding for every object the CLI exchanges.

Matrix schema, used everywhere: ``{"dim": d, "re": [[...]], "im": [[...]]}``
with row-major d x d arrays of doubles; a missing ``"im"`` means an all-zero
imaginary part.  Decoding re-validates all domain invariants, since files
are untrusted input.
"""

from __future__ import annotations

import json
from collections.abc import Mapping

import numpy as np

from .errors import ParseError
from .instruments import (
    Instrument,
    OperationMap,
    holevo_instrument,
    lueders_instrument,
    trivial_instrument,
)
from .linalg import TOL_LIN, TOL_PSD
from .observables import GeneralObservable, Observable, RealObservable
from .states import DensityOperator, bloch_state
from .statistics import UncertaintyReport

SCHEMA_VERSION = 1


def _expect(obj, key: str, field: str):
    if not isinstance(obj, Mapping):
        raise ParseError(f"{field}: expected a JSON object", field=field)
    if key not in obj:
        raise ParseError(f"{field}: missing required field '{key}'",
                         field=f"{field}.{key}")
    return obj[key]


def _real_grid(raw, d: int, field: str) -> np.ndarray:
    arr = np.asarray(raw, dtype=float) if _is_grid(raw) else None
    if arr is None or arr.shape != (d, d) or not np.all(np.isfinite(arr)):
        raise ParseError(f"{field}: expected a {d}x{d} array of finite numbers",
                         field=field)
    return arr


def _is_grid(raw) -> bool:
    try:
        np.asarray(raw, dtype=float)
        return True
    except (TypeError, ValueError):
        return False


def encode_matrix(M: np.ndarray) -> dict:
    M = np.asarray(M, dtype=complex)
    out = {"dim": int(M.shape[0]), "re": M.real.tolist()}
    if np.any(M.imag != 0.0):
        out["im"] = M.imag.tolist()
    return out


def decode_matrix(obj, field: str = "matrix") -> np.ndarray:
    d = _expect(obj, "dim", field)
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise ParseError(f"{field}.dim: expected a positive integer",
                         field=f"{field}.dim")
    re = _real_grid(_expect(obj, "re", field), d, f"{field}.re")
    if "im" in obj:
        im = _real_grid(obj["im"], d, f"{field}.im")
    else:
        im = np.zeros((d, d))
    return re + 1j * im


def encode_state(rho: DensityOperator) -> dict:
    return {"type": "density", "matrix": encode_matrix(rho.matrix)}


def decode_state(obj, field: str = "state", *, tol_lin: float = TOL_LIN,
                 tol_psd: float = TOL_PSD) -> DensityOperator:
    kind = _expect(obj, "type", field)
    if kind == "density":
        return DensityOperator(decode_matrix(_expect(obj, "matrix", field),
                                             f"{field}.matrix"),
                               tol_lin=tol_lin, tol_psd=tol_psd)
    if kind == "bloch":
        r = _expect(obj, "r", field)
        if not isinstance(r, list) or len(r) != 3:
            raise ParseError(f"{field}.r: expected a list of three numbers",
                             field=f"{field}.r")
        return bloch_state([float(v) for v in r], tol_lin=tol_lin)
    raise ParseError(f"{field}.type: unknown state type {kind!r}",
                     field=f"{field}.type")


def label_to_str(label) -> str:
    """Flatten outcome labels for JSON: pair labels become 'x,y'."""
    if isinstance(label, tuple):
        return ",".join(label_to_str(part) for part in label)
    if isinstance(label, float):
        return repr(label)
    return str(label)


def encode_observable(A: Observable) -> dict:
    out = {"type": "observable",
           "effects": [encode_matrix(E) for E in A.effects]}
    if isinstance(A, RealObservable):
        out["outcomes"] = list(A.outcomes)
    else:
        out["labels"] = [label_to_str(lab) for lab in A.labels]
    return out


def decode_observable(obj, field: str = "observable", *,
                      tol_lin: float = TOL_LIN,
                      tol_psd: float = TOL_PSD) -> Observable:
    kind = _expect(obj, "type", field)
    if kind != "observable":
        raise ParseError(f"{field}.type: expected 'observable', got {kind!r}",
                         field=f"{field}.type")
    raw_effects = _expect(obj, "effects", field)
    if not isinstance(raw_effects, list) or not raw_effects:
        raise ParseError(f"{field}.effects: expected a nonempty list",
                         field=f"{field}.effects")
    effects = [decode_matrix(E, f"{field}.effects[{i}]")
               for i, E in enumerate(raw_effects)]
    if "outcomes" in obj:
        outcomes = obj["outcomes"]
        if not isinstance(outcomes, list):
            raise ParseError(f"{field}.outcomes: expected a list",
                             field=f"{field}.outcomes")
        return RealObservable([float(x) for x in outcomes], effects,
                              tol_lin=tol_lin, tol_psd=tol_psd)
    if "labels" in obj:
        labels = obj["labels"]
        if not isinstance(labels, list):
            raise ParseError(f"{field}.labels: expected a list",
                             field=f"{field}.labels")
        return GeneralObservable([str(s) for s in labels], effects,
                                 tol_lin=tol_lin, tol_psd=tol_psd)
    raise ParseError(f"{field}: needs either 'outcomes' or 'labels'",
                     field=field)


def _parse_outcome_key(key: str):
    """Map keys in JSON objects are strings; recover numeric outcomes."""
    try:
        return float(key)
    except ValueError:
        return key


def decode_function_map(obj, field: str = "map") -> dict:
    """Coarse-graining map {label: real} with numeric keys recovered."""
    if not isinstance(obj, Mapping) or not obj:
        raise ParseError(f"{field}: expected a nonempty JSON object", field=field)
    out = {}
    for key, val in obj.items():
        try:
            out[_parse_outcome_key(key)] = float(val)
        except (TypeError, ValueError):
            raise ParseError(f"{field}.{key}: expected a number",
                             field=f"{field}.{key}") from None
    return out


def encode_instrument(inst: Instrument) -> dict:
    return {
        "type": "instrument",
        "family": "kraus",
        "outcomes": [label_to_str(x) if not isinstance(x, (int, float)) else x
                     for x in inst.outcomes],
        "kraus": [[encode_matrix(K) for K in m.kraus] for m in inst.maps],
    }


def decode_instrument(obj, field: str = "instrument", *,
                      tol_lin: float = TOL_LIN,
                      tol_psd: float = TOL_PSD) -> Instrument:
    kind = _expect(obj, "type", field)
    if kind != "instrument":
        raise ParseError(f"{field}.type: expected 'instrument', got {kind!r}",
                         field=f"{field}.type")
    family = _expect(obj, "family", field)
    if family == "trivial":
        dim = _expect(obj, "dim", field)
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
            raise ParseError(f"{field}.dim: expected a positive integer",
                             field=f"{field}.dim")
        omega_raw = _expect(obj, "omega", field)
        omega = decode_function_map(omega_raw, f"{field}.omega")
        return trivial_instrument(omega, dim, tol_lin=tol_lin)
    if family == "holevo":
        A = decode_observable(_expect(obj, "observable", field),
                              f"{field}.observable",
                              tol_lin=tol_lin, tol_psd=tol_psd)
        raw_states = _expect(obj, "states", field)
        if not isinstance(raw_states, list):
            raise ParseError(f"{field}.states: expected a list",
                             field=f"{field}.states")
        alphas = [decode_state(s, f"{field}.states[{i}]",
                               tol_lin=tol_lin, tol_psd=tol_psd)
                  for i, s in enumerate(raw_states)]
        return holevo_instrument(A, alphas, tol_lin=tol_lin)
    if family == "lueders":
        A = decode_observable(_expect(obj, "observable", field),
                              f"{field}.observable",
                              tol_lin=tol_lin, tol_psd=tol_psd)
        return lueders_instrument(A, tol_lin=tol_lin)
    if family == "kraus":
        raw_outcomes = _expect(obj, "outcomes", field)
        raw_kraus = _expect(obj, "kraus", field)
        if not isinstance(raw_outcomes, list) or not isinstance(raw_kraus, list):
            raise ParseError(f"{field}: 'outcomes' and 'kraus' must be lists",
                             field=field)
        maps = [OperationMap([decode_matrix(K, f"{field}.kraus[{i}][{j}]")
                              for j, K in enumerate(ops)], tol_psd=tol_psd)
                for i, ops in enumerate(raw_kraus)]
        outcomes = [_parse_outcome_key(x) if isinstance(x, str) else float(x)
                    for x in raw_outcomes]
        return Instrument(outcomes, maps, tol_lin=tol_lin)
    raise ParseError(f"{field}.family: unknown family {family!r}",
                     field=f"{field}.family")


def encode_report(rep: UncertaintyReport) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "commutator_term": rep.commutator_term,
        "covariance_sq": rep.covariance_sq,
        "correlation_sq": rep.correlation_sq,
        "variance_product": rep.variance_product,
        "equation_residual": rep.equation_residual,
        "inequality_slack": rep.inequality_slack,
        "tol": rep.tol,
    }


def canonical_json(obj, compact: bool = False) -> str:
    """Deterministic serialization: sorted keys, fixed separators."""
    if compact:
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return json.dumps(obj, sort_keys=True, indent=2)


def load_json_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ParseError(f"file not found: {path}", field=path) from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}, "
                         f"column {exc.colno}: {exc.msg}", field=path) from None
