"""JSON-driven command-line front end.

Subcommands: uncertainty, demo, fuzz, sweep-example4, sharp, conjugate,
coarse-grain, sequential, conditioned, validate.  All file I/O uses the JSON
schemas defined by the serialization module.  Exit codes: 0 success, 1 fuzz
found a violated property, 2 parse or validation error (with a machine-
readable diagnostic on stdout).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import demos, fuzz, serialization as ser
from .errors import ParseError, QobsError, ValidationError
from .instruments import conditioned_observable, sequential_product
from .linalg import TOL_LIN, TOL_PSD, TOL_STAT, require_hermitian
from .observables import RealObservable, coarse_grain, conjugate, sharp_version
from .sampling import random_bloch_vector
from .statistics import uncertainty_report
from .serialization import SCHEMA_VERSION


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-lin", type=float, default=TOL_LIN,
                        help="tolerance for structural identities")
    common.add_argument("--tol-psd", type=float, default=TOL_PSD,
                        help="negative-eigenvalue slack for PSD checks")
    common.add_argument("--tol-stat", type=float, default=TOL_STAT,
                        help="tolerance for statistical identities")
    common.add_argument("--cluster-tol", type=float, default=None,
                        help="eigenvalue clustering width (default scale-aware)")
    common.add_argument("--seed", type=int, default=42,
                        help="PRNG seed for randomized commands")
    common.add_argument("--json", action="store_true",
                        help="compact single-line JSON output")
    return common


def _build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="qobs",
        description="Finite-dimensional quantum measurement toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("uncertainty", parents=[common],
                       help="uncertainty report for a state and two observables")
    p.add_argument("--state", required=True, metavar="FILE")
    p.add_argument("--obs-a", required=True, metavar="FILE")
    p.add_argument("--obs-b", required=True, metavar="FILE")
    p.add_argument("--tol", type=float, default=None,
                   help="alias for --tol-stat")

    p = sub.add_parser("demo", parents=[common],
                       help="closed-form demonstration cases")
    p.add_argument("name", choices=list(demos.DEMO_NAMES))
    p.add_argument("--mu", type=float, default=0.5)
    p.add_argument("--bloch", type=str, default="0.3,0.4,0.2",
                   metavar="R1,R2,R3")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--outcomes", type=int, default=2)

    p = sub.add_parser("fuzz", parents=[common],
                       help="randomized property verification")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--dims", type=str, default="2..6",
                   help="comma list or A..B range of dimensions")
    p.add_argument("--output", type=str, default="-",
                   help="summary destination path, '-' for stdout")
    p.add_argument("--replay", type=str, default=None, metavar="FILE",
                   help="re-evaluate a dumped worst instance instead")

    p = sub.add_parser("sweep-example4", parents=[common],
                       help="noisy-spin term sweep over mu and Bloch vectors")
    p.add_argument("--mu-grid", type=str, default="0,0.25,0.5,0.75,1")
    p.add_argument("--samples", type=int, default=50,
                   help="random Bloch vectors per mu")
    p.add_argument("--surface", type=int, default=10,
                   help="how many of the samples lie on the sphere")
    p.add_argument("--format", choices=["json", "csv"], default="json")

    for name, help_text in [("sharp", "sharp version of an observable"),
                            ("conjugate", "conjugate of an observable")]:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--obs", required=True, metavar="FILE")

    p = sub.add_parser("coarse-grain", parents=[common],
                       help="relabel outcomes through a real-valued map")
    p.add_argument("--obs", required=True, metavar="FILE")
    p.add_argument("--map", required=True, metavar="FILE",
                   help="JSON object {label: value}")

    p = sub.add_parser("sequential", parents=[common],
                       help="product observable of instrument then observable")
    p.add_argument("--instrument", required=True, metavar="FILE")
    p.add_argument("--obs", required=True, metavar="FILE")

    p = sub.add_parser("conditioned", parents=[common],
                       help="observable conditioned by a nonselective measurement")
    p.add_argument("--instrument", required=True, metavar="FILE")
    p.add_argument("--obs", required=True, metavar="FILE")

    p = sub.add_parser("validate", parents=[common],
                       help="validate any toolkit JSON file")
    p.add_argument("file", metavar="FILE")
    return parser


def _emit(obj, args, stream=None) -> None:
    stream = stream or sys.stdout
    stream.write(ser.canonical_json(obj, compact=args.json))
    stream.write("\n")


def _diagnostic(exc: Exception, path: str | None) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "error": {
            "type": type(exc).__name__,
            "file": path,
            "field": getattr(exc, "field", None),
            "invariant": getattr(exc, "invariant", None),
            "violation": getattr(exc, "violation", None),
            "message": str(exc),
        },
    }


class _FileContext:
    """Tracks which input file a parse/validation error belongs to."""

    def __init__(self):
        self.path: str | None = None

    def load(self, path: str, decode, *dargs, **dkw):
        self.path = path
        raw = ser.load_json_file(path)
        out = decode(raw, *dargs, **dkw)
        self.path = None
        return out


def _decode_operand(obj, field: str, tol_lin: float, tol_psd: float):
    """An observable file or a bare Hermitian matrix file."""
    if isinstance(obj, dict) and obj.get("type") == "observable":
        return ser.decode_observable(obj, field, tol_lin=tol_lin,
                                     tol_psd=tol_psd)
    matrix = ser.decode_matrix(obj, field)
    return require_hermitian(matrix, tol_lin, name=field)


def _parse_dims(text: str) -> tuple[int, ...]:
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(part) for part in text.split(","))


def _parse_floats(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part.strip() != ""]


def _cmd_uncertainty(args, ctx: _FileContext) -> int:
    rho = ctx.load(args.state, ser.decode_state, "state",
                   tol_lin=args.tol_lin, tol_psd=args.tol_psd)
    A = ctx.load(args.obs_a, _decode_operand, "obs-a", args.tol_lin, args.tol_psd)
    B = ctx.load(args.obs_b, _decode_operand, "obs-b", args.tol_lin, args.tol_psd)
    tol = args.tol if args.tol is not None else args.tol_stat
    rep = uncertainty_report(rho, A, B, tol=tol)
    out = ser.encode_report(rep)
    out["equality"] = bool(rep.inequality_slack
                           <= tol * max(1.0, rep.correlation_sq))
    _emit(out, args)
    return 0


def _cmd_demo(args, ctx: _FileContext) -> int:
    params = {}
    if args.name == "example4":
        bloch = _parse_floats(args.bloch)
        if len(bloch) != 3:
            raise ValidationError("--bloch needs three comma-separated reals",
                                  invariant="bloch-shape", field="--bloch")
        params = {"mu": args.mu, "bloch": tuple(bloch)}
    elif args.name != "example1":
        params = {"seed": args.seed}
        if args.name in ("example5", "example6", "example7"):
            params["outcomes"] = args.outcomes
        if args.dim is not None:
            params["dim"] = args.dim
    result = demos.run_demo(args.name, **params)
    _emit(result, args)
    return 0


def _cmd_fuzz(args, ctx: _FileContext) -> int:
    config = fuzz.RunConfig(seed=args.seed, trials=args.trials,
                            dims=_parse_dims(args.dims),
                            tol_lin=args.tol_lin, tol_psd=args.tol_psd,
                            tol_stat=args.tol_stat,
                            cluster_tol=args.cluster_tol)
    if args.replay is not None:
        dump = ctx.load(args.replay, lambda raw: raw)
        result = fuzz.replay_instance(dump, config)
        _emit(result, args)
        return 0
    summary = fuzz.run_fuzz(config)
    text = ser.canonical_json(summary, compact=args.json) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0 if summary["violations"] == 0 else 1


def _cmd_sweep(args, ctx: _FileContext) -> int:
    mu_grid = _parse_floats(args.mu_grid)
    if not mu_grid:
        raise ValidationError("--mu-grid must be nonempty",
                              invariant="nonempty-grid", field="--mu-grid")
    rng = np.random.default_rng(args.seed)
    n_surface = min(args.surface, args.samples)
    vectors = [random_bloch_vector(rng, surface=True) for _ in range(n_surface)]
    vectors += [random_bloch_vector(rng)
                for _ in range(args.samples - n_surface)]
    result = demos.sweep_noisy_spin(mu_grid, vectors)
    if args.format == "csv":
        rows = result["rows"]
        cols = list(rows[0].keys())
        lines = [",".join(cols)]
        for row in rows:
            lines.append(",".join(repr(row[c]) if isinstance(row[c], float)
                                  else str(row[c]) for c in cols))
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        _emit(result, args)
    return 0


def _cmd_sharp(args, ctx: _FileContext) -> int:
    A = ctx.load(args.obs, ser.decode_observable, "observable",
                 tol_lin=args.tol_lin, tol_psd=args.tol_psd)
    if not isinstance(A, RealObservable):
        raise ValidationError("sharp version needs a real-valued observable",
                              invariant="real-outcomes", field="observable")
    out = ser.encode_observable(
        sharp_version(A, args.cluster_tol, tol_lin=args.tol_lin))
    out["schema"] = SCHEMA_VERSION
    _emit(out, args)
    return 0


def _cmd_conjugate(args, ctx: _FileContext) -> int:
    A = ctx.load(args.obs, ser.decode_observable, "observable",
                 tol_lin=args.tol_lin, tol_psd=args.tol_psd)
    if not isinstance(A, RealObservable):
        raise ValidationError("conjugation needs a real-valued observable",
                              invariant="real-outcomes", field="observable")
    out = ser.encode_observable(
        conjugate(A, args.cluster_tol, tol_lin=args.tol_lin))
    out["schema"] = SCHEMA_VERSION
    _emit(out, args)
    return 0


def _cmd_coarse_grain(args, ctx: _FileContext) -> int:
    A = ctx.load(args.obs, ser.decode_observable, "observable",
                 tol_lin=args.tol_lin, tol_psd=args.tol_psd)
    fmap = ctx.load(args.map, ser.decode_function_map, "map")
    out = ser.encode_observable(coarse_grain(A, fmap, tol_lin=args.tol_lin))
    out["schema"] = SCHEMA_VERSION
    _emit(out, args)
    return 0


def _cmd_sequential(args, ctx: _FileContext) -> int:
    inst = ctx.load(args.instrument, ser.decode_instrument, "instrument",
                    tol_lin=args.tol_lin, tol_psd=args.tol_psd)
    B = ctx.load(args.obs, ser.decode_observable, "observable",
                 tol_lin=args.tol_lin, tol_psd=args.tol_psd)
    out = ser.encode_observable(sequential_product(inst, B,
                                                   tol_lin=args.tol_lin))
    out["schema"] = SCHEMA_VERSION
    _emit(out, args)
    return 0


def _cmd_conditioned(args, ctx: _FileContext) -> int:
    inst = ctx.load(args.instrument, ser.decode_instrument, "instrument",
                    tol_lin=args.tol_lin, tol_psd=args.tol_psd)
    B = ctx.load(args.obs, ser.decode_observable, "observable",
                 tol_lin=args.tol_lin, tol_psd=args.tol_psd)
    out = ser.encode_observable(conditioned_observable(inst, B,
                                                       tol_lin=args.tol_lin))
    out["schema"] = SCHEMA_VERSION
    _emit(out, args)
    return 0


def _cmd_validate(args, ctx: _FileContext) -> int:
    raw = ser.load_json_file(args.file)
    ctx.path = args.file
    kind = raw.get("type") if isinstance(raw, dict) else None
    if kind in ("density", "bloch"):
        rho = ser.decode_state(raw, "state", tol_lin=args.tol_lin,
                               tol_psd=args.tol_psd)
        summary = {"dim": rho.dim, "min_eigenvalue": rho.eigenvalues[0]}
    elif kind == "observable":
        A = ser.decode_observable(raw, "observable", tol_lin=args.tol_lin,
                                  tol_psd=args.tol_psd)
        summary = {"dim": A.dim, "outcomes": len(A)}
    elif kind == "instrument":
        inst = ser.decode_instrument(raw, "instrument", tol_lin=args.tol_lin,
                                     tol_psd=args.tol_psd)
        summary = {"dim": inst.dim, "outcomes": len(inst)}
    elif isinstance(raw, dict) and "re" in raw:
        M = ser.decode_matrix(raw, "matrix")
        summary = {"dim": int(M.shape[0])}
        kind = "matrix"
    else:
        raise ParseError("file has no recognizable 'type' field", field="type")
    ctx.path = None
    _emit({"schema": SCHEMA_VERSION, "valid": True, "kind": kind,
           "summary": summary}, args)
    return 0


_HANDLERS = {
    "uncertainty": _cmd_uncertainty,
    "demo": _cmd_demo,
    "fuzz": _cmd_fuzz,
    "sweep-example4": _cmd_sweep,
    "sharp": _cmd_sharp,
    "conjugate": _cmd_conjugate,
    "coarse-grain": _cmd_coarse_grain,
    "sequential": _cmd_sequential,
    "conditioned": _cmd_conditioned,
    "validate": _cmd_validate,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    ctx = _FileContext()
    try:
        return _HANDLERS[args.command](args, ctx)
    except (ParseError, ValidationError) as exc:
        _emit(_diagnostic(exc, ctx.path), args)
        return 2
    except QobsError as exc:
        _emit(_diagnostic(exc, ctx.path), args)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
