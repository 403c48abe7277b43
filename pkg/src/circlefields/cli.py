"""Command-line front end.

Commands: analyze, reduce, commutant, verify, sample.  Field inputs are
expressions over t (see the parser grammar) or paths to JSON files
holding a serialized coefficient or a canonical-pair document; anything
ending in ``.json`` or starting with ``@`` is treated as a path.

Exit codes: 0 ok, 2 bad input, 3 inadmissible zero set, 4 not a
realization, 5 reduction residual above tolerance, 6 dependent commutant
in strict mode.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import commutant as commutant_mod
from . import parser as expr_parser
from . import reduction, verify
from .fields import VectorField, bracket_residual, pushforward
from .maps import SinePerturbation, Rotation, compose, map_from_dict
from .singular import NotClassC, find_singular
from .trig import TAU, from_json_dict, to_json_dict, uniform_grid

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_CLASS_C = 3
EXIT_NOT_REALIZATION = 4
EXIT_RESIDUAL = 5
EXIT_DEPENDENT = 6


class _InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    resolution: int = 1024
    tol_zero: float = 1e-9
    tol_bracket: float = 1e-8
    seed: int = 0
    out: str | None = None
    fmt: str = "json"

    def validate(self):
        if self.command != "sample" and self.resolution < 64:
            raise _InputError("resolution must be at least 64")
        if self.command == "sample" and self.resolution < 1:
            raise _InputError("sample resolution must be positive")
        if self.tol_zero <= 0 or self.tol_bracket <= 0:
            raise _InputError("tolerances must be positive")


def _load_json(path: str) -> dict:
    with open(path.lstrip("@"), encoding="utf-8") as fh:
        return json.load(fh)


def _is_pair_doc(doc) -> bool:
    return isinstance(doc, dict) and {"n", "lambda", "sigma"} <= set(doc)


def _field_from_arg(arg: str) -> VectorField:
    if arg.startswith("@") or arg.endswith(".json"):
        doc = _load_json(arg)
        if _is_pair_doc(doc):
            raise _InputError("got a canonical-pair document where a field was expected")
        return VectorField(from_json_dict(doc))
    return VectorField(expr_parser.parse(arg))


def _emit(cfg: RunConfig, payload: dict) -> None:
    text = json.dumps(payload, indent=2)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _write_csv(path_or_stdout, header: list[str], rows) -> None:
    if path_or_stdout is None:
        writer = csv.writer(sys.stdout)
        writer.writerow(header)
        writer.writerows(rows)
    else:
        with open(path_or_stdout, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)


def cmd_analyze(cfg: RunConfig) -> int:
    fields = [_field_from_arg(a) for a in cfg.inputs]
    payload: dict = {"fields": []}
    code = EXIT_OK
    for arg, f in zip(cfg.inputs, fields):
        try:
            report = find_singular(f.coeff, tol_zero=cfg.tol_zero)
            payload["fields"].append({"input": arg, "singularities": report.to_dict()})
        except NotClassC as exc:
            payload["fields"].append({"input": arg, "singularities": exc.report.to_dict()})
            code = EXIT_NOT_CLASS_C
    if len(fields) == 2:
        payload["bracket_residual"] = bracket_residual(fields[0], fields[1])
        payload["validation"] = verify.validate_noncommutative(
            fields[0], fields[1], tol_bracket=cfg.tol_bracket
        ).to_dict()
    _emit(cfg, payload)
    return code


def cmd_reduce(cfg: RunConfig, map_csv: str | None, pre_map: str | None) -> int:
    V = _field_from_arg(cfg.inputs[0])
    W = _field_from_arg(cfg.inputs[1])
    if pre_map:
        fmap = map_from_dict(_load_json(pre_map))
        V, W = pushforward(V, fmap), pushforward(W, fmap)
    try:
        result = reduction.reduce(V, W, tol_bracket=cfg.tol_bracket)
    except (reduction.NotARealization, reduction.NoSingularPoints, reduction.SignChange) as exc:
        _emit(cfg, {"error": str(exc)})
        return EXIT_NOT_REALIZATION
    except NotClassC as exc:
        _emit(cfg, {"error": str(exc), "singularities": exc.report.to_dict()})
        return EXIT_NOT_CLASS_C

    grid = uniform_grid(cfg.resolution)
    samples = [(float(t), float(result.fmap.lift_s(float(t)))) for t in grid]
    payload = {
        "canonical_pair": result.pair.to_dict(),
        "residuals": {"w": result.w_residual, "v": result.v_residual},
        "map": result.fmap.to_dict(),
    }
    if map_csv:
        _write_csv(map_csv, ["theta", "f_theta"], samples)
    else:
        payload["map_samples"] = {
            "theta": [s[0] for s in samples],
            "f": [s[1] for s in samples],
        }
    _emit(cfg, payload)
    if max(result.w_residual, result.v_residual) > 1e-6:
        return EXIT_RESIDUAL
    return EXIT_OK


def cmd_commutant(cfg: RunConfig, lambdas: str, strict: bool) -> int:
    V = _field_from_arg(cfg.inputs[0])
    try:
        lam = [float(x) for x in lambdas.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise _InputError(f"bad lambda list: {exc}") from exc
    if not lam:
        raise _InputError("at least one lambda constant required")
    try:
        W = commutant_mod.build_commuting(V, lam)
        dependent = not commutant_mod.linearly_independent(lam)
    except commutant_mod.TriviallyDependent:
        if strict:
            _emit(cfg, {"error": "commutant is trivially dependent", "dependent": True})
            return EXIT_DEPENDENT
        W = VectorField(lam[0] * V.coeff)
        dependent = True
    residual = float(
        np.max(
            np.abs(
                np.asarray(
                    (V.coeff * W.coeff.deriv() - V.coeff.deriv() * W.coeff).eval(
                        uniform_grid(4096)
                    )
                )
            )
        )
    )
    payload = {
        "w": to_json_dict(W.coeff),
        "bracket_residual": residual,
        "dependent": dependent,
    }
    _emit(cfg, payload)
    if dependent and strict:
        return EXIT_DEPENDENT
    return EXIT_OK


def cmd_verify(cfg: RunConfig, n_maps: int) -> int:
    docs = []
    for arg in cfg.inputs:
        if (arg.startswith("@") or arg.endswith(".json")) and _is_pair_doc(_load_json(arg)):
            docs.append(reduction.CanonicalPair.from_dict(_load_json(arg)))
        else:
            docs.append(_field_from_arg(arg))
    if len(docs) == 1 and isinstance(docs[0], reduction.CanonicalPair):
        V, W = docs[0].fields()
    elif len(docs) == 2 and all(isinstance(d, VectorField) for d in docs):
        V, W = docs
    else:
        raise _InputError("verify expects two field inputs or one canonical-pair document")
    report = verify.validate_noncommutative(V, W, tol_bracket=cfg.tol_bracket)
    payload = {"validation": report.to_dict()}
    ok = report.overall
    if n_maps > 0:
        rng = np.random.default_rng(cfg.seed)
        maps = []
        for _ in range(n_maps):
            k = int(rng.integers(1, 4))
            eps = float(rng.uniform(-0.8, 0.8)) / (k + 1)
            maps.append(compose(Rotation(float(rng.uniform(0, TAU))), SinePerturbation(eps, k)))
        inv = verify.invariance_suite(W, maps)
        payload["invariance"] = inv.to_dict()
        ok = ok and inv.overall
    _emit(cfg, payload)
    return EXIT_OK if ok else EXIT_NOT_REALIZATION


def cmd_sample(cfg: RunConfig) -> int:
    arg = cfg.inputs[0]
    thetas = uniform_grid(cfg.resolution)
    if arg.startswith("@") or arg.endswith(".json"):
        doc = _load_json(arg)
        if _is_pair_doc(doc):
            pair = reduction.CanonicalPair.from_dict(doc)
            V, W = pair.fields()
            rows = [
                (float(t), float(V.coeff.eval(float(t))), float(W.coeff.eval(float(t))))
                for t in thetas
            ]
            header = ["theta", "v", "w"]
        else:
            f = from_json_dict(doc)
            rows = [(float(t), float(f.eval(float(t)))) for t in thetas]
            header = ["theta", "value"]
    else:
        f = expr_parser.parse(arg)
        rows = [(float(t), float(f.eval(float(t)))) for t in thetas]
        header = ["theta", "value"]
    if cfg.fmt == "json":
        payload = {h: [r[i] for r in rows] for i, h in enumerate(header)}
        _emit(cfg, payload)
    else:
        _write_csv(cfg.out, header, rows)
    return EXIT_OK


def build_arg_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="circlefields",
        description="Analyze, reduce, and verify vector fields on the circle.",
    )
    p.add_argument("--resolution", type=int, default=1024, help="grid size for outputs")
    p.add_argument("--tol-zero", type=float, default=1e-9, dest="tol_zero")
    p.add_argument("--tol-bracket", type=float, default=1e-8, dest="tol_bracket")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, default=None, help="write the report to this path")
    p.add_argument("--format", choices=("json", "csv"), default=None, dest="fmt")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="singularity report, plus validation with two fields")
    a.add_argument("v")
    a.add_argument("w", nargs="?")

    r = sub.add_parser("reduce", help="reduce a pair with [V,W]=W to canonical form")
    r.add_argument("v")
    r.add_argument("w")
    r.add_argument("--map-csv", default=None, help="write map samples to this CSV path")
    r.add_argument("--apply-map", default=None, help="JSON map applied to both inputs first")

    c = sub.add_parser("commutant", help="build the field commuting with V")
    c.add_argument("v")
    c.add_argument("--lambdas", required=True, help="comma-separated constants, one per interval")
    c.add_argument("--strict", action="store_true")

    ver = sub.add_parser("verify", help="structural checks for a pair or canonical document")
    ver.add_argument("inputs", nargs="+")
    ver.add_argument("--maps", type=int, default=0, help="also run N random invariance maps")

    s = sub.add_parser("sample", help="sample a field or canonical pair on a uniform grid")
    s.add_argument("input")
    return p


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    fmt = args.fmt or ("csv" if args.command == "sample" else "json")
    if args.command != "sample" and fmt == "csv":
        print("error: csv output is only available for sample", file=sys.stderr)
        return EXIT_INPUT
    if args.command == "analyze":
        inputs = [args.v] + ([args.w] if args.w else [])
    elif args.command in ("reduce",):
        inputs = [args.v, args.w]
    elif args.command == "commutant":
        inputs = [args.v]
    elif args.command == "verify":
        inputs = list(args.inputs)
    else:
        inputs = [args.input]
    cfg = RunConfig(
        command=args.command,
        inputs=inputs,
        resolution=args.resolution,
        tol_zero=args.tol_zero,
        tol_bracket=args.tol_bracket,
        seed=args.seed,
        out=args.out,
        fmt=fmt,
    )
    try:
        cfg.validate()
        if args.command == "analyze":
            return cmd_analyze(cfg)
        if args.command == "reduce":
            return cmd_reduce(cfg, args.map_csv, args.apply_map)
        if args.command == "commutant":
            return cmd_commutant(cfg, args.lambdas, args.strict)
        if args.command == "verify":
            return cmd_verify(cfg, args.maps)
        return cmd_sample(cfg)
    except (
        _InputError,
        expr_parser.FieldSyntaxError,
        expr_parser.NonPeriodicError,
        commutant_mod.DimensionMismatch,
        FileNotFoundError,
        json.JSONDecodeError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NotClassC as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CLASS_C


def console_entry() -> None:
    raise SystemExit(main())
