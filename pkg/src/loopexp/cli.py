"""Command-line entry point: validate algebras, run expansions, contractions,
canonical-form checks, and truncation-order sweeps.

Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 usage or
parse error.  All reports are machine-readable JSON with canonical ordering,
so identical configurations produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .algebra import (BUILTIN_NAMES, ContradictoryEntries, IndexOutOfRange,
                      StructureConstants, builtin_algebra, format_rational,
                      load_algebra, validate)
from .contraction import compare_with_expansion, iw_contract
from .expansion import (NAMED_CASES, ExpandedAlgebra, ExpandedLabel, build_named,
                        check_closure, check_jacobi_expanded, expanded_key,
                        generator_set)
from .loop import LoopLabel, ModeWindow
from .mcforms import (DegreeTooLow, canonical_form_series, check_grading,
                      graded_series_json, rescale_and_collect, verify_mc_equations)
from .splitting import (InvalidParams, SplitKind, Splitting, make_splitting,
                        split_to_dict)


class UsageError(ValueError):
    """Configuration problems surfaced with exit code 2."""


@dataclass
class RunConfig:
    command: str
    algebra: str
    split_kind: str | None = None
    v0_gens: tuple[int, ...] | None = None
    n0: int = 0
    n1: int = 0
    window: int = 1
    degree: int = 4
    alpha_max: int = 2
    case: str | None = None
    n0_max: int = 3
    n1_max: int = 3
    out: str | None = None
    fmt: str = "json"


def _parse_v0(text) -> tuple[int, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(int(x) for x in text)
    try:
        return tuple(int(piece) for piece in str(text).split(",") if piece.strip())
    except ValueError as exc:
        raise UsageError(f"cannot parse v0 generator list {text!r}") from exc


def _load_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, an optional JSON config file, and explicit flags."""
    data: dict = {}
    if getattr(args, "config", None):
        data = _load_config_file(args.config)
    split_spec = data.get("splitting", {})

    def pick(flag_value, file_value, default):
        if flag_value is not None:
            return flag_value
        if file_value is not None:
            return file_value
        return default

    algebra = pick(getattr(args, "algebra", None), data.get("algebra"), None)
    if algebra is None:
        raise UsageError("no algebra given (use --algebra or a config file)")
    config = RunConfig(
        command=args.command,
        algebra=algebra,
        split_kind=pick(getattr(args, "split", None), split_spec.get("kind"), None),
        v0_gens=(_parse_v0(pick(getattr(args, "v0_gens", None),
                                split_spec.get("v0_gens"), None))
                 if pick(getattr(args, "v0_gens", None), split_spec.get("v0_gens"), None)
                 else None),
        n0=pick(getattr(args, "n0", None), data.get("n0"), 0),
        n1=pick(getattr(args, "n1", None), data.get("n1"), 0),
        window=pick(getattr(args, "window", None), data.get("window"), 1),
        degree=pick(getattr(args, "degree", None), data.get("degree"), 4),
        alpha_max=pick(getattr(args, "alpha_max", None), data.get("alpha_max"), 2),
        case=getattr(args, "case", None),
        n0_max=pick(getattr(args, "n0_max", None), data.get("n0_max"), 3),
        n1_max=pick(getattr(args, "n1_max", None), data.get("n1_max"), 3),
        out=getattr(args, "out", None),
        fmt=getattr(args, "format", None) or "json",
    )
    for name in ("n0", "n1", "window", "degree", "alpha_max"):
        if getattr(config, name) < 0:
            raise UsageError(f"{name} must be non-negative")
    return config


def _load_algebra_spec(spec: str) -> StructureConstants:
    if spec in BUILTIN_NAMES:
        return builtin_algebra(spec)
    if not os.path.exists(spec):
        raise UsageError(f"{spec!r} is neither a built-in algebra nor a file")
    try:
        return load_algebra(spec)
    except ContradictoryEntries:
        raise
    except (json.JSONDecodeError, KeyError, TypeError, ValueError,
            IndexOutOfRange) as exc:
        raise UsageError(f"cannot load algebra from {spec}: {exc}") from exc


def _make_split(config: RunConfig, dim: int) -> Splitting:
    if config.split_kind is None:
        raise UsageError("a splitting is required (use --split)")
    try:
        kind = SplitKind(config.split_kind)
        return make_splitting(
            kind,
            v0_gens=frozenset(config.v0_gens) if config.v0_gens else None,
            dim=dim if kind is SplitKind.GENERIC_INDEX else None)
    except (InvalidParams, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _label_json(label: ExpandedLabel) -> list[int]:
    return [label.gen, label.mode, label.order]


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(payload: dict, out: str | None) -> None:
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", out)


def cmd_validate(config: RunConfig) -> int:
    try:
        f = _load_algebra_spec(config.algebra)
    except ContradictoryEntries as exc:
        # The loader refuses to build a contradictory tensor; report the
        # offending triple as an antisymmetry violation of the definition.
        payload = {
            "algebra": config.algebra,
            "valid": False,
            "antisymmetry_violations": [
                {"a": exc.a, "b": exc.b, "c": exc.c,
                 "lhs": format_rational(exc.lhs), "rhs": format_rational(exc.rhs)}],
            "jacobi_defects": [],
            "note": "definition rejected by the loader",
        }
        _emit_json(payload, config.out)
        return 1
    report = validate(f)
    payload = {
        "algebra": f.name or config.algebra,
        "dim": f.dim,
        "valid": report.is_valid,
        "antisymmetry_violations": [
            {"a": a, "b": b, "c": c,
             "lhs": format_rational(lhs), "rhs": format_rational(rhs)}
            for a, b, c, lhs, rhs in report.antisymmetry],
        "jacobi_defects": [
            {"a": a, "b": b, "c": c, "e": e, "residual": format_rational(r)}
            for a, b, c, e, r in report.jacobi],
    }
    _emit_json(payload, config.out)
    return 0 if report.is_valid else 1


def _resolve_expansion(config: RunConfig, f: StructureConstants,
                       window: ModeWindow) -> ExpandedAlgebra:
    if config.case:
        if config.case not in NAMED_CASES:
            raise UsageError(f"unknown case {config.case!r}; choices: {sorted(NAMED_CASES)}")
        return build_named(config.case, f, window)
    split = _make_split(config, f.dim)
    return ExpandedAlgebra.build(f, split, config.n0, config.n1, window)


def _constants_json(alg: ExpandedAlgebra) -> list[list]:
    rows = []
    retained = set(alg.generators)
    for i, x in enumerate(alg.generators):
        for y in alg.generators[i + 1:]:
            mode = x.mode + y.mode
            if not alg.window.contains(mode):
                continue
            order = x.order + y.order
            for c, v in alg.base.pair_targets(x.gen, y.gen):
                z = ExpandedLabel(c, mode, order,
                                  alg.split.sector(LoopLabel(c, mode)))
                if z in retained:
                    rows.append([_label_json(x), _label_json(y), _label_json(z),
                                 format_rational(v)])
    return rows


def _latex_tables(alg: ExpandedAlgebra) -> str:
    lines = ["% commutator tables, one block per order pair"]
    by_orders: dict[tuple[int, int], list[str]] = {}
    retained = set(alg.generators)
    for i, x in enumerate(alg.generators):
        for y in alg.generators[i + 1:]:
            mode = x.mode + y.mode
            if not alg.window.contains(mode):
                continue
            order = x.order + y.order
            pieces = []
            for c, v in alg.base.pair_targets(x.gen, y.gen):
                z = ExpandedLabel(c, mode, order, alg.split.sector(LoopLabel(c, mode)))
                if z in retained:
                    coef = "" if v == 1 else ("-" if v == -1 else f"{v}\\,")
                    pieces.append(f"{coef}T_{{{z.gen},{z.mode}}}^{{({z.order})}}")
            if pieces:
                row = (f"[T_{{{x.gen},{x.mode}}}^{{({x.order})}},"
                       f"T_{{{y.gen},{y.mode}}}^{{({y.order})}}] &= "
                       + " + ".join(pieces).replace("+ -", "- ") + r" \\")
                by_orders.setdefault((x.order, y.order), []).append(row)
    for orders in sorted(by_orders):
        lines.append(f"% orders {orders}")
        lines.append(r"\begin{align*}")
        lines.extend(by_orders[orders])
        lines.append(r"\end{align*}")
    return "\n".join(lines) + "\n"


def cmd_expand(config: RunConfig) -> int:
    f = _load_algebra_spec(config.algebra)
    window = ModeWindow(config.window)
    alg = _resolve_expansion(config, f, window)
    closure = alg.closure_report()
    jacobi = alg.jacobi_report() if closure.closed else None
    payload = {
        "algebra": f.name or config.algebra,
        "splitting": split_to_dict(alg.split),
        "n0": alg.n0,
        "n1": alg.n1,
        "window": window.max_abs_mode,
        "generators": [_label_json(g) for g in alg.generators],
        "closed": closure.closed,
        "window_censored": closure.window_censored,
        "closure_violations": [
            {"pair": [_label_json(v.pair[0]), _label_json(v.pair[1])],
             "target": _label_json(v.target),
             "missing": _label_json(v.missing),
             "coefficient": format_rational(v.coefficient)}
            for v in closure.violations],
        "jacobi": (None if jacobi is None else
                   {"ok": jacobi.ok,
                    "triples_checked": jacobi.triples_checked,
                    "residuals": [
                        {"x": _label_json(r.x), "y": _label_json(r.y),
                         "z": _label_json(r.z), "target": _label_json(r.target),
                         "value": format_rational(r.value)}
                        for r in jacobi.residuals]}),
        "constants": _constants_json(alg),
    }
    if config.fmt == "latex":
        _emit(_latex_tables(alg), config.out)
    else:
        _emit_json(payload, config.out)
    return 0 if closure.closed and jacobi is not None and jacobi.ok else 1


def cmd_contract(config: RunConfig) -> int:
    f = _load_algebra_spec(config.algebra)
    window = ModeWindow(config.window)
    split = make_splitting(SplitKind.MODE_PARITY_COSET)
    contracted = iw_contract(f, split, window)
    expanded = build_named("G01", f, window)
    match, diffs = compare_with_expansion(contracted, expanded, window)
    payload = {
        "algebra": f.name or config.algebra,
        "window": window.max_abs_mode,
        "match": match,
        "diffs": [
            {"x": [d.x.gen, d.x.mode], "y": [d.y.gen, d.y.mode],
             "z": [d.z.gen, d.z.mode],
             "contracted": format_rational(d.contracted),
             "expanded": format_rational(d.expanded)}
            for d in diffs],
    }
    _emit_json(payload, config.out)
    return 0 if match else 1


def cmd_mc(config: RunConfig) -> int:
    f = _load_algebra_spec(config.algebra)
    window = ModeWindow(config.window)
    split = _make_split(config, f.dim)
    if config.degree < config.alpha_max + 1:
        raise UsageError(f"degree {config.degree} too low for alpha_max "
                         f"{config.alpha_max}; need degree >= {config.alpha_max + 1}")
    series = canonical_form_series(f, window, config.degree)
    graded = rescale_and_collect(series, split)
    residuals = verify_mc_equations(graded, f, split, config.alpha_max, window)
    grading = check_grading(graded, split)
    payload = {
        "algebra": f.name or config.algebra,
        "splitting": split_to_dict(split),
        "degree": config.degree,
        "alpha_max": config.alpha_max,
        "window": window.max_abs_mode,
        "series_censored": series.censored,
        "residuals_ok": residuals.ok,
        "terms_checked": residuals.terms_checked,
        "mode_censored": residuals.mode_censored,
        "degree_censored": residuals.degree_censored,
        "residual_violations": [
            {"label": [t.label.gen, t.label.mode], "power": t.power,
             "monomial": t.monomial.json_factors(),
             "differentials": [[d.gen, d.mode] for d in t.diffs],
             "value": format_rational(t.value)}
            for t in residuals.violations],
        "grading_ok": grading.ok,
        "grading_violations": [
            {"label": [lab.gen, lab.mode], "power": power, "reason": reason}
            for lab, power, reason in grading.violations],
        "series": graded_series_json(graded),
    }
    _emit_json(payload, config.out)
    return 0 if residuals.ok and grading.ok else 1


def cmd_sweep(config: RunConfig) -> int:
    f = _load_algebra_spec(config.algebra)
    window = ModeWindow(config.window)
    split = _make_split(config, f.dim)
    cells = []
    for n0 in range(config.n0_max + 1):
        for n1 in range(config.n1_max + 1):
            closure = check_closure(f, split, n0, n1, window)
            cells.append({"n0": n0, "n1": n1, "closed": closure.closed,
                          "violations": len(closure.violations),
                          "window_censored": closure.window_censored})
    payload = {
        "algebra": f.name or config.algebra,
        "splitting": split_to_dict(split),
        "window": window.max_abs_mode,
        "cells": cells,
    }
    _emit_json(payload, config.out)
    return 0


_HANDLERS = {
    "validate": cmd_validate,
    "expand": cmd_expand,
    "contract": cmd_contract,
    "mc": cmd_mc,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loopexp",
        description="Exact-rational loop-algebra expansion engine")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, *, split: bool = False, orders: bool = False,
               degree: bool = False, case: bool = False, fmt: bool = False) -> None:
        p.add_argument("--algebra", "-a", help=f"built-in name {BUILTIN_NAMES} or JSON file")
        p.add_argument("--config", help="JSON run-configuration file")
        p.add_argument("--window", "-M", type=int, help="mode window bound (default 1)")
        p.add_argument("--out", "-o", help="output file (default stdout)")
        if split:
            p.add_argument("--split", choices=[k.value for k in SplitKind])
            p.add_argument("--v0-gens", dest="v0_gens",
                           help="comma-separated generator indices for the generic split")
        if orders:
            p.add_argument("--n0", type=int, help="sector-0 truncation order")
            p.add_argument("--n1", type=int, help="sector-1 truncation order")
        if degree:
            p.add_argument("--degree", "-D", type=int, help="series degree (default 4)")
            p.add_argument("--alpha-max", dest="alpha_max", type=int,
                           help="highest graded order to verify (default 2)")
        if case:
            p.add_argument("--case", choices=sorted(NAMED_CASES),
                           help="named truncation (overrides --split/--n0/--n1)")
        if fmt:
            p.add_argument("--format", choices=["json", "latex"])

    common(sub.add_parser("validate", help="audit an algebra definition"))
    common(sub.add_parser("expand", help="build a truncated expansion and verify it"),
           split=True, orders=True, case=True, fmt=True)
    common(sub.add_parser("contract", help="compare the sector contraction with "
                                           "the order-(0,1) parity expansion"))
    p_mc = sub.add_parser("mc", help="canonical-form series and graded residuals")
    common(p_mc, split=True, degree=True)
    p_sweep = sub.add_parser("sweep", help="closure matrix over truncation orders")
    common(p_sweep, split=True)
    p_sweep.add_argument("--n0-max", dest="n0_max", type=int)
    p_sweep.add_argument("--n1-max", dest="n1_max", type=int)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = build_config(args)
        handler = _HANDLERS[args.command]
        return handler(config)
    except (UsageError, DegreeTooLow, ContradictoryEntries,
            OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
