"""Command-line front end: ``nomstlc COMMAND ...``.

Every command prints a human-readable report, or with ``--json`` a single
JSON object.  The exit status is 0 on success and 1 when a diagnostic
(parse error, typing error, missing name, budget overrun) was reported.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .concrete import ParseError, SourceFile, load_source, parse_l1, parse_l2, parse_term
from .gen import default_signature
from .models import (
    FiniteModel,
    ModelError,
    ModelFileError,
    SamplingPlan,
    TermModel,
    UndefinedCell,
    Valuation,
    bundled_model_path,
    check_axioms,
    interp,
    load_finite_model,
)
from .reduction import DEFAULT_BUDGET, BudgetExceeded, beta_eq, trace_normalize
from .subst import subst_l1, subst_l2
from .syntax import show
from .typecheck import TypingError, infer


class Diagnostic(Exception):
    pass


def _emit(args, report: dict, text: list[str], out) -> None:
    if args.json:
        print(json.dumps(report, ensure_ascii=False, sort_keys=True), file=out)
    else:
        for line in text:
            print(line, file=out)


def _source(path) -> SourceFile:
    try:
        return load_source(path)
    except OSError as err:
        raise Diagnostic(f"cannot read {path}: {err.strerror}") from None
    except ParseError as err:
        raise Diagnostic(f"{path}:{err}") from None


def _definition(src: SourceFile, name: str):
    try:
        return src.term(name)
    except KeyError as err:
        raise Diagnostic(err.args[0]) from None


def _model(ref: str) -> FiniteModel:
    path = bundled_model_path(ref[len("bundled:"):]) if ref.startswith("bundled:") else Path(ref)
    try:
        return load_finite_model(path)
    except OSError as err:
        raise Diagnostic(f"cannot read {path}: {err.strerror}") from None


# ----------------------------------------------------------------------
# commands


def cmd_check(args, out):
    src = _source(args.file)
    results, text, ok = [], [], True
    for name, r in src.definitions.items():
        try:
            ty = infer(src.signature, src.context, r)
            results.append({"name": name, "ok": True, "type": str(ty)})
            text.append(f"{name} : {ty}")
        except TypingError as err:
            ok = False
            results.append({"name": name, "ok": False, "error": type(err).__name__, "rule": err.rule,
                            "path": list(err.path), "message": err.message, "line": src.lines.get(name)})
            text.append(f"{src.path}:{src.lines.get(name)}: {name}: {err}")
    _emit(args, {"command": "check", "ok": ok, "definitions": results}, text, out)
    return 0 if ok else 1


def cmd_norm(args, out):
    src = _source(args.file)
    r = _definition(src, args.name)
    tr = trace_normalize(src.signature, src.context, r, args.budget)
    text = tr.lines() if args.trace else [show(tr.result)]
    report = {"command": "norm", "ok": True, "name": args.name, "normal_form": show(tr.result),
              "steps": len(tr.steps)}
    if args.trace:
        report["trace"] = [{"path": list(p), "term": show(t)} for p, t in tr.steps]
    _emit(args, report, text, out)
    return 0


def cmd_eq(args, out):
    src = _source(args.file)
    r, s = _definition(src, args.name1), _definition(src, args.name2)
    try:
        equal = beta_eq(src.signature, src.context, r, s, args.budget)
    except ValueError as err:
        raise Diagnostic(str(err)) from None
    verdict = "equal" if equal else "not equal"
    report = {"command": "eq", "ok": True, "names": [args.name1, args.name2], "equal": equal}
    _emit(args, report, [f"{args.name1} and {args.name2} are {verdict}"], out)
    return 0


def cmd_subst(args, out):
    src = _source(args.file)
    r = _definition(src, args.name)
    consts = src.signature.constants
    try:
        if args.l1 is not None:
            result = subst_l1(r, parse_l1(args.l1, consts))
        else:
            result = subst_l2(r, parse_l2(args.l2, consts))
    except ParseError as err:
        raise Diagnostic(f"substitution: {err}") from None
    report = {"command": "subst", "ok": True, "name": args.name, "result": show(result)}
    _emit(args, report, [show(result)], out)
    return 0


def cmd_axioms(args, out):
    plan = SamplingPlan(samples=args.samples, max_size=args.max_size, seed=args.seed)
    if args.model == "term":
        sig = _source(args.signature).signature if args.signature else default_signature()
        model = TermModel(sig)
    else:
        model = _model(args.model)
    report = check_axioms(model, plan)
    data = {"command": "axioms", "ok": True, "model": args.model, **report.to_dict()}
    if isinstance(model, FiniteModel):
        data["missing_cells"] = model.missing
    _emit(args, data, report.lines(), out)
    return 0


def cmd_interp(args, out):
    src = _source(args.file)
    r = _definition(src, args.name)
    ref = args.model or (str(src.model_path()) if src.model else None)
    consts = src.signature.constants
    if ref is None:
        model = TermModel(src.signature)
        try:
            val = {x: model.element(src.context, parse_term(v, consts)) for x, v in src.valuation.items()}
        except (ParseError, ValueError) as err:
            raise Diagnostic(f"valuation: {err}") from None
    else:
        model = _model(ref)
        val = dict(src.valuation)
    try:
        value = interp(model, Valuation(model, val), src.context, r, sig=src.signature)
    except UndefinedCell as err:
        raise Diagnostic(f"model has no cell for this term: {err}") from None
    report = {"command": "interp", "ok": True, "name": args.name,
              "model": ref or "term", "value": model.show(value)}
    _emit(args, report, [model.show(value)], out)
    return 0


# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nomstlc", description="Nominal simply-typed lambda calculus with holes.")
    p.add_argument("--json", action="store_true", help="print one JSON report object")
    sub = p.add_subparsers(dest="command", required=True)

    def command(name, fn, help_):
        c = sub.add_parser(name, help=help_)
        c.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
        c.set_defaults(fn=fn)
        return c

    c = command("check", cmd_check, "typecheck every definition")
    c.add_argument("file")

    c = command("norm", cmd_norm, "print the beta-normal form of a definition")
    c.add_argument("file")
    c.add_argument("name")
    c.add_argument("--trace", action="store_true", help="show every reduction step")
    c.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    c = command("eq", cmd_eq, "decide beta-equality of two definitions")
    c.add_argument("file")
    c.add_argument("name1")
    c.add_argument("name2")
    c.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    c = command("subst", cmd_subst, "apply an atom or unknown substitution")
    c.add_argument("file")
    c.add_argument("name")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--l1", metavar="\"a:=s,...\"", help="substitution for atoms")
    g.add_argument("--l2", metavar="\"X:=t,...\"", help="instantiation of unknowns")

    c = command("axioms", cmd_axioms, "check the substitution axioms in a model")
    c.add_argument("model", metavar="MODELFILE",
                   help="a model file, bundled:NAME for a shipped model, or 'term' for the term model")
    c.add_argument("--samples", type=int, default=200, help="samples per axiom (term model)")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--max-size", type=int, default=20)
    c.add_argument("--signature", metavar="FILE", help="source file whose signature the term model uses")

    c = command("interp", cmd_interp, "interpret a definition under the file's valuation")
    c.add_argument("file")
    c.add_argument("name")
    c.add_argument("--model", metavar="MODELFILE", help="finite model (default: the term model)")
    return p


def main(argv: Optional[list[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args, out)
    except (Diagnostic, TypingError, BudgetExceeded, ModelFileError, ModelError) as err:
        _emit(args, {"command": args.command, "ok": False, "error": type(err).__name__, "message": str(err)},
              [f"error: {err}"], out)
        return 1


if __name__ == "__main__":
    sys.exit(main())
