"""Command-line front end.

Every subcommand prints a short text report and can also write a JSON report
(``--json PATH``) with the fields command, inputs, results and duration_ms.
Rationals are written as "p/q" strings.

Exit codes: 0 success, 1 a check came out false, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import __version__
from .identities import NAMES, builtin, equiv3, implies3
from .magma import MLPoly, enumerate_monomials, format_poly, format_rational, leaves, parse_poly
from .models import (AXIOMS, BiAlgebra, SpanAlgebra, SpanElement, Verdict, check_axioms,
                     check_identity, depolarize, localize, make_aS, make_derivation_algebra,
                     make_witt_np, polarize)
from .operad import (ArityLimitError, NormalFormError, RelationSet, format_letters,
                     koszul_dual, koszul_test, normal_form, operad_dims,
                     relation_set)
from .reproduce import CHECKS, Options, run_checks, threads_from_env
from .series import PowerSeries


class UsageError(Exception):
    """Bad arguments that argparse cannot catch by itself."""


@dataclass
class Report:
    command: str
    inputs: dict
    results: dict = field(default_factory=dict)
    duration_ms: int | None = None

    def to_json(self, timing: bool = True) -> str:
        data = {"command": self.command, "inputs": self.inputs, "results": self.results,
                "duration_ms": self.duration_ms if timing else None}
        return json.dumps(jsonable(data), sort_keys=True, indent=2) + "\n"


def jsonable(x):
    """Make ``x`` JSON-ready; rationals become strings."""
    if isinstance(x, bool) or x is None or isinstance(x, (str, int)):
        return x
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, PowerSeries):
        return {"text": x.format(), "coefficients": [format_rational(c) for c in x.coeffs]}
    if isinstance(x, MLPoly):
        return format_poly(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return jsonable(x.to_json())
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _names(text: str) -> list[str]:
    out = [t.strip() for t in text.split(",") if t.strip()]
    if not out:
        raise UsageError("expected a comma-separated list of identity names")
    for n in out:
        if n not in NAMES:
            raise UsageError(f"unknown identity {n!r}; known: {', '.join(NAMES)}")
    return out


def _relations(spec: str) -> RelationSet:
    try:
        return relation_set(spec)
    except KeyError as exc:
        raise UsageError(f"{exc.args[0]} (or give a relation file)") from None
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read relations from {spec!r}: {exc}") from None


def _relations_input(R: RelationSet) -> dict:
    return {"name": R.name, "relations": [format_poly(r) for r in R.relations]}


# -- subcommands -------------------------------------------------------------
# Each returns (exit code, inputs, results, text lines).

def cmd_dims(args) -> tuple:
    R = _relations(args.relations)
    try:
        dims = operad_dims(R, args.max_arity, allow_arity_6=args.allow_arity_6)
    except ArityLimitError as exc:
        raise UsageError(f"{exc}; pass --allow-arity-6") from None
    lines = [f"{R.name}: d_1..d_{args.max_arity} = " + ", ".join(map(str, dims))]
    inputs = {"relations": _relations_input(R), "max_arity": args.max_arity,
              "allow_arity_6": args.allow_arity_6}
    return 0, inputs, {"dims": dims}, lines


def cmd_dual(args) -> tuple:
    R = _relations(args.relations)
    dual = _dual(R)
    span, dspan = R.span(3), dual.span(3)
    self_dual = span == dspan
    lines = [f"Koszul dual of {R.name}: {dspan.rank} independent relations in degree 3"]
    lines += ["  " + format_poly(p, "uvw") + " = 0" for p in dual.relations]
    lines.append(f"dim span {span.rank} + dim dual {dspan.rank} = {span.rank + dspan.rank}")
    lines.append("self-dual: " + ("yes" if self_dual else "no"))
    results = {"dual_relations": list(dual.relations), "span_dimension": span.rank,
               "dual_dimension": dspan.rank, "self_dual": self_dual}
    return 0, {"relations": _relations_input(R)}, results, lines


def _dual(R: RelationSet) -> RelationSet:
    try:
        return koszul_dual(R)
    except (ValueError, NormalFormError) as exc:
        raise UsageError(str(exc)) from None


def cmd_koszul_test(args) -> tuple:
    R = _relations(args.relations)
    _dual(R)
    try:
        kt = koszul_test(R, args.degree, allow_arity_6=args.allow_arity_6)
    except ArityLimitError as exc:
        raise UsageError(f"{exc}; pass --allow-arity-6") from None
    lines = [
        f"dims       {kt.dims}",
        f"dual dims  {kt.dual_dims}" + ("  (self-dual)" if kt.self_dual else ""),
        f"f(x)       = {kt.f.format()}",
        f"f!(x)      = {kt.f_dual.format()}",
        f"f(f!(x))   = {kt.composite.format()} + O(x^{args.degree + 1})",
        f"residual   = {kt.residual.format()}",
        "necessary condition for Koszulity " + ("holds" if kt.passes else "FAILS") +
        f" through degree {args.degree}",
    ]
    results = {"dims": kt.dims, "dual_dims": kt.dual_dims, "self_dual": kt.self_dual,
               "f": kt.f, "f_dual": kt.f_dual, "composite": kt.composite,
               "residual": kt.residual, "necessary_condition_holds": kt.passes}
    inputs = {"relations": _relations_input(R), "degree": args.degree}
    return (0 if kt.passes else 1), inputs, results, lines


def cmd_implies(args) -> tuple:
    premises, goal = _names(args.premises), _names(args.goal)
    if len(goal) != 1:
        raise UsageError("--to takes a single identity name")
    ok, cert = implies3(premises, goal[0])
    lines = [f"{{{', '.join(premises)}}} => {goal[0]}: " + ("yes" if ok else "no")]
    if cert is not None:
        lines.append(cert.format())
    results = {"implied": ok, "certificate": cert}
    return (0 if ok else 1), {"from": premises, "to": goal[0]}, results, lines


def cmd_equiv(args) -> tuple:
    left, right = _names(args.left), _names(args.right)
    ok = equiv3(left, right)
    lines = [f"{{{', '.join(left)}}} ~ {{{', '.join(right)}}}: " + ("yes" if ok else "no")]
    return (0 if ok else 1), {"left": left, "right": right}, {"equivalent": ok}, lines


# right combs first, as in a(bc) = c(ab) + 2 (ab)c - ...
_DISPLAY_ORDER = tuple(sorted(enumerate_monomials(3), key=lambda t: (not isinstance(t[0], int), leaves(t))))


def cmd_normal_form(args) -> tuple:
    R = _relations(args.relations)
    try:
        rw = normal_form(R)
    except NormalFormError as exc:
        raise UsageError(str(exc)) from None
    lines = ["basis: " + ", ".join(format_letters(b) for b in rw.basis)]
    table = {}
    for m, p in rw.table.items():
        rhs = format_poly(p, "abc", order=_DISPLAY_ORDER)
        table[format_letters(m)] = rhs
        lines.append(f"{format_letters(m)} = {rhs}")
    results = {"basis": [format_letters(b) for b in rw.basis], "rewrite": table}
    return 0, {"relations": _relations_input(R)}, results, lines


def _element(text: str) -> SpanElement:
    """``3`` is e_3; ``2:1/2,0:3`` is e_2/2 + 3 e_0; ``none`` is zero."""
    text = text.strip()
    if text.lower() in ("none", "zero"):
        return SpanElement()
    try:
        if ":" not in text:
            return SpanElement.basis(int(text))
        pairs = []
        for part in text.split(","):
            i, c = part.split(":")
            pairs.append((int(i), Fraction(c)))
        return SpanElement(pairs)
    except ValueError:
        raise UsageError(f"cannot read algebra element {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected integers, got {text!r}") from None


def _rational_list(text: str) -> list[Fraction]:
    try:
        return [Fraction(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected rationals, got {text!r}") from None


MODEL_PARAMS = {
    "aS": {"S", "eps"},
    "derivation": {"u", "v"},
    "witt-np": set(),
    "localized": {"u", "v"},
}


def build_model(name: str, params: dict[str, str]) -> SpanAlgebra | BiAlgebra:
    unknown = set(params) - MODEL_PARAMS[name]
    if unknown:
        raise UsageError(f"model {name} does not take {', '.join(sorted(unknown))}")
    if name == "aS":
        S = _int_list(params.get("S", ""))
        eps = _rational_list(params.get("eps", ""))
        if len(S) != len(eps):
            raise UsageError(f"{len(S)} shifts but {len(eps)} coefficients")
        return make_aS(S, eps)
    if name == "derivation":
        return make_derivation_algebra(_element(params.get("u", "1")), _element(params.get("v", "none")))
    if name == "witt-np":
        return make_witt_np()
    return localize(make_witt_np(), _element(params.get("u", "0")), _element(params.get("v", "0")))


def _identities(text: str) -> list[tuple[str, MLPoly]]:
    if text == "wlei":
        return [("lwlei", builtin("lwlei")), ("rwlei", builtin("rwlei"))]
    if text in NAMES:
        return [(text, builtin(text))]
    try:
        return [(text, parse_poly(text))]
    except ValueError as exc:
        raise UsageError(f"{text!r} is neither a known identity nor a polynomial: {exc}") from None


def _verdict_lines(label: str, v: Verdict) -> list[str]:
    lines = [f"{label}: " + ("pass" if v.passed else "FAIL") + f" ({v.checked} tuples checked)"]
    if v.witness is not None:
        w = v.witness
        args = ", ".join(f"e_{i}" for i in w.indices)
        lines.append(f"  witness {w.axiom} at ({args}): {w.lhs.format()} != {w.rhs.format()}")
    return lines


def cmd_model_check(args) -> tuple:
    params = {}
    for item in args.params or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"parameter {item!r} is not of the form key=value")
        params[key] = value
    if args.window < 0:
        raise UsageError("window must be non-negative")
    scale = Fraction(1)
    if "scale" in params:
        scale = _rational_list(params.pop("scale"))[0]
    model = build_model(args.model, params)
    inputs = {"model": args.model, "params": params, "window": args.window}
    lines, verdicts = [], {}
    if args.identity:
        algebra = depolarize(model, scale) if isinstance(model, BiAlgebra) else model
        inputs["identity"] = args.identity
        for name, p in _identities(args.identity):
            v = check_identity(algebra, p, args.window, name)
            verdicts[name] = v
            lines += _verdict_lines(name, v)
    else:
        pair = model if isinstance(model, BiAlgebra) else polarize(model)
        inputs["axioms"] = args.axioms
        v = check_axioms(pair, args.axioms, args.window)
        verdicts[args.axioms] = v
        lines += _verdict_lines(args.axioms, v)
    passed = all(v.passed for v in verdicts.values())
    lines.insert(0, f"model {args.model} " + " ".join(f"{k}={v}" for k, v in sorted(params.items())))
    return (0 if passed else 1), inputs, {"passed": passed, "verdicts": verdicts}, lines


def cmd_reproduce(args) -> tuple:
    only = None
    if args.only:
        only = [k.strip() for k in args.only.split(",")]
        known = [c[0] for c in CHECKS]
        for k in only:
            if k not in known:
                raise UsageError(f"unknown check {k!r}; known: {', '.join(known)}")
    try:
        threads = threads_from_env()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    results = run_checks(Options(allow_arity_6=args.allow_arity_6), threads, only)
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.key:<13} {r.title}")
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    inputs = {"allow_arity_6": args.allow_arity_6, "only": only}
    out = {"checks": [r.to_json() for r in results], "all_passed": passed == len(results)}
    return (0 if passed == len(results) else 1), inputs, out, lines


# -- parser ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="also write a JSON report here")
    common.add_argument("--no-timing", action="store_true",
                        help="leave duration_ms out of the JSON report (byte-stable output)")

    p = _Parser(prog="operadlab", description="Exact computations with identities of nonassociative algebras.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("dims", parents=[common], help="operad component dimensions")
    s.add_argument("--relations", required=True, help="relation set name or file")
    s.add_argument("--max-arity", type=int, default=5)
    s.add_argument("--allow-arity-6", action="store_true", help="permit the long arity-6 elimination")
    s.set_defaults(func=cmd_dims)

    s = sub.add_parser("dual", parents=[common], help="Koszul dual relations")
    s.add_argument("--relations", required=True)
    s.set_defaults(func=cmd_dual)

    s = sub.add_parser("koszul-test", parents=[common], help="generating-series Koszulity test")
    s.add_argument("--relations", required=True)
    s.add_argument("--degree", type=int, default=5)
    s.add_argument("--allow-arity-6", action="store_true")
    s.set_defaults(func=cmd_koszul_test)

    s = sub.add_parser("implies", parents=[common], help="degree-3 implication with certificate")
    s.add_argument("--from", dest="premises", required=True, help="comma-separated identity names")
    s.add_argument("--to", dest="goal", required=True)
    s.set_defaults(func=cmd_implies)

    s = sub.add_parser("equiv", parents=[common], help="degree-3 equivalence of identity sets")
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("normal-form", parents=[common], help="degree-3 rewriting table")
    s.add_argument("--relations", required=True)
    s.set_defaults(func=cmd_normal_form)

    s = sub.add_parser("model-check", parents=[common], help="window check on a concrete algebra")
    s.add_argument("--model", required=True, choices=sorted(MODEL_PARAMS))
    s.add_argument("--params", nargs="*", metavar="KEY=VALUE",
                   help="S=1,-2 eps=1/2,3 | u=2 v=0 (elements as 2:1/2,0:3) | scale=1/2")
    what = s.add_mutually_exclusive_group(required=True)
    what.add_argument("--identity", help="identity name, 'wlei', or a polynomial")
    what.add_argument("--axioms", choices=sorted(AXIOMS))
    s.add_argument("--window", type=int, default=4)
    s.set_defaults(func=cmd_model_check)

    s = sub.add_parser("reproduce-paper", parents=[common], help="run every reproduction check")
    s.add_argument("--allow-arity-6", action="store_true")
    s.add_argument("--only", help="comma-separated check keys")
    s.set_defaults(func=cmd_reproduce)
    return p


def run(argv: Sequence[str] | None = None, out=None) -> tuple[int, Report | None]:
    out = out or sys.stdout
    parser = build_parser()
    start = time.perf_counter()
    try:
        args = parser.parse_args(argv)
        handler: Callable = args.func
        code, inputs, results, lines = handler(args)
    except UsageError as exc:
        print(f"operadlab: error: {exc}", file=sys.stderr)
        return 2, None
    report = Report(args.command, inputs, results, round((time.perf_counter() - start) * 1000))
    for line in lines:
        print(line, file=out)
    if args.json:
        try:
            Path(args.json).write_text(report.to_json(timing=not args.no_timing))
        except OSError as exc:
            print(f"operadlab: error: cannot write {args.json}: {exc}", file=sys.stderr)
            return 2, report
    return code, report


def main(argv: Sequence[str] | None = None) -> int:
    try:
        code, _ = run(argv)
    except SystemExit as exc:  # --help and --version
        return exc.code if isinstance(exc.code, int) else 0
    return code


if __name__ == "__main__":
    sys.exit(main())
