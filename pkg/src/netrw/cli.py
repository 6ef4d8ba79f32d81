"""Batch command line front end over the text formats."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .ainparse import AinError, format_term, parse_rules, parse_term
from .ambiguity import (
    IncompatibleRuleError,
    LimitReachedError,
    OrientationFailedError,
    complete,
    confluence_report,
    enumerate_decisive,
)
from .core import BoolMat, SignatureError, parse_signature
from .freeprop import JoinUndefinedError, lc_sym_join
from .network import evaluate
from .order import check_strictness, parse_order, rule_compatible
from .props import connectivity_assignment, get_target, parse_assignment
from .rewrite import BudgetExceededError, RuleError, normalize

USAGE_ERROR = 2
NEGATIVE = 1
OK = 0


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_sig(args):
    return parse_signature(_read(args.sig))


def _load_rules(args, sig):
    return parse_rules(_read(args.rules), sig)


def _load_order(args, sig):
    base = Path(args.order).parent

    def resolve(name: str) -> str:
        return (base / name).read_text(encoding="utf-8")

    return parse_order(_read(args.order), sig, resolve)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, default=str))
    else:
        print(text)


def _ambient(term, args):
    if args.type == "zero":
        return BoolMat.zeros(term.coarity, term.arity)
    return BoolMat.ones(term.coarity, term.arity)


def cmd_validate(args) -> int:
    sig = _load_sig(args)
    term = parse_term(args.term, sig)
    _emit(
        args,
        {"ok": True, "coarity": term.coarity, "arity": term.arity},
        f"valid: coarity {term.coarity}, arity {term.arity}",
    )
    return OK


def cmd_iso(args) -> int:
    sig = _load_sig(args)
    a = parse_term(args.a, sig)
    b = parse_term(args.b, sig)
    same = a == b
    _emit(args, {"isomorphic": same}, "isomorphic" if same else "distinct")
    return OK if same else NEGATIVE


def cmd_tr(args) -> int:
    sig = _load_sig(args)
    term = parse_term(args.term, sig)
    if not term.is_monomial():
        print("tr needs a single monomial", file=sys.stderr)
        return USAGE_ERROR
    mat = term.monomials()[0].tr
    _emit(args, {"rows": mat.rows, "cols": mat.cols, "matrix": mat.to_rows()}, str(mat))
    return OK


def cmd_eval(args) -> int:
    sig = _load_sig(args)
    target = get_target(args.target)
    term = parse_term(args.term, sig)
    if args.map:
        assign = parse_assignment(_read(args.map), sig, target)
    elif args.target == "connectivity":
        assign = connectivity_assignment(sig)
    else:
        print("eval needs --map for this target", file=sys.stderr)
        return USAGE_ERROR
    pieces = []
    for cls, coeff in term.items():
        value = evaluate(cls.rep, target, assign)
        pieces.append(f"{coeff} * {value}")
    text = "\n".join(pieces) if pieces else "0"
    _emit(args, {"values": pieces}, text)
    return OK


def cmd_join(args) -> int:
    sig = _load_sig(args)
    a = parse_term(args.a, sig)
    b = parse_term(args.b, sig)
    try:
        joined = lc_sym_join(a, args.r, args.q, b)
    except JoinUndefinedError as exc:
        _emit(args, {"defined": False, "witness": str(exc)}, f"undefined: {exc}")
        return NEGATIVE
    _emit(args, {"defined": True, "result": format_term(joined)}, format_term(joined))
    return OK


def cmd_normalize(args) -> int:
    sig = _load_sig(args)
    rules = _load_rules(args, sig)
    term = parse_term(args.term, sig)
    q = _ambient(term, args)
    if args.order:
        spec = _load_order(args, sig)
        for rule in rules:
            ok, _ = rule_compatible(rule, spec)
            if not ok:
                print(f"rule {rule.rule_id} not compatible with the order", file=sys.stderr)
                return USAGE_ERROR
        nf = normalize(term, q, rules, order_backed=True)
    else:
        try:
            nf = normalize(term, q, rules, max_steps=args.max_steps)
        except BudgetExceededError as exc:
            _emit(
                args,
                {"status": "budget-exceeded", "partial": format_term(exc.partial)},
                f"budget exceeded; partial: {format_term(exc.partial)}",
            )
            return NEGATIVE
    _emit(args, {"normal_form": format_term(nf)}, format_term(nf))
    return OK


def cmd_ambiguities(args) -> int:
    sig = _load_sig(args)
    rules = _load_rules(args, sig)
    by_id = {r.rule_id: r for r in rules}
    if args.pair:
        try:
            pairs = [(by_id[args.pair[0]], by_id[args.pair[1]])]
        except KeyError as exc:
            print(f"unknown rule {exc}", file=sys.stderr)
            return USAGE_ERROR
    else:
        pairs = [
            (rules[i], rules[j])
            for i in range(len(rules))
            for j in range(i, len(rules))
        ]
    rows = []
    for s1, s2 in pairs:
        for amb in enumerate_decisive(s1, s2):
            rows.append(
                {
                    "rules": [amb.rule1_id, amb.rule2_id],
                    "site": format_term_from_class(amb.site),
                    "kind": "terse" if amb.terse else "wrap",
                    "trivial": amb.trivial,
                }
            )
    text = "\n".join(
        f"{r['rules'][0]} / {r['rules'][1]} [{r['kind']}{', trivial' if r['trivial'] else ''}]"
        f" at {r['site']}"
        for r in rows
    )
    _emit(args, {"ambiguities": rows, "count": len(rows)}, text or "none")
    return OK


def format_term_from_class(cls) -> str:
    from .freeprop import LinComb

    return format_term(LinComb.monomial(cls))


def cmd_confluence(args) -> int:
    sig = _load_sig(args)
    rules = _load_rules(args, sig)
    spec = _load_order(args, sig) if args.order else None
    try:
        report = confluence_report(rules, spec, max_steps=args.max_steps)
    except IncompatibleRuleError as exc:
        print(str(exc), file=sys.stderr)
        return USAGE_ERROR
    rows = []
    for res in report.results:
        amb = res.ambiguity
        rows.append(
            {
                "rules": [amb.rule1_id, amb.rule2_id],
                "site": format_term_from_class(amb.site),
                "kind": "terse" if amb.terse else "wrap",
                "trivial": amb.trivial,
                "status": res.status,
                "difference": format_term(res.difference) if res.difference else None,
            }
        )
    counts = report.counts()
    nontrivial = sum(1 for r in report.results if not r.ambiguity.trivial)
    lines = [
        f"{len(report.results)} ambiguities ({nontrivial} nontrivial):"
        f" {counts['resolved']} resolved, {counts['unresolved']} unresolved,"
        f" {counts['unknown']} unknown"
    ]
    for row in rows:
        mark = "" if row["status"] == "resolved" else f" [{row['status'].upper()}]"
        extra = " (wrap)" if row["kind"] == "wrap" else ""
        lines.append(
            f"  {row['rules'][0]} / {row['rules'][1]}{extra} at {row['site']}{mark}"
        )
        if row["difference"]:
            lines.append(f"    difference: {row['difference']}")
    lines.append(f"verdict: {report.verdict}" + (" (advisory: non-sharp system)" if report.advisory else ""))
    _emit(
        args,
        {
            "verdict": report.verdict,
            "advisory": report.advisory,
            "ambiguities": rows,
        },
        "\n".join(lines),
    )
    return OK if report.verdict == "confluent" else NEGATIVE


def cmd_complete(args) -> int:
    sig = _load_sig(args)
    rules = _load_rules(args, sig)
    spec = _load_order(args, sig)
    try:
        new_rules, report = complete(rules, spec, max_steps=args.max_steps)
    except (OrientationFailedError, LimitReachedError) as exc:
        print(f"completion failed: {exc}", file=sys.stderr)
        return NEGATIVE
    added = [r for r in new_rules if r not in rules]
    lines = [f"{len(added)} rules added; verdict: {report.verdict}"]
    for rule in added:
        lines.append(
            f"  rule {rule.rule_id}: {format_term_from_class(rule.lhs)} ->"
            f" {format_term(rule.rhs)}"
        )
    _emit(
        args,
        {
            "added": [
                {
                    "id": r.rule_id,
                    "lhs": format_term_from_class(r.lhs),
                    "rhs": format_term(r.rhs),
                }
                for r in added
            ],
            "verdict": report.verdict,
        },
        "\n".join(lines),
    )
    return OK


def cmd_order_check(args) -> int:
    sig = _load_sig(args)
    spec = _load_order(args, sig)
    report = check_strictness(spec, sig)
    payload = {
        "ok": report.ok,
        "stages": [
            {"kind": st.kind, "ok": st.ok, "notes": list(st.notes)} for st in report.stages
        ],
    }
    lines = [str(report)]
    if args.rules:
        rules = _load_rules(args, sig)
        compat = []
        for rule in rules:
            ok, witnesses = rule_compatible(rule, spec)
            compat.append({"rule": rule.rule_id, "compatible": ok})
            lines.append(f"rule {rule.rule_id}: {'compatible' if ok else 'NOT compatible'}")
        payload["rules"] = compat
        all_ok = report.ok and all(c["compatible"] for c in compat)
    else:
        all_ok = report.ok
    _emit(args, payload, "\n".join(lines))
    return OK if all_ok else NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netrw", description="rewriting engine for free linear PROPs"
    )
    parser.add_argument("--json", action="store_true", help="structured output")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, rules=False, order=False, target=False, steps=False):
        p.add_argument("--sig", required=True, help="signature file")
        if rules:
            p.add_argument("--rules", help="rules file")
        if order:
            p.add_argument("--order", help="order preset file")
        if target:
            p.add_argument("--target", required=True, help="target PROP name")
            p.add_argument("--map", help="generator assignment file")
        if steps:
            p.add_argument("--max-steps", type=int, default=None)

    p = sub.add_parser("validate", help="check a term against the network axioms")
    common(p)
    p.add_argument("term")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("iso", help="decide isomorphism of two terms")
    common(p)
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("tr", help="transference matrix of a monomial")
    common(p)
    p.add_argument("term")
    p.set_defaults(func=cmd_tr)

    p = sub.add_parser("eval", help="evaluate a term in a built-in target")
    common(p, target=True)
    p.add_argument("term")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("join", help="symmetric join of two terms")
    common(p)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_join)

    p = sub.add_parser("normalize", help="reduce a term to normal form")
    common(p, rules=True, order=True, steps=True)
    p.add_argument("--type", choices=["ones", "zero"], default="ones")
    p.add_argument("term")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("ambiguities", help="list ambiguities of a rule system")
    common(p, rules=True)
    p.add_argument("--pair", nargs=2, metavar=("S1", "S2"))
    p.set_defaults(func=cmd_ambiguities)

    p = sub.add_parser("confluence", help="resolve all ambiguities")
    common(p, rules=True, order=True, steps=True)
    p.set_defaults(func=cmd_confluence)

    p = sub.add_parser("complete", help="orient unresolved differences into new rules")
    common(p, rules=True, order=True, steps=True)
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("order-check", help="check strictness and rule compatibility")
    common(p, rules=True, order=True)
    p.set_defaults(func=cmd_order_check)

    return parser


def main(argv=None) -> int:
    # NETRW_THREADS caps internal parallelism; execution is sequential,
    # which respects any cap >= 1.
    threads = os.environ.get("NETRW_THREADS")
    if threads is not None and (not threads.isdigit() or int(threads) < 1):
        print("NETRW_THREADS must be a positive integer", file=sys.stderr)
        return USAGE_ERROR
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (AinError, SignatureError, RuleError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
