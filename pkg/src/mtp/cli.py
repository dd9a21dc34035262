"""Command-line surface.

Subcommands: parse, traces, lts, classes, check, observer, corpus.
Exit codes for check/observer: 0 when the relation holds (with --both,
holds in both directions), 1 with a witness report when it fails, 2 on
parse/validation errors.  All output is available as JSON via
``--format json``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .corpus import load_corpus, run_corpus
from .parsing import DefinitionFile, ParseError, load_definitions, parse_interface, parse_term
from .preorders import RELATIONS, check
from .semantics import reachable_graph, traces
from .terms import Action, BudgetExceededError, MtpError, NotFiniteError, action_key, unparse
from .traceclasses import Interface, filtered_class, maz_class


class CliError(MtpError):
    pass


def _load_defs(path) -> DefinitionFile:
    if path is None:
        return DefinitionFile()
    return load_definitions(path)


def _resolve_interface(spec: str, defs: DefinitionFile) -> Interface:
    """Accept '{ {a}, {b} }', 'NAME' (from --defs), 'file', 'file:NAME'."""
    if spec.lstrip().startswith("{"):
        return parse_interface(spec)
    if spec in defs.interfaces:
        return defs.interfaces[spec]
    path, _, name = spec.partition(":")
    if Path(path).exists():
        loaded = load_definitions(path)
        if name:
            return loaded.interface(name)
        if len(loaded.interfaces) == 1:
            return next(iter(loaded.interfaces.values()))
        raise CliError(
            f"{path} declares {len(loaded.interfaces)} interfaces; pick one with '{path}:NAME'"
        )
    raise CliError(f"cannot resolve interface {spec!r}")


def _parse_trace(text: str, interface=None) -> tuple:
    """Dot/space/comma-separated actions; 'ab' splits into letters when all
    letters are single-character channel names of the interface."""
    text = text.strip()
    if not text or text == "ε":
        return ()
    for sep in (".", ",", " "):
        if sep in text:
            parts = [t for t in text.replace(",", sep).split(sep) if t.strip()]
            return tuple(_action(t) for t in parts)
    if (
        interface is not None
        and "~" not in text
        and all(c in {n for n in interface.names if len(n) == 1} for c in text)
    ):
        return tuple(Action(c) for c in text)
    return (_action(text),)


def _action(text: str) -> Action:
    text = text.strip()
    if text.startswith("~"):
        return Action(text[1:].strip(), True)
    return Action(text)


def _trace_text(t) -> str:
    return ".".join(str(a) for a in t) if t else "ε"


def _emit(args, payload: dict, text_lines):
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_parse(args) -> int:
    defs = _load_defs(args.defs)
    term = parse_term(args.term, defs.defs)
    _emit(args, {"term": unparse(term)}, [unparse(term)])
    return 0


def cmd_traces(args) -> int:
    defs = _load_defs(args.defs)
    term = parse_term(args.term, defs.defs)
    trs = sorted(traces(term), key=lambda t: (len(t), [str(l) for l in t]))
    rendered = [".".join(str(l) for l in t) if t else "ε" for t in trs]
    _emit(args, {"traces": [[str(l) for l in t] for t in trs]}, rendered)
    return 0


def cmd_lts(args) -> int:
    defs = _load_defs(args.defs)
    term = parse_term(args.term, defs.defs)
    nodes, edges = reachable_graph(term)
    payload = {
        "nodes": nodes,
        "edges": [{"source": s, "label": l, "target": t} for s, l, t in edges],
    }
    lines = [f"{s} --{l}--> {t}" for s, l, t in edges]
    if args.format != "json":
        lines = [f"states: {len(nodes)}"] + lines
    _emit(args, payload, lines)
    return 0


def cmd_classes(args) -> int:
    defs = _load_defs(args.defs)
    iface = _resolve_interface(args.interface, defs)
    trace = _parse_trace(args.trace, iface)
    if args.kind == "maz":
        cls = maz_class(trace, iface)
    else:
        if args.part is None:
            raise CliError("--kind filtered needs --part INDEX")
        part = iface.parts[args.part]
        universe = set()
        for text in args.universe or []:
            term = parse_term(text, defs.defs)
            universe |= {t for t in traces(term) if not any(str(l) == "tick" for l in t)}
        cls = filtered_class(trace, part, universe)
    members = cls.sorted_members()
    _emit(
        args,
        {"representative": [str(a) for a in cls.representative],
         "kind": cls.kind,
         "members": [[str(a) for a in t] for t in members]},
        [_trace_text(t) for t in members],
    )
    return 0


def _run_check(args, want_observer: bool) -> int:
    defs = _load_defs(args.defs)
    lhs = parse_term(args.lhs, defs.defs)
    rhs = parse_term(args.rhs, defs.defs)
    iface = None
    if args.relation in ("unc", "ind"):
        if not args.interface:
            raise CliError(f"--relation {args.relation} needs --interface")
        iface = _resolve_interface(args.interface, defs)
    directions = [(lhs, rhs)]
    if args.both:
        directions.append((rhs, lhs))
    reports = []
    all_hold = True
    for p, q in directions:
        result = check(p, q, args.relation, iface, with_observer=want_observer)
        all_hold = all_hold and result.holds
        reports.append(result)
    payload = {"checks": [r.to_dict() for r in reports]}
    lines = []
    for r in reports:
        head = f"{args.relation}: {unparse(r.lhs)}  <=  {unparse(r.rhs)}: {r.verdict}"
        lines.append(head)
        if r.witness is not None:
            w = r.witness
            lines.append(f"  witness trace: {w.trace_text()}")
            if w.part_index is not None and r.interface is not None:
                part = sorted(r.interface.parts[w.part_index], key=action_key)
                lines.append("  witness part:  {" + ", ".join(str(a) for a in part) + "}")
            lines.append(f"  must-set:      {w.must_set_text()}")
        if r.observer is not None:
            lines.append(f"  observer:      {unparse(r.observer)}")
    _emit(args, payload, lines)
    return 0 if all_hold else 1


def cmd_check(args) -> int:
    return _run_check(args, want_observer=args.observer)


def cmd_observer(args) -> int:
    return _run_check(args, want_observer=True)


def cmd_corpus(args) -> int:
    corpus = load_corpus(args.manifest)
    outcomes = run_corpus(corpus, with_observer=not args.no_observer)
    lines = []
    failures = 0
    for outcome in outcomes:
        status = "ok" if outcome.ok else "MISMATCH"
        lines.append(f"[{status}] {outcome.entry.id}: {outcome.result.verdict}")
        for problem in outcome.problems:
            failures += 1
            lines.append(f"    {problem}")
    lines.append(f"{len(outcomes)} entries, {failures} mismatches")
    payload = {
        "entries": [
            {
                "id": o.entry.id,
                "expected": o.entry.expect,
                "verdict": o.result.verdict,
                "ok": o.ok,
                "problems": o.problems,
            }
            for o in outcomes
        ],
        "mismatches": failures,
    }
    _emit(args, payload, lines)
    return 0 if failures == 0 else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a flag given before the subcommand from being clobbered
    # by the subparser's default
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS,
                        help="step budget for state exploration")
    common.add_argument("--format", choices=("text", "json"),
                        default=argparse.SUPPRESS)
    parser = argparse.ArgumentParser(
        prog="mtp",
        description="Testing preorders for finite sequential CCS: classical must, "
        "uncoordinated and individualistic multiparty variants.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    p = add("parse", help="parse a term and print its canonical form")
    p.add_argument("term")
    p.add_argument("--defs")
    p.set_defaults(func=cmd_parse)

    p = add("traces", help="sorted weak traces of a term")
    p.add_argument("term")
    p.add_argument("--defs")
    p.set_defaults(func=cmd_traces)

    p = add("lts", help="reachable transition graph as JSON")
    p.add_argument("term")
    p.add_argument("--defs")
    p.set_defaults(func=cmd_lts)

    p = add("classes", help="equivalence class of a trace")
    p.add_argument("trace")
    p.add_argument("--interface", required=True)
    p.add_argument("--kind", choices=("maz", "filtered"), default="maz")
    p.add_argument("--part", type=int, help="part index for --kind filtered")
    p.add_argument("--universe", nargs="*", help="terms whose traces bound a filtered class")
    p.add_argument("--defs")
    p.set_defaults(func=cmd_classes)

    for name, func in (("check", cmd_check), ("observer", cmd_observer)):
        p = add(name, help=f"{name} a preorder between two terms")
        p.add_argument("lhs")
        p.add_argument("rhs")
        p.add_argument("--relation", choices=RELATIONS, required=True)
        p.add_argument("--interface")
        p.add_argument("--defs")
        p.add_argument("--both", action="store_true", help="check both directions")
        p.add_argument("--all", action="store_true", help="list every witness")
        if name == "check":
            p.add_argument("--observer", action="store_true", help="synthesize a distinguishing observer")
        p.set_defaults(func=func)

    p = add("corpus", help="run an expectation manifest")
    corpus_sub = p.add_subparsers(dest="corpus_command", required=True)
    runp = corpus_sub.add_parser("run", parents=[common])
    runp.add_argument("manifest")
    runp.add_argument("--no-observer", action="store_true", help="skip oracle validation of witnesses")
    runp.set_defaults(func=cmd_corpus)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.format = getattr(args, "format", None) or "text"
    budget = getattr(args, "budget", None)
    saved = os.environ.get("MTP_BUDGET")
    if budget is not None:
        os.environ["MTP_BUDGET"] = str(budget)
    try:
        return args.func(args)
    except (ParseError, NotFiniteError, BudgetExceededError, CliError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MtpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    finally:
        if budget is not None:
            if saved is None:
                os.environ.pop("MTP_BUDGET", None)
            else:
                os.environ["MTP_BUDGET"] = saved


if __name__ == "__main__":
    sys.exit(main())
