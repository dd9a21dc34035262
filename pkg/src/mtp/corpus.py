"""Executable expectation manifests.

A manifest is a TOML file pointing at a definition file and listing
preorder checks with expected verdicts and, optionally, expected
witnesses.  Running a manifest re-decides every entry and diffs the
outcome against the expectations.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .parsing import DefinitionFile, load_definitions, parse_term
from .preorders import RELATIONS, CheckResult, Witness, check
from .terms import Action, MtpError, action_key


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    relation: str
    lhs: str
    rhs: str
    interface: Optional[str]  # interface name in the definition file
    expect: str  # "holds" | "fails"
    witness_trace: Optional[tuple] = None  # tuple of Action
    witness_must_sets: Optional[tuple] = None  # acceptable alternatives
    note: str = ""


@dataclass
class Corpus:
    path: Path
    definitions: DefinitionFile
    entries: list = field(default_factory=list)


@dataclass
class EntryOutcome:
    entry: CorpusEntry
    result: CheckResult
    problems: list

    @property
    def ok(self) -> bool:
        return not self.problems


def _parse_action(text: str) -> Action:
    text = text.strip()
    if text.startswith("~"):
        return Action(text[1:], True)
    return Action(text)


def load_corpus(path) -> Corpus:
    path = Path(path)
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    defs_rel = data.get("defs")
    if defs_rel is None:
        definitions = DefinitionFile()
    else:
        definitions = load_definitions(path.parent / defs_rel)
    entries = []
    for raw in data.get("check", []):
        relation = raw["relation"]
        if relation not in RELATIONS:
            raise MtpError(f"{path}: unknown relation {relation!r} in entry {raw.get('id')!r}")
        expect = raw["expect"]
        if expect not in ("holds", "fails"):
            raise MtpError(f"{path}: expect must be 'holds' or 'fails', got {expect!r}")
        trace = raw.get("witness_trace")
        must_sets = raw.get("witness_must_sets")
        if must_sets is None and "witness_must_set" in raw:
            must_sets = [raw["witness_must_set"]]
        entries.append(
            CorpusEntry(
                id=raw.get("id", f"{relation}:{raw['lhs']}<={raw['rhs']}"),
                relation=relation,
                lhs=raw["lhs"],
                rhs=raw["rhs"],
                interface=raw.get("interface"),
                expect=expect,
                witness_trace=tuple(_parse_action(a) for a in trace) if trace is not None else None,
                witness_must_sets=(
                    tuple(frozenset(_parse_action(a) for a in ms) for ms in must_sets)
                    if must_sets is not None
                    else None
                ),
                note=raw.get("note", ""),
            )
        )
    return Corpus(path, definitions, entries)


def _witness_problems(entry: CorpusEntry, witness: Optional[Witness]) -> list:
    problems = []
    if witness is None:
        return ["expected a witness but the check holds"]
    if entry.witness_trace is not None and witness.trace != entry.witness_trace:
        problems.append(
            f"witness trace {witness.trace_text()} != expected "
            + (".".join(str(a) for a in entry.witness_trace) or "ε")
        )
    if entry.witness_must_sets is not None and witness.must_set not in entry.witness_must_sets:
        wanted = " | ".join(
            "{" + ", ".join(str(a) for a in sorted(ms, key=action_key)) + "}"
            for ms in entry.witness_must_sets
        )
        problems.append(f"witness must-set {witness.must_set_text()} != expected {wanted}")
    return problems


def run_corpus(corpus: Corpus, with_observer: bool = True) -> list:
    """Decide every entry; observer synthesis doubles as oracle validation."""
    outcomes = []
    for entry in corpus.entries:
        lhs = parse_term(entry.lhs, corpus.definitions.defs)
        rhs = parse_term(entry.rhs, corpus.definitions.defs)
        iface = corpus.definitions.interface(entry.interface) if entry.interface else None
        result = check(lhs, rhs, entry.relation, iface, with_observer=with_observer)
        problems = []
        if result.verdict != entry.expect:
            problems.append(f"verdict {result.verdict} != expected {entry.expect}")
        elif entry.expect == "fails":
            problems.extend(_witness_problems(entry, result.witness))
        outcomes.append(EntryOutcome(entry, result, problems))
    return outcomes
