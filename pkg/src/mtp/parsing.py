"""Concrete syntax: processes, configurations, interfaces, definition files.

Grammar (whitespace-insensitive)::

    config  := sum { "|" sum }
    sum     := prefix { "+" prefix }
    prefix  := "0" | "1" | "tau" "." prefix | act "." prefix | act
             | "(" sum ")" | "rec" IDENT "." prefix
    act     := ["~"] IDENT

A bare ``act`` denotes ``act.0``.  ``tau`` and ``rec`` are reserved words.
Output actions are written with a leading tilde.  Inside a ``rec X. p``
body the bare identifier ``X`` denotes the bound variable.

Definition files contain lines of the form::

    def NAME = <process or configuration>
    interface NAME = { {a, ~a, b}, {c} }
    # comment

Definition bodies may reference earlier ``def`` names; references are
expanded by substitution at load time, so recursion through names is not
possible.  Interface parts are closed under complement automatically.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .terms import (
    Action,
    Choice,
    Configuration,
    MtpError,
    NIL,
    ONE,
    Prefix,
    Process,
    Rec,
    TAU,
    Var,
)
from .traceclasses import Interface, validate_interface

RESERVED = {"tau", "rec", "def", "interface"}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*|[01])|(?P<sym>[~.+|()=])|(?P<bad>\S))"
)


class ParseError(MtpError):
    """Syntax or scoping error, with line/column information."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


@dataclass
class _Token:
    kind: str  # "ident", "sym", "end"
    text: str
    line: int
    column: int


def _tokenize(text: str, line_offset: int = 1) -> list:
    tokens = []
    for lineno, line in enumerate(text.split("\n"), start=line_offset):
        pos = 0
        while pos < len(line):
            m = _TOKEN_RE.match(line, pos)
            if m is None:
                break
            if m.group("bad"):
                raise ParseError(f"unexpected character {m.group('bad')!r}", lineno, m.start("bad") + 1)
            kind = "ident" if m.group("ident") else "sym"
            tokens.append(_Token(kind, m.group(kind), lineno, m.start(kind) + 1))
            pos = m.end()
    last_line = line_offset + text.count("\n")
    tokens.append(_Token("end", "", last_line, len(text.split("\n")[-1]) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, defs: Optional[dict] = None, line_offset: int = 1):
        self.tokens = _tokenize(text, line_offset)
        self.pos = 0
        self.defs = defs or {}

    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def error(self, message: str):
        raise ParseError(message, self.tok.line, self.tok.column)

    def advance(self) -> _Token:
        t = self.tok
        self.pos += 1
        return t

    def expect(self, text: str) -> _Token:
        if self.tok.text != text or self.tok.kind == "end":
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def at_sym(self, text: str) -> bool:
        return self.tok.kind == "sym" and self.tok.text == text

    # grammar productions -------------------------------------------------

    def config(self) -> Configuration:
        comps = [self.sum(bound=frozenset())]
        while self.at_sym("|"):
            self.advance()
            comps.append(self.sum(bound=frozenset()))
        self.end()
        return Configuration(tuple(comps))

    def process(self) -> Process:
        p = self.sum(bound=frozenset())
        self.end()
        return p

    def end(self):
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")

    def sum(self, bound: frozenset) -> Process:
        p = self.prefix(bound)
        while self.at_sym("+"):
            self.advance()
            p = Choice(p, self.prefix(bound))
        return p

    def prefix(self, bound: frozenset) -> Process:
        if self.at_sym("("):
            self.advance()
            p = self.sum(bound)
            self.expect(")")
            return p
        if self.at_sym("~"):
            tilde = self.advance()
            if self.tok.kind != "ident":
                self.error("expected a channel name after '~'")
            name = self.advance().text
            if name in RESERVED:
                raise ParseError(f"reserved word {name!r} cannot name a channel", tilde.line, tilde.column)
            return self._continuation(Action(name, is_output=True), bound)
        if self.tok.kind != "ident":
            self.error(f"expected a term, found {self.tok.text or 'end of input'!r}")
        tok = self.advance()
        word = tok.text
        if word == "tau":
            self.expect(".")
            return Prefix(TAU, self.prefix(bound))
        if word == "rec":
            if self.tok.kind != "ident":
                self.error("expected a variable name after 'rec'")
            var = self.advance().text
            if var in RESERVED:
                self.error(f"reserved word {var!r} cannot name a variable")
            self.expect(".")
            return Rec(var, self.prefix(bound | {var}))
        if word in RESERVED:
            raise ParseError(f"reserved word {word!r} misused", tok.line, tok.column)
        if word in bound:
            if self.at_sym("."):
                self.error(f"bound variable {word!r} cannot be prefixed")
            return Var(word)
        if word in self.defs:
            body = self.defs[word]
            if isinstance(body, Configuration):
                raise ParseError(
                    f"{word!r} names a configuration and cannot appear inside a process",
                    tok.line,
                    tok.column,
                )
            if self.at_sym("."):
                self.error(f"definition {word!r} cannot be prefixed")
            return body
        return self._continuation(Action(word), bound)

    def _continuation(self, action: Action, bound: frozenset) -> Process:
        if action.name == "0" or action.name == "1":
            self.error(f"{action.name!r} is not a channel name")
        if self.at_sym("."):
            self.advance()
            return Prefix(action, self.prefix(bound))
        return Prefix(action, NIL)


class _LiteralAwareParser(_Parser):
    def prefix(self, bound: frozenset) -> Process:
        if self.tok.kind == "ident" and self.tok.text in ("0", "1"):
            word = self.advance().text
            return NIL if word == "0" else ONE
        return super().prefix(bound)


def parse_process(text: str, defs: Optional[dict] = None) -> Process:
    """Parse a sequential process; '|' is rejected."""
    return _LiteralAwareParser(text, defs).process()


def parse_configuration(text: str, defs: Optional[dict] = None) -> Configuration:
    """Parse a '|'-separated configuration (a single process is a singleton)."""
    return _LiteralAwareParser(text, defs).config()


def parse_term(text: str, defs: Optional[dict] = None):
    """Parse either a process or a configuration.

    A bare defined name resolves to its definition, which may itself be a
    configuration.
    """
    stripped = text.strip()
    if defs and stripped in defs:
        return defs[stripped]
    cfg = parse_configuration(text, defs)
    if len(cfg.components) == 1:
        return cfg.components[0]
    return cfg


# ---------------------------------------------------------------------------
# Interfaces


def parse_interface(text: str, line_offset: int = 1) -> Interface:
    """Parse ``{ {a, ~a}, {b} }``; parts are auto-closed under complement."""
    # Braces are not grammar symbols of the term language, so scan manually.
    raw = text
    depth0 = raw.strip()
    if not (depth0.startswith("{") and depth0.endswith("}")):
        raise ParseError("an interface is written { {..}, {..} }", line_offset, 1)
    inner = depth0[1:-1]
    parts = []
    buf = ""
    depth = 0
    for ch in inner:
        if ch == "{":
            depth += 1
            if depth == 1:
                buf = ""
                continue
        elif ch == "}":
            depth -= 1
            if depth == 0:
                parts.append(buf)
                continue
            if depth < 0:
                raise ParseError("unbalanced braces in interface", line_offset, 1)
        elif depth == 0:
            if ch not in ", \t":
                raise ParseError(f"unexpected {ch!r} between interface parts", line_offset, 1)
            continue
        buf += ch
    if depth != 0:
        raise ParseError("unbalanced braces in interface", line_offset, 1)
    action_parts = []
    for part_text in parts:
        actions = []
        for item in part_text.split(","):
            item = item.strip()
            if not item:
                continue
            out = item.startswith("~")
            name = item[1:].strip() if out else item
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name) or name in RESERVED:
                raise ParseError(f"bad action {item!r} in interface", line_offset, 1)
            actions.append(Action(name, out))
        action_parts.append(actions)
    return validate_interface(action_parts)


# ---------------------------------------------------------------------------
# Definition files


@dataclass
class DefinitionFile:
    """Named process/configuration definitions plus named interfaces."""

    defs: dict = field(default_factory=dict)  # name -> Process | Configuration
    interfaces: dict = field(default_factory=dict)  # name -> Interface

    def term(self, name: str):
        if name not in self.defs:
            raise MtpError(f"undefined name {name!r}")
        return self.defs[name]

    def interface(self, name: str) -> Interface:
        if name not in self.interfaces:
            raise MtpError(f"undefined interface {name!r}")
        return self.interfaces[name]


_DEF_RE = re.compile(r"^\s*def\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)$")
_IFACE_RE = re.compile(r"^\s*interface\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)$")


def parse_definitions(text: str) -> DefinitionFile:
    """Parse a definition file; bodies may reference earlier defs."""
    out = DefinitionFile()
    for lineno, line in enumerate(text.split("\n"), start=1):
        line = line.split("#", 1)[0]
        if not line.strip():
            continue
        m = _DEF_RE.match(line)
        if m:
            name, body = m.group(1), m.group(2)
            if name in RESERVED:
                raise ParseError(f"reserved word {name!r} cannot name a definition", lineno, 1)
            if name in out.defs:
                raise ParseError(f"duplicate definition {name!r}", lineno, 1)
            parser = _LiteralAwareParser(body, out.defs, line_offset=lineno)
            cfg = parser.config()
            out.defs[name] = cfg.components[0] if len(cfg.components) == 1 else cfg
            continue
        m = _IFACE_RE.match(line)
        if m:
            name, body = m.group(1), m.group(2)
            if name in out.interfaces:
                raise ParseError(f"duplicate interface {name!r}", lineno, 1)
            out.interfaces[name] = parse_interface(body, line_offset=lineno)
            continue
        raise ParseError("expected 'def NAME = ...' or 'interface NAME = ...'", lineno, 1)
    return out


def load_definitions(path) -> DefinitionFile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_definitions(fh.read())
