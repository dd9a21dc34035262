"""Abstract syntax for sequential CCS terms and configurations.

Actions are inputs ``a``, outputs ``~a``, the internal action ``tau`` and
the success signal ``tick``.  Processes are built from 0, 1, action
prefixing, binary choice and recursion; a configuration is a non-empty
parallel composition of processes.  All values are immutable and hashable
so they can be used as states in exploration and as dictionary keys.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union


class MtpError(Exception):
    """Base class for errors raised by this package."""


class NotFiniteError(MtpError):
    """A decider or oracle was given a term containing recursion."""


class BudgetExceededError(MtpError):
    """State-space exploration exceeded the configured step budget."""


# ---------------------------------------------------------------------------
# Actions


@dataclass(frozen=True, order=True)
class Action:
    """A visible action: an input ``a`` or an output ``~a``."""

    name: str
    is_output: bool = False

    def complement(self) -> "Action":
        return Action(self.name, not self.is_output)

    def __str__(self) -> str:
        return ("~" if self.is_output else "") + self.name


class _Tau:
    """The internal action; a singleton."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "tau"

    def __str__(self):
        return "tau"


class _Tick:
    """The success signal; a singleton with no concrete input syntax."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "tick"

    def __str__(self):
        return "tick"


TAU = _Tau()
TICK = _Tick()

Label = Union[Action, _Tau, _Tick]


def label_str(label: Label) -> str:
    return str(label)


def action_key(a: Action) -> tuple:
    """Deterministic ordering key for visible actions: by name, inputs first."""
    return (a.name, a.is_output)


# ---------------------------------------------------------------------------
# Processes


@dataclass(frozen=True)
class Nil:
    def __str__(self):
        return "0"


@dataclass(frozen=True)
class One:
    def __str__(self):
        return "1"


@dataclass(frozen=True)
class Prefix:
    action: Union[Action, _Tau]
    body: "Process"

    def __post_init__(self):
        if self.action is TICK:
            raise ValueError("tick cannot be used as a prefix")

    def __str__(self):
        return unparse(self)


@dataclass(frozen=True)
class Choice:
    left: "Process"
    right: "Process"

    def __str__(self):
        return unparse(self)


@dataclass(frozen=True)
class Var:
    x: str

    def __str__(self):
        return self.x


@dataclass(frozen=True)
class Rec:
    x: str
    body: "Process"

    def __str__(self):
        return unparse(self)


Process = Union[Nil, One, Prefix, Choice, Var, Rec]

NIL = Nil()
ONE = One()


@dataclass(frozen=True)
class Configuration:
    """A non-empty parallel composition of sequential processes."""

    components: tuple

    def __post_init__(self):
        if not self.components:
            raise ValueError("a configuration needs at least one component")

    def __str__(self):
        return unparse(self)


def config(*components) -> Configuration:
    return Configuration(tuple(components))


def choice_of(terms) -> Process:
    """Right-nested binary choice over a sequence of processes; 0 if empty."""
    terms = list(terms)
    if not terms:
        return NIL
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = Choice(t, out)
    return out


def prefix_seq(actions, tail: Process) -> Process:
    """``a1.a2.....tail`` for a sequence of actions."""
    out = tail
    for a in reversed(list(actions)):
        out = Prefix(a, out)
    return out


# ---------------------------------------------------------------------------
# Term observers


def names(term) -> frozenset:
    """The set of channel names occurring in a process or configuration.

    tau and tick do not contribute.
    """
    if isinstance(term, Configuration):
        out: frozenset = frozenset()
        for c in term.components:
            out |= names(c)
        return out
    return _proc_names(term)


@lru_cache(maxsize=None)
def _proc_names(p) -> frozenset:
    if isinstance(p, (Nil, One, Var)):
        return frozenset()
    if isinstance(p, Prefix):
        base = _proc_names(p.body)
        if isinstance(p.action, Action):
            return base | {p.action.name}
        return base
    if isinstance(p, Choice):
        return _proc_names(p.left) | _proc_names(p.right)
    if isinstance(p, Rec):
        return _proc_names(p.body)
    raise TypeError(f"not a process: {p!r}")


def is_finite(term) -> bool:
    """True iff the term contains no recursion (no Rec/Var nodes)."""
    if isinstance(term, Configuration):
        return all(is_finite(c) for c in term.components)
    if isinstance(term, (Nil, One)):
        return True
    if isinstance(term, Prefix):
        return is_finite(term.body)
    if isinstance(term, Choice):
        return is_finite(term.left) and is_finite(term.right)
    if isinstance(term, (Var, Rec)):
        return False
    raise TypeError(f"not a term: {term!r}")


def substitute(p: Process, x: str, replacement: Process) -> Process:
    """Capture-free substitution of ``replacement`` for the variable ``x``."""
    if isinstance(p, (Nil, One)):
        return p
    if isinstance(p, Var):
        return replacement if p.x == x else p
    if isinstance(p, Prefix):
        return Prefix(p.action, substitute(p.body, x, replacement))
    if isinstance(p, Choice):
        return Choice(substitute(p.left, x, replacement), substitute(p.right, x, replacement))
    if isinstance(p, Rec):
        if p.x == x:
            return p
        return Rec(p.x, substitute(p.body, x, replacement))
    raise TypeError(f"not a process: {p!r}")


# ---------------------------------------------------------------------------
# Unparsing


def _unparse_atom(p) -> str:
    if isinstance(p, Choice):
        return "(" + unparse(p) + ")"
    return unparse(p)


def unparse(term) -> str:
    """Render a term in the concrete grammar; parse(unparse(t)) == t."""
    if isinstance(term, Configuration):
        return " | ".join(unparse(c) for c in term.components)
    if isinstance(term, Nil):
        return "0"
    if isinstance(term, One):
        return "1"
    if isinstance(term, Var):
        return term.x
    if isinstance(term, Rec):
        return f"rec {term.x}. {_unparse_atom(term.body)}"
    if isinstance(term, Prefix):
        head = str(term.action)
        if isinstance(term.body, Nil):
            # a bare action means action.0, but bare 'tau' does not parse
            return head if isinstance(term.action, Action) else head + ".0"
        return head + "." + _unparse_atom(term.body)
    if isinstance(term, Choice):
        # '+' parses left-associatively, so right-nested sums need parens
        right = unparse(term.right)
        if isinstance(term.right, Choice):
            right = "(" + right + ")"
        return unparse(term.left) + " + " + right
    raise TypeError(f"not a term: {term!r}")
