"""Labelled transition system and the exhaustive testing oracle.

Strong steps follow the standard rules: ``1`` signals success and stops,
prefixes fire, choice commits to a branch, recursion unfolds by one step.
Configurations interleave their components, synchronise complementary
actions into tau, and report success only when every component can do so
at the same time.

On top of the strong relation this module provides the weak machinery
(residuals, traces, enabled actions), the MUST predicate over action sets,
a hiding view that relabels out-of-scope actions to tau, divergence
detection, and ``must_pass``: the exhaustive execution oracle deciding
whether a process passes an observer.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .terms import (
    Action,
    BudgetExceededError,
    Choice,
    Configuration,
    Nil,
    NotFiniteError,
    One,
    Prefix,
    Rec,
    TAU,
    TICK,
    Var,
    is_finite,
    substitute,
    unparse,
)

DEFAULT_BUDGET = 10**4


def step_budget() -> int:
    """Exploration budget; the MTP_BUDGET env var overrides the default."""
    raw = os.environ.get("MTP_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"MTP_BUDGET must be an integer, got {raw!r}") from exc


@dataclass(frozen=True)
class HiddenView:
    """A process observed through one part of an interface.

    Transitions over channels outside ``visible`` appear as tau; visible
    actions and success are preserved.  The underlying term keeps stepping
    unchanged underneath.
    """

    base: object  # Process or HiddenView
    visible: frozenset  # frozenset of channel names

    def __str__(self):
        names = ", ".join(sorted(self.visible))
        return f"({unparse(self.base)}) @ {{{names}}}"


def hide(p, visible_names) -> HiddenView:
    return HiddenView(p, frozenset(visible_names))


# ---------------------------------------------------------------------------
# Strong transition relation


@lru_cache(maxsize=None)
def step(term) -> frozenset:
    """The exact strong transition set as (label, target) pairs."""
    if isinstance(term, Nil):
        return frozenset()
    if isinstance(term, One):
        return frozenset({(TICK, Nil())})
    if isinstance(term, Prefix):
        return frozenset({(term.action, term.body)})
    if isinstance(term, Choice):
        return step(term.left) | step(term.right)
    if isinstance(term, Rec):
        return step(substitute(term.body, term.x, term))
    if isinstance(term, Var):
        raise ValueError(f"cannot step the open term {term.x!r}")
    if isinstance(term, HiddenView):
        out = set()
        for label, target in step(term.base):
            wrapped = HiddenView(target, term.visible)
            if isinstance(label, Action) and label.name not in term.visible:
                out.add((TAU, wrapped))
            else:
                out.add((label, wrapped))
        return frozenset(out)
    if isinstance(term, Configuration):
        return _config_step(term)
    raise TypeError(f"not a steppable term: {term!r}")


def _config_step(c: Configuration) -> frozenset:
    comps = c.components
    out = set()
    comp_steps = [step(x) for x in comps]
    # interleaving of non-success moves
    for i, steps_i in enumerate(comp_steps):
        for label, target in steps_i:
            if label is TICK:
                continue
            out.add((label, _replace(comps, i, target)))
    # synchronisation of complementary actions
    for i in range(len(comps)):
        for j in range(len(comps)):
            if i == j:
                continue
            for label_i, target_i in comp_steps[i]:
                if not isinstance(label_i, Action):
                    continue
                co = label_i.complement()
                for label_j, target_j in comp_steps[j]:
                    if label_j == co:
                        updated = _replace(comps, i, target_i)
                        updated = Configuration(
                            updated.components[:j] + (target_j,) + updated.components[j + 1:]
                        )
                        out.add((TAU, updated))
    # joint success: every component reports at once
    tick_moves = [
        [target for label, target in steps_i if label is TICK]
        for steps_i in comp_steps
    ]
    if all(tick_moves):
        for targets in product(*tick_moves):
            out.add((TICK, Configuration(tuple(targets))))
    return frozenset(out)


def _replace(comps: tuple, i: int, target) -> Configuration:
    return Configuration(comps[:i] + (target,) + comps[i + 1:])


def _as_state(term):
    """Configurations are explored as-is; processes/views directly."""
    if isinstance(term, Configuration) and len(term.components) == 1:
        return term.components[0]
    return term


# ---------------------------------------------------------------------------
# Weak machinery


@lru_cache(maxsize=None)
def tau_closure(term) -> frozenset:
    """All states reachable by internal steps, including the term itself."""
    budget = step_budget()
    seen = {term}
    frontier = [term]
    while frontier:
        state = frontier.pop()
        for label, target in step(state):
            if label is TAU and target not in seen:
                if len(seen) >= budget:
                    raise BudgetExceededError("tau closure exceeded the step budget")
                seen.add(target)
                frontier.append(target)
    return frozenset(seen)


@lru_cache(maxsize=None)
def weak_initials(term) -> frozenset:
    """Visible labels (including tick) weakly enabled from the term."""
    out = set()
    for state in tau_closure(term):
        for label, _ in step(state):
            if label is not TAU:
                out.add(label)
    return frozenset(out)


def initials(term) -> frozenset:
    """init(c): the weakly enabled visible labels and tick."""
    return weak_initials(_as_state(term))


def weak_after(term, s) -> frozenset:
    """Residuals after the weak trace ``s`` (no tau; tick only last)."""
    s = tuple(s)
    for i, label in enumerate(s):
        if label is TAU:
            raise ValueError("weak traces contain no tau")
        if label is TICK and i != len(s) - 1:
            raise ValueError("tick may only terminate a trace")
    current = set(tau_closure(_as_state(term)))
    for letter in s:
        nxt: set = set()
        for state in current:
            for label, target in step(state):
                if label == letter:
                    nxt |= tau_closure(target)
        current = nxt
    return frozenset(current)


def traces(term) -> frozenset:
    """The prefix-closed set of weak traces, as tuples of labels.

    Success-terminated traces are included; tau never appears.  Terms with
    a reachable cycle have infinitely many traces and raise
    BudgetExceededError instead.
    """
    budget = step_budget()
    memo: dict = {}
    on_stack: set = set()
    counter = [0]

    def visit(state) -> frozenset:
        if state in memo:
            return memo[state]
        if state in on_stack:
            raise BudgetExceededError("trace set is infinite (cycle in the transition graph)")
        counter[0] += 1
        if counter[0] > budget:
            raise BudgetExceededError("trace enumeration exceeded the step budget")
        on_stack.add(state)
        out = {()}
        for label, target in step(state):
            sub = visit(target)
            if label is TAU:
                out |= sub
            else:
                out |= {(label,) + t for t in sub}
        on_stack.discard(state)
        memo[state] = frozenset(out)
        return memo[state]

    return visit(_as_state(term))


def visible_traces(term) -> frozenset:
    """Weak traces over visible actions only (tick-free), for the deciders."""
    return frozenset(t for t in traces(term) if not t or t[-1] is not TICK)


def converges(term) -> bool:
    """False iff an infinite internal computation is reachable by tau steps."""
    budget = step_budget()
    state0 = _as_state(term)
    on_stack: set = set()
    done: set = set()
    counter = [0]

    def visit(state) -> bool:
        if state in done:
            return True
        if state in on_stack:
            return False  # tau cycle
        counter[0] += 1
        if counter[0] > budget:
            return False  # unbounded unfolding
        on_stack.add(state)
        for label, target in step(state):
            if label is TAU and not visit(target):
                return False
        on_stack.discard(state)
        done.add(state)
        return True

    return visit(state0)


# ---------------------------------------------------------------------------
# MUST and the execution oracle


def must_holds(residuals, action_set) -> bool:
    """P MUST L: every internal derivative of every member weakly enables
    some action of L.

    The empty set of residuals satisfies every L; a non-empty set never
    satisfies the empty L.
    """
    wanted = frozenset(action_set)
    for term in residuals:
        for state in tau_closure(_as_state(term)):
            if not (weak_initials(state) & wanted):
                return False
    return True


def _assert_finite(term, role: str):
    base = term
    while isinstance(base, HiddenView):
        base = base.base
    if not is_finite(base):
        raise NotFiniteError(f"the {role} contains recursion; the oracle covers the finite fragment only")


def must_pass(process, observer) -> bool:
    """Exhaustive check that the process passes the observer.

    True iff every maximal internal computation of ``process || observer``
    visits a state where the observer side enables success.  Success need
    not be consumed; enabling it at some visited state suffices.
    """
    if isinstance(observer, Configuration):
        obs_components = observer.components
    else:
        obs_components = (observer,)
    _assert_finite(process, "process")
    for o in obs_components:
        _assert_finite(o, "observer")
    if isinstance(process, Configuration):
        raise TypeError("the process under test is a single sequential term")

    memo: dict = {}
    limit = max(sys.getrecursionlimit(), 20000)
    sys.setrecursionlimit(limit)

    def observer_succeeds(state) -> bool:
        return all(
            any(label is TICK for label, _ in step(c))
            for c in state[1:]
        )

    def passes(state) -> bool:
        cached = memo.get(state)
        if cached is not None:
            return cached
        if observer_succeeds(state):
            memo[state] = True
            return True
        successors = [
            target.components
            for label, target in step(Configuration(state))
            if label is TAU
        ]
        if not successors:
            result = False  # maximal computation ends here, unsuccessfully
        else:
            result = all(passes(s) for s in successors)
        memo[state] = result
        return result

    return passes((process,) + obs_components)


# ---------------------------------------------------------------------------
# Graph export


def reachable_graph(term) -> tuple:
    """Reachable states and labelled edges, for diagnostics.

    Returns (nodes, edges) where nodes is a list of canonical term strings
    and edges a list of (source, label, target) string triples, all sorted.
    """
    budget = step_budget()
    start = _as_state(term)
    seen = {start}
    frontier = [start]
    edges = set()
    while frontier:
        state = frontier.pop()
        for label, target in step(state):
            edges.add((unparse_state(state), str(label), unparse_state(target)))
            if target not in seen:
                if len(seen) >= budget:
                    raise BudgetExceededError("graph exploration exceeded the step budget")
                seen.add(target)
                frontier.append(target)
    nodes = sorted(unparse_state(s) for s in seen)
    return nodes, sorted(edges)


def unparse_state(state) -> str:
    if isinstance(state, HiddenView):
        return str(state)
    return unparse(state)
