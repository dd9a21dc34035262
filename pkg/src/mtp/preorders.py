"""Deciders for the three testing preorders, witnesses and observers.

The classical preorder compares must-sets after every shared trace.  The
uncoordinated variant groups traces into commutation classes induced by an
interface and draws must-sets from a single part at a time.  The
individualistic variant groups traces by their projection onto a part and
pads every must-set with all actions outside that part.

All three deciders reject recursive terms, search the finite universe of
traces of the two compared processes, and report the first failure found
under a deterministic order: shortlex-least trace, then declared part
order, then smallest must-set (by size, then lexicographically).  From a
witness a distinguishing observer can be synthesized and validated against
the exhaustive execution oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Optional

from .terms import (
    Action,
    Choice,
    Configuration,
    MtpError,
    NIL,
    NotFiniteError,
    ONE,
    Prefix,
    TAU,
    action_key,
    choice_of,
    is_finite,
    names,
    unparse,
)
from .semantics import (
    hide,
    must_holds,
    must_pass,
    visible_traces,
    weak_after,
    weak_initials,
)
from .traceclasses import (
    Interface,
    TraceClass,
    UncoveredNameError,
    class_after,
    filtered_class,
    maz_class,
    project,
    singleton_class,
)

MUST = "must"
UNC = "unc"
IND = "ind"
RELATIONS = (MUST, UNC, IND)


class SynthesisError(MtpError):
    """A synthesized observer failed oracle validation (a decider bug)."""


def shortlex_key(trace: tuple) -> tuple:
    return (len(trace), tuple(action_key(a) for a in trace))


@dataclass(frozen=True)
class Witness:
    """Evidence that a preorder fails: after the trace class, the left
    process guarantees the must-set but the right one does not."""

    trace: tuple  # tuple of Action, the class representative
    part_index: Optional[int]  # None for the classical preorder
    must_set: frozenset  # frozenset of Action (part-local for ind)
    trace_class: TraceClass

    def trace_text(self) -> str:
        return ".".join(str(a) for a in self.trace) if self.trace else "ε"

    def must_set_text(self) -> str:
        return "{" + ", ".join(str(a) for a in sorted(self.must_set, key=action_key)) + "}"


@dataclass(frozen=True)
class CheckResult:
    relation: str
    lhs: object
    rhs: object
    interface: Optional[Interface]
    holds: bool
    witness: Optional[Witness] = None
    observer: Optional[Configuration] = None

    @property
    def verdict(self) -> str:
        return "holds" if self.holds else "fails"

    def to_dict(self) -> dict:
        out = {
            "relation": self.relation,
            "direction": [unparse(self.lhs), unparse(self.rhs)],
            "verdict": self.verdict,
        }
        if self.interface is not None:
            out["interface"] = [
                sorted(str(a) for a in part) for part in self.interface.parts
            ]
        if self.witness is not None:
            w = self.witness
            out["witness"] = {
                "trace": [str(a) for a in w.trace],
                "part": (
                    sorted(str(a) for a in self.interface.parts[w.part_index])
                    if w.part_index is not None and self.interface is not None
                    else None
                ),
                "mustSet": sorted(str(a) for a in w.must_set),
                "classMembers": [
                    [str(a) for a in t] for t in w.trace_class.sorted_members()
                ],
            }
        if self.observer is not None:
            out["observer"] = unparse(self.observer)
        return out


@dataclass(frozen=True)
class CandidateSpace:
    """The finite search space: shared trace universe and action alphabet."""

    trace_universe: tuple  # shortlex-sorted tuples of Action
    alphabet: frozenset  # both polarities over the shared channel names

    @classmethod
    def of(cls, p, q) -> "CandidateSpace":
        universe = sorted(visible_traces(p) | visible_traces(q), key=shortlex_key)
        shared = names(p) | names(q)
        alphabet = frozenset(
            Action(n, polarity) for n in shared for polarity in (False, True)
        )
        return cls(tuple(universe), alphabet)


def _require_finite(p, q):
    for term in (p, q):
        if not is_finite(term):
            raise NotFiniteError(
                f"deciders cover the finite fragment only; {unparse(term)!r} uses recursion"
            )


def _require_covered(p, q, interface: Interface):
    missing = sorted((names(p) | names(q)) - interface.names)
    if missing:
        raise UncoveredNameError(
            f"channels not covered by any declared interface part: {', '.join(missing)}"
        )


def _enabled_actions(residuals) -> frozenset:
    out: set = set()
    for term in residuals:
        out |= {a for a in weak_initials(term) if isinstance(a, Action)}
    return frozenset(out)


def _must_set_candidates(pool) -> Iterator[frozenset]:
    """Subsets of the pool ordered by size then lexicographically.

    Restricting must-set candidates to actions weakly enabled on the left
    residuals (plus the empty set) preserves verdicts and minimal
    witnesses: MUST only inspects enabled actions on the left, and on the
    right MUST is monotone in the set, so shrinking a witness keeps it one.
    """
    pool = sorted(pool, key=action_key)
    for r in range(len(pool) + 1):
        for combo in combinations(pool, r):
            yield frozenset(combo)


def _find_must_set(left_residuals, right_residuals, pool, padding=frozenset()):
    for candidate in _must_set_candidates(pool):
        full = candidate | padding
        if must_holds(left_residuals, full) and not must_holds(right_residuals, full):
            return candidate
    return None


# ---------------------------------------------------------------------------
# Deciders


def witnesses_must(p, q) -> Iterator[Witness]:
    _require_finite(p, q)
    space = CandidateSpace.of(p, q)
    for s in space.trace_universe:
        left = weak_after(p, s)
        right = weak_after(q, s)
        pool = _enabled_actions(left) & space.alphabet
        for candidate in _must_set_candidates(pool):
            if must_holds(left, candidate) and not must_holds(right, candidate):
                yield Witness(s, None, candidate, singleton_class(s))


def witnesses_unc(p, q, interface: Interface) -> Iterator[Witness]:
    _require_finite(p, q)
    _require_covered(p, q, interface)
    space = CandidateSpace.of(p, q)
    seen_classes: set = set()
    for s in space.trace_universe:
        cls = maz_class(s, interface)
        if cls.members in seen_classes:
            continue
        seen_classes.add(cls.members)
        left = class_after(p, cls)
        right = class_after(q, cls)
        enabled = _enabled_actions(left)
        for part_index, part in enumerate(interface.parts):
            pool = part & enabled & space.alphabet
            for candidate in _must_set_candidates(pool):
                if must_holds(left, candidate) and not must_holds(right, candidate):
                    yield Witness(s, part_index, candidate, cls)


def witnesses_ind(p, q, interface: Interface) -> Iterator[Witness]:
    _require_finite(p, q)
    _require_covered(p, q, interface)
    space = CandidateSpace.of(p, q)
    universe = space.trace_universe
    seen: set = set()
    extended = interface.universe | space.alphabet
    for s in universe:
        for part_index, part in enumerate(interface.parts):
            key = (part_index, project(s, part))
            if key in seen:
                continue
            seen.add(key)
            cls = filtered_class(s, part, universe)
            left = class_after(p, cls)
            right = class_after(q, cls)
            padding = extended - part
            pool = part & _enabled_actions(left) & space.alphabet
            for candidate in _must_set_candidates(pool):
                full = candidate | padding
                if must_holds(left, full) and not must_holds(right, full):
                    yield Witness(s, part_index, candidate, cls)


def _decide(p, q, relation: str, interface: Optional[Interface], with_observer: bool) -> CheckResult:
    if relation == MUST:
        gen = witnesses_must(p, q)
    elif relation == UNC:
        if interface is None:
            raise MtpError("the uncoordinated preorder needs an interface")
        gen = witnesses_unc(p, q, interface)
    elif relation == IND:
        if interface is None:
            raise MtpError("the individualistic preorder needs an interface")
        gen = witnesses_ind(p, q, interface)
    else:
        raise MtpError(f"unknown relation {relation!r}")
    witness = next(gen, None)
    observer = None
    if witness is not None and with_observer:
        observer = find_observer(p, q, relation, interface)
    return CheckResult(relation, p, q, interface, witness is None, witness, observer)


def leq_must(p, q, with_observer: bool = False) -> CheckResult:
    """Classical must preorder: p below q."""
    return _decide(p, q, MUST, None, with_observer)


def leq_unc(p, q, interface: Interface, with_observer: bool = False) -> CheckResult:
    """Uncoordinated preorder over the given interface."""
    return _decide(p, q, UNC, interface, with_observer)


def leq_ind(p, q, interface: Interface, with_observer: bool = False) -> CheckResult:
    """Individualistic preorder over the given interface."""
    return _decide(p, q, IND, interface, with_observer)


def check(p, q, relation: str, interface: Optional[Interface] = None,
          with_observer: bool = False) -> CheckResult:
    return _decide(p, q, relation, interface, with_observer)


def all_witnesses_iter(p, q, relation: str, interface: Optional[Interface] = None):
    if relation == MUST:
        return witnesses_must(p, q)
    if relation == UNC:
        return witnesses_unc(p, q, interface)
    if relation == IND:
        return witnesses_ind(p, q, interface)
    raise MtpError(f"unknown relation {relation!r}")


def all_witnesses(p, q, relation: str, interface: Optional[Interface] = None):
    return list(all_witnesses_iter(p, q, relation, interface))


# ---------------------------------------------------------------------------
# Observer synthesis


def _probe_suffix(must_set) -> object:
    """Sum of complemented probes over the must-set; 0 refutes a trace."""
    return choice_of(
        Prefix(a.complement(), ONE) for a in sorted(must_set, key=action_key)
    )


def _trace_follower(letters, suffix, escapes: bool = True) -> object:
    """tau.1 + b1'.(tau.1 + ... (tau.1 + bk'.suffix)...) over complements.

    Without escapes the component insists on the whole string:
    b1'.b2'...bk'.suffix.
    """
    out = suffix
    for letter in reversed(list(letters)):
        prefixed = Prefix(letter.complement(), out)
        out = Choice(Prefix(TAU, ONE), prefixed) if escapes else prefixed
    return out


def synthesize_observer(witness: Witness, interface: Optional[Interface],
                        relation: str, s_full: Optional[tuple] = None,
                        escape_mask: Optional[tuple] = None) -> Configuration:
    """Build a distinguishing observer encoded by a witness.

    For the classical preorder: one sequential component following the
    complemented witness trace into a sum of probes (or into 0 when the
    must-set is empty, refuting the trace itself).  For the interface
    preorders: one component per declared part, following that part's
    projection of the trace; only the witness part carries the probe sum,
    the others end in 1.  ``escape_mask`` switches the tau.1 + _ escape
    branches per component; whether escapes help or hurt depends on how
    the compared processes interleave, so ``find_observer`` tries several
    masks and keeps the first observer the oracle certifies.
    """
    if s_full is None:
        s_full = witness.trace
    if relation == MUST:
        component = _trace_follower(s_full, _probe_suffix(witness.must_set))
        return Configuration((component,))
    if interface is None:
        raise MtpError("interface observers need the interface")
    if escape_mask is None:
        escape_mask = tuple(True for _ in interface.parts)
    comps = []
    for index, part in enumerate(interface.parts):
        letters = project(s_full, part)
        if index == witness.part_index:
            suffix = _probe_suffix(witness.must_set)
        else:
            suffix = ONE
        comps.append(_trace_follower(letters, suffix, escapes=escape_mask[index]))
    return Configuration(tuple(comps))


def _refuting_observer(trace: tuple, interface: Interface) -> Optional[Configuration]:
    """Observer refuting a whole commutation class: escaped followers on
    every part, with the owner of the final letter ending in 0."""
    if not trace:
        return None
    owner = interface.part_index(trace[-1])
    if owner is None:
        return None
    comps = []
    for index, part in enumerate(interface.parts):
        letters = project(trace, part)
        suffix = NIL if index == owner else ONE
        comps.append(_trace_follower(letters, suffix))
    return Configuration(tuple(comps))


def observer_separates(p, q, relation: str, interface: Optional[Interface],
                       part_index: Optional[int], observer: Configuration) -> bool:
    """The oracle contract an observer must meet.

    Classical and uncoordinated observers separate p from q under the
    plain oracle.  Individualistic observers separate the hidden views of
    one part, matching the defining experiments of the preorder.
    """
    if relation in (MUST, UNC):
        return must_pass(p, observer) and not must_pass(q, observer)
    part = interface.parts[part_index]
    visible = frozenset(a.name for a in part)
    component = observer.components[part_index]
    return must_pass(hide(p, visible), component) and not must_pass(
        hide(q, visible), component
    )


def validate_observer(p, q, witness: Witness, interface: Optional[Interface],
                      relation: str, observer: Configuration):
    """Oracle check of the synthesis contract; raises on violation."""
    if not observer_separates(p, q, relation, interface, witness.part_index, observer):
        raise SynthesisError(
            f"observer {unparse(observer)!r} does not separate "
            f"{unparse(p)!r} from {unparse(q)!r} under {relation}"
        )


def _escape_masks(n_parts: int, witness_index: int):
    all_on = tuple(True for _ in range(n_parts))
    yield all_on
    yield tuple(False for _ in range(n_parts))
    yield tuple(i == witness_index for i in range(n_parts))
    yield tuple(i != witness_index for i in range(n_parts))


def _mirror_node(suffixes) -> object:
    """Always-succeeding mirror of a set of projected strings.

    Each node enables success (a 1 summand) and offers the complement of
    every letter the mirrored process may do next, so the component never
    blocks a computation yet lets the process unfold its whole behaviour
    on this part.
    """
    letters = sorted({t[0] for t in suffixes if t}, key=action_key)
    if not letters:
        return ONE
    branches = [
        Prefix(a.complement(), _mirror_node({t[1:] for t in suffixes if t and t[0] == a}))
        for a in letters
    ]
    return choice_of([ONE] + branches)


def _cooperative_observer(p, witness: Witness, interface: Interface,
                          escapes: bool) -> Configuration:
    projections = {
        i: {project(t, part) for t in visible_traces(p)}
        for i, part in enumerate(interface.parts)
    }
    comps = []
    for index, part in enumerate(interface.parts):
        if index == witness.part_index:
            comps.append(
                _trace_follower(
                    project(witness.trace, part),
                    _probe_suffix(witness.must_set),
                    escapes=escapes,
                )
            )
        else:
            comps.append(_mirror_node(projections[index]))
    return Configuration(tuple(comps))


def _observer_candidates(p, witness: Witness, interface: Optional[Interface],
                         relation: str):
    if relation == MUST or interface is None:
        yield synthesize_observer(witness, interface, relation)
        return
    seen: set = set()
    for mask in _escape_masks(len(interface.parts), witness.part_index):
        obs = synthesize_observer(witness, interface, relation, escape_mask=mask)
        if obs not in seen:
            seen.add(obs)
            yield obs
    for escapes in (True, False):
        obs = _cooperative_observer(p, witness, interface, escapes)
        if obs not in seen:
            seen.add(obs)
            yield obs
    if not witness.must_set:
        for member in witness.trace_class.sorted_members():
            obs = _refuting_observer(member, interface)
            if obs is not None and obs not in seen:
                seen.add(obs)
                yield obs


def find_observer(p, q, relation: str, interface: Optional[Interface],
                  witness_cap: int = 64) -> Configuration:
    """Search witnesses and observer shapes for an oracle-certified
    distinguishing observer.

    Every candidate is validated before being returned, so a result is
    separating by construction.  As a last resort a bounded enumeration
    of uncoordinated observers is scanned.
    """
    tried = 0
    for witness in all_witnesses_iter(p, q, relation, interface):
        for observer in _observer_candidates(p, witness, interface, relation):
            if observer_separates(p, q, relation, interface, witness.part_index, observer):
                return observer
        tried += 1
        if tried >= witness_cap:
            break
    if relation != MUST and interface is not None:
        space = CandidateSpace.of(p, q)
        for observer in enumerate_uncoordinated_observers(
            interface, space.alphabet, depth=3, limit=5000
        ):
            for part_index in range(len(interface.parts)):
                if observer_separates(p, q, relation, interface, part_index, observer):
                    return observer
    raise SynthesisError(
        f"no distinguishing observer found for {unparse(p)!r} vs {unparse(q)!r} under {relation}"
    )


# ---------------------------------------------------------------------------
# Relation matrix


def relate(p, q, interface: Interface) -> dict:
    """All six directed verdicts plus hierarchy consistency flags."""
    results = {}
    for relation in RELATIONS:
        iface = None if relation == MUST else interface
        results[(relation, "lr")] = check(p, q, relation, iface)
        results[(relation, "rl")] = check(q, p, relation, iface)
    flags = {}
    for direction in ("lr", "rl"):
        flags[f"must_implies_unc_{direction}"] = (
            not results[(MUST, direction)].holds or results[(UNC, direction)].holds
        )
        flags[f"unc_implies_ind_{direction}"] = (
            not results[(UNC, direction)].holds or results[(IND, direction)].holds
        )
    return {"results": results, "consistent": all(flags.values()), "flags": flags}


# ---------------------------------------------------------------------------
# Bounded observer enumeration (characterisation testing aid)


def _sequential_observers(actions, depth: int) -> list:
    """All sequential observer terms of prefix depth <= depth, deterministic
    order, over the given complemented action pool."""
    pool = sorted(actions, key=action_key)
    levels = [[NIL, ONE]]
    for _ in range(depth):
        previous = levels[-1]
        nxt = list(previous)
        for t in previous:
            nxt.append(Prefix(TAU, t))
            for a in pool:
                nxt.append(Prefix(a, t))
                nxt.append(Choice(Prefix(TAU, ONE), Prefix(a, t)))
        levels.append(nxt)
    # dedupe, preserving order
    seen: set = set()
    out = []
    for t in levels[-1]:
        if t not in seen:
            seen.add(t)
            out.append(t)
    return out


def enumerate_uncoordinated_observers(interface: Interface, alphabet,
                                      depth: int = 3, limit: int = 200) -> list:
    """Up to ``limit`` uncoordinated observers (one component per part)."""
    per_part = []
    for part in interface.parts:
        acts = frozenset(a.complement() for a in part & frozenset(alphabet))
        cap = max(2, int(limit ** (1.0 / max(1, len(interface.parts)))) + 2)
        per_part.append(_sequential_observers(acts, depth)[: cap * 8])
    out = []
    for combo in product(*per_part):
        out.append(Configuration(tuple(combo)))
        if len(out) >= limit:
            break
    return out
