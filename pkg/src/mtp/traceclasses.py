"""Interfaces, dependency relations and trace equivalence classes.

An interface partitions the visible actions into complement-closed parts,
one per partner.  The induced dependency relation makes two actions
dependent exactly when they belong to the same part; adjacent independent
actions of a string may be swapped, yielding the commutation class of the
string.  Filtered classes instead collect the strings of a finite universe
that agree after projection onto one part.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .terms import Action, MtpError, action_key

CLASS_MEMBER_CAP = 10**6


class InterfaceError(MtpError):
    """Ill-formed interface declaration."""


class UncoveredNameError(MtpError):
    """A process uses a channel that belongs to no declared interface part."""


@dataclass(frozen=True)
class Interface:
    """Complement-closed, pairwise disjoint parts of visible actions.

    Only the relevant parts are declared; all undeclared actions implicitly
    share one extra part.
    """

    parts: tuple  # tuple of frozenset[Action]

    @property
    def universe(self) -> frozenset:
        out: frozenset = frozenset()
        for part in self.parts:
            out |= part
        return out

    @property
    def names(self) -> frozenset:
        return frozenset(a.name for a in self.universe)

    def part_index(self, action: Action) -> Optional[int]:
        """Index of the declared part holding the action, None if undeclared."""
        for i, part in enumerate(self.parts):
            if action in part:
                return i
        return None

    def dependent(self, a: Action, b: Action) -> bool:
        """Actions commute iff they sit in different parts (declared or the
        implicit rest part)."""
        return self.part_index(a) == self.part_index(b)

    def covers(self, channel_names: Iterable[str]) -> bool:
        return set(channel_names) <= self.names

    def __str__(self) -> str:
        return "{" + ", ".join(
            "{" + ", ".join(str(a) for a in sorted(part, key=action_key)) + "}"
            for part in self.parts
        ) + "}"


def validate_interface(parts: Iterable[Iterable[Action]]) -> Interface:
    """Build an Interface, closing each part under complement.

    Raises InterfaceError on overlapping parts or empty declarations.
    tau/tick cannot occur because parts contain Action values only.
    """
    closed = []
    for part in parts:
        actions = set()
        for a in part:
            if not isinstance(a, Action):
                raise InterfaceError(f"interface parts contain visible actions only, got {a!r}")
            actions.add(a)
            actions.add(a.complement())
        if not actions:
            raise InterfaceError("empty interface part")
        closed.append(frozenset(actions))
    if not closed:
        raise InterfaceError("an interface needs at least one part")
    seen: set = set()
    for part in closed:
        overlap = seen & part
        if overlap:
            sample = sorted(overlap, key=action_key)[0]
            raise InterfaceError(f"action {sample} appears in two parts")
        seen |= part
    return Interface(tuple(closed))


def interface_of_names(*name_groups) -> Interface:
    """Convenience: build an interface from groups of channel names."""
    return validate_interface([[Action(n) for n in group] for group in name_groups])


def is_refinement(fine: Interface, coarse: Interface) -> bool:
    """True iff every part of ``fine`` is contained in a part of ``coarse``.

    Both interfaces must declare the same action universe.
    """
    if fine.universe != coarse.universe:
        raise InterfaceError("refinement requires interfaces over the same universe")
    return all(
        any(fp <= cp for cp in coarse.parts)
        for fp in fine.parts
    )


# ---------------------------------------------------------------------------
# Classes


@dataclass(frozen=True)
class TraceClass:
    """A finite set of strings equivalent to a representative.

    kind is "mazurkiewicz" (closure under swaps of independent adjacent
    actions) or "filtered" (same projection onto one part, membership
    restricted to a supplied universe), or "singleton" for the classical
    preorder where nothing commutes.
    """

    representative: tuple  # tuple of Action
    members: frozenset  # frozenset of tuples of Action
    kind: str

    def sorted_members(self) -> list:
        return sorted(self.members, key=lambda t: (len(t), [action_key(a) for a in t]))


def singleton_class(s: Iterable[Action]) -> TraceClass:
    s = tuple(s)
    return TraceClass(s, frozenset({s}), "singleton")


def maz_class(s: Iterable[Action], interface: Interface) -> TraceClass:
    """Closure of ``s`` under adjacent swaps of independent actions."""
    s = tuple(s)
    seen = {s}
    frontier = [s]
    while frontier:
        t = frontier.pop()
        for i in range(len(t) - 1):
            if not interface.dependent(t[i], t[i + 1]):
                swapped = t[:i] + (t[i + 1], t[i]) + t[i + 2:]
                if swapped not in seen:
                    if len(seen) >= CLASS_MEMBER_CAP:
                        raise MtpError("commutation class exceeds the member cap")
                    seen.add(swapped)
                    frontier.append(swapped)
    return TraceClass(s, frozenset(seen), "mazurkiewicz")


def project(s: Iterable[Action], part: frozenset) -> tuple:
    """Subsequence of ``s`` keeping exactly the actions in ``part``."""
    return tuple(a for a in s if a in part)


def filtered_class(s: Iterable[Action], part: frozenset, universe: Iterable[tuple]) -> TraceClass:
    """Strings of the universe that agree with ``s`` after projection.

    The mathematical class is infinite; membership is restricted to the
    supplied universe (plus ``s`` itself).
    """
    s = tuple(s)
    key = project(s, part)
    members = {t for t in universe if project(t, part) == key}
    members.add(s)
    return TraceClass(s, frozenset(members), "filtered")


def class_after(term, cls: TraceClass):
    """Union of the weak residuals of a term over all class members."""
    from .semantics import weak_after

    out: set = set()
    for t in cls.members:
        out |= weak_after(term, t)
    return frozenset(out)
