"""Interfaces, commutation classes, filtered classes, residuals."""

import pytest

from mtp.parsing import parse_interface, parse_process
from mtp.semantics import visible_traces
from mtp.terms import Action, MtpError
from mtp.traceclasses import (
    InterfaceError,
    class_after,
    filtered_class,
    interface_of_names,
    is_refinement,
    maz_class,
    project,
    singleton_class,
    validate_interface,
)

A, B, C, D = (Action(n) for n in "abcd")
REQ, COF, COH = Action("req"), Action("reqF", True), Action("reqH", True)


def t(*actions):
    return tuple(actions)


# ---------------------------------------------------------------------------
# Interfaces


def test_validate_closes_under_complement():
    iface = validate_interface([[A], [B.complement()]])
    assert iface.parts[0] == {A, A.complement()}
    assert iface.parts[1] == {B, B.complement()}


def test_validate_rejects_overlap_and_empty():
    with pytest.raises(InterfaceError):
        validate_interface([[A], [A.complement()]])
    with pytest.raises(InterfaceError):
        validate_interface([[A], []])
    with pytest.raises(InterfaceError):
        validate_interface([])


def test_part_index_and_undeclared_rest():
    iface = interface_of_names(["a"], ["b"])
    assert iface.part_index(A) == 0
    assert iface.part_index(B.complement()) == 1
    assert iface.part_index(C) is None


def test_dependent_same_part_and_shared_rest():
    iface = interface_of_names(["a"], ["b"])
    assert iface.dependent(A, A.complement())
    assert not iface.dependent(A, B)
    # undeclared actions all share the implicit extra part
    assert iface.dependent(C, D)
    assert not iface.dependent(A, C)


def test_is_refinement():
    coarse = interface_of_names(["a", "b"], ["c", "d"])
    fine = interface_of_names(["a"], ["b"], ["c", "d"])
    assert is_refinement(fine, coarse)
    assert not is_refinement(coarse, fine)
    assert is_refinement(coarse, interface_of_names(["a", "b", "c", "d"]))
    with pytest.raises(InterfaceError):
        is_refinement(fine, interface_of_names(["a", "b"]))


# ---------------------------------------------------------------------------
# Classes


def test_singleton_class():
    cls = singleton_class(t(A, B))
    assert cls.members == {t(A, B)}
    assert cls.kind == "singleton"


def test_maz_class_independent_letters_swap():
    iface = interface_of_names(["a"], ["b"])
    assert maz_class(t(A, B), iface).members == {t(A, B), t(B, A)}


def test_maz_class_dependent_letters_fixed():
    iface = interface_of_names(["a", "b"])
    assert maz_class(t(A, B), iface).members == {t(A, B)}


def test_maz_class_trip_broker():
    iface = parse_interface("{ {req}, {reqF}, {reqH} }")
    assert maz_class(t(REQ, COF), iface).members == {t(REQ, COF), t(COF, REQ)}


def test_maz_class_three_independent_letters():
    iface = interface_of_names(["a"], ["b"], ["c"])
    assert len(maz_class(t(A, B, C), iface).members) == 6


def test_maz_class_respects_blocking_letter():
    # a and c commute, but both depend on b sitting between them
    iface = interface_of_names(["a", "b"], ["c"])
    assert maz_class(t(A, B, C), iface).members == {
        t(A, B, C),
        t(A, C, B),
        t(C, A, B),
    }


def test_project():
    iface = interface_of_names(["a"], ["b"])
    part = iface.parts[0]
    assert project(t(A, B, A.complement()), part) == t(A, A.complement())
    assert project(t(B), part) == t()


def test_filtered_class_restricted_to_universe():
    iface = interface_of_names(["a"], ["b"])
    universe = {t(), t(A), t(B), t(A, B), t(B, A)}
    cls = filtered_class(t(A, B), iface.parts[0], universe)
    assert cls.members == {t(A, B), t(B, A), t(A)}  # same a-projection
    assert cls.representative == t(A, B)


def test_filtered_class_always_contains_representative():
    iface = interface_of_names(["a"], ["b"])
    cls = filtered_class(t(A), iface.parts[0], set())
    assert cls.members == {t(A)}


def test_class_member_ordering_is_shortlex():
    iface = interface_of_names(["a"], ["b"])
    cls = filtered_class(t(), iface.parts[0], {t(B), t(), t(B, B)})
    assert cls.sorted_members() == [t(), t(B), t(B, B)]


# ---------------------------------------------------------------------------
# Residuals over classes


def test_class_after_union_over_members():
    p = parse_process("a.b + b.a")
    iface = interface_of_names(["a"], ["b"])
    cls = maz_class(t(A, B), iface)
    assert class_after(p, cls) == {parse_process("0")}
    assert class_after(parse_process("a.b"), cls) == {parse_process("0")}


def test_class_after_example_independent_choices():
    p1 = parse_process("a.c + b.d")
    p2 = parse_process("a.d + b.c")
    iface = interface_of_names(["a", "b"], ["c", "d"])
    universe = visible_traces(p1) | visible_traces(p2)
    cls = filtered_class(t(), iface.parts[1], universe)
    assert cls.members == {t(), t(A), t(B)}
    assert class_after(p1, cls) == {
        p1,
        parse_process("c.0"),
        parse_process("d.0"),
    }


def test_class_cap_guard():
    from mtp import traceclasses

    iface = interface_of_names(*[[n] for n in "abcdefgh"])
    trace = tuple(Action(n) for n in "abcdefgh") * 2
    old = traceclasses.CLASS_MEMBER_CAP
    traceclasses.CLASS_MEMBER_CAP = 100
    try:
        with pytest.raises(MtpError):
            maz_class(trace, iface)
    finally:
        traceclasses.CLASS_MEMBER_CAP = old
