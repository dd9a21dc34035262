"""Syntax tree basics: construction, names, substitution, unparsing."""

import pytest

from mtp.terms import (
    NIL,
    ONE,
    TAU,
    TICK,
    Action,
    Choice,
    Configuration,
    One,
    Prefix,
    Rec,
    Var,
    action_key,
    choice_of,
    config,
    is_finite,
    names,
    substitute,
    unparse,
)


def test_action_complement_involutive():
    a = Action("a")
    assert a.complement() == Action("a", True)
    assert a.complement().complement() == a


def test_action_rendering():
    assert str(Action("req")) == "req"
    assert str(Action("req", True)) == "~req"
    assert str(TAU) == "tau"
    assert str(TICK) == "tick"


def test_unparse_basics():
    assert unparse(NIL) == "0"
    assert unparse(Prefix(Action("a", True), ONE)) == "~a.1"
    assert unparse(Prefix(Action("a"), NIL)) == "a"
    assert unparse(Prefix(TAU, NIL)) == "tau.0"
    assert (
        unparse(Choice(Prefix(TAU, Prefix(Action("err", True), NIL)), ONE))
        == "tau.~err + 1"
    )


def test_unparse_parenthesizes_choice_under_prefix():
    p = Prefix(Action("a"), Choice(Prefix(Action("b"), NIL), ONE))
    assert unparse(p) == "a.(b + 1)"


def test_configuration_flat_and_nonempty():
    c = config(ONE, NIL)
    assert isinstance(c, Configuration)
    assert len(c.components) == 2
    with pytest.raises(ValueError):
        Configuration(())


def test_names_collects_both_polarities():
    p = Choice(Prefix(Action("a"), NIL), Prefix(Action("b", True), Prefix(TAU, ONE)))
    assert names(p) == {"a", "b"}


def test_names_of_configuration():
    c = config(Prefix(Action("a"), NIL), Prefix(Action("b", True), NIL))
    assert names(c) == {"a", "b"}


def test_is_finite():
    assert is_finite(Prefix(Action("a"), NIL))
    assert not is_finite(Rec("X", Prefix(Action("a"), Var("X"))))


def test_substitute_unfolds_recursion():
    rec = Rec("X", Prefix(Action("a"), Var("X")))
    unfolded = substitute(rec.body, "X", rec)
    assert unfolded == Prefix(Action("a"), rec)


def test_substitute_respects_shadowing():
    inner = Rec("X", Var("X"))
    body = Choice(Var("X"), inner)
    result = substitute(body, "X", ONE)
    assert result == Choice(ONE, inner)


def test_choice_of_right_nested():
    a, b, c = (Prefix(Action(n), NIL) for n in "abc")
    assert choice_of([]) == NIL
    assert choice_of([a]) == a
    assert choice_of([a, b, c]) == Choice(a, Choice(b, c))


def test_action_key_orders_input_before_output():
    actions = [Action("b"), Action("a", True), Action("a")]
    assert sorted(actions, key=action_key) == [Action("a"), Action("a", True), Action("b")]


def test_terms_are_hashable_values():
    p = Choice(Prefix(Action("a"), NIL), One())
    q = Choice(Prefix(Action("a"), NIL), One())
    assert p == q
    assert hash(p) == hash(q)
    assert len({p, q}) == 1
