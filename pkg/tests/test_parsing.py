"""Concrete syntax: grammar coverage, definition files, round-trips."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_process
from mtp.parsing import (
    ParseError,
    parse_configuration,
    parse_definitions,
    parse_interface,
    parse_process,
    parse_term,
)
from mtp.terms import (
    NIL,
    ONE,
    TAU,
    Action,
    Choice,
    Configuration,
    Prefix,
    Rec,
    Var,
    unparse,
)


def test_literals():
    assert parse_process("0") == NIL
    assert parse_process("1") == ONE


def test_prefix_and_bare_action():
    assert parse_process("a.0") == Prefix(Action("a"), NIL)
    assert parse_process("a") == Prefix(Action("a"), NIL)
    assert parse_process("~a.1") == Prefix(Action("a", True), ONE)


def test_tau_requires_continuation():
    assert parse_process("tau.0") == Prefix(TAU, NIL)
    with pytest.raises(ParseError):
        parse_process("tau")


def test_choice_is_left_associative_in_text_right_nested_in_tree():
    p = parse_process("a + b + c")
    assert p == Choice(
        Choice(Prefix(Action("a"), NIL), Prefix(Action("b"), NIL)),
        Prefix(Action("c"), NIL),
    )


def test_parentheses():
    p = parse_process("a.(b + c)")
    assert p == Prefix(
        Action("a"),
        Choice(Prefix(Action("b"), NIL), Prefix(Action("c"), NIL)),
    )


def test_configuration_split():
    c = parse_configuration("a | ~a.1 | 1")
    assert isinstance(c, Configuration)
    assert len(c.components) == 3


def test_process_rejects_parallel():
    with pytest.raises(ParseError):
        parse_process("a | b")


def test_rec_binds_variable():
    p = parse_process("rec X. a.X")
    assert p == Rec("X", Prefix(Action("a"), Var("X")))


def test_bound_variable_cannot_be_prefixed():
    with pytest.raises(ParseError):
        parse_process("rec X. X.a")


def test_unbound_identifier_is_a_channel():
    assert parse_process("X") == Prefix(Action("X"), NIL)


def test_reserved_words_rejected_as_channels():
    for text in ("def.0", "~tau.0", "interface"):
        with pytest.raises(ParseError):
            parse_process(text)


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as exc:
        parse_process("a..b")
    assert exc.value.line == 1
    assert exc.value.column == 3


def test_parse_term_unwraps_singleton_configuration():
    assert parse_term("a.0") == Prefix(Action("a"), NIL)
    assert isinstance(parse_term("a | b"), Configuration)


def test_interface_complement_closure():
    iface = parse_interface("{ {a}, {~b, c} }")
    assert iface.parts[0] == frozenset({Action("a"), Action("a", True)})
    assert iface.parts[1] == frozenset(
        {Action("b"), Action("b", True), Action("c"), Action("c", True)}
    )


def test_interface_rejects_overlap():
    with pytest.raises(Exception):
        parse_interface("{ {a}, {~a} }")


def test_definition_file():
    defs = parse_definitions(
        """
        # a comment
        def A = a.b
        def B = A + c   # reference to an earlier definition
        interface I = { {a, b}, {c} }
        """
    )
    assert defs.term("A") == parse_process("a.b")
    assert defs.term("B") == Choice(parse_process("a.b"), Prefix(Action("c"), NIL))
    assert defs.interface("I").names == {"a", "b", "c"}


def test_definition_duplicate_rejected():
    with pytest.raises(ParseError):
        parse_definitions("def A = 0\ndef A = 1")


def test_definition_forward_reference_is_a_channel():
    defs = parse_definitions("def A = B\ndef B = 0")
    assert defs.term("A") == Prefix(Action("B"), NIL)


def test_parse_term_resolves_bare_definition_name():
    defs = parse_definitions("def C = a | b")
    term = parse_term("C", defs.defs)
    assert isinstance(term, Configuration)


def test_configuration_name_rejected_inside_process():
    defs = parse_definitions("def C = a | b")
    with pytest.raises(ParseError):
        parse_term("x.0 + C", defs.defs)


# ---------------------------------------------------------------------------
# Round-trip properties


@given(st.integers(min_value=0, max_value=2**32))
@settings(max_examples=200, deadline=None)
def test_roundtrip_random_processes(seed):
    rng = random.Random(seed)
    p = random_process(rng, ["a", "b", "c", "d"], rng.randint(0, 10))
    assert parse_process(unparse(p)) == p


@given(st.integers(min_value=0, max_value=2**32))
@settings(max_examples=100, deadline=None)
def test_roundtrip_random_configurations(seed):
    rng = random.Random(seed)
    comps = tuple(
        random_process(rng, ["a", "b"], rng.randint(0, 5))
        for _ in range(rng.randint(1, 3))
    )
    c = Configuration(comps)
    parsed = parse_configuration(unparse(c))
    if len(comps) == 1:
        assert parsed.components[0] == comps[0]
    else:
        assert parsed == c


def test_parser_deterministic():
    text = "a.(b + tau.1) + ~c.0"
    assert parse_process(text) == parse_process(text)
