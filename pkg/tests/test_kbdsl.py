from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from eventnet import (
    KBError,
    KBSyntaxError,
    KBValidationError,
    parse_kb,
    parse_observations,
    serialize_kb,
    serialize_observations,
)
from eventnet.network import EQ_CONST, NEQ_ATTR

from conftest import CORPUS, KB_FILES
from generators import random_kb
from invalid_kbs import MUTATIONS, SYNTAX


def flu_text() -> str:
    return (CORPUS / "flu.ekb").read_text()


def test_flu_fixture_counts(kb):
    net = kb("flu")
    assert len(net.types) == 4
    assert len(net.features) == 3
    assert len(net.local_constraints) == 1
    # The fixture lists five percolation lines.
    assert len(net.percolation_constraints) == 5
    assert len(net.statistics) == 4
    assert net.culprits == ("flu",)


def test_empty_input_is_an_empty_network():
    net = parse_kb("")
    assert net.types == () and serialize_kb(net) == ""


def test_comments_and_blank_lines_are_ignored():
    assert parse_kb("# header\n\ntype a  # trailing\n") == parse_kb("type a\n")


def test_truncated_feature_reports_position():
    with pytest.raises(KBSyntaxError) as info:
        parse_kb("type flu\nfeature f : flu -> ")
    (d,) = info.value.diagnostics
    assert (d.span.line, d.span.column) == (2, 19)
    assert "target type" in d.message


def test_syntax_errors_are_collected_per_line():
    with pytest.raises(KBSyntaxError) as info:
        parse_kb("type\nfeature x\ntype ok\n")
    assert [d.span.line for d in info.value.diagnostics] == [1, 2]


def test_observation_with_bindings():
    (o,) = parse_observations("obs sneezing { agent = Bob, time = 1 }")
    assert o.id == "obs1"
    assert o.desc.type == "sneezing"
    assert o.desc.as_dict() == {"agent": "Bob", "time": "1"}


def test_arnold_bob_observations(obs):
    got = [(o.id, o.desc.type, o.desc.as_dict()) for o in obs("arnold-bob")]
    assert got == [
        ("obs1", "sneezing", {"agent": "Bob", "time": "1"}),
        ("obs2", "headache", {"agent": "Bob", "time": "1"}),
        ("obs3", "sneezing", {"agent": "Arnold", "time": "2"}),
        ("obs4", "headache", {"agent": "Arnold", "time": "2"}),
    ]


def test_observation_without_type_is_a_syntax_error():
    with pytest.raises(KBSyntaxError) as info:
        parse_observations("obs { agent = Bob }")
    assert info.value.diagnostics[0].span.column == 5


def test_labelled_observations_keep_their_label():
    a, b = parse_observations("obs first sneezing\nobs headache\n")
    assert (a.id, b.id) == ("first", "obs2")


def test_duplicate_observation_labels_are_rejected():
    with pytest.raises(KBSyntaxError):
        parse_observations("obs x a\nobs x b\n")


def test_constants_are_opaque():
    (a, b, c) = parse_observations('obs e { v = 1 }\nobs e { v = "1" }\nobs e { v = 01 }\n')
    assert a.desc == b.desc
    assert a.desc != c.desc


def test_constraint_names_resolve_against_attribute_uses(kb):
    (flu,) = kb("flu").local_constraints
    assert flu.relation == NEQ_ATTR
    engine = kb("engine")
    assert {(c.owner, c.relation, c.other) for c in engine.local_constraints} == {
        ("bs", EQ_CONST, "cont"),
        ("im", EQ_CONST, "int"),
    }


def test_constant_colliding_with_an_attribute_round_trips():
    net = parse_kb('type e\nconstraint e : a = "b"\nconstraint e : b != c\n')
    (eq,) = [c for c in net.local_constraints if c.attr == "a"]
    assert eq.relation == EQ_CONST
    assert parse_kb(serialize_kb(net)) == net


@pytest.mark.parametrize("name", KB_FILES)
def test_corpus_round_trip(name):
    net = parse_kb((CORPUS / name).read_text())
    text = serialize_kb(net)
    again = parse_kb(text)
    assert again == net
    assert serialize_kb(again) == text


def test_declaration_order_does_not_change_canonical_text():
    lines = [l for l in (CORPUS / "alarm.ekb").read_text().splitlines() if l and not l.startswith("#")]
    types = [l for l in lines if l.startswith("type")]
    rest = [l for l in lines if not l.startswith("type")]
    shuffled = list(reversed(types)) + rest
    assert serialize_kb(parse_kb("\n".join(shuffled))) == serialize_kb(parse_kb("\n".join(lines)))


def test_observation_round_trip(obs):
    original = obs("holmes-2")
    assert parse_observations(serialize_observations(original)) == original


@pytest.mark.parametrize("name,edit,code", MUTATIONS, ids=[m[0] for m in MUTATIONS])
def test_mutated_fixture_is_rejected_with_a_span(name, edit, code):
    text = edit(flu_text())
    with pytest.raises(KBError) as info:
        parse_kb(text)
    expected = KBSyntaxError if code == SYNTAX else KBValidationError
    assert isinstance(info.value, expected)
    lines = text.splitlines()
    for d in info.value.diagnostics:
        assert 1 <= d.span.line <= len(lines)
        assert 1 <= d.span.column <= len(lines[d.span.line - 1]) + 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_random_networks_round_trip(seed):
    net, _ = random_kb(random.Random(seed))
    assert parse_kb(serialize_kb(net)) == net


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="type fisa:->{}=,.0123456789\"#\n", max_size=60))
def test_arbitrary_text_either_parses_or_reports_spans(text):
    try:
        parse_kb(text)
    except KBError as exc:
        assert exc.diagnostics
        lines = text.splitlines() or [""]
        for d in exc.diagnostics:
            assert 1 <= d.span.line <= max(1, len(lines))
            assert d.span.column >= 1
