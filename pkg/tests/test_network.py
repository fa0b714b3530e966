from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from eventnet import (
    AmbiguousStatistic,
    EventDescription,
    NoStatistic,
    UnknownType,
    legal_feature_links,
    legal_spec_refinements,
    lookup_feature_cond,
    lookup_prior,
    lookup_spec_cond,
    parse_kb,
    validate_network,
)
from eventnet.network import (
    EventNetwork,
    FeatureDecl,
    InvalidNetwork,
    TypeDecl,
    generalization_preemptor,
    inherited_feature_paths,
    isa_ancestors,
)

from generators import random_kb

D = EventDescription.of


def messages(text: str) -> list[str]:
    from eventnet import KBValidationError

    with pytest.raises(KBValidationError) as info:
        parse_kb(text)
    return [d.message for d in info.value.diagnostics]


# -- descriptions ---------------------------------------------------------


def test_description_bindings_are_sorted_and_queryable():
    d = D("flu", time="1", agent="Bob")
    assert d.bindings == (("agent", "Bob"), ("time", "1"))
    assert d.get("agent") == "Bob" and d.get("infectee") is None
    assert d.as_dict() == {"agent": "Bob", "time": "1"}


def test_subsumes_and_compatibility():
    general, specific = D("flu", agent="Bob"), D("flu", agent="Bob", time="1")
    assert general.subsumes(specific)
    assert not specific.subsumes(general)
    assert specific.compatible_bindings(general.bindings)
    assert not D("flu", agent="Ann").compatible_bindings(general.bindings)


# -- validation -----------------------------------------------------------


def test_flu_fixture_is_valid(kb):
    assert validate_network(kb("flu")).ok


def test_isa_cycle_is_reported():
    assert "isa cycle: a,b" in messages("type a isa b\ntype b isa a\n")


def test_feature_cond_target_mismatch():
    text = (
        "type flu\ntype sneezing\nfeature infect : flu -> flu\n"
        "prior flu = 0.1\ncond flu -infect-> sneezing = 0.3\n"
    )
    assert any("FeatureCond target mismatch" in m for m in messages(text))


def test_culprit_needs_a_prior():
    assert any("culprit" in m and "prior" in m for m in messages("type a\nculprit a\n"))


def test_unknown_references_are_reported():
    ms = messages("type a isa b\nfeature f : a -> c\n")
    assert any("b" in m for m in ms) and any("c" in m for m in ms)


def test_redeclared_feature_must_narrow_its_target():
    text = "type a\ntype b isa a\ntype x\ntype y\nfeature f : a -> x\nfeature f : b -> y\n"
    assert any("feature override target mismatch" in m for m in messages(text))


def test_checked_constructor_raises_on_violation():
    with pytest.raises(InvalidNetwork):
        EventNetwork.checked(types=(TypeDecl("a", ("b",)),))


def test_construction_is_order_insensitive():
    a = EventNetwork(types=(TypeDecl("x"), TypeDecl("y")))
    b = EventNetwork(types=(TypeDecl("y"), TypeDecl("x")))
    assert a == b


# -- hierarchy ------------------------------------------------------------


def test_isa_ancestors(kb):
    assert isa_ancestors(kb("flu"), "flu") == ("disease",)
    assert isa_ancestors(kb("flu"), "disease") == ()


def test_isa_ancestors_diamond_is_topological_with_name_ties():
    net = parse_kb("type d\ntype c isa d\ntype b isa d\ntype a isa b, c\n")
    assert isa_ancestors(net, "a") == ("b", "c", "d")


def test_unknown_type_raises(kb):
    with pytest.raises(UnknownType):
        isa_ancestors(kb("flu"), "nosuch")
    with pytest.raises(UnknownType):
        legal_feature_links(kb("flu"), "nosuch")


# -- pre-emption ----------------------------------------------------------


def test_shopping_goto_is_preempted(kb):
    links = {(l.via, l.feature, l.target) for l in legal_feature_links(kb("shopping"), "work-in-supermarket")}
    assert ("work-in-supermarket", "goto", "goto-supermarket") in links
    assert ("work", "goto", "goto-workplace") not in links


def test_flu_links(kb):
    net = kb("flu")
    assert [l.feature for l in legal_feature_links(net, "flu")] == ["headache-effect", "infect", "sneeze-effect"]
    assert legal_feature_links(net, "disease") == ()


def test_spec_refinement_variants(kb):
    primed, literal = kb("preempt"), kb("preempt", "literal")
    assert legal_spec_refinements(primed, "A", "f", "B2") is False
    assert legal_spec_refinements(primed, "A1", "f", "B2") is True
    assert legal_spec_refinements(literal, "A", "f", "B2") is True


def test_flu_has_no_spec_refinements(kb):
    net = kb("flu")
    for link in legal_feature_links(net, "flu"):
        assert net.strict_descendants(link.target) == ()


def test_inherited_paths_report_preemptor(kb):
    paths = inherited_feature_paths(kb("shopping"), "work-in-supermarket")
    verdicts = {(l.via, l.feature): (by.source if by else None) for l, by in paths}
    assert verdicts[("work", "goto")] == "work-in-supermarket"
    assert verdicts[("work-in-supermarket", "goto")] is None


# -- statistics -----------------------------------------------------------


def test_prior_lookup(kb):
    net = kb("flu")
    assert lookup_prior(net, D("flu", agent="Bob", time="1")) == 0.001
    with pytest.raises(NoStatistic):
        lookup_prior(net, D("sneezing"))


def test_most_specific_prior_wins():
    net = parse_kb("type flu\nprior flu = 0.001\nprior flu { severity = high } = 0.0001\n")
    assert lookup_prior(net, D("flu", severity="high")) == 0.0001
    assert lookup_prior(net, D("flu", severity="low")) == 0.001


def test_equally_specific_priors_are_ambiguous():
    net = parse_kb("type e\nprior e { a = x } = 0.1\nprior e { b = y } = 0.2\n")
    with pytest.raises(AmbiguousStatistic):
        lookup_prior(net, D("e", a="x", b="y"))


def test_feature_cond_lookup(kb):
    flu, alarm = kb("flu"), kb("alarm")
    assert lookup_feature_cond(flu, D("flu", agent="Bob"), "sneeze-effect", D("sneezing", agent="Bob")) == 0.6
    assert lookup_feature_cond(flu, D("flu"), "infect", D("flu")) == 0.3
    assert lookup_feature_cond(alarm, D("alarm"), "call", D("neighbour-call", caller="Jack")) == 0.016
    assert lookup_feature_cond(alarm, D("alarm"), "call", D("neighbour-call")) == 0.8


def test_feature_cond_falls_back_to_declaring_type():
    net = parse_kb("type a\ntype b isa a\ntype t\nfeature f : a -> t\ncond a -f-> t = 0.4\n")
    assert lookup_feature_cond(net, D("b"), "f", D("t")) == 0.4


def test_spec_cond_lookup(kb):
    net = kb("shopping")
    assert lookup_spec_cond(net, "do-one-thing", "shop-in-supermarket") == 0.1
    assert lookup_spec_cond(net, "do-one-thing", "work-in-uniform") == 0.05
    with pytest.raises(NoStatistic):
        lookup_spec_cond(net, "goto-workplace", "goto-supermarket")


def test_spec_cond_chains_multiply():
    net = parse_kb("type a\ntype b isa a\ntype c isa b\nspeccond a => b = 0.5\nspeccond b => c = 0.2\n")
    assert lookup_spec_cond(net, "a", "c") == pytest.approx(0.1, rel=1e-12)


# -- properties -----------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_legal_links_survive_a_recheck(seed):
    net, _ = random_kb(random.Random(seed))
    for t in net.types:
        links = legal_feature_links(net, t.name)
        for link in links:
            decl = FeatureDecl(link.feature, link.via, link.target)
            assert generalization_preemptor(net, t.name, link.via, decl) is None
        for x in links:
            for y in links:
                if x != y and x.feature == y.feature:
                    assert not net.is_strict_a(x.via, y.via)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_isa_is_reflexive_and_transitive(seed):
    net, _ = random_kb(random.Random(seed))
    names = [t.name for t in net.types]
    for a in names:
        assert net.is_a(a, a) and not net.is_strict_a(a, a)
        for b in isa_ancestors(net, a):
            assert net.is_strict_a(a, b)
            for c in isa_ancestors(net, b):
                assert net.is_strict_a(a, c)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["a", "b"]), st.sampled_from(["x", "y"]))
def test_extra_bindings_never_select_a_less_specific_prior(seed, attr, value):
    net, _ = random_kb(random.Random(seed))
    for culprit in net.culprits:
        base = EventDescription(culprit)
        try:
            lookup_prior(net, base)
        except (NoStatistic, AmbiguousStatistic):
            continue
        specific = EventDescription(culprit, ((attr, value),))
        chosen = [s for s in net.statistics if getattr(s, "desc", None) is not None and s.desc.type == culprit]
        matched = max(len(s.desc.bindings) for s in chosen if s.desc.subsumes(specific))
        assert matched >= max(len(s.desc.bindings) for s in chosen if s.desc.subsumes(base))
