"""Scenario trees, attribute percolation, entailment and scenario probability."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .network import (
    EQ_ATTR,
    EQ_CONST,
    NEQ_ATTR,
    NEQ_CONST,
    SPEC,
    AmbiguousStatistic,
    EventDescription,
    EventNetwork,
    LocalConstraint,
    NoStatistic,
    PercolationConstraint,
    inherited_feature_paths,
    legal_feature_links,
    lookup_feature_cond,
    lookup_prior,
    lookup_spec_cond,
    make_bindings,
    spec_refinement_allowed,
)


class ScenarioError(Exception):
    pass


class PreemptedPath(ScenarioError):
    pass


class DuplicateFeature(ScenarioError):
    pass


class TypeMismatch(ScenarioError):
    pass


class NotALeaf(ScenarioError):
    pass


class NotADescendant(ScenarioError):
    pass


class CulpritError(ScenarioError):
    pass


class Inconsistency(ScenarioError):
    """A scenario violates an attribute constraint at ``node_id``."""

    def __init__(self, node_id: str, constraint: LocalConstraint | None, message: str):
        super().__init__(f"{node_id}: {message}")
        self.node_id = node_id
        self.constraint = constraint
        self.message = message


@dataclass(frozen=True)
class ScenarioNode:
    desc: EventDescription
    features: tuple[tuple[str, "ScenarioNode"], ...] = ()
    spec: "ScenarioNode | None" = None

    def __post_init__(self):
        if self.features and self.spec is not None:
            raise ValueError("a scenario node has either feature children or one spec child")
        labels = [label for label, _ in self.features]
        if len(set(labels)) != len(labels):
            raise ValueError("feature children must carry distinct labels")

    @property
    def type(self) -> str:
        return self.desc.type

    @property
    def is_leaf(self) -> bool:
        return not self.features and self.spec is None

    def children(self) -> list[tuple[str, "ScenarioNode"]]:
        if self.spec is not None:
            return [(SPEC, self.spec)]
        return list(self.features)

    def size(self) -> int:
        return 1 + sum(child.size() for _, child in self.children())


class FlatNode(NamedTuple):
    index: int
    node: ScenarioNode
    parent: int | None
    edge: str | None  # feature label, SPEC, or None at a root

    @property
    def id(self) -> str:
        return node_id(self.index)


def node_id(index: int) -> str:
    return f"n{index + 1}"


def parse_node_id(nid: str) -> int:
    if not nid.startswith("n") or not nid[1:].isdigit() or int(nid[1:]) < 1:
        raise KeyError(nid)
    return int(nid[1:]) - 1


def make_node(
    net: EventNetwork,
    desc: EventDescription,
    features: Iterable[tuple[str, ScenarioNode]] = (),
    spec: ScenarioNode | None = None,
) -> ScenarioNode:
    """Build a node with feature children in canonical order."""
    ordered = tuple(sorted(features, key=lambda item: (net.label_rank(item[0]), item[0])))
    return ScenarioNode(desc, ordered, spec)


@dataclass(frozen=True)
class Scenario:
    """A rooted scenario tree; node ids ``n1, n2, ...`` follow pre-order."""

    root: ScenarioNode

    def flat(self) -> list[FlatNode]:
        cached = self.__dict__.get("_flat")
        if cached is None:
            cached = flatten([self.root])
            object.__setattr__(self, "_flat", cached)
        return cached

    def node(self, nid: str) -> ScenarioNode:
        try:
            return self.flat()[parse_node_id(nid)].node
        except (KeyError, IndexError):
            raise KeyError(f"no node {nid}") from None

    @property
    def size(self) -> int:
        return len(self.flat())

    def key(self) -> str:
        return tree_key(self.root)


def flatten(roots: Sequence[ScenarioNode]) -> list[FlatNode]:
    out: list[FlatNode] = []

    def visit(node: ScenarioNode, parent: int | None, edge: str | None) -> None:
        index = len(out)
        out.append(FlatNode(index, node, parent, edge))
        for label, child in node.children():
            visit(child, index, label)

    for root in roots:
        visit(root, None, None)
    return out


def _jsonable(node: ScenarioNode):
    return [node.type, [list(b) for b in node.desc.bindings], [[label, _jsonable(c)] for label, c in node.children()]]


def tree_key(root: ScenarioNode) -> str:
    """Canonical serialization used for equality and tie-breaking."""
    return json.dumps(_jsonable(root), separators=(",", ":"))


def _rebuild(net: EventNetwork, flat: list[FlatNode], replace: dict[int, ScenarioNode]) -> ScenarioNode:
    """Reassemble a tree bottom-up, substituting ``replace`` for some nodes."""
    built: dict[int, ScenarioNode] = {}
    for fn in reversed(flat):
        if fn.index in replace:
            built[fn.index] = replace[fn.index]
            continue
        kids = [(f.edge, built[f.index]) for f in flat if f.parent == fn.index]
        spec = next((c for label, c in kids if label == SPEC), None)
        feats = [(label, c) for label, c in kids if label != SPEC]
        built[fn.index] = make_node(net, fn.node.desc, feats, spec)
    return built[0]


# ---------------------------------------------------------------------------
# Constructors


def new_scenario(net: EventNetwork, root_desc: EventDescription) -> Scenario:
    net.type_decl(root_desc.type)
    if net.culprits and not net.is_culprit(root_desc.type):
        raise CulpritError(f"{root_desc.type} is not a culprit type")
    return Scenario(make_node(net, root_desc))


def _leaf_target(s: Scenario, leaf: str) -> FlatNode:
    try:
        return s.flat()[parse_node_id(leaf)]
    except (KeyError, IndexError):
        raise KeyError(f"no node {leaf}") from None


def _check_feature(net: EventNetwork, parent_type: str, feature: str, child_type: str) -> None:
    legal = [l for l in legal_feature_links(net, parent_type) if l.feature == feature]
    if any(l.target == child_type for l in legal):
        return
    for link, preemptor in inherited_feature_paths(net, parent_type):
        if link.feature == feature and link.target == child_type and preemptor is not None:
            raise PreemptedPath(
                f"{parent_type} -{feature}-> {child_type} via {link.via} is pre-empted by"
                f" {preemptor.source} -{feature}-> {preemptor.target}"
            )
    if not legal:
        raise TypeMismatch(f"type {parent_type} has no feature {feature}")
    raise TypeMismatch(
        f"{parent_type} -{feature}-> leads to {', '.join(l.target for l in legal)}, not {child_type}"
    )


def extend_with_local_tree(
    net: EventNetwork, s: Scenario, leaf: str, children: Sequence[tuple[str, EventDescription]]
) -> Scenario:
    """Attach feature children to ``leaf``.

    The node may already have feature children (the local tree grows); it
    must not have a spec child.
    """
    fn = _leaf_target(s, leaf)
    node = fn.node
    if node.spec is not None:
        raise NotALeaf(f"{leaf} already has a specialization child")
    used = {label for label, _ in node.features}
    new: list[tuple[str, ScenarioNode]] = []
    for feature, child_desc in children:
        if feature in used:
            raise DuplicateFeature(f"{leaf} already has a {feature} child")
        used.add(feature)
        net.type_decl(child_desc.type)
        _check_feature(net, node.type, feature, child_desc.type)
        new.append((feature, make_node(net, child_desc)))
    replacement = make_node(net, node.desc, list(node.features) + new)
    return Scenario(_rebuild(net, s.flat(), {fn.index: replacement}))


def extend_with_feature(
    net: EventNetwork, s: Scenario, leaf: str, feature: str, child_desc: EventDescription
) -> Scenario:
    return extend_with_local_tree(net, s, leaf, [(feature, child_desc)])


def incoming_feature(flat: Sequence[FlatNode], index: int) -> tuple[str, str, str] | None:
    """(source type, feature, feature target) of the nearest feature edge above a spec chain."""
    while True:
        fn = flat[index]
        if fn.parent is None:
            return None
        if fn.edge != SPEC:
            return flat[fn.parent].node.type, fn.edge, fn.node.type
        index = fn.parent


def extend_with_spec(net: EventNetwork, s: Scenario, leaf: str, subtype: str) -> Scenario:
    fn = _leaf_target(s, leaf)
    node = fn.node
    if not node.is_leaf:
        raise NotALeaf(f"{leaf} is not a leaf")
    net.type_decl(subtype)
    if not net.is_strict_a(subtype, node.type):
        raise NotADescendant(f"{subtype} is not a strict specialisation of {node.type}")
    context = incoming_feature(s.flat(), fn.index)
    if context is not None:
        source, feature, target = context
        if not spec_refinement_allowed(net, source, feature, target, subtype):
            raise PreemptedPath(f"{source} -{feature}-> {target} refined to {subtype} is pre-empted")
    child = make_node(net, EventDescription(subtype, node.desc.bindings))
    replacement = make_node(net, node.desc, spec=child)
    return Scenario(_rebuild(net, s.flat(), {fn.index: replacement}))


def is_well_formed(net: EventNetwork, roots: Sequence[ScenarioNode]) -> bool:
    """Structural check of every edge against the network (legal links and refinements)."""
    flat = flatten(roots)
    for fn in flat:
        if fn.parent is None:
            if net.culprits and not net.is_culprit(fn.node.type):
                return False
            continue
        parent = flat[fn.parent].node
        if fn.edge == SPEC:
            if not net.is_strict_a(fn.node.type, parent.type):
                return False
            context = incoming_feature(flat, fn.parent)
            if context and not spec_refinement_allowed(net, *context, fn.node.type):
                return False
        elif not any(l.feature == fn.edge and l.target == fn.node.type for l in legal_feature_links(net, parent.type)):
            return False
    return True


# ---------------------------------------------------------------------------
# Percolation


_UNION, _ASSERT = 0, 1


class _Slots:
    """Union-find over (node, attribute) slots, each class carrying asserted values."""

    def __init__(self):
        self.parent: dict = {}
        self.values: dict = {}

    def find(self, slot):
        parent = self.parent
        if slot not in parent:
            parent[slot] = slot
            self.values[slot] = []
            return slot
        root = slot
        while parent[root] != root:
            root = parent[root]
        while parent[slot] != root:
            parent[slot], slot = root, parent[slot]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if len(self.values[ra]) < len(self.values[rb]):
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.values[ra].extend(self.values.pop(rb))

    def assert_value(self, slot, value, source) -> None:
        self.values[self.find(slot)].append((value, source))


def constraints_for(net: EventNetwork, type_name: str) -> tuple[LocalConstraint, ...]:
    cache = net.__dict__.setdefault("_constraints_for", {})
    hit = cache.get(type_name)
    if hit is None:
        hit = tuple(c for c in net.local_constraints if net.is_a(type_name, c.owner))
        cache[type_name] = hit
    return hit


def percolations_for(net: EventNetwork, parent_type: str, feature: str) -> tuple[PercolationConstraint, ...]:
    cache = net.__dict__.setdefault("_percolations_for", {})
    key = (parent_type, feature)
    hit = cache.get(key)
    if hit is None:
        hit = tuple(
            pc for pc in net.percolation_constraints if pc.feature == feature and net.is_a(parent_type, pc.parent_type)
        )
        cache[key] = hit
    return hit


@dataclass
class FlatProblem:
    """A scenario (or partial scenario, or forest) flattened for percolation."""

    types: list[str]
    bases: list[tuple[tuple[str, str], ...]]
    parents: list[int | None]
    edges: list[str | None]
    universe: frozenset[str] = field(default_factory=frozenset)


def percolate_flat(
    net: EventNetwork, problem: FlatProblem, rng: random.Random | None = None
) -> tuple[list[tuple[tuple[str, str], ...]], tuple[int, LocalConstraint | None, str] | None]:
    """Least fixpoint of the slot equalities and value assertions.

    Returns the derived bindings per node and, when the scenario is
    inconsistent, ``(node index, constraint, message)`` for the canonical
    first violation.  ``rng`` shuffles rule application; the result does not
    depend on it.
    """
    types, bases, parents, edges = problem.types, problem.bases, problem.parents, problem.edges
    universe = set(problem.universe) | set(net.attributes)
    for b in bases:
        universe.update(a for a, _ in b)
    universe_sorted = sorted(universe)

    rules: list[tuple] = []
    checks: list[tuple[int, LocalConstraint]] = []
    for i, t in enumerate(types):
        p = parents[i]
        if p is not None:
            if edges[i] == SPEC:
                for a in universe_sorted:
                    rules.append((_UNION, (p, a), (i, a)))
            else:
                for pc in percolations_for(net, types[p], edges[i]):
                    rules.append((_UNION, (i, pc.child_attr), (p, pc.parent_attr)))
        for c in constraints_for(net, t):
            if c.relation == EQ_ATTR:
                rules.append((_UNION, (i, c.attr), (i, c.other)))
            elif c.relation == EQ_CONST:
                rules.append((_ASSERT, (i, c.attr), c.other, (i, c)))
            else:
                checks.append((i, c))
        for a, v in bases[i]:
            rules.append((_ASSERT, (i, a), v, (i, None)))

    if rng is not None:
        rng.shuffle(rules)
    slots = _Slots()
    for rule in rules:
        if rule[0] == _UNION:
            slots.union(rule[1], rule[2])
        else:
            slots.find(rule[1])
            slots.assert_value(rule[1], rule[2], rule[3])

    violation = None
    for root, vals in slots.values.items():
        if len({v for v, _ in vals}) < 2:
            continue
        sources = sorted(
            ((i, c.sort_key() if c else (), c, v) for v, (i, c) in vals),
            key=lambda item: (item[2] is None, item[0], item[1], item[3]),
        )
        i, _, c, v = sources[0]
        others = sorted({w for w, _ in vals if w != v})
        if c is not None:
            msg = f"{c} conflicts with percolated value {others[0]}"
        else:
            msg = f"binding {v} conflicts with {others[0]}"
        cand = (i, c is None, msg, c)
        if violation is None or cand[:3] < violation[:3]:
            violation = cand

    def value(i: int, a: str) -> str | None:
        if (i, a) not in slots.parent:
            return None
        vals = {v for v, _ in slots.values[slots.find((i, a))]}
        return next(iter(vals)) if len(vals) == 1 else None

    if violation is None:
        for i, c in sorted(checks, key=lambda item: (item[0], item[1].sort_key())):
            left = value(i, c.attr)
            if left is None:
                continue
            if c.relation == NEQ_CONST and left == c.other:
                violation = (i, False, f"{c} violated ({c.attr}={left})", c)
                break
            if c.relation == NEQ_ATTR and value(i, c.other) == left:
                violation = (i, False, f"{c} violated ({c.attr}={c.other}={left})", c)
                break

    derived: list[tuple[tuple[str, str], ...]] = []
    by_node: dict[int, list[str]] = {}
    for (i, a) in slots.parent:
        by_node.setdefault(i, []).append(a)
    for i in range(len(types)):
        pairs = []
        for a in by_node.get(i, ()):
            v = value(i, a)
            if v is not None:
                pairs.append((a, v))
        derived.append(tuple(sorted(pairs)))
    if violation is not None:
        return derived, (violation[0], violation[3], violation[2])
    return derived, None


def flat_problem(flat: Sequence[FlatNode]) -> FlatProblem:
    return FlatProblem(
        [fn.node.type for fn in flat],
        [fn.node.desc.bindings for fn in flat],
        [fn.parent for fn in flat],
        [fn.edge for fn in flat],
    )


def _with_bindings(net: EventNetwork, flat: Sequence[FlatNode], derived) -> list[ScenarioNode]:
    built: dict[int, ScenarioNode] = {}
    roots = []
    for fn in reversed(flat):
        kids = [(f.edge, built[f.index]) for f in flat if f.parent == fn.index]
        spec = next((c for label, c in kids if label == SPEC), None)
        feats = [(label, c) for label, c in kids if label != SPEC]
        desc = EventDescription(fn.node.type, derived[fn.index])
        built[fn.index] = ScenarioNode(desc, tuple(sorted(feats, key=lambda kv: (net.label_rank(kv[0]), kv[0]))), spec)
        if fn.parent is None:
            roots.append(built[fn.index])
    return list(reversed(roots))


def percolate_roots(
    net: EventNetwork, roots: Sequence[ScenarioNode], rng: random.Random | None = None
) -> list[ScenarioNode]:
    flat = flatten(roots)
    derived, violation = percolate_flat(net, flat_problem(flat), rng)
    if violation is not None:
        i, c, msg = violation
        raise Inconsistency(node_id(i), c, msg)
    return _with_bindings(net, flat, derived)


def percolate_and_check(net: EventNetwork, s: Scenario, rng: random.Random | None = None) -> Scenario:
    """Fill in every binding forced by the constraints, or raise :class:`Inconsistency`."""
    return Scenario(percolate_roots(net, [s.root], rng)[0])


# ---------------------------------------------------------------------------
# Entailment and probability


def witnesses(net: EventNetwork, flat: Sequence[FlatNode], obs_desc: EventDescription) -> list[int]:
    return [
        fn.index
        for fn in flat
        if net.is_a(fn.node.type, obs_desc.type) and obs_desc.subsumes(fn.node.desc)
    ]


def entails(net: EventNetwork, s: Scenario, obs) -> str | None:
    """Id of the first node witnessing ``obs`` (an Observation or EventDescription)."""
    desc = getattr(obs, "desc", obs)
    found = witnesses(net, s.flat(), desc)
    return node_id(found[0]) if found else None


@dataclass(frozen=True)
class Factor:
    kind: str  # prior | feature-cond | spec-cond
    at: str
    p: float
    assumed: bool = False


def factors_of(net: EventNetwork, flat: Sequence[FlatNode], assume_one: bool = False) -> list[Factor]:
    """Probability factors in pre-order; each local tree lists its edges in child order."""
    out: list[Factor] = []

    def take(kind: str, at: str, fn, *args) -> None:
        try:
            out.append(Factor(kind, at, fn(net, *args)))
        except NoStatistic:
            if not assume_one:
                raise
            out.append(Factor(kind, at, 1.0, True))

    children: dict[int, list[FlatNode]] = {}
    for fn in flat:
        if fn.parent is not None:
            children.setdefault(fn.parent, []).append(fn)
    for fn in flat:
        if fn.parent is None:
            take("prior", fn.id, lookup_prior, fn.node.desc)
        parent = fn.node
        for child in children.get(fn.index, ()):
            at = f"{fn.id}-{child.edge}->{child.id}"
            if child.edge == SPEC:
                take("spec-cond", at, lookup_spec_cond, parent.type, child.node.type)
            else:
                take("feature-cond", at, lookup_feature_cond, parent.desc, child.edge, child.node.desc)
    return out


def log_product(factors: Iterable[Factor]) -> float:
    logs = []
    for f in factors:
        if f.p <= 0.0:
            return -math.inf
        logs.append(math.log(f.p))
    return math.fsum(logs)


def probability(net: EventNetwork, s: Scenario, assume_one: bool = False) -> tuple[float, list[Factor]]:
    """Prior of the root times every causation and specialization factor."""
    factors = factors_of(net, s.flat(), assume_one)
    return math.exp(log_product(factors)), factors


@dataclass(frozen=True)
class Explanation:
    """A consistent scenario (or forest) covering a set of observations."""

    members: tuple[Scenario, ...]
    probability: float
    log_probability: float
    factors: tuple[Factor, ...]
    coverage: tuple[tuple[str, str], ...]

    @property
    def scenario(self) -> Scenario:
        return self.members[0]

    @property
    def node_count(self) -> int:
        return sum(m.size for m in self.members)

    def flat(self) -> list[FlatNode]:
        return flatten([m.root for m in self.members])

    def key(self) -> str:
        return "|".join(m.key() for m in self.members)

    def coverage_map(self) -> dict[str, str]:
        return dict(self.coverage)


def explain_scenario(
    net: EventNetwork, members: Sequence[Scenario], observations: Sequence, assume_one: bool = False
) -> Explanation:
    """Percolate, check coverage and score a (possibly multi-member) scenario.

    Raises :class:`Inconsistency`, :class:`NoStatistic` or
    :class:`AmbiguousStatistic`; raises :class:`ScenarioError` when an
    observation is not entailed.
    """
    roots = percolate_roots(net, [m.root for m in members])
    keyed = sorted(roots, key=tree_key)
    flat = flatten(keyed)
    coverage = []
    for obs in observations:
        found = witnesses(net, flat, obs.desc)
        if not found:
            raise ScenarioError(f"observation {obs.id} is not entailed")
        coverage.append((obs.id, node_id(found[0])))
    factors = factors_of(net, flat, assume_one)
    logp = log_product(factors)
    return Explanation(
        tuple(Scenario(r) for r in keyed),
        math.exp(logp),
        logp,
        tuple(factors),
        tuple(coverage),
    )


__all__ = [
    "AmbiguousStatistic",
    "CulpritError",
    "DuplicateFeature",
    "Explanation",
    "Factor",
    "Inconsistency",
    "NotADescendant",
    "NotALeaf",
    "PreemptedPath",
    "Scenario",
    "ScenarioError",
    "ScenarioNode",
    "TypeMismatch",
    "entails",
    "explain_scenario",
    "extend_with_feature",
    "extend_with_local_tree",
    "extend_with_spec",
    "make_bindings",
    "make_node",
    "new_scenario",
    "percolate_and_check",
    "probability",
]
