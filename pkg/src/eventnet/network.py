"""Event networks: types, features, constraints and category statistics.

An :class:`EventNetwork` is the static knowledge base.  Nodes are event
types (unary predicates) organised by ``isa`` links; feature links map an
event of one type to a related event of another type.  Attribute constraints
and category statistics hang off the types and features.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

SPEC = "spec"


class NetworkError(Exception):
    """Base class for errors raised by knowledge-base queries."""


class UnknownType(NetworkError, KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"unknown type: {self.name}"


class NoStatistic(NetworkError):
    pass


class AmbiguousStatistic(NetworkError):
    pass


class InvalidNetwork(NetworkError):
    def __init__(self, report: "ValidationReport"):
        super().__init__(str(report))
        self.report = report


@dataclass(frozen=True, order=True)
class SourceSpan:
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


Bindings = tuple[tuple[str, str], ...]


def make_bindings(values: Mapping[str, str] | Iterable[tuple[str, str]] = ()) -> Bindings:
    items = values.items() if isinstance(values, Mapping) else values
    out = dict()
    for attr, value in items:
        if attr in out and out[attr] != value:
            raise ValueError(f"conflicting values for attribute {attr!r}")
        out[attr] = str(value)
    return tuple(sorted(out.items()))


@dataclass(frozen=True, order=True)
class EventDescription:
    """A type plus a partial assignment of attribute values."""

    type: str
    bindings: Bindings = ()

    @classmethod
    def of(cls, type_name: str, bindings: Mapping[str, str] | None = None, **kw: str) -> "EventDescription":
        merged = dict(bindings or {})
        merged.update(kw)
        return cls(type_name, make_bindings(merged))

    def as_dict(self) -> dict[str, str]:
        return dict(self.bindings)

    def get(self, attr: str) -> str | None:
        for a, v in self.bindings:
            if a == attr:
                return v
        return None

    def subsumes(self, other: "EventDescription") -> bool:
        """True when every binding here also appears in ``other``."""
        theirs = dict(other.bindings)
        return all(theirs.get(a) == v for a, v in self.bindings)

    def compatible_bindings(self, bindings: Bindings) -> bool:
        """True when no attribute is bound to different values here and in ``bindings``."""
        theirs = dict(bindings)
        return all(theirs.get(a, v) == v for a, v in self.bindings)

    def __str__(self) -> str:
        if not self.bindings:
            return self.type
        inner = ", ".join(f"{a}={v}" for a, v in self.bindings)
        return f"{self.type}{{{inner}}}"


@dataclass(frozen=True)
class TypeDecl:
    name: str
    parents: tuple[str, ...] = ()
    is_culprit: bool = False
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class FeatureDecl:
    label: str
    source: str
    target: str
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


# Local-constraint relations.
EQ_CONST = "eq-const"
NEQ_CONST = "neq-const"
EQ_ATTR = "eq-attr"
NEQ_ATTR = "neq-attr"


@dataclass(frozen=True)
class LocalConstraint:
    owner: str
    relation: str
    attr: str
    other: str  # a constant for *-const relations, an attribute name otherwise
    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    def sort_key(self):
        return (self.owner, self.attr, self.relation, self.other)

    def __str__(self) -> str:
        op = "=" if self.relation in (EQ_CONST, EQ_ATTR) else "!="
        return f"constraint {self.owner} : {self.attr} {op} {self.other}"


@dataclass(frozen=True)
class PercolationConstraint:
    """``child_attr`` of the ``feature`` child equals ``parent_attr`` of the parent."""

    parent_type: str
    feature: str
    child_attr: str
    parent_attr: str
    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    def sort_key(self):
        return (self.parent_type, self.feature, self.child_attr, self.parent_attr)

    def __str__(self) -> str:
        return f"percolate {self.parent_type}.{self.feature} : {self.child_attr} => {self.parent_attr}"


@dataclass(frozen=True)
class Prior:
    desc: EventDescription
    p: float
    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    def sort_key(self):
        return (0, self.desc, "", EventDescription(""), self.p)


@dataclass(frozen=True)
class FeatureCond:
    parent: EventDescription
    feature: str
    child: EventDescription
    p: float
    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    def sort_key(self):
        return (1, self.parent, self.feature, self.child, self.p)


@dataclass(frozen=True)
class SpecCond:
    general: str
    specific: str
    p: float
    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    def sort_key(self):
        return (2, EventDescription(self.general), "", EventDescription(self.specific), self.p)


CategoryStatistic = Prior | FeatureCond | SpecCond


@dataclass(frozen=True)
class FeatureLink:
    """A feature usable from some type: declared on ``via`` (the type or an ancestor)."""

    via: str
    feature: str
    target: str


@dataclass(frozen=True)
class Violation:
    message: str
    span: SourceSpan | None = None

    def __str__(self) -> str:
        return f"{self.span}: {self.message}" if self.span else self.message


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "ok" if self.ok else "\n".join(str(v) for v in self.violations)


@dataclass(frozen=True, eq=True)
class EventNetwork:
    """Immutable knowledge base.

    Collections are normalised on construction so that two networks built
    from the same declarations compare equal.  Features keep their relative
    declaration order per source type: that order fixes the order in which a
    node's feature children are listed.

    Construction does not validate; use :func:`validate_network` or
    :meth:`checked`.
    """

    types: tuple[TypeDecl, ...] = ()
    features: tuple[FeatureDecl, ...] = ()
    local_constraints: tuple[LocalConstraint, ...] = ()
    percolation_constraints: tuple[PercolationConstraint, ...] = ()
    statistics: tuple[CategoryStatistic, ...] = ()
    spec_preemption_variant: str = "primed"

    def __post_init__(self):
        if self.spec_preemption_variant not in ("primed", "literal"):
            raise ValueError(f"unknown spec preemption variant {self.spec_preemption_variant!r}")
        set_ = object.__setattr__
        set_(self, "types", tuple(sorted(self.types, key=lambda t: (t.name, t.parents, t.is_culprit))))
        set_(self, "features", tuple(sorted(self.features, key=lambda f: f.source)))
        set_(self, "local_constraints", tuple(sorted(self.local_constraints, key=LocalConstraint.sort_key)))
        set_(
            self,
            "percolation_constraints",
            tuple(sorted(self.percolation_constraints, key=PercolationConstraint.sort_key)),
        )
        set_(self, "statistics", tuple(sorted(self.statistics, key=lambda s: s.sort_key())))

    @classmethod
    def checked(cls, *args, **kwargs) -> "EventNetwork":
        net = cls(*args, **kwargs)
        report = validate_network(net)
        if not report.ok:
            raise InvalidNetwork(report)
        return net

    def with_variant(self, variant: str) -> "EventNetwork":
        return EventNetwork(
            self.types,
            self.features,
            self.local_constraints,
            self.percolation_constraints,
            self.statistics,
            variant,
        )

    # -- indices ---------------------------------------------------------

    # cached_property writes into __dict__, which a frozen dataclass permits.
    @cached_property
    def _types(self) -> dict[str, TypeDecl]:
        return {t.name: t for t in self.types}

    @cached_property
    def _children(self) -> dict[str, list[str]]:
        kids: dict[str, list[str]] = {t.name: [] for t in self.types}
        for t in self.types:
            for p in t.parents:
                kids.setdefault(p, []).append(t.name)
        return kids

    @cached_property
    def _declared(self) -> dict[str, list[FeatureDecl]]:
        out: dict[str, list[FeatureDecl]] = {}
        for f in self.features:
            out.setdefault(f.source, []).append(f)
        return out

    @cached_property
    def _label_rank(self) -> dict[str, int]:
        rank: dict[str, int] = {}
        for f in self.features:
            rank.setdefault(f.label, len(rank))
        return rank

    @cached_property
    def attributes(self) -> frozenset[str]:
        """Every attribute name the knowledge base mentions."""
        names: set[str] = set()
        for c in self.local_constraints:
            names.add(c.attr)
            if c.relation in (EQ_ATTR, NEQ_ATTR):
                names.add(c.other)
        for pc in self.percolation_constraints:
            names.update((pc.child_attr, pc.parent_attr))
        for s in self.statistics:
            if isinstance(s, Prior):
                names.update(a for a, _ in s.desc.bindings)
            elif isinstance(s, FeatureCond):
                names.update(a for a, _ in s.parent.bindings)
                names.update(a for a, _ in s.child.bindings)
        return frozenset(names)

    @cached_property
    def culprits(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.types if t.is_culprit)

    @cached_property
    def _ancestor_sets(self) -> dict[str, frozenset[str]]:
        out: dict[str, frozenset[str]] = {}
        for name in self._types:
            seen: set[str] = set()
            stack = list(self._types[name].parents)
            while stack:
                p = stack.pop()
                if p in seen:
                    continue
                seen.add(p)
                if p in self._types:
                    stack.extend(self._types[p].parents)
            seen.discard(name)
            out[name] = frozenset(seen)
        return out

    @cached_property
    def _descendant_sets(self) -> dict[str, frozenset[str]]:
        out: dict[str, set[str]] = {name: set() for name in self._types}
        for name, ancestors in self._ancestor_sets.items():
            for a in ancestors:
                if a in out:
                    out[a].add(name)
        return {k: frozenset(v) for k, v in out.items()}

    # -- basic queries ---------------------------------------------------

    def has_type(self, name: str) -> bool:
        return name in self._types

    def type_decl(self, name: str) -> TypeDecl:
        try:
            return self._types[name]
        except KeyError:
            raise UnknownType(name) from None

    def is_culprit(self, name: str) -> bool:
        return self.type_decl(name).is_culprit

    def is_a(self, sub: str, sup: str) -> bool:
        """Reflexive-transitive isa test (``sub isa* sup``)."""
        return sub == sup or sup in self._ancestor_sets.get(sub, ())

    def is_strict_a(self, sub: str, sup: str) -> bool:
        return sub != sup and sup in self._ancestor_sets.get(sub, ())

    def strict_descendants(self, name: str) -> tuple[str, ...]:
        self.type_decl(name)
        return tuple(sorted(self._descendant_sets[name]))

    def declared_features(self, name: str) -> tuple[FeatureDecl, ...]:
        return tuple(self._declared.get(name, ()))

    def label_rank(self, label: str) -> int:
        return self._label_rank.get(label, len(self._label_rank))

    def feature_targets(self, source: str, label: str) -> tuple[str, ...]:
        """Targets of ``label`` among the legal links of ``source``."""
        return tuple(l.target for l in legal_feature_links(self, source) if l.feature == label)


# ---------------------------------------------------------------------------
# Validation


def _isa_cycles(net: EventNetwork) -> list[list[str]]:
    """Strongly connected components of the isa graph that contain a cycle."""
    graph = {t.name: [p for p in t.parents if p in net._types] for t in net.types}
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    out: list[list[str]] = []
    counter = 0

    for start in sorted(graph):
        if start in index:
            continue
        work = [(start, iter(graph[start]))]
        index[start] = low[start] = counter
        counter += 1
        stack.append(start)
        on_stack.add(start)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(graph[nxt])))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                if len(comp) > 1 or node in graph[node]:
                    out.append(sorted(comp))
    return sorted(out)


def validate_network(net: EventNetwork) -> ValidationReport:
    """Check well-formedness; violations are returned, never raised."""
    found: list[Violation] = []

    def bad(msg: str, span: SourceSpan | None) -> None:
        found.append(Violation(msg, span))

    by_name: dict[str, list[TypeDecl]] = {}
    for t in net.types:
        by_name.setdefault(t.name, []).append(t)
    for name, decls in by_name.items():
        # the first declaration in the source is the original
        ordered = sorted(decls, key=lambda d: (d.span is None, d.span or SourceSpan(1, 1)))
        for t in ordered[1:]:
            bad(f"duplicate type: {name}", t.span)
    for t in net.types:
        for p in t.parents:
            if p not in net._types:
                bad(f"unknown isa parent {p} of type {t.name}", t.span)

    cycles = _isa_cycles(net)
    for comp in cycles:
        decl = net._types[comp[0]]
        bad("isa cycle: " + ",".join(comp), decl.span)
    acyclic = not cycles

    seen_features: set[tuple[str, str]] = set()
    for f in net.features:
        key = (f.label, f.source)
        if key in seen_features:
            bad(f"duplicate feature {f.label} on type {f.source}", f.span)
        seen_features.add(key)
        for role, name in (("source", f.source), ("target", f.target)):
            if name not in net._types:
                bad(f"feature {f.label}: unknown {role} type {name}", f.span)

    if acyclic:
        # A redeclared feature must narrow the inherited target.
        for f in net.features:
            if f.source not in net._types or f.target not in net._types:
                continue
            for anc in net._ancestor_sets[f.source]:
                for g in net._declared.get(anc, ()):
                    if g.label == f.label and g.target in net._types and not net.is_a(f.target, g.target):
                        bad(
                            f"feature override target mismatch: {f.source} -{f.label}-> {f.target}"
                            f" does not specialise {anc} -{f.label}-> {g.target}",
                            f.span,
                        )

    for c in net.local_constraints:
        if c.owner not in net._types:
            bad(f"constraint on unknown type {c.owner}", c.span)

    for pc in net.percolation_constraints:
        if pc.parent_type not in net._types:
            bad(f"percolation on unknown type {pc.parent_type}", pc.span)
        elif acyclic and not _reachable_feature(net, pc.parent_type, pc.feature):
            bad(f"percolation: type {pc.parent_type} has no feature {pc.feature}", pc.span)

    for s in net.statistics:
        if not 0.0 <= s.p <= 1.0:
            bad(f"probability {s.p} outside [0, 1]", s.span)
        if isinstance(s, Prior):
            if s.desc.type not in net._types:
                bad(f"prior on unknown type {s.desc.type}", s.span)
        elif isinstance(s, FeatureCond):
            missing = [n for n in (s.parent.type, s.child.type) if n not in net._types]
            if missing:
                bad(f"cond on unknown type {missing[0]}", s.span)
            elif acyclic:
                targets = [l.target for l in legal_feature_links(net, s.parent.type) if l.feature == s.feature]
                if not targets:
                    bad(f"cond: type {s.parent.type} has no feature {s.feature}", s.span)
                elif s.child.type not in targets:
                    bad(
                        f"FeatureCond target mismatch: {s.parent.type} -{s.feature}-> {s.child.type}"
                        f" (declared target {', '.join(targets)})",
                        s.span,
                    )
        else:
            missing = [n for n in (s.general, s.specific) if n not in net._types]
            if missing:
                bad(f"speccond on unknown type {missing[0]}", s.span)
            elif acyclic and not net.is_strict_a(s.specific, s.general):
                bad(f"speccond: {s.specific} is not a strict specialisation of {s.general}", s.span)

    prior_types = {s.desc.type for s in net.statistics if isinstance(s, Prior)}
    for t in net.types:
        if t.is_culprit and t.name not in prior_types:
            bad(f"culprit {t.name} has no prior", t.span)

    return ValidationReport(tuple(found))


def _reachable_feature(net: EventNetwork, type_name: str, label: str) -> bool:
    for t in (type_name, *net._ancestor_sets[type_name]):
        if any(f.label == label for f in net._declared.get(t, ())):
            return True
    return False


# ---------------------------------------------------------------------------
# Hierarchy and preemption


def isa_ancestors(net: EventNetwork, c: str) -> tuple[str, ...]:
    """Strict ancestors of ``c``, nearest first (topological, ties by name)."""
    net.type_decl(c)
    members = net._ancestor_sets[c]
    indegree = {m: 0 for m in members}
    for m in members:
        for p in net._types[m].parents:
            if p in indegree:
                indegree[p] += 1
    ready = [m for m, d in indegree.items() if d == 0]
    heapq.heapify(ready)
    out = []
    while ready:
        m = heapq.heappop(ready)
        out.append(m)
        for p in net._types[m].parents:
            if p in indegree:
                indegree[p] -= 1
                if indegree[p] == 0:
                    heapq.heappush(ready, p)
    return tuple(out)


def generalization_preemptor(net: EventNetwork, c: str, via: str, feature: FeatureDecl) -> FeatureDecl | None:
    """A declaration that pre-empts inheriting ``feature`` (declared on ``via``) into ``c``.

    The inherited path ``c isa+ via -f-> t`` loses to ``c isa* c1 -f-> t1``
    whenever ``c1 isa+ via`` and ``t1 isa* t``.  The reflexive target test
    lets a plain redeclaration override the inherited link.
    """
    if via == c:
        return None
    candidates = [c, *isa_ancestors(net, c)]
    for c1 in candidates:
        if not net.is_strict_a(c1, via):
            continue
        for g in net._declared.get(c1, ()):
            if g.label == feature.label and net.is_a(g.target, feature.target):
                return g
    return None


def legal_feature_links(net: EventNetwork, c: str) -> tuple[FeatureLink, ...]:
    """Feature links usable from ``c`` after generalization preemption."""
    return _legal_links(net, c)


def _legal_links(net: EventNetwork, c: str) -> tuple[FeatureLink, ...]:
    cache = net.__dict__.setdefault("_legal_cache", {})
    hit = cache.get(c)
    if hit is not None:
        return hit
    net.type_decl(c)
    out = []
    for via in (c, *isa_ancestors(net, c)):
        for f in net._declared.get(via, ()):
            if generalization_preemptor(net, c, via, f) is None:
                out.append(FeatureLink(via, f.label, f.target))
    result = tuple(sorted(out, key=lambda l: (l.feature, l.via)))
    cache[c] = result
    return result


def inherited_feature_paths(net: EventNetwork, c: str) -> list[tuple[FeatureLink, FeatureDecl | None]]:
    """Every feature path from ``c`` with the declaration pre-empting it, if any."""
    net.type_decl(c)
    out = []
    for via in (c, *isa_ancestors(net, c)):
        for f in net._declared.get(via, ()):
            out.append((FeatureLink(via, f.label, f.target), generalization_preemptor(net, c, via, f)))
    out.sort(key=lambda item: (item[0].feature, item[0].via))
    return out


def spec_preemptor(
    net: EventNetwork, source: str, feature: str, target: str, refined: str
) -> FeatureDecl | None:
    """A declaration that pre-empts ``source -feature-> target spec+ refined``.

    Candidates are declarations ``c1 -feature-> t1`` with ``c1`` equal to or
    below ``source`` and ``refined`` strictly below ``t1``.  Under the
    ``primed`` variant ``t1`` must lie strictly below ``target``; under
    ``literal`` ``c1`` must.
    """
    literal = net.spec_preemption_variant == "literal"
    for c1 in (source, *net.strict_descendants(source)):
        for g in net._declared.get(c1, ()):
            if g.label != feature or not net.is_strict_a(refined, g.target):
                continue
            pivot = c1 if literal else g.target
            if net.is_strict_a(pivot, target):
                return g
    return None


def legal_spec_refinements(net: EventNetwork, source: str, feature: str, refined_target: str) -> bool:
    """Whether a ``feature`` child of a ``source`` node may be specialised to ``refined_target``."""
    links = [l for l in legal_feature_links(net, source) if l.feature == feature]
    if not links:
        raise NetworkError(f"type {source} has no legal feature {feature}")
    net.type_decl(refined_target)
    below = [l for l in links if net.is_strict_a(refined_target, l.target)]
    if not below:
        raise NetworkError(f"{refined_target} does not specialise the target of {source} -{feature}->")
    return any(spec_preemptor(net, source, feature, l.target, refined_target) is None for l in below)


def spec_refinement_allowed(net: EventNetwork, source: str, feature: str, target: str, refined: str) -> bool:
    """Like :func:`legal_spec_refinements` for a known feature target, without precondition checks."""
    return spec_preemptor(net, source, feature, target, refined) is None


# ---------------------------------------------------------------------------
# Statistic lookup


def _most_specific(matches: list[tuple[int, float]], what: str) -> float:
    best = max(m[0] for m in matches)
    ps = {p for n, p in matches if n == best}
    if len(ps) > 1:
        raise AmbiguousStatistic(f"{what}: equally specific statistics disagree ({sorted(ps)})")
    return ps.pop()


def lookup_prior(net: EventNetwork, desc: EventDescription) -> float:
    net.type_decl(desc.type)
    matches = [
        (len(s.desc.bindings), s.p)
        for s in net.statistics
        if isinstance(s, Prior) and s.desc.type == desc.type and s.desc.subsumes(desc)
    ]
    if not matches:
        raise NoStatistic(f"no prior for {desc}")
    return _most_specific(matches, f"prior {desc}")


def _cond_tiers(net: EventNetwork, parent_type: str, feature: str, child_type: str) -> list[str]:
    """Parent types whose conditionals apply: the node's own type, then declaring types."""
    tiers = [parent_type]
    for l in legal_feature_links(net, parent_type):
        if l.feature == feature and l.target == child_type and l.via not in tiers:
            tiers.append(l.via)
    return tiers


def lookup_feature_cond(
    net: EventNetwork, parent: EventDescription, feature: str, child: EventDescription
) -> float:
    """Most specific ``[child(feature(x)) | parent(x)]`` statistic.

    Conditionals stated for the parent's own type take precedence; when none
    matches, those stated on the type that declares the feature are used.
    """
    net.type_decl(parent.type)
    for tier in _cond_tiers(net, parent.type, feature, child.type):
        matches = [
            (len(s.parent.bindings) + len(s.child.bindings), s.p)
            for s in net.statistics
            if isinstance(s, FeatureCond)
            and s.feature == feature
            and s.parent.type == tier
            and s.child.type == child.type
            and s.parent.subsumes(parent)
            and s.child.subsumes(child)
        ]
        if matches:
            return _most_specific(matches, f"cond {parent} -{feature}-> {child}")
    raise NoStatistic(f"no statistic for {parent} -{feature}-> {child}")


def _spec_steps(net: EventNetwork) -> dict[str, list[SpecCond]]:
    cache = net.__dict__.get("_spec_steps")
    if cache is None:
        cache = {}
        for s in net.statistics:
            if isinstance(s, SpecCond):
                cache.setdefault(s.general, []).append(s)
        net.__dict__["_spec_steps"] = cache
    return cache


def lookup_spec_cond(net: EventNetwork, general: str, specific: str) -> float:
    """``[specific(x) | general(x)]``; chains of declared steps multiply."""
    net.type_decl(general)
    net.type_decl(specific)
    steps = _spec_steps(net)
    products: set[float] = set()

    def walk(at: str, acc: float) -> None:
        for s in steps.get(at, ()):
            if s.specific == specific:
                products.add(acc * s.p)
            elif net.is_strict_a(specific, s.specific):
                walk(s.specific, acc * s.p)

    direct = [s.p for s in steps.get(general, ()) if s.specific == specific]
    if direct:
        return direct[0]
    walk(general, 1.0)
    if not products:
        raise NoStatistic(f"no specialization statistic for {general} => {specific}")
    if len(products) > 1:
        raise AmbiguousStatistic(f"speccond chains {general} => {specific} disagree")
    return products.pop()


def prior_bound(net: EventNetwork, desc: EventDescription) -> float | None:
    """Largest prior any refinement of ``desc`` could receive; None if none can."""
    ps = [
        s.p
        for s in net.statistics
        if isinstance(s, Prior) and s.desc.type == desc.type and s.desc.compatible_bindings(desc.bindings)
    ]
    return max(ps) if ps else None


def feature_cond_bound(
    net: EventNetwork, parent: EventDescription, feature: str, child: EventDescription
) -> float | None:
    tiers = _cond_tiers(net, parent.type, feature, child.type)
    ps = [
        s.p
        for s in net.statistics
        if isinstance(s, FeatureCond)
        and s.feature == feature
        and s.parent.type in tiers
        and s.child.type == child.type
        and s.parent.compatible_bindings(parent.bindings)
        and s.child.compatible_bindings(child.bindings)
    ]
    return max(ps) if ps else None
