"""Finding the most probable explanations of a set of observations.

:func:`explain` runs a best-first search over partial scenarios grown from
culprit roots.  Observations are attached to nodes as the nodes are created,
attribute values percolate through the partial tree at every step, and each
partial scenario is scored with an optimistic bound (every statistic that is
still compatible with its bindings, every future factor taken as 1).
Because factors never exceed 1 the bound only falls as the tree grows, so
complete scenarios come off the queue in order of probability.

:func:`enumerate_explanations` is the brute-force counterpart: it builds
every scenario shape within the node budget with the public scenario
constructors, tries every placement of the observations and keeps what
survives.  The two must agree.
"""

from __future__ import annotations

import heapq
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Sequence

from .kbdsl import Observation
from .network import (
    SPEC,
    AmbiguousStatistic,
    EventDescription,
    EventNetwork,
    NetworkError,
    NoStatistic,
    feature_cond_bound,
    legal_feature_links,
    lookup_spec_cond,
    prior_bound,
    spec_refinement_allowed,
)
from .scenario import (
    Explanation,
    Inconsistency,
    PreemptedPath,
    Scenario,
    ScenarioError,
    ScenarioNode,
    explain_scenario,
    extend_with_local_tree,
    extend_with_spec,
    flatten,
    make_node,
    new_scenario,
    node_id,
    FlatProblem,
    percolate_flat,
    witnesses,
)

LOG_TOLERANCE = 1e-12


class UnknownObservationType(NetworkError):
    pass


@dataclass(frozen=True)
class SearchParams:
    top_k: int = 3
    max_nodes: int = 64
    min_prob: float = 1e-12
    assume_one: bool = False
    allow_forest: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.top_k < 1 or self.max_nodes < 1 or self.workers < 1:
            raise ValueError("top_k, max_nodes and workers must be positive")
        if not 0.0 < self.min_prob <= 1.0:
            raise ValueError("min_prob must lie in (0, 1]")

    def as_dict(self) -> dict:
        return {
            "top_k": self.top_k,
            "max_nodes": self.max_nodes,
            "min_prob": self.min_prob,
            "assume_one": self.assume_one,
            "allow_forest": self.allow_forest,
        }


@dataclass(frozen=True)
class RankedResult:
    explanations: tuple[Explanation, ...]
    exhausted: bool
    params: SearchParams = field(default_factory=SearchParams)

    def __len__(self) -> int:
        return len(self.explanations)

    def __iter__(self):
        return iter(self.explanations)

    def __getitem__(self, i):
        return self.explanations[i]


# ---------------------------------------------------------------------------
# Ordering


def _coverage_indices(e: Explanation) -> tuple[int, ...]:
    return tuple(int(nid[1:]) for _, nid in e.coverage)


def canonical_key(e: Explanation) -> tuple:
    """Final tie-break: where each observation is witnessed, then the tree text."""
    return (_coverage_indices(e), e.key())


def compare_explanations(a: Explanation, b: Explanation) -> int:
    """Negative when ``a`` ranks before ``b``."""
    la, lb = a.log_probability, b.log_probability
    if not (la == lb or (math.isfinite(la) and math.isfinite(lb) and abs(la - lb) <= LOG_TOLERANCE)):
        return -1 if la > lb else 1
    if a.node_count != b.node_count:
        return -1 if a.node_count < b.node_count else 1
    ka, kb = canonical_key(a), canonical_key(b)
    return (ka > kb) - (ka < kb)


def rank(explanations) -> list[Explanation]:
    # Pre-sorting on the exact key keeps the tolerant comparison deterministic.
    ordered = sorted(explanations, key=canonical_key)
    return sorted(ordered, key=cmp_to_key(compare_explanations))


# ---------------------------------------------------------------------------
# Shared checks


def _minimal_flat(parents: Sequence[int | None], wit: Sequence[set[int]], forest: bool) -> bool:
    below: list[set[int]] = [{i} for i in range(len(parents))]
    for i in range(len(parents) - 1, -1, -1):
        if parents[i] is not None:
            below[parents[i]] |= below[i]
    for i, p in enumerate(parents):
        if p is None and not forest:
            continue
        if all(w - below[i] for w in wit):
            return False
    return True


def is_minimal(net: EventNetwork, e: Explanation, observations: Sequence[Observation]) -> bool:
    """True when no subtree (or forest member) can go without losing an observation."""
    flat = e.flat()
    wit = [set(witnesses(net, flat, o.desc)) for o in observations]
    return _minimal_flat([fn.parent for fn in flat], wit, len(e.members) > 1)


def _flat_witnesses(net: EventNetwork, types, bindings, observations) -> list[set[int]]:
    return [
        {i for i, t in enumerate(types) if net.is_a(t, o.desc.type) and set(o.desc.bindings) <= bindings[i]}
        for o in observations
    ]


def _check_observations(net: EventNetwork, observations: Sequence[Observation]) -> None:
    if not observations:
        raise ValueError("at least one observation is required")
    for o in observations:
        if not net.has_type(o.desc.type):
            raise UnknownObservationType(f"observation {o.id}: unknown type {o.desc.type}")


def _root_types(net: EventNetwork) -> list[str]:
    return list(net.culprits) if net.culprits else [t.name for t in net.types]


def _score(
    net: EventNetwork, members: Sequence[Scenario], observations, params: SearchParams
) -> Explanation | None:
    """Explanation for a fully placed scenario, or None if it does not qualify."""
    try:
        e = explain_scenario(net, members, observations, params.assume_one)
    except (Inconsistency, NoStatistic, AmbiguousStatistic):
        return None
    except ScenarioError:
        return None
    if not is_minimal(net, e, observations):
        return None
    return e


# ---------------------------------------------------------------------------
# Best-first search


@dataclass(frozen=True)
class _Partial:
    types: tuple[str, ...]
    assigned: tuple[frozenset, ...]
    parents: tuple
    edges: tuple
    open: tuple[bool, ...]
    unassigned: frozenset

    def add(self, at: int, children) -> "_Partial":
        types, assigned, parents, edges, open_ = (
            list(self.types),
            list(self.assigned),
            list(self.parents),
            list(self.edges),
            list(self.open),
        )
        open_[at] = False
        taken: set[int] = set()
        for edge, type_name, obs in children:
            types.append(type_name)
            assigned.append(frozenset(obs))
            parents.append(at)
            edges.append(edge)
            open_.append(True)
            taken.update(obs)
        return _Partial(
            tuple(types), tuple(assigned), tuple(parents), tuple(edges), tuple(open_), self.unassigned - taken
        )

    def close(self, at: int) -> "_Partial":
        open_ = list(self.open)
        open_[at] = False
        return _Partial(self.types, self.assigned, self.parents, self.edges, tuple(open_), self.unassigned)

    def add_root(self, type_name: str, obs) -> "_Partial":
        return _Partial(
            self.types + (type_name,),
            self.assigned + (frozenset(obs),),
            self.parents + (None,),
            self.edges + (None,),
            self.open + (True,),
            self.unassigned - frozenset(obs),
        )


class _Search:
    def __init__(self, net: EventNetwork, observations: Sequence[Observation], params: SearchParams):
        self.net = net
        self.obs = list(observations)
        self.params = params
        # Largest log bound of anything cut by max_nodes or min_prob.
        self.lost = -math.inf
        self.universe = frozenset(a for o in self.obs for a, _ in o.desc.bindings)
        self.log_min = math.log(params.min_prob)
        self.roots = _root_types(net)
        self._compat: dict[str, frozenset[int]] = {}
        self._reach = self._reachability()
        self._owed = self._path_bounds()
        self.root_reach = frozenset().union(*(self.placeable(r) for r in self.roots)) if self.roots else frozenset()

    # -- static tables ---------------------------------------------------

    def compatible(self, type_name: str) -> frozenset[int]:
        hit = self._compat.get(type_name)
        if hit is None:
            hit = frozenset(i for i, o in enumerate(self.obs) if self.net.is_a(type_name, o.desc.type))
            self._compat[type_name] = hit
        return hit

    def _reachability(self) -> dict[str, frozenset[int]]:
        net = self.net
        succ = {}
        for t in net.types:
            succ[t.name] = set(net.strict_descendants(t.name)) | {l.target for l in legal_feature_links(net, t.name)}
        reach = {name: set(self.compatible(name)) for name in succ}
        changed = True
        while changed:
            changed = False
            for name, nexts in succ.items():
                before = len(reach[name])
                for n in nexts:
                    reach[name] |= reach[n]
                if len(reach[name]) != before:
                    changed = True
        return {k: frozenset(v) for k, v in reach.items()}

    def _path_bounds(self) -> dict[str, list[float]]:
        """Best log factor product over paths of one or more edges from a type
        down to a type that can carry each observation."""
        net = self.net
        edges: dict[str, list[tuple[str, float]]] = {}
        for t in net.types:
            out = []
            for link in legal_feature_links(net, t.name):
                out.append((link.target, link.feature))
            for d in net.strict_descendants(t.name):
                out.append((d, SPEC))
            scored = []
            for child, edge in out:
                b = _edge_bound(net, EventDescription(t.name), edge, EventDescription(child), self.params.assume_one)
                if b is None:
                    if not self.params.assume_one:
                        continue
                    b = 1.0
                scored.append((child, math.log(b) if b > 0 else -math.inf))
            edges[t.name] = scored
        best = {t: [-math.inf] * len(self.obs) for t in edges}
        changed = True
        while changed:
            changed = False
            for t, out in edges.items():
                row = best[t]
                for child, w in out:
                    for o in range(len(self.obs)):
                        here = 0.0 if o in self.compatible(child) else best[child][o]
                        if w + here > row[o] + 1e-15:
                            row[o] = w + here
                            changed = True
        return best

    def placeable(self, type_name: str) -> frozenset[int]:
        return self._reach[type_name]

    # -- state evaluation ------------------------------------------------

    def feasible(self, st: _Partial) -> bool | None:
        """False when no completion exists, None when completions exceed max_nodes."""
        opened = [i for i, o in enumerate(st.open) if o]
        needy = [i for i in opened if not st.assigned[i]]
        left = st.unassigned
        if not opened and left and not self.params.allow_forest:
            return False
        if len(needy) > len(left):
            return False
        if len(st.types) + len(needy) > self.params.max_nodes:
            return None
        reachable = frozenset().union(*(self.placeable(st.types[i]) for i in opened)) if opened else frozenset()
        if self.params.allow_forest:
            reachable |= self.root_reach
        if left - reachable:
            return False
        return all(self.placeable(st.types[i]) & left for i in needy)

    def bound(self, st: _Partial) -> float | None:
        """Log upper bound on the probability of any completion, None if infeasible."""
        net = self.net
        bases = [tuple(p for o in sorted(a) for p in self.obs[o].desc.bindings) for a in st.assigned]
        problem = FlatProblem(list(st.types), bases, list(st.parents), list(st.edges), self.universe)
        derived, violation = percolate_flat(net, problem)
        if violation is not None:
            return None
        total = _log_bound(net, st.types, st.parents, st.edges, derived, self.params.assume_one)
        if total is None:
            return None
        # Each open node without an observation still needs a path down to
        # one; those subtrees are disjoint, so their best factors multiply.
        for i, is_open in enumerate(st.open):
            if is_open and not st.assigned[i]:
                row = self._owed[st.types[i]]
                total += max(row[o] for o in st.unassigned)
        return total

    def incoming(self, st: _Partial, i: int):
        while True:
            p = st.parents[i]
            if p is None:
                return None
            if st.edges[i] != SPEC:
                return st.types[p], st.edges[i], st.types[i]
            i = p

    def subsets(self, pool: frozenset[int]):
        items = sorted(pool)
        for r in range(len(items) + 1):
            for combo in itertools.combinations(items, r):
                yield combo

    def successors(self, st: _Partial) -> list[_Partial]:
        net = self.net
        opened = [i for i, o in enumerate(st.open) if o]
        out: list[_Partial] = []
        if not opened:
            if st.unassigned and self.params.allow_forest:
                for r in self.roots:
                    for obs in self.subsets(st.unassigned & self.compatible(r)):
                        out.append(st.add_root(r, obs))
            return out
        i = opened[0]
        t = st.types[i]
        left = st.unassigned
        if st.assigned[i]:
            out.append(st.close(i))
        context = self.incoming(st, i)
        for sub in net.strict_descendants(t):
            if context is not None and not spec_refinement_allowed(net, *context, sub):
                continue
            for obs in self.subsets(left & self.compatible(sub)):
                out.append(st.add(i, [(SPEC, sub, obs)]))
        groups: dict[str, list] = {}
        for link in legal_feature_links(net, t):
            groups.setdefault(link.feature, []).append(link)
        labels = sorted(groups, key=lambda l: (net.label_rank(l), l))
        for choice in itertools.product(*[[None, *groups[l]] for l in labels]):
            chosen = [c for c in choice if c is not None]
            if not chosen:
                continue
            options = []
            for o in sorted(left):
                options.append([None] + [k for k, c in enumerate(chosen) if o in self.compatible(c.target)])
            for placement in itertools.product(*options):
                per_child: list[list[int]] = [[] for _ in chosen]
                for o, k in zip(sorted(left), placement):
                    if k is not None:
                        per_child[k].append(o)
                out.append(st.add(i, [(c.feature, c.target, obs) for c, obs in zip(chosen, per_child)]))
        return out

    def evaluate(self, st: _Partial, parent_bound: float) -> tuple[float | None, float | None]:
        """(bound to queue under, bound lost to a cut); at most one is set."""
        ok = self.feasible(st)
        if ok is None:
            return None, parent_bound
        if not ok:
            return None, None
        b = self.bound(st)
        if b is None:
            return None, None
        if b < self.log_min:
            return None, b
        return b, None

    def complete(self, st: _Partial) -> Explanation | None:
        net = self.net
        kids: dict[int, list[int]] = {}
        for i, p in enumerate(st.parents):
            if p is not None:
                kids.setdefault(p, []).append(i)

        def build(i: int) -> ScenarioNode:
            pairs = {}
            for o in st.assigned[i]:
                for a, v in self.obs[o].desc.bindings:
                    if pairs.setdefault(a, v) != v:
                        raise _Clash
            desc = EventDescription(st.types[i], tuple(sorted(pairs.items())))
            children = kids.get(i, [])
            spec = [build(c) for c in children if st.edges[c] == SPEC]
            feats = [(st.edges[c], build(c)) for c in children if st.edges[c] != SPEC]
            return make_node(net, desc, feats, spec[0] if spec else None)

        try:
            members = [Scenario(build(i)) for i, p in enumerate(st.parents) if p is None]
        except _Clash:
            return None
        e = _score(net, members, self.obs, self.params)
        if e is not None and e.log_probability < self.log_min:
            self.lost = max(self.lost, e.log_probability)
            return None
        return e

    def run(self) -> RankedResult:
        params = self.params
        heap: list = []
        counter = itertools.count()
        initial = []
        for r in self.roots:
            for obs in self.subsets(frozenset(range(len(self.obs))) & self.compatible(r)):
                initial.append(_Partial((r,), (frozenset(obs),), (None,), (None,), (True,), frozenset(range(len(self.obs))) - frozenset(obs)))
        pool = ThreadPoolExecutor(params.workers) if params.workers > 1 else None
        try:
            self._push_all(heap, counter, initial, pool, 0.0)
            found: dict[str, Explanation] = {}
            best_logs: list[float] = []  # min-heap of the top_k log probabilities seen
            while heap:
                neg, _, item = heapq.heappop(heap)
                if len(best_logs) >= params.top_k and -neg < best_logs[0] - LOG_TOLERANCE:
                    break
                if isinstance(item, Explanation):
                    key = item.key()
                    if key in found:
                        continue
                    found[key] = item
                    heapq.heappush(best_logs, item.log_probability)
                    if len(best_logs) > params.top_k:
                        heapq.heappop(best_logs)
                    continue
                st = item
                if not any(st.open) and not st.unassigned:
                    e = self.complete(st)
                    if e is not None:
                        heapq.heappush(heap, (-e.log_probability, next(counter), e))
                    continue
                self._push_all(heap, counter, self.successors(st), pool, -neg)
        finally:
            if pool is not None:
                pool.shutdown()
        ranked = rank(found.values())[: params.top_k]
        # A cut matters only if what it removed could have entered the result.
        if len(ranked) < params.top_k:
            exhausted = self.lost == -math.inf
        else:
            exhausted = self.lost < ranked[-1].log_probability - LOG_TOLERANCE
        return RankedResult(tuple(ranked), exhausted, params)

    def _push_all(self, heap, counter, states, pool, parent_bound: float) -> None:
        if pool is not None:
            scores = list(pool.map(lambda s: self.evaluate(s, parent_bound), states))
        else:
            scores = [self.evaluate(s, parent_bound) for s in states]
        for st, (b, lost) in zip(states, scores):
            if b is not None:
                heapq.heappush(heap, (-b, next(counter), st))
            elif lost is not None:
                self.lost = max(self.lost, lost)


def _root_bound(net: EventNetwork, desc: EventDescription, assume: bool) -> float | None:
    b = prior_bound(net, desc)
    if b is not None and assume and not _has_unconditional_prior(net, desc.type):
        b = 1.0
    return b


def _edge_bound(
    net: EventNetwork, parent: EventDescription, edge: str, child: EventDescription, assume: bool
) -> float | None:
    if edge == SPEC:
        try:
            return lookup_spec_cond(net, parent.type, child.type)
        except NoStatistic:
            return None
        except AmbiguousStatistic:
            return 1.0
    b = feature_cond_bound(net, parent, edge, child)
    if b is not None and assume and not _has_unconditional_cond(net, parent.type, edge, child.type):
        b = 1.0
    return b


def _log_bound(net: EventNetwork, types, parents, edges, derived, assume: bool) -> float | None:
    """Log of the largest probability any refinement of a partial tree can get.

    None when some factor can never be backed by a statistic.
    """
    total = 0.0
    for i, t in enumerate(types):
        p = parents[i]
        desc = EventDescription(t, derived[i])
        if p is None:
            b = _root_bound(net, desc, assume)
        else:
            b = _edge_bound(net, EventDescription(types[p], derived[p]), edges[i], desc, assume)
        if b is None:
            if not assume:
                return None
            b = 1.0
        if b <= 0.0:
            return -math.inf
        total += math.log(b)
    return total


class _Clash(Exception):
    pass


def _has_unconditional_prior(net: EventNetwork, type_name: str) -> bool:
    from .network import Prior

    return any(isinstance(s, Prior) and s.desc.type == type_name and not s.desc.bindings for s in net.statistics)


def _has_unconditional_cond(net: EventNetwork, parent_type: str, feature: str, child_type: str) -> bool:
    from .network import FeatureCond, _cond_tiers

    tiers = _cond_tiers(net, parent_type, feature, child_type)
    return any(
        isinstance(s, FeatureCond)
        and s.feature == feature
        and s.parent.type in tiers
        and s.child.type == child_type
        and not s.parent.bindings
        and not s.child.bindings
        for s in net.statistics
    )


def explain(
    net: EventNetwork, observations: Sequence[Observation], params: SearchParams | None = None
) -> RankedResult:
    """The ``top_k`` most probable minimal explanations of ``observations``."""
    params = params or SearchParams()
    _check_observations(net, observations)
    return _Search(net, observations, params).run()


# ---------------------------------------------------------------------------
# Exhaustive oracle


def _shapes(net: EventNetwork, params: SearchParams, max_leaves: int) -> tuple[list[Scenario], bool]:
    """Every scenario shape (bare descriptions) within the node and leaf budgets.

    Extending a leaf never lowers the leaf count and never raises the
    probability bound, so shapes over the leaf budget or under the
    probability floor are dropped together with everything they could grow
    into.
    """
    max_nodes = params.max_nodes
    log_min = math.log(params.min_prob)
    seen: dict[str, Scenario] = {}
    overflow = False
    queue: list[Scenario] = []
    for r in _root_types(net):
        s = new_scenario(net, EventDescription(r))
        seen[s.key()] = s
        queue.append(s)
    while queue:
        s = queue.pop()
        for fn in s.flat():
            if not fn.node.is_leaf:
                continue
            grown = []
            for sub in net.strict_descendants(fn.node.type):
                try:
                    grown.append(extend_with_spec(net, s, fn.id, sub))
                except PreemptedPath:
                    pass
            by_label: dict[str, list] = {}
            for link in legal_feature_links(net, fn.node.type):
                by_label.setdefault(link.feature, []).append(link)
            for choice in itertools.product(*[[None, *v] for v in by_label.values()]):
                chosen = [(c.feature, EventDescription(c.target)) for c in choice if c is not None]
                if not chosen:
                    continue
                if s.size + len(chosen) > max_nodes:
                    overflow = True
                    continue
                grown.append(extend_with_local_tree(net, s, fn.id, chosen))
            for g in grown:
                if g.size > max_nodes:
                    overflow = True
                    continue
                flat = g.flat()
                if sum(1 for n in flat if n.node.is_leaf) > max_leaves:
                    continue
                b = _log_bound(
                    net,
                    [n.node.type for n in flat],
                    [n.parent for n in flat],
                    [n.edge for n in flat],
                    [()] * len(flat),
                    params.assume_one,
                )
                if b is None:
                    continue
                if b < log_min:
                    overflow = True
                    continue
                k = g.key()
                if k not in seen:
                    seen[k] = g
                    queue.append(g)
    return sorted(seen.values(), key=Scenario.key), overflow


def _with_descs(net: EventNetwork, roots: Sequence[ScenarioNode], bindings: dict[int, dict]) -> list[Scenario]:
    counter = itertools.count()

    def build(node: ScenarioNode) -> ScenarioNode:
        i = next(counter)
        desc = EventDescription(node.type, tuple(sorted(bindings.get(i, {}).items())))
        if node.spec is not None:
            return make_node(net, desc, spec=build(node.spec))
        return make_node(net, desc, [(label, build(child)) for label, child in node.features])

    return [Scenario(build(r)) for r in roots]


def enumerate_explanations(
    net: EventNetwork,
    observations: Sequence[Observation],
    params: SearchParams | None = None,
    rejected: list | None = None,
) -> RankedResult:
    """All minimal explanations within the bounds, by exhaustive construction.

    When ``rejected`` is a list, every placed candidate that fails the
    attribute constraints is appended to it as ``(members, Inconsistency)``.
    """
    params = params or SearchParams(max_nodes=8)
    _check_observations(net, observations)
    shapes, overflow = _shapes(net, params, len(observations))
    hit = overflow
    obs = list(observations)
    if params.allow_forest:
        groups = []
        for n in range(1, len(obs) + 1):
            for combo in itertools.combinations_with_replacement(range(len(shapes)), n):
                if sum(shapes[i].size for i in combo) <= params.max_nodes:
                    groups.append([shapes[i] for i in combo])
    else:
        groups = [[s] for s in shapes]

    found: dict[str, Explanation] = {}
    log_min = math.log(params.min_prob)
    universe = frozenset(a for o in obs for a, _ in o.desc.bindings)
    for group in groups:
        roots = [s.root for s in group]
        flat = flatten(roots)
        leaves = [fn.index for fn in flat if fn.node.is_leaf]
        if len(leaves) > len(obs):
            continue
        options = [[fn.index for fn in flat if net.is_a(fn.node.type, o.desc.type)] for o in obs]
        if any(not opt for opt in options):
            continue
        types = [fn.node.type for fn in flat]
        parents = [fn.parent for fn in flat]
        edges = [fn.edge for fn in flat]
        forest = len(roots) > 1
        for placement in itertools.product(*options):
            if not set(leaves) <= set(placement):
                continue
            bindings: dict[int, dict] = {}
            clash = False
            for o, at in zip(obs, placement):
                slot = bindings.setdefault(at, {})
                for a, v in o.desc.bindings:
                    if slot.setdefault(a, v) != v:
                        clash = True
            if clash:
                continue
            # Percolation only adds witnesses, so a placement that is already
            # redundant on its raw bindings stays redundant.
            raw = [set(bindings.get(i, {}).items()) for i in range(len(flat))]
            if not _minimal_flat(parents, _flat_witnesses(net, types, raw, obs), forest):
                continue
            derived, violation = percolate_flat(
                net, FlatProblem(types, [tuple(sorted(r)) for r in raw], parents, edges, universe)
            )
            if violation is not None:
                if rejected is not None:
                    i, c, msg = violation
                    rejected.append((_with_descs(net, roots, bindings), Inconsistency(node_id(i), c, msg)))
                continue
            if not _minimal_flat(parents, _flat_witnesses(net, types, [set(d) for d in derived], obs), forest):
                continue
            members = _with_descs(net, roots, bindings)
            e = _score(net, members, obs, params)
            if e is None:
                continue
            if e.log_probability < log_min:
                hit = True
                continue
            found.setdefault(e.key(), e)
    return RankedResult(tuple(rank(found.values())), not hit, params)
