"""Random knowledge bases, observations and scenarios for property tests."""

from __future__ import annotations

import random

from eventnet import KBError, parse_kb, parse_observations
from eventnet.network import EventDescription, legal_feature_links
from eventnet.scenario import (
    PreemptedPath,
    ScenarioError,
    extend_with_local_tree,
    extend_with_spec,
    new_scenario,
)

ATTRS = ("a", "b")
VALUES = ("x", "y")
LABELS = ("f", "g", "h")
PROBS = (0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 1.0)


def _bindings(rng: random.Random, chance: float) -> str:
    pairs = [f"{a} = {rng.choice(VALUES)}" for a in ATTRS if rng.random() < chance]
    return " { " + ", ".join(pairs) + " }" if pairs else ""


def random_kb_text(rng: random.Random, max_types: int = 8, max_links: int = 10) -> str:
    n = rng.randint(2, max_types)
    names = [f"t{i}" for i in range(n)]
    lines = []
    parents: dict[str, list[str]] = {}
    for i, name in enumerate(names):
        ps = []
        if i and rng.random() < 0.35:
            ps = sorted(set(rng.sample(names[:i], min(i, rng.choice((1, 1, 2))))))
        parents[name] = ps
        lines.append(f"type {name}" + (f" isa {', '.join(ps)}" if ps else ""))

    links = []
    seen = set()
    for _ in range(rng.randint(1, max_links)):
        src, label, tgt = rng.choice(names), rng.choice(LABELS), rng.choice(names)
        if (src, label) in seen:
            continue
        seen.add((src, label))
        links.append((src, label, tgt))
        lines.append(f"feature {label} : {src} -> {tgt}")

    for name in names:
        r = rng.random()
        if r < 0.08:
            lines.append(f"constraint {name} : a = {rng.choice(VALUES)}")
        elif r < 0.16:
            lines.append(f"constraint {name} : a != b")
    for src, label, _ in links:
        for a in ATTRS:
            if rng.random() < 0.4:
                b = a if rng.random() < 0.7 else rng.choice(ATTRS)
                lines.append(f"percolate {src}.{label} : {a} => {b}")

    culprits = rng.sample(names, rng.randint(1, min(3, n)))
    for name in culprits:
        lines.append(f"prior {name} = {rng.choice(PROBS)}")
        if rng.random() < 0.3:
            lines.append(f"prior {name}{_bindings(rng, 0.7) or ' { a = x }'} = {rng.choice(PROBS)}")
    for src, label, tgt in links:
        if rng.random() < 0.9:
            lines.append(f"cond {src} -{label}-> {tgt} = {rng.choice(PROBS)}")
        if rng.random() < 0.3:
            lines.append(f"cond {src}{_bindings(rng, 0.5)} -{label}-> {tgt}{_bindings(rng, 0.5)} = {rng.choice(PROBS)}")
    for name, ps in parents.items():
        for p in ps:
            if rng.random() < 0.8:
                lines.append(f"speccond {p} => {name} = {rng.choice(PROBS)}")
    for name in culprits:
        lines.append(f"culprit {name}")
    return "\n".join(lines) + "\n"


def random_kb(rng: random.Random, **kw):
    """A valid random network, retrying until one validates."""
    while True:
        text = random_kb_text(rng, **kw)
        try:
            return parse_kb(text), text
        except KBError:
            continue


def random_observations(rng: random.Random, net, max_obs: int = 3):
    names = [t.name for t in net.types]
    count = rng.randint(1, max_obs)
    text = "".join(f"obs o{i} {rng.choice(names)}{_bindings(rng, 0.4)}\n" for i in range(count))
    return parse_observations(text)


def extend_randomly(rng: random.Random, net, s):
    """One random legal extension step at a leaf; ``s`` itself when none applies."""
    fn = rng.choice([f for f in s.flat() if f.node.is_leaf])
    try:
        below = sorted(net.strict_descendants(fn.node.type))
        if below and rng.random() < 0.3:
            return extend_with_spec(net, s, fn.id, rng.choice(below))
        by_label: dict[str, list] = {}
        for link in legal_feature_links(net, fn.node.type):
            by_label.setdefault(link.feature, []).append(link)
        chosen = [rng.choice(v) for v in by_label.values() if rng.random() < 0.7]
        if not chosen:
            return s
        kids = [(c.feature, EventDescription(c.target, _random_desc_bindings(rng))) for c in chosen]
        return extend_with_local_tree(net, s, fn.id, kids)
    except (PreemptedPath, ScenarioError):
        return s


def random_scenario(rng: random.Random, net, steps: int = 6):
    """Grow a random scenario from a culprit root with the public constructors."""
    root = rng.choice(list(net.culprits) or [t.name for t in net.types])
    s = new_scenario(net, EventDescription(root, _random_desc_bindings(rng)))
    for _ in range(steps):
        s = extend_randomly(rng, net, s)
    return s


def _random_desc_bindings(rng: random.Random):
    return tuple((a, rng.choice(VALUES)) for a in ATTRS if rng.random() < 0.25)


def has_cycle(net) -> bool:
    """True when some type can reach itself through feature or spec edges."""
    succ = {
        t.name: set(net.strict_descendants(t.name)) | {l.target for l in legal_feature_links(net, t.name)}
        for t in net.types
    }
    state: dict[str, int] = {}

    def visit(n: str) -> bool:
        state[n] = 1
        for m in succ[n]:
            if state.get(m) == 1 or (m not in state and visit(m)):
                return True
        state[n] = 2
        return False

    return any(n not in state and visit(n) for n in succ)


def random_case(rng: random.Random):
    """A network, observations and search bounds sized for the brute-force oracle."""
    from eventnet.search import SearchParams

    net, text = random_kb(rng)
    obs = random_observations(rng, net)
    sizes = (3, 4, 5, 6) if has_cycle(net) else (4, 6, 8)
    params = SearchParams(
        top_k=rng.choice((1, 2, 3, 5)),
        max_nodes=rng.choice(sizes),
        min_prob=rng.choice((1e-3, 1e-4, 1e-6)),
    )
    return net, text, obs, params
