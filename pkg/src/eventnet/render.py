"""Text, dot and json renderings of scenarios and ranked results."""

from __future__ import annotations

import json
import math
from typing import Sequence

from .network import SPEC
from .scenario import Explanation, FlatNode, Scenario, ScenarioNode, flatten

FORMATS = ("json", "text", "dot")


def _roots(item) -> list[ScenarioNode]:
    if isinstance(item, Explanation):
        return [m.root for m in item.members]
    if isinstance(item, Scenario):
        return [item.root]
    if isinstance(item, ScenarioNode):
        return [item]
    return [m.root if isinstance(m, Scenario) else m for m in item]


def _attrs(node: ScenarioNode) -> str:
    return "{" + ",".join(f"{a}={v}" for a, v in node.desc.bindings) + "}"


def _children_of(flat: Sequence[FlatNode]) -> dict[int, list[FlatNode]]:
    out: dict[int, list[FlatNode]] = {}
    for fn in flat:
        if fn.parent is not None:
            out.setdefault(fn.parent, []).append(fn)
    return out


# ---------------------------------------------------------------------------
# json


def _float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    text = "%.17g" % x
    return text if any(c in text for c in ".en") else text + ".0"


def _dump(o, indent: int, out: list[str]) -> None:
    pad = "  " * (indent + 1)
    if isinstance(o, bool) or o is None:
        out.append(json.dumps(o))
    elif isinstance(o, float):
        out.append(_float(o))
    elif isinstance(o, (int, str)):
        out.append(json.dumps(o))
    elif isinstance(o, dict):
        if not o:
            out.append("{}")
            return
        out.append("{\n")
        for i, k in enumerate(sorted(o)):
            out.append(f"{pad}{json.dumps(str(k))}: ")
            _dump(o[k], indent + 1, out)
            out.append(",\n" if i < len(o) - 1 else "\n")
        out.append("  " * indent + "}")
    elif isinstance(o, (list, tuple)):
        if not o:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(o):
            out.append(pad)
            _dump(v, indent + 1, out)
            out.append(",\n" if i < len(o) - 1 else "\n")
        out.append("  " * indent + "]")
    else:
        raise TypeError(f"cannot serialize {type(o).__name__}")


def dumps(obj) -> str:
    """Stable json: sorted keys, floats with 17 significant digits."""
    out: list[str] = []
    _dump(obj, 0, out)
    return "".join(out)


def node_json(flat: Sequence[FlatNode], index: int, kids=None) -> dict:
    kids = kids if kids is not None else _children_of(flat)
    fn = flat[index]
    children = []
    for c in kids.get(index, []):
        entry: dict = {"via": "spec" if c.edge == SPEC else "feature", "node": node_json(flat, c.index, kids)}
        if c.edge != SPEC:
            entry["label"] = c.edge
        children.append(entry)
    return {"id": fn.id, "type": fn.node.type, "attrs": dict(fn.node.desc.bindings), "children": children}


def explanation_json(e: Explanation) -> dict:
    flat = e.flat()
    kids = _children_of(flat)
    roots = [fn.index for fn in flat if fn.parent is None]
    out = {
        "probability": e.probability,
        "log10_probability": e.log_probability / math.log(10),
        "node_count": e.node_count,
        "root": node_json(flat, roots[0], kids),
        "factors": [{"kind": f.kind, "at": f.at, "p": f.p, "assumed": f.assumed} for f in e.factors],
        "coverage": dict(e.coverage),
    }
    if len(roots) > 1:
        out["roots"] = [node_json(flat, r, kids) for r in roots]
    return out


def result_json(result) -> str:
    doc = {
        "explanations": [explanation_json(e) for e in result.explanations],
        "exhausted": result.exhausted,
        "params": result.params.as_dict(),
    }
    return dumps(doc) + "\n"


# ---------------------------------------------------------------------------
# text and dot


def scenario_text(item) -> str:
    flat = flatten(_roots(item))
    lines = []
    depth: dict[int, int] = {}
    for fn in flat:
        d = 0 if fn.parent is None else depth[fn.parent] + 1
        depth[fn.index] = d
        head = "" if fn.parent is None else ("=> " if fn.edge == SPEC else f"-{fn.edge}-> ")
        lines.append(f"{'  ' * d}{head}{fn.id} {fn.node.type}{_attrs(fn.node)}")
    return "\n".join(lines) + "\n"


def result_text(result) -> str:
    out = []
    for rank, e in enumerate(result.explanations, 1):
        out.append(f"#{rank} p={e.probability:.6g} nodes={e.node_count}")
        out.append(scenario_text(e).rstrip("\n"))
        out.append("factors: " + " ".join(f"{f.at}={f.p:g}{'*' if f.assumed else ''}" for f in e.factors))
        out.append("coverage: " + " ".join(f"{o}@{n}" for o, n in e.coverage))
        out.append("")
    out.append(f"{len(result.explanations)} explanation(s), exhausted={'true' if result.exhausted else 'false'}")
    return "\n".join(out) + "\n"


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def scenario_dot(item, name: str = "scenario") -> str:
    flat = flatten(_roots(item))
    lines = [f"digraph {_dot_quote(name)} {{"]
    for fn in flat:
        label = _dot_quote(fn.node.type)[:-1] + "\\n" + _dot_quote(_attrs(fn.node))[1:]
        lines.append(f"  {fn.id} [label={label}];")
    for fn in flat:
        if fn.parent is not None:
            lines.append(f"  n{fn.parent + 1} -> {fn.id} [label={_dot_quote(fn.edge)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def result_dot(result) -> str:
    return "".join(scenario_dot(e, f"explanation{i}") for i, e in enumerate(result.explanations, 1))


def render(item, fmt: str = "text") -> str:
    """Render a scenario, node, explanation or forest."""
    if fmt == "text":
        return scenario_text(item)
    if fmt == "dot":
        return scenario_dot(item)
    if fmt in ("json", "json-fragment"):
        flat = flatten(_roots(item))
        kids = _children_of(flat)
        nodes = [node_json(flat, fn.index, kids) for fn in flat if fn.parent is None]
        return dumps(nodes[0] if len(nodes) == 1 else nodes) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def render_result(result, fmt: str = "json") -> str:
    if fmt == "json":
        return result_json(result)
    if fmt == "text":
        return result_text(result)
    if fmt == "dot":
        return result_dot(result)
    raise ValueError(f"unknown format {fmt!r}")
