"""Parser and canonical serializer for ``.ekb`` knowledge bases and ``.obs`` files.

One declaration per line; ``#`` starts a comment::

    type flu isa disease
    feature infect : flu -> flu
    constraint flu : agent != infectee
    percolate flu.infect : agent => infectee
    prior flu = 0.001
    cond flu -infect-> flu = 0.3
    speccond do-one-thing => shop-in-supermarket = 0.1
    culprit flu

Observation files hold ``obs [LABEL] TYPE [{ attr = value, ... }]`` lines.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .network import (
    EQ_ATTR,
    EQ_CONST,
    NEQ_ATTR,
    NEQ_CONST,
    EventDescription,
    EventNetwork,
    FeatureCond,
    FeatureDecl,
    LocalConstraint,
    PercolationConstraint,
    Prior,
    SourceSpan,
    SpecCond,
    TypeDecl,
    Violation,
    ValidationReport,
    make_bindings,
    validate_network,
)

_NAME = r"[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z0-9_]+)*"
_TOKEN_RE = re.compile(
    rf"""
    (?P<ws>[ \t\r]+)
  | (?P<farrow>-(?P<flabel>{_NAME})->)
  | (?P<op>=>|->|!=|[=,{{}}:.])
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<number>[0-9][A-Za-z0-9_.+\-]*)
  | (?P<name>{_NAME})
    """,
    re.VERBOSE,
)
_BARE_CONST = re.compile(rf"(?:{_NAME}|[0-9][A-Za-z0-9_.+\-]*)\Z")
_PROB = re.compile(r"(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][-+]?[0-9]+)?\Z")


@dataclass(frozen=True)
class Diagnostic:
    span: SourceSpan
    message: str

    def __str__(self) -> str:
        return f"{self.span.line}:{self.span.column}: {self.message}"


class KBError(Exception):
    """Rejected input.  ``diagnostics`` is never empty."""

    def __init__(self, diagnostics: list[Diagnostic], source: str = "<input>"):
        self.diagnostics = diagnostics
        self.source = source
        super().__init__("\n".join(f"{source}:{d}" for d in diagnostics))


class KBSyntaxError(KBError):
    pass


class KBValidationError(KBError):
    def __init__(self, diagnostics, report: ValidationReport, source="<input>"):
        super().__init__(diagnostics, source)
        self.report = report


@dataclass(frozen=True)
class Observation:
    id: str
    desc: EventDescription

    def __str__(self) -> str:
        return f"{self.id}: {self.desc}"


@dataclass(frozen=True)
class _Tok:
    kind: str  # name | const | op | farrow | eol
    text: str
    col: int


class _LineParser:
    def __init__(self, text: str, lineno: int):
        self.lineno = lineno
        self.toks = self._lex(text)
        self.pos = 0

    def _lex(self, text: str) -> list[_Tok]:
        toks = []
        i = 0
        while i < len(text):
            if text[i] == "#":
                break
            m = _TOKEN_RE.match(text, i)
            if not m:
                raise self.error(f"unexpected character {text[i]!r}", i + 1)
            kind = m.lastgroup
            if kind == "flabel":
                kind = "farrow"
            if kind == "farrow":
                toks.append(_Tok("farrow", m.group("flabel"), i + 1))
            elif kind == "string":
                raw = m.group("string")[1:-1]
                toks.append(_Tok("const", re.sub(r"\\(.)", r"\1", raw), i + 1))
            elif kind == "number":
                toks.append(_Tok("number", m.group(), i + 1))
            elif kind != "ws":
                toks.append(_Tok(kind, m.group(), i + 1))
            i = m.end()
        toks.append(_Tok("eol", "", len(text[:i].rstrip()) + 1))
        return toks

    def error(self, message: str, col: int | None = None) -> KBSyntaxError:
        if col is None:
            col = self.peek().col
        return KBSyntaxError([Diagnostic(SourceSpan(self.lineno, col), message)])

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def span(self) -> SourceSpan:
        return SourceSpan(self.lineno, self.peek().col)

    def next(self) -> _Tok:
        tok = self.toks[self.pos]
        if tok.kind != "eol":
            self.pos += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def expect_op(self, text: str) -> None:
        if not self.at("op", text):
            raise self.error(f"expected '{text}'" + self._found())
        self.next()

    def name(self, what: str) -> str:
        if not self.at("name"):
            raise self.error(f"expected {what}" + self._found())
        return self.next().text

    def const(self) -> str:
        tok = self.peek()
        if tok.kind in ("name", "number", "const"):
            return self.next().text
        raise self.error("expected a constant" + self._found())

    def prob(self) -> float:
        tok = self.peek()
        if tok.kind != "number" or not _PROB.match(tok.text):
            raise self.error("expected a probability" + self._found())
        self.next()
        return float(tok.text)

    def end(self) -> None:
        if not self.at("eol"):
            raise self.error("unexpected " + repr(self.peek().text))

    def _found(self) -> str:
        tok = self.peek()
        return ", found end of line" if tok.kind == "eol" else f", found {tok.text!r}"

    def bindings(self):
        if not self.at("op", "{"):
            return ()
        self.next()
        items = []
        if self.at("op", "}"):
            self.next()
            return ()
        while True:
            col = self.peek().col
            attr = self.name("attribute name")
            self.expect_op("=")
            value = self.const()
            if any(a == attr for a, _ in items):
                raise self.error(f"attribute {attr} bound twice", col)
            items.append((attr, value))
            if self.at("op", ","):
                self.next()
                continue
            self.expect_op("}")
            return make_bindings(items)


def _lines(text: str):
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if stripped:
            yield lineno, line


def _parse_decls(text: str):
    types, features, constraints, percolations, stats, culprits = [], [], [], [], [], []
    diagnostics: list[Diagnostic] = []
    for lineno, line in _lines(text):
        try:
            p = _LineParser(line, lineno)
            span = p.span()
            keyword = p.name("a declaration keyword")
            if keyword == "type":
                name = p.name("type name")
                parents = []
                if p.at("name", "isa"):
                    p.next()
                    parents.append(p.name("parent type name"))
                    while p.at("op", ","):
                        p.next()
                        parents.append(p.name("parent type name"))
                p.end()
                types.append((name, tuple(parents), span))
            elif keyword == "feature":
                label = p.name("feature name")
                p.expect_op(":")
                source = p.name("source type name")
                p.expect_op("->")
                target = p.name("target type name")
                p.end()
                features.append(FeatureDecl(label, source, target, span))
            elif keyword == "constraint":
                owner = p.name("type name")
                p.expect_op(":")
                attr = p.name("attribute name")
                if p.at("op", "="):
                    negated = False
                elif p.at("op", "!="):
                    negated = True
                else:
                    raise p.error("expected '=' or '!='" + p._found())
                p.next()
                bare = p.at("name")
                other = p.const()
                p.end()
                # bare names are resolved once every attribute use is known
                constraints.append((LocalConstraint(owner, NEQ_CONST if negated else EQ_CONST, attr, other, span), bare))
            elif keyword == "percolate":
                parent = p.name("type name")
                p.expect_op(".")
                feature = p.name("feature name")
                p.expect_op(":")
                child_attr = p.name("child attribute")
                p.expect_op("=>")
                parent_attr = p.name("parent attribute")
                p.end()
                percolations.append(PercolationConstraint(parent, feature, child_attr, parent_attr, span))
            elif keyword == "prior":
                name = p.name("type name")
                b = p.bindings()
                p.expect_op("=")
                prob = p.prob()
                p.end()
                stats.append(Prior(EventDescription(name, b), prob, span))
            elif keyword == "cond":
                parent = p.name("type name")
                pb = p.bindings()
                if not p.at("farrow"):
                    raise p.error("expected '-FEATURE->'" + p._found())
                feature = p.next().text
                child = p.name("type name")
                cb = p.bindings()
                p.expect_op("=")
                prob = p.prob()
                p.end()
                stats.append(FeatureCond(EventDescription(parent, pb), feature, EventDescription(child, cb), prob, span))
            elif keyword == "speccond":
                general = p.name("type name")
                p.expect_op("=>")
                specific = p.name("type name")
                p.expect_op("=")
                prob = p.prob()
                p.end()
                stats.append(SpecCond(general, specific, prob, span))
            elif keyword == "culprit":
                name = p.name("type name")
                p.end()
                culprits.append((name, span))
            else:
                raise KBSyntaxError([Diagnostic(span, f"unknown declaration keyword {keyword!r}")])
        except KBSyntaxError as exc:
            diagnostics.extend(exc.diagnostics)
    return diagnostics, types, features, constraints, percolations, stats, culprits


def parse_kb(text: str, source: str = "<input>", spec_preemption_variant: str = "primed") -> EventNetwork:
    """Parse and validate a knowledge base.

    Raises :class:`KBSyntaxError` for malformed lines and
    :class:`KBValidationError` when the declarations do not form a valid
    network.
    """
    diagnostics, types, features, constraints, percolations, stats, culprits = _parse_decls(text)
    if diagnostics:
        raise KBSyntaxError(diagnostics, source)

    attrs = {c.attr for c, _ in constraints}
    for pc in percolations:
        attrs.update((pc.child_attr, pc.parent_attr))
    for st in stats:
        for d in (st.desc,) if isinstance(st, Prior) else (st.parent, st.child) if isinstance(st, FeatureCond) else ():
            attrs.update(a for a, _ in d.bindings)
    resolved = []
    for c, bare in constraints:
        if bare and c.other in attrs:
            relation = EQ_ATTR if c.relation == EQ_CONST else NEQ_ATTR
            c = LocalConstraint(c.owner, relation, c.attr, c.other, c.span)
        resolved.append(c)
    constraints = resolved

    extra: list[Violation] = []
    culprit_names = set()
    declared = {name for name, _, _ in types}
    for name, span in culprits:
        if name not in declared:
            extra.append(Violation(f"culprit on unknown type {name}", span))
        elif name in culprit_names:
            extra.append(Violation(f"duplicate culprit {name}", span))
        culprit_names.add(name)
    net = EventNetwork(
        tuple(TypeDecl(name, parents, name in culprit_names, span) for name, parents, span in types),
        tuple(features),
        tuple(constraints),
        tuple(percolations),
        tuple(stats),
        spec_preemption_variant,
    )
    report = validate_network(net)
    culprit_spans = dict(reversed(culprits))
    report = ValidationReport(
        tuple(
            Violation(v.message, culprit_spans.get(v.message.split()[1], v.span))
            if v.message.startswith("culprit ") and v.message.endswith(" has no prior")
            else v
            for v in report.violations
        )
    )
    if extra or not report.ok:
        report = ValidationReport(tuple(extra) + report.violations)
        diags = [
            Diagnostic(v.span or SourceSpan(1, 1), v.message)
            for v in sorted(report.violations, key=lambda v: (v.span or SourceSpan(1, 1), v.message))
        ]
        raise KBValidationError(diags, report, source)
    return net


def parse_observations(text: str, source: str = "<input>") -> list[Observation]:
    out: list[Observation] = []
    diagnostics: list[Diagnostic] = []
    labels: set[str] = set()
    for lineno, line in _lines(text):
        try:
            p = _LineParser(line, lineno)
            span = p.span()
            keyword = p.name("'obs'")
            if keyword != "obs":
                raise KBSyntaxError([Diagnostic(span, f"expected 'obs', found {keyword!r}")])
            label_col = p.peek().col
            first = p.name("type name")
            if p.at("name"):
                label, type_name = first, p.next().text
            else:
                label, type_name = None, first
            b = p.bindings()
            p.end()
            if label is None:
                label = f"obs{len(out) + 1}"
            if label in labels:
                raise KBSyntaxError([Diagnostic(SourceSpan(lineno, label_col), f"duplicate observation label {label}")])
            labels.add(label)
            out.append(Observation(label, EventDescription(type_name, b)))
        except KBSyntaxError as exc:
            diagnostics.extend(exc.diagnostics)
    if diagnostics:
        raise KBSyntaxError(diagnostics, source)
    return out


# ---------------------------------------------------------------------------
# Serialization


def format_const(value: str) -> str:
    if _BARE_CONST.match(value):
        return value
    escaped = value.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def format_prob(p: float) -> str:
    return repr(float(p))


def format_bindings(bindings) -> str:
    if not bindings:
        return ""
    return " { " + ", ".join(f"{a} = {format_const(v)}" for a, v in bindings) + " }"


def _format_desc(desc: EventDescription) -> str:
    return desc.type + format_bindings(desc.bindings)


def serialize_kb(net: EventNetwork) -> str:
    """Canonical text: declarations grouped by kind, each group sorted."""
    lines: list[str] = []
    for t in net.types:
        lines.append(f"type {t.name}" + (" isa " + ", ".join(t.parents) if t.parents else ""))
    for f in net.features:
        lines.append(f"feature {f.label} : {f.source} -> {f.target}")
    for c in net.local_constraints:
        op = "=" if c.relation in (EQ_ATTR, EQ_CONST) else "!="
        if c.relation in (EQ_ATTR, NEQ_ATTR):
            other = c.other
        elif c.other in net.attributes:
            other = '"' + c.other.replace("\\", "\\\\").replace('"', '\\"') + '"'
        else:
            other = format_const(c.other)
        lines.append(f"constraint {c.owner} : {c.attr} {op} {other}")
    for pc in net.percolation_constraints:
        lines.append(str(pc))
    for s in net.statistics:
        if isinstance(s, Prior):
            lines.append(f"prior {_format_desc(s.desc)} = {format_prob(s.p)}")
        elif isinstance(s, FeatureCond):
            lines.append(f"cond {_format_desc(s.parent)} -{s.feature}-> {_format_desc(s.child)} = {format_prob(s.p)}")
        else:
            lines.append(f"speccond {s.general} => {s.specific} = {format_prob(s.p)}")
    for name in net.culprits:
        lines.append(f"culprit {name}")
    return "".join(line + "\n" for line in lines)


def serialize_observations(observations) -> str:
    return "".join(f"obs {o.id} {_format_desc(o.desc)}\n" for o in observations)


def load_kb(path, spec_preemption_variant: str = "primed") -> EventNetwork:
    with open(path, encoding="utf-8") as fh:
        return parse_kb(fh.read(), str(path), spec_preemption_variant)


def load_observations(path) -> list[Observation]:
    with open(path, encoding="utf-8") as fh:
        return parse_observations(fh.read(), str(path))
