"""Command-line entry point.

Exit codes: 0 success, 1 no explanation found, 2 input or usage error,
3 invalid knowledge base.  Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys

from .kbdsl import KBSyntaxError, KBValidationError, load_kb, load_observations
from .network import UnknownType, inherited_feature_paths
from .render import render_result
from .search import SearchParams, UnknownObservationType, enumerate_explanations, explain

OK, NO_EXPLANATION, USAGE, INVALID_KB = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE)


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _probability(text: str) -> float:
    value = float(text)
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError("must lie in (0, 1]")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="eventnet", description="Abductive explanation over event networks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def kb_args(p):
        p.add_argument("--kb", required=True, help="knowledge base file")
        p.add_argument("--variant", choices=("primed", "literal"), default="primed",
                       help="specialization pre-emption rule")

    p = sub.add_parser("validate", help="check a knowledge base")
    kb_args(p)

    for name, helptext in (("explain", "rank the best explanations"),
                           ("enumerate", "list every explanation by exhaustive search")):
        p = sub.add_parser(name, help=helptext)
        kb_args(p)
        p.add_argument("--obs", required=True, help="observation file")
        p.add_argument("--top-k", type=_positive, default=3 if name == "explain" else None)
        p.add_argument("--max-nodes", type=_positive, default=64 if name == "explain" else None,
                       required=name == "enumerate")
        p.add_argument("--min-prob", type=_probability, default=1e-12)
        p.add_argument("--assume-one", action="store_true", help="use 1.0 for missing statistics")
        p.add_argument("--allow-forest", action="store_true", help="allow several unrelated causes")
        p.add_argument("--format", choices=("json", "text", "dot"), default="json")
        p.add_argument("--workers", type=_positive, default=1)

    p = sub.add_parser("paths", help="show inherited feature paths and pre-emption")
    kb_args(p)
    p.add_argument("--type", required=True, dest="type_name")
    return parser


def _load_net(args):
    return load_kb(args.kb, args.variant)


def cmd_validate(args) -> int:
    _load_net(args)
    print("ok")
    return OK


def cmd_query(args) -> int:
    net = _load_net(args)
    observations = load_observations(args.obs)
    if args.command == "explain":
        params = SearchParams(args.top_k, args.max_nodes, args.min_prob, args.assume_one,
                              args.allow_forest, args.workers)
        result = explain(net, observations, params)
    else:
        params = SearchParams(args.top_k or 1, args.max_nodes, args.min_prob, args.assume_one,
                              args.allow_forest, args.workers)
        result = enumerate_explanations(net, observations, params)
        if args.top_k:
            result = type(result)(result.explanations[: args.top_k], result.exhausted, params)
    sys.stdout.write(render_result(result, args.format))
    return OK if result.explanations else NO_EXPLANATION


def cmd_paths(args) -> int:
    net = _load_net(args)
    kept = preempted = 0
    for link, by in inherited_feature_paths(net, args.type_name):
        head = f"{link.feature} via {link.via} -> {link.target}"
        if by is None:
            kept += 1
            print(f"{head}: kept")
        else:
            preempted += 1
            print(f"{head}: preempted by {by.source} -{by.label}-> {by.target}")
    print(f"{kept} kept, {preempted} preempted")
    return OK


COMMANDS = {"validate": cmd_validate, "explain": cmd_query, "enumerate": cmd_query, "paths": cmd_paths}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except KBValidationError as exc:
        print(exc, file=sys.stderr)
        return INVALID_KB
    except KBSyntaxError as exc:
        print(exc, file=sys.stderr)
        return USAGE
    except UnknownType as exc:
        print(f"error: unknown type {exc.args[0]}", file=sys.stderr)
        return USAGE
    except UnknownObservationType as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
