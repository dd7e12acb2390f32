"""Command-line front end.

Exit status 0 on success with a nonempty result, 1 when a solution set is
decided empty, 2 on errors.  All output goes to standard output, diagnostics
to standard error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .dot import emit_dot
from .gui import (
    GuiRepositoryError,
    parse_gui_repository,
    render_net_json,
    resolved_nets,
    synthesize_gui,
)
from .inhabitation import (
    Goal,
    InhabitationError,
    NonterminalBudgetExceeded,
    Production,
    SearchConfig,
    SearchTimeout,
    TreeGrammar,
    goal_sort_key,
    inhabit,
)
from .repository import RepositoryError, SubstitutionSpaceExceeded
from .solutions import count_up_to, enumerate_terms, is_empty, is_finite, is_unique, render_term
from .subtyping import is_subtype
from .syntax import ParseError, parse_repository, parse_type, render_type
from .types import organize, path_sort_key


def _parse_timeout(text: str) -> float:
    text = text.strip()
    if text.endswith("ms"):
        return float(text[:-2]) / 1000.0
    if text.endswith("s"):
        return float(text[:-1])
    return float(text)


def _engine_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--mode", choices=["fcl", "bcl0"], default="bcl0")
    sub.add_argument("--max-size", type=int, default=10, metavar="N",
                     help="term size bound for enumeration (default 10)")
    sub.add_argument("--subst-cap", type=int, default=2**20, metavar="N")
    sub.add_argument("--timeout", type=_parse_timeout, default=None, metavar="D",
                     help="search timeout, e.g. 5s or 500ms")
    sub.add_argument("--jobs", type=int, default=1, metavar="N",
                     help="parallel goal expansions")


def _config(args: argparse.Namespace) -> SearchConfig:
    return SearchConfig(
        mode=args.mode,
        subst_cap=args.subst_cap,
        timeout=args.timeout,
        parallelism=args.jobs,
    )


def _load_repo(path: str):
    with open(path, encoding="utf-8") as handle:
        return parse_repository(handle.read())


def _load_gui_repo(path: str):
    with open(path, encoding="utf-8") as handle:
        return parse_gui_repository(handle.read())


def grammar_to_json(g: TreeGrammar) -> dict:
    """Stable machine interface: nonterminals listed start-first, productions
    referencing argument goals by index."""
    goals = g.goals()
    index = {goal: i for i, goal in enumerate(goals)}
    return {
        "start": render_type(g.start.ty),
        "nonterminals": [
            {
                "type": render_type(goal.ty),
                "productions": [
                    {"comb": p.comb, "args": [index[a] for a in p.arg_goals]}
                    for p in g.productions[goal]
                ],
            }
            for goal in goals
        ],
    }


def grammar_from_json(data: dict) -> TreeGrammar:
    goals = [Goal.of(parse_type(entry["type"])) for entry in data["nonterminals"]]
    productions: dict[Goal, tuple[Production, ...]] = {}
    for goal, entry in zip(goals, data["nonterminals"]):
        productions[goal] = tuple(
            Production(
                p["comb"], len(p["args"]), (), tuple(goals[i] for i in p["args"])
            )
            for p in entry["productions"]
        )
    return TreeGrammar(Goal.of(parse_type(data["start"])), productions)


def render_grammar(g: TreeGrammar) -> str:
    lines = []
    for goal in g.goals():
        rhs = [
            f"{p.comb}({', '.join(render_type(a.ty) for a in p.arg_goals)})"
            if p.arg_goals
            else p.comb
            for p in g.productions[goal]
        ]
        lines.append(f"{render_type(goal.ty)} ::= {' | '.join(rhs) if rhs else '<empty>'}")
    return "\n".join(lines) + "\n"


def _cmd_subtype(args) -> int:
    repo = _load_repo(args.repo)
    lhs = parse_type(args.lhs)
    rhs = parse_type(args.rhs)
    print("true" if is_subtype(repo.taxonomy, lhs, rhs) else "false")
    return 0


def _cmd_organize(args) -> int:
    t = parse_type(args.type)
    for p in sorted(organize(t), key=path_sort_key):
        print(render_type(p.to_type()))
    return 0


def _cmd_inhabit(args) -> int:
    repo = _load_repo(args.repo)
    grammar = inhabit(repo, parse_type(args.goal), _config(args))
    if args.format == "grammar":
        sys.stdout.write(render_grammar(grammar))
        return 0 if not is_empty(grammar) else 1
    if args.format == "json":
        print(json.dumps(grammar_to_json(grammar), indent=2))
        return 0 if not is_empty(grammar) else 1
    if args.format == "dot":
        sys.stdout.write(emit_dot(grammar))
        return 0 if not is_empty(grammar) else 1
    terms = list(enumerate_terms(grammar, args.max_size))
    for term in terms:
        print(render_term(term))
    if not terms:
        print("no inhabitants", file=sys.stderr)
        return 1
    return 0


def _cmd_enumerate(args) -> int:
    repo = _load_repo(args.repo)
    grammar = inhabit(repo, parse_type(args.goal), _config(args))
    terms = list(enumerate_terms(grammar, args.max_size))
    for term in terms:
        print(render_term(term))
    if not terms:
        print("no inhabitants", file=sys.stderr)
        return 1
    return 0


def _cmd_analyze(args) -> int:
    repo = _load_repo(args.repo)
    grammar = inhabit(repo, parse_type(args.goal), _config(args))
    empty = is_empty(grammar)
    finite = is_finite(grammar)
    unique = is_unique(grammar)
    count = count_up_to(grammar, args.max_size)
    print(
        f"empty={str(empty).lower()} finite={str(finite).lower()} "
        f"unique={str(unique).lower()} count≤{args.max_size}={count}"
    )
    return 0


def _cmd_gui_synth(args) -> int:
    gr = _load_gui_repo(args.gui_repo)
    ctx = frozenset(c.strip() for c in args.ctx.split(",") if c.strip())
    cfg = _config(args)
    results = synthesize_gui(gr, args.ain, ctx, cfg, args.max_size)
    for r in results:
        status = "unrealizable" if r.unrealizable else f"{len(r.realizations)} realization(s)"
        print(
            f"{r.transition.id} ({r.transition.label}): {status}",
            file=sys.stderr,
        )
    nets = resolved_nets(gr, args.ain, ctx, cfg, args.max_size, args.max_nets)
    if args.format == "dot":
        for net in nets:
            sys.stdout.write(emit_dot(net))
    else:
        print(json.dumps([json.loads(render_net_json(n)) for n in nets], indent=2))
    return 0 if nets else 1


def _cmd_dot(args) -> int:
    if args.gui_repo:
        gr = _load_gui_repo(args.gui_repo)
        ctx = frozenset(c.strip() for c in args.ctx.split(",") if c.strip())
        nets = resolved_nets(gr, args.ain, ctx, _config(args), args.max_size, 1)
        if not nets:
            print("no resolved net", file=sys.stderr)
            return 1
        sys.stdout.write(emit_dot(nets[0]))
        return 0
    repo = _load_repo(args.repo)
    grammar = inhabit(repo, parse_type(args.goal), _config(args))
    sys.stdout.write(emit_dot(grammar))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="combsynth",
        description="Composition synthesis by type inhabitation in combinatory "
        "logic with intersection types.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("subtype", help="decide lhs <= rhs under a repository's taxonomy")
    p.add_argument("--repo", required=True)
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.set_defaults(func=_cmd_subtype)

    p = sub.add_parser("organize", help="print the paths of a type")
    p.add_argument("--type", required=True)
    p.set_defaults(func=_cmd_organize)

    p = sub.add_parser("inhabit", help="search for inhabitants of a goal")
    p.add_argument("--repo", required=True)
    p.add_argument("--goal", required=True)
    p.add_argument("--format", choices=["terms", "grammar", "json", "dot"], default="terms")
    _engine_flags(p)
    p.set_defaults(func=_cmd_inhabit)

    p = sub.add_parser("enumerate", help="enumerate inhabitants up to a size bound")
    p.add_argument("--repo", required=True)
    p.add_argument("--goal", required=True)
    _engine_flags(p)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("analyze", help="emptiness/finiteness/uniqueness and a bounded count")
    p.add_argument("--repo", required=True)
    p.add_argument("--goal", required=True)
    _engine_flags(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("gui-synth", help="synthesize GUIF-AINs from a GUI repository")
    p.add_argument("--gui-repo", required=True)
    p.add_argument("--ain", required=True)
    p.add_argument("--ctx", required=True, help="comma-separated usage contexts, e.g. s,e,i")
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.add_argument("--max-nets", type=int, default=10)
    _engine_flags(p)
    p.set_defaults(func=_cmd_gui_synth)

    p = sub.add_parser("dot", help="render a grammar or a resolved net as DOT")
    p.add_argument("--repo")
    p.add_argument("--goal")
    p.add_argument("--gui-repo")
    p.add_argument("--ain")
    p.add_argument("--ctx", default="")
    _engine_flags(p)
    p.set_defaults(func=_cmd_dot)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        ParseError,
        RepositoryError,
        GuiRepositoryError,
        InhabitationError,
        SubstitutionSpaceExceeded,
        NonterminalBudgetExceeded,
        SearchTimeout,
        FileNotFoundError,
        ValueError,
        KeyError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
