"""Analyses and enumeration over tree grammars, plus an independent
bottom-up type-checking oracle for applicative terms."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .inhabitation import Goal, SearchConfig, TreeGrammar
from .repository import Repository, atoms_of, instantiate
from .subtyping import is_subtype
from .types import Path, Type, canonicalize, intersect


@dataclass(frozen=True, slots=True)
class Term:
    """An applicative term ``head(arg1, ..., argn)``."""

    head: str
    args: tuple["Term", ...] = ()

    @property
    def size(self) -> int:
        return 1 + sum(a.size for a in self.args)

    def __repr__(self) -> str:
        return render_term(self)


def render_term(t: Term) -> str:
    if not t.args:
        return t.head
    return f"{t.head}({', '.join(render_term(a) for a in t.args)})"


# ---------------------------------------------------------------------------
# grammar analyses


def productive_goals(g: TreeGrammar) -> frozenset[Goal]:
    """Least fixed point: a goal is productive iff some production has all
    argument goals productive."""
    productive: set[Goal] = set()
    changed = True
    while changed:
        changed = False
        for goal, prods in g.productions.items():
            if goal in productive:
                continue
            if any(all(a in productive for a in p.arg_goals) for p in prods):
                productive.add(goal)
                changed = True
    return frozenset(productive)


def _live_edges(g: TreeGrammar) -> dict[Goal, set[Goal]]:
    """Goal-dependency edges restricted to productive goals reachable from start."""
    productive = productive_goals(g)
    edges: dict[Goal, set[Goal]] = {}
    if g.start not in productive:
        return edges
    stack = [g.start]
    while stack:
        goal = stack.pop()
        if goal in edges:
            continue
        edges[goal] = set()
        for p in g.productions[goal]:
            if all(a in productive for a in p.arg_goals):
                for a in p.arg_goals:
                    edges[goal].add(a)
                    if a not in edges:
                        stack.append(a)
    return edges


def is_empty(g: TreeGrammar) -> bool:
    return g.start not in productive_goals(g)


def is_finite(g: TreeGrammar) -> bool:
    """True iff the productive part reachable from start is acyclic."""
    edges = _live_edges(g)
    state: dict[Goal, int] = {}  # 1 = on stack, 2 = done

    def dfs(goal: Goal) -> bool:
        state[goal] = 1
        for nxt in edges[goal]:
            mark = state.get(nxt)
            if mark == 1:
                return False
            if mark is None and not dfs(nxt):
                return False
        state[goal] = 2
        return True

    return all(dfs(goal) for goal in edges if goal not in state)


def _terms_of_size(
    g: TreeGrammar, goal: Goal, size: int, memo: dict[tuple[Goal, int], tuple[Term, ...]]
) -> tuple[Term, ...]:
    key = (goal, size)
    cached = memo.get(key)
    if cached is not None:
        return cached
    # recursion terminates: argument sizes are positive and sum to size - 1
    found: set[Term] = set()
    for p in g.productions.get(goal, ()):
        if p.n == 0:
            if size == 1:
                found.add(Term(p.comb))
            continue
        if size - 1 < p.n:
            continue
        for split in _compositions(size - 1, p.n):
            pools = [
                _terms_of_size(g, arg, s, memo) for arg, s in zip(p.arg_goals, split)
            ]
            if all(pools):
                found.update(_products(p.comb, pools))
    out = tuple(sorted(found, key=render_term))
    memo[key] = out
    return out


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All ways to write ``total`` as an ordered sum of ``parts`` positives."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _products(head: str, pools: list[tuple[Term, ...]]) -> Iterator[Term]:
    for combo in itertools.product(*pools):
        yield Term(head, combo)


def enumerate_terms(g: TreeGrammar, size_bound: int) -> Iterator[Term]:
    """All distinct terms of size <= bound, in (size, textual) order."""
    memo: dict[tuple[Goal, int], tuple[Term, ...]] = {}
    for size in range(1, size_bound + 1):
        yield from _terms_of_size(g, g.start, size, memo)


def count_up_to(g: TreeGrammar, size_bound: int) -> int:
    """Number of distinct terms of size <= bound.

    Computed over per-size distinct term sets rather than a counting
    recurrence: productions with overlapping argument languages may generate
    the same term, which a numeric recurrence would count twice.
    """
    return sum(1 for _ in enumerate_terms(g, size_bound))


def _max_term_size(g: TreeGrammar) -> int:
    """Largest generable term size; only meaningful on finite grammars."""
    edges = _live_edges(g)
    productive = set(edges)
    memo: dict[Goal, int] = {}

    def best(goal: Goal) -> int:
        if goal in memo:
            return memo[goal]
        sizes = []
        for p in g.productions[goal]:
            if all(a in productive for a in p.arg_goals):
                sizes.append(1 + sum(best(a) for a in p.arg_goals))
        memo[goal] = max(sizes, default=0)
        return memo[goal]

    return best(g.start) if g.start in productive else 0


def is_unique(g: TreeGrammar) -> bool:
    """True iff the grammar generates exactly one term."""
    if not is_finite(g):
        return False
    bound = _max_term_size(g)
    if bound == 0:
        return False
    return count_up_to(g, bound) == 1


# ---------------------------------------------------------------------------
# independent type-checking oracle


def derivable_paths(
    repo: Repository,
    term: Term,
    universe: frozenset[str],
    cfg: SearchConfig,
    cache: dict[Term, frozenset[Path]] | None = None,
) -> frozenset[Path]:
    """All ground paths derivable for a term, computed bottom-up.

    For a combinator these are its instantiated paths; for an application
    ``x(e1, ..., en)`` they are the stripped targets of instantiated paths of
    ``x`` whose first ``n`` argument types each sit above the full derivable
    intersection of the corresponding subterm.  The empty set means the term
    inhabits only omega.
    """
    if cache is None:
        cache = {}
    cached = cache.get(term)
    if cached is not None:
        return cached
    binding = repo[term.head]
    paths = instantiate(binding, universe, cfg.mode, cfg.subst_cap)
    n = len(term.args)
    if n == 0:
        out = paths
    else:
        arg_types = [
            intersect(*(p.to_type() for p in derivable_paths(repo, a, universe, cfg, cache)))
            for a in term.args
        ]
        out = frozenset(
            Path(p.args[n:], p.leaf)
            for p in paths
            if len(p.args) >= n
            and all(is_subtype(repo.taxonomy, arg_types[i], p.args[i]) for i in range(n))
        )
    cache[term] = out
    return out


def typecheck_term(
    repo: Repository, term: Term, goal: Goal | Type, cfg: SearchConfig | None = None
) -> bool:
    """Brute-force oracle, independent of the search engine: does the
    intersection of the term's derivable paths sit below the goal?"""
    cfg = cfg or SearchConfig()
    goal_ty = goal.ty if isinstance(goal, Goal) else canonicalize(goal)
    universe = atoms_of(repo, goal_ty)
    paths = derivable_paths(repo, term, universe, cfg)
    derived = intersect(*(p.to_type() for p in paths))
    return is_subtype(repo.taxonomy, derived, goal_ty)
