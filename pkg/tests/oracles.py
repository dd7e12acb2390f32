"""Brute-force term-set oracle and random repository generation.

The oracle builds every applicative term up to a size bound (per-head arity
bounded by the maximal instantiated path length, matching the search
discipline) and keeps those whose derivable-path intersection sits below the
goal, using the package's bottom-up type checker.  Grammar construction is
never consulted.
"""
from __future__ import annotations

import itertools
import random

from combsynth.inhabitation import SearchConfig
from combsynth.repository import Binding, Repository, atoms_of, instantiate
from combsynth.solutions import Term, derivable_paths, render_term
from combsynth.subtyping import Taxonomy, is_subtype
from combsynth.syntax import random_type
from combsynth.types import Const, Type, canonicalize, intersect


def all_terms(repo: Repository, arity: dict[str, int], size_bound: int) -> list[Term]:
    """Every applicative term of size <= bound over the repository's
    combinators, with per-head arity limits."""
    by_size: list[list[Term]] = [[]]
    by_size.append([Term(name) for name in repo.names()])
    for size in range(2, size_bound + 1):
        layer: list[Term] = []
        for name in repo.names():
            for k in range(1, min(arity[name], size - 1) + 1):
                for split in _compositions(size - 1, k):
                    pools = [by_size[s] for s in split]
                    for combo in itertools.product(*pools):
                        layer.append(Term(name, combo))
        by_size.append(layer)
    return [t for layer in by_size for t in layer]


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def brute_force_solutions(
    repo: Repository, goal: Type, size_bound: int, cfg: SearchConfig | None = None
) -> set[str]:
    """Rendered terms of size <= bound whose derivable paths reach the goal."""
    cfg = cfg or SearchConfig()
    goal = canonicalize(goal)
    universe = atoms_of(repo, goal)
    arity = {
        b.name: max(
            (len(p.args) for p in instantiate(b, universe, cfg.mode, cfg.subst_cap)),
            default=0,
        )
        for b in repo.bindings
    }
    cache: dict[Term, frozenset] = {}
    out: set[str] = set()
    for term in all_terms(repo, arity, size_bound):
        paths = derivable_paths(repo, term, universe, cfg, cache)
        derived = intersect(*(p.to_type() for p in paths))
        if is_subtype(repo.taxonomy, derived, goal):
            out.add(render_term(term))
    return out


def random_repository(rng: random.Random) -> tuple[Repository, Type]:
    """A small random repository (<= 5 combinators, <= 3 atoms, depth <= 3)
    plus a random atomic goal."""
    consts = ["a", "b", "c"][: rng.randint(2, 3)]
    vars_ = ["x", "y"] if rng.random() < 0.5 else []
    n_combs = rng.randint(2, 5)
    bindings = []
    for i in range(n_combs):
        ty = canonicalize(random_type(rng, rng.randint(1, 3), consts, vars_))
        bindings.append(Binding(f"c{i}", ty))
    edges = frozenset([("a", "b")]) if rng.random() < 0.3 else frozenset()
    repo = Repository(tuple(bindings), Taxonomy(edges))
    goal = Const(rng.choice(consts))
    return repo, goal
