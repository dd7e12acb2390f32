"""Axiom-closure saturation oracle for the subtype relation.

Builds the relation bottom-up from the axioms over a finite working set of
types: reflexivity, top element, omega <= omega -> omega, intersection
projection and introduction, arrow distribution over shared sources, arrow
congruence, declared taxonomy edges, and transitivity (as a boolean matrix
fixpoint).  Derivations may pass through types outside the queried universe,
so the working set closes the universe under subterms, sub-intersections,
organized path bundles, and grouped arrow-target merges; the queried relation
is still the axiom closure restricted to universe pairs.

Deliberately independent of the decision procedure in the package: forward
closure here, backward structural analysis there.
"""
from __future__ import annotations

import itertools

import numpy as np

from combsynth.types import (
    Arrow,
    Const,
    Inter,
    OMEGA,
    OmegaType,
    Type,
    canonicalize,
    intersect,
    organize,
    parts_of,
    render_organized,
    sort_key,
)


def build_universe(consts: tuple[str, ...] = ("a", "b", "c"), depth: int = 2) -> list[Type]:
    """All canonical types of the given depth over the constants plus omega;
    both the arrow and the (binary) intersection constructor add one level."""
    layer: set[Type] = {OMEGA, *(Const(c) for c in consts)}
    for _ in range(depth):
        new = set(layer)
        for x, y in itertools.product(layer, repeat=2):
            new.add(canonicalize(Arrow(x, y)))
            new.add(canonicalize(Inter((x, y))))
        layer = new
    return sorted(layer, key=sort_key)


def _sub_intersections(t: Type) -> set[Type]:
    parts = parts_of(t)
    if len(parts) < 2:
        return set()
    out = set()
    for size in range(1, len(parts)):
        for combo in itertools.combinations(parts, size):
            out.add(intersect(*combo))
    return out


def _subterms(t: Type) -> set[Type]:
    out = {t}
    if isinstance(t, Arrow):
        out |= _subterms(t.source) | _subterms(t.target)
    elif isinstance(t, Inter):
        for p in t.parts:
            out |= _subterms(p)
    return out


def _merge_conclusions(t: Type) -> set[Type]:
    """Grouped arrow-target merges: from (s -> u1) & ... & (s -> uk) conclude
    s -> (u1 & ... & uk), for every shared-source subset of components."""
    out = set()
    by_source: dict[Type, list[Type]] = {}
    for p in parts_of(t):
        if isinstance(p, Arrow):
            by_source.setdefault(p.source, []).append(p.target)
    for source, targets in by_source.items():
        for size in range(2, len(targets) + 1):
            for combo in itertools.combinations(targets, size):
                out.add(canonicalize(Arrow(source, intersect(*combo))))
    return out


def support_of(universe: list[Type]) -> list[Type]:
    """The universe closed for saturation."""
    work = set(universe)
    frontier = set(universe)
    while frontier:
        new: set[Type] = set()
        for t in frontier:
            new |= _subterms(t)
            new |= _sub_intersections(t)
            bundle = render_organized(organize(t))
            new.add(bundle)
            new |= _sub_intersections(bundle)
            new |= _merge_conclusions(t)
            new |= _merge_conclusions(bundle)
        frontier = new - work
        work |= new
    return sorted(work, key=sort_key)


class SaturatedSubtyping:
    """The axiom closure as a boolean matrix over the support set."""

    def __init__(self, universe: list[Type], edges: tuple[tuple[str, str], ...] = ()):
        self.types = support_of(universe)
        self.index = {t: i for i, t in enumerate(self.types)}
        self._saturate(edges)

    def _saturate(self, edges) -> None:
        types = self.types
        index = self.index
        n = len(types)
        m = np.zeros((n, n), dtype=bool)

        # reflexivity and the top element
        np.fill_diagonal(m, True)
        omega_idx = index[OMEGA]
        m[:, omega_idx] = True
        omega_arrow = canonicalize(Arrow(OMEGA, OMEGA))
        if omega_arrow in index:
            m[omega_idx, index[omega_arrow]] = True

        # taxonomy edges between constants
        for lo, hi in edges:
            if Const(lo) in index and Const(hi) in index:
                m[index[Const(lo)], index[Const(hi)]] = True

        # intersection projections (associativity and commutativity are
        # baked into canonical forms, so every sub-intersection is an
        # instance of the binary projection axioms)
        for i, t in enumerate(types):
            for sub in _sub_intersections(t):
                m[i, index[sub]] = True

        # arrow distribution over shared sources (grouped instances are
        # finite compositions of the binary axiom with introduction)
        for i, t in enumerate(types):
            for conclusion in _merge_conclusions(t):
                if conclusion in index:
                    m[i, index[conclusion]] = True

        arrows = [(i, index[t.source], index[t.target])
                  for i, t in enumerate(types) if isinstance(t, Arrow)]
        arrow_idx = np.array([a[0] for a in arrows], dtype=np.int64)
        arrow_src = np.array([a[1] for a in arrows], dtype=np.int64)
        arrow_tgt = np.array([a[2] for a in arrows], dtype=np.int64)
        inters = [
            (i, np.array([index[p] for p in t.parts], dtype=np.int64))
            for i, t in enumerate(types)
            if isinstance(t, Inter)
        ]

        while True:
            before = int(m.sum())
            # arrow congruence: (s1 -> t1) <= (s2 -> t2) if s2 <= s1, t1 <= t2
            if len(arrows):
                src_ok = m[np.ix_(arrow_src, arrow_src)].T
                tgt_ok = m[np.ix_(arrow_tgt, arrow_tgt)]
                cond = src_ok & tgt_ok
                block = m[np.ix_(arrow_idx, arrow_idx)]
                m[np.ix_(arrow_idx, arrow_idx)] = block | cond
            # intersection introduction: x <= q when x <= every component
            for qi, comps in inters:
                col = m[:, comps[0]].copy()
                for c in comps[1:]:
                    col &= m[:, c]
                m[:, qi] |= col
            # transitivity
            prod = (m.astype(np.float32) @ m.astype(np.float32)) > 0.5
            m |= prod
            if int(m.sum()) == before:
                break
        self.matrix = m

    def leq(self, s: Type, t: Type) -> bool:
        return bool(self.matrix[self.index[canonicalize(s)], self.index[canonicalize(t)]])
