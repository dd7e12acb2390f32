"""Decision procedure for the subtype preorder, extended by an atom taxonomy.

The relation is the least preorder with omega as top element satisfying
omega <= omega -> omega, the intersection projection/introduction laws, arrow
distribution over intersected targets, covariant/contravariant congruence, the
declared taxonomy edges between constants, and leaf-level constructor
distributivity c(u...) & c(v...) <= c(u & v ...).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .types import (
    Arrow,
    Const,
    Ctor,
    Inter,
    OMEGA,
    OmegaType,
    Path,
    Type,
    Var,
    canonicalize,
    intersect,
    organize,
)


@dataclass(frozen=True)
class Taxonomy:
    """Reflexive-transitive closure of declared constant-to-constant edges."""

    declared_edges: frozenset[tuple[str, str]] = frozenset()
    _up: dict[str, frozenset[str]] = field(init=False, repr=False, compare=False, hash=False, default_factory=dict)
    _memo: dict[tuple[Type, Type], bool] = field(init=False, repr=False, compare=False, hash=False, default_factory=dict)

    def __post_init__(self) -> None:
        up: dict[str, set[str]] = {}
        for a, b in self.declared_edges:
            up.setdefault(a, set()).add(b)
            up.setdefault(b, set())
        changed = True
        while changed:
            changed = False
            for a, above in up.items():
                extra = set().union(*(up[b] for b in above)) - above
                if extra:
                    above |= extra
                    changed = True
        self._up.update({a: frozenset(above) for a, above in up.items()})

    @classmethod
    def of(cls, edges: "list[tuple[str, str]] | set[tuple[str, str]] | tuple" = ()) -> "Taxonomy":
        return cls(frozenset(edges))

    def leq_const(self, a: str, b: str) -> bool:
        return a == b or b in self._up.get(a, frozenset())

    def ancestors(self, a: str) -> frozenset[str]:
        """Constants >= a, including a itself."""
        return self._up.get(a, frozenset()) | {a}

    def descendants(self, b: str) -> frozenset[str]:
        """Constants <= b, including b itself."""
        return frozenset(a for a in self._up if b in self._up[a]) | {b}

    def constants(self) -> frozenset[str]:
        return frozenset(self._up)


EMPTY_TAXONOMY = Taxonomy()


def atom_leq(tax: Taxonomy, a: Type, b: Type) -> bool:
    """Atom-level comparison: reflexivity, omega on top, taxonomy between constants.

    Variables are related only to themselves and omega.
    """
    if isinstance(b, OmegaType):
        return True
    if isinstance(a, OmegaType):
        return False
    if isinstance(a, Const) and isinstance(b, Const):
        return tax.leq_const(a.name, b.name)
    if isinstance(a, Var) and isinstance(b, Var):
        return a.name == b.name
    return False


def is_subtype(tax: Taxonomy, s: Type, t: Type) -> bool:
    """Decide s <= t.

    Every path of the organized right-hand side must be matched: collect the
    left-hand paths whose first n arguments are above the path's arguments,
    strip those arguments, and check the remaining intersection against the
    path's leaf (taxonomy lookup for atoms, gathered componentwise comparison
    for constructor leaves).
    """
    if s is t:
        return True
    memo = tax._memo
    key = (s, t)
    cached = memo.get(key)
    if cached is not None:
        return cached
    cs = canonicalize(s)
    ct = canonicalize(t)
    if cs is not s or ct is not t:
        out = is_subtype(tax, cs, ct)
    else:
        out = all(_path_covered(tax, organize(cs), p) for p in organize(ct))
    memo[key] = out
    return out


def _path_covered(tax: Taxonomy, s_paths: frozenset[Path], p: Path) -> bool:
    n = len(p.args)
    faces = []
    for q in s_paths:
        if len(q.args) != n:
            continue
        if all(is_subtype(tax, p.args[i], q.args[i]) for i in range(n)):
            faces.append(q.leaf)
    # Longer left-hand paths only contribute arrow targets, which can never
    # reach an atomic or constructor leaf, so exact-length faces suffice.
    leaf = p.leaf
    if isinstance(leaf, (Const, Var)):
        return any(isinstance(f, (Const, Var, OmegaType)) and atom_leq(tax, f, leaf) for f in faces)
    if isinstance(leaf, Ctor):
        gathered = [f for f in faces if isinstance(f, Ctor) and f.name == leaf.name and len(f.args) == len(leaf.args)]
        if not gathered:
            return False
        return all(
            is_subtype(tax, intersect(*(g.args[i] for g in gathered)), leaf.args[i])
            for i in range(len(leaf.args))
        )
    raise TypeError(f"invalid path leaf: {leaf!r}")


def equiv(tax: Taxonomy, s: Type, t: Type) -> bool:
    """Mutual subtyping."""
    return is_subtype(tax, s, t) and is_subtype(tax, t, s)
