"""Typed combinator repositories and the level-0 substitution machinery."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Iterator

from .subtyping import Taxonomy
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
    constants_in,
    ctor_arities,
    free_vars,
    intersect,
    organize,
)


class RepositoryError(Exception):
    """Malformed repository: duplicate names, arity conflicts, bad types."""


class SubstitutionSpaceExceeded(Exception):
    """The level-0 substitution space is larger than the configured budget."""

    def __init__(self, required: int, cap: int):
        super().__init__(
            f"substitution space needs {required} images but the budget is {cap}; "
            f"raise the cap to search this repository"
        )
        self.required = required
        self.cap = cap


Level0Image = frozenset  # frozenset[str]; the empty set denotes omega


def image_to_type(image: frozenset[str]) -> Type:
    """Render an atom set as a level-0 type (omega for the empty set)."""
    return intersect(*(Const(name) for name in sorted(image)))


@dataclass(frozen=True, slots=True)
class Substitution:
    """Finite map from variable names to level-0 images (atom sets)."""

    items: tuple[tuple[str, frozenset[str]], ...] = ()

    @classmethod
    def of(cls, mapping: dict[str, frozenset[str]]) -> "Substitution":
        return cls(tuple(sorted((k, frozenset(v)) for k, v in mapping.items())))

    @property
    def mapping(self) -> dict[str, frozenset[str]]:
        return dict(self.items)

    def is_identity(self) -> bool:
        return not self.items

    def __repr__(self) -> str:
        body = ", ".join(f"{k} := {{{', '.join(sorted(v)) or 'omega'}}}" for k, v in self.items)
        return f"<subst {body or 'identity'}>"


IDENTITY = Substitution()


def apply_substitution(s: Substitution, t: Type) -> Type:
    """Replace each mapped variable by its image and canonicalize."""
    mapping = s.mapping
    return canonicalize(_subst(mapping, t))


def _subst(mapping: dict[str, frozenset[str]], t: Type) -> Type:
    if isinstance(t, Var):
        image = mapping.get(t.name)
        return t if image is None else image_to_type(image)
    if isinstance(t, (Const, OmegaType)):
        return t
    if isinstance(t, Arrow):
        return Arrow(_subst(mapping, t.source), _subst(mapping, t.target))
    if isinstance(t, Ctor):
        return Ctor(t.name, tuple(_subst(mapping, a) for a in t.args))
    if isinstance(t, Inter):
        return Inter(tuple(_subst(mapping, p) for p in t.parts))
    raise TypeError(f"not a type: {t!r}")


def substitute_path(p: Path, s: Substitution) -> tuple[Path, ...]:
    """Apply a substitution to one path template.

    Arguments are substituted in place; the substituted leaf may split into
    several atomic leaves (a variable leaf under a multi-atom image, or a
    distributed usage-context leaf) or vanish entirely (an omega image).
    """
    mapping = s.mapping
    args = tuple(canonicalize(_subst(mapping, a)) for a in p.args)
    leaf_ty = canonicalize(_subst(mapping, p.leaf))
    return tuple(Path(args + lp.args, lp.leaf) for lp in organize(leaf_ty))


@dataclass(frozen=True, slots=True)
class Binding:
    """A named combinator with its (canonicalized) type."""

    name: str
    ty: Type


@dataclass(frozen=True)
class Repository:
    """Combinator bindings plus the atom taxonomy and constructor signatures."""

    bindings: tuple[Binding, ...]
    taxonomy: Taxonomy = field(default_factory=Taxonomy)
    ctor_signatures: dict[str, int] = field(default_factory=dict, compare=False)
    _by_name: dict[str, Binding] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )

    def __post_init__(self) -> None:
        arities = dict(self.ctor_signatures)
        for b in self.bindings:
            if b.name in self._by_name:
                raise RepositoryError(f"duplicate combinator {b.name!r}")
            self._by_name[b.name] = b
            for ctor, ns in ctor_arities(b.ty).items():
                ns = ns | ({arities[ctor]} if ctor in arities else set())
                if len(ns) > 1:
                    raise RepositoryError(
                        f"constructor {ctor!r} used with conflicting arities {sorted(ns)}"
                    )
                arities[ctor] = next(iter(ns))
        self.ctor_signatures.update(arities)

    def __getitem__(self, name: str) -> Binding:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"unknown combinator {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def names(self) -> tuple[str, ...]:
        return tuple(b.name for b in self.bindings)

    def check_type(self, t: Type) -> None:
        """Validate a goal or query type against the recorded constructor arities."""
        for ctor, ns in ctor_arities(t).items():
            known = self.ctor_signatures.get(ctor)
            seen = ns | ({known} if known is not None else set())
            if len(seen) > 1:
                raise RepositoryError(
                    f"constructor {ctor!r} used with conflicting arities {sorted(seen)}"
                )

    def extended(self, *bindings: Binding) -> "Repository":
        return Repository(self.bindings + bindings, self.taxonomy, dict(self.ctor_signatures))


def make_repository(
    bindings: Iterable[tuple[str, Type]],
    taxonomy: Taxonomy | None = None,
) -> Repository:
    return Repository(
        tuple(Binding(name, canonicalize(ty)) for name, ty in bindings),
        taxonomy if taxonomy is not None else Taxonomy(),
    )


def atoms_of(repo: Repository, goal: Type) -> frozenset[str]:
    """Constants occurring syntactically in the bindings or the goal.

    Taxonomy-only constants are not part of the substitution universe.
    """
    out = constants_in(goal)
    for b in repo.bindings:
        out |= constants_in(b.ty)
    return out


def level0_images(atoms: frozenset[str] | set[str], cap: int) -> Iterator[frozenset[str]]:
    """All 2^|atoms| level-0 images in a fixed order (omega first, then by
    size and name); fails fast when the count exceeds ``cap``."""
    names = sorted(atoms)
    count = 2 ** len(names)
    if count > cap:
        raise SubstitutionSpaceExceeded(count, cap)
    for size in range(len(names) + 1):
        for combo in combinations(names, size):
            yield frozenset(combo)


def instantiate(
    binding: Binding, atoms: frozenset[str] | set[str], mode: str, cap: int
) -> frozenset[Path]:
    """The path set of the binding's type closed under level-0 substitution.

    In ``fcl`` mode only the identity substitution applies; in ``bcl0`` mode
    each path template is instantiated with every assignment of images (over
    the atoms occurring in the template) to its variables.
    """
    templates = organize(canonicalize(binding.ty))
    if mode == "fcl":
        return frozenset(templates)
    if mode != "bcl0":
        raise ValueError(f"unknown mode {mode!r}")
    out: set[Path] = set()
    images: list[frozenset[str]] | None = None
    for template in templates:
        names = sorted(free_vars(template.to_type()))
        if not names:
            out.add(template)
            continue
        if images is None:
            images = list(level0_images(atoms, cap))
        total = len(images) ** len(names)
        if total > cap:
            raise SubstitutionSpaceExceeded(total, cap)
        for combo in product(images, repeat=len(names)):
            s = Substitution.of(dict(zip(names, combo)))
            out.update(substitute_path(template, s))
    return frozenset(out)
