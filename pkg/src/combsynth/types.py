"""Intersection-type ASTs, canonical forms, and organization into paths.

Types are immutable trees built from constants, variables, the top element
omega, covariant constructor applications, arrows, and intersections.
``canonicalize`` maps every type to a unique normal form (intersections
flattened, deduplicated, sorted; omega absorbed), and ``organize`` rewrites a
type into its equivalent set of paths ``arg1 -> ... -> argn -> leaf``.

All nodes are hash-consed: structurally equal types are the same object, so
equality is identity and hashes are precomputed.  The engine leans on this for
its memo tables.
"""
from __future__ import annotations


# The usage-context constructor is the one interpreted constructor: it
# distributes over intersections and absorbs omega, so uc(a & b) = uc(a) & uc(b)
# and uc(omega) = omega.  Every other constructor is an uninterpreted,
# covariant path leaf.
USAGE_CONTEXT = "uc"

TUPLE_CTOR_PREFIX = "Prod"
UNIT_NAME = "Unit"

_INTERN: dict = {}


class Type:
    """Base class for type expressions; instances are interned and immutable."""

    __slots__ = ("_hash",)

    def __hash__(self) -> int:
        return self._hash

    def __and__(self, other: "Type") -> "Type":
        return intersect(self, other)

    def __rshift__(self, other: "Type") -> "Type":
        return Arrow(self, other)

    def __repr__(self) -> str:
        from .syntax import render_type

        return render_type(self)


def _interned(cls, *fields):
    key = (cls, *fields)
    obj = _INTERN.get(key)
    if obj is None:
        obj = object.__new__(cls)
        obj._hash = hash(key)
        _INTERN[key] = obj
    return obj


class Const(Type):
    __slots__ = ("name",)

    def __new__(cls, name: str):
        obj = _interned(cls, name)
        obj.name = name
        return obj


class Var(Type):
    __slots__ = ("name",)

    def __new__(cls, name: str):
        obj = _interned(cls, name)
        obj.name = name
        return obj


class OmegaType(Type):
    __slots__ = ()

    def __new__(cls):
        return _interned(cls)


OMEGA = OmegaType()


class Ctor(Type):
    __slots__ = ("name", "args")

    def __new__(cls, name: str, args: tuple):
        args = tuple(args)
        obj = _interned(cls, name, args)
        obj.name = name
        obj.args = args
        return obj


class Arrow(Type):
    __slots__ = ("source", "target")

    def __new__(cls, source: Type, target: Type):
        obj = _interned(cls, source, target)
        obj.source = source
        obj.target = target
        return obj


class Inter(Type):
    """Intersection node; canonical form is flattened, deduplicated, sorted,
    with >= 2 parts and no omega."""

    __slots__ = ("parts",)

    def __new__(cls, parts: tuple):
        parts = tuple(parts)
        obj = _interned(cls, parts)
        obj.parts = parts
        return obj


UNIT = Const(UNIT_NAME)


def tuple_type(*args: Type) -> Type:
    """Tuple sugar: (t1, ..., tn) is the built-in constructor Prodn; () is Unit."""
    if not args:
        return UNIT
    return Ctor(f"{TUPLE_CTOR_PREFIX}{len(args)}", tuple(args))


def uc(arg: Type) -> Type:
    """A usage-context application, normalized by distributivity."""
    return canonicalize(Ctor(USAGE_CONTEXT, (arg,)))


_sort_keys: dict[Type, tuple] = {}


def sort_key(t: Type) -> tuple:
    """Total order: constants < variables < omega < constructors < arrows < intersections."""
    key = _sort_keys.get(t)
    if key is not None:
        return key
    if isinstance(t, Const):
        key = (0, t.name, ())
    elif isinstance(t, Var):
        key = (1, t.name, ())
    elif isinstance(t, OmegaType):
        key = (2, "", ())
    elif isinstance(t, Ctor):
        key = (3, t.name, tuple(sort_key(a) for a in t.args))
    elif isinstance(t, Arrow):
        key = (4, "", (sort_key(t.source), sort_key(t.target)))
    elif isinstance(t, Inter):
        key = (5, "", tuple(sort_key(p) for p in t.parts))
    else:
        raise TypeError(f"not a type: {t!r}")
    _sort_keys[t] = key
    return key


_canonical: dict[Type, Type] = {}


def canonicalize(t: Type) -> Type:
    """Unique normal form; idempotent and insensitive to intersection order."""
    cached = _canonical.get(t)
    if cached is not None:
        return cached
    out = _canonicalize(t)
    _canonical[t] = out
    _canonical[out] = out
    return out


def _canonicalize(t: Type) -> Type:
    if isinstance(t, (Const, Var, OmegaType)):
        return t
    if isinstance(t, Arrow):
        return Arrow(canonicalize(t.source), canonicalize(t.target))
    if isinstance(t, Ctor):
        args = tuple(canonicalize(a) for a in t.args)
        if t.name == USAGE_CONTEXT and len(args) == 1:
            return _distribute_uc(args[0])
        return Ctor(t.name, args)
    if isinstance(t, Inter):
        return _make_inter([canonicalize(p) for p in t.parts])
    raise TypeError(f"not a type: {t!r}")


def _distribute_uc(inner: Type) -> Type:
    if isinstance(inner, OmegaType):
        return OMEGA
    parts = inner.parts if isinstance(inner, Inter) else (inner,)
    return _make_inter([Ctor(USAGE_CONTEXT, (p,)) for p in parts])


def _make_inter(parts: list) -> Type:
    """Assemble an intersection from canonical parts."""
    flat: list[Type] = []
    for p in parts:
        if isinstance(p, Inter):
            flat.extend(p.parts)
        elif isinstance(p, OmegaType):
            continue
        else:
            flat.append(p)
    unique = sorted(set(flat), key=sort_key)
    if not unique:
        return OMEGA
    if len(unique) == 1:
        return unique[0]
    return Inter(tuple(unique))


def intersect(*types: Type) -> Type:
    """Canonical intersection of the given types (omega for none)."""
    return canonicalize(Inter(tuple(types))) if types else OMEGA


def arrow(*types: Type) -> Type:
    """Right-associated arrow chain: arrow(a, b, c) = a -> b -> c."""
    if not types:
        raise ValueError("arrow() needs at least one type")
    out = types[-1]
    for src in reversed(types[:-1]):
        out = Arrow(src, out)
    return out


def parts_of(t: Type) -> tuple:
    """The intersection components of ``t`` (itself when not an intersection)."""
    return t.parts if isinstance(t, Inter) else (t,)


_free_vars: dict[Type, frozenset] = {}


def free_vars(t: Type) -> frozenset:
    cached = _free_vars.get(t)
    if cached is not None:
        return cached
    if isinstance(t, Var):
        out = frozenset((t.name,))
    elif isinstance(t, (Const, OmegaType)):
        out = frozenset()
    elif isinstance(t, Arrow):
        out = free_vars(t.source) | free_vars(t.target)
    elif isinstance(t, Ctor):
        out = frozenset().union(*(free_vars(a) for a in t.args))
    elif isinstance(t, Inter):
        out = frozenset().union(*(free_vars(p) for p in t.parts))
    else:
        raise TypeError(f"not a type: {t!r}")
    _free_vars[t] = out
    return out


def constants_in(t: Type) -> frozenset:
    """All constant names occurring anywhere in ``t`` (omega excluded)."""
    if isinstance(t, Const):
        return frozenset((t.name,))
    if isinstance(t, (Var, OmegaType)):
        return frozenset()
    if isinstance(t, Arrow):
        return constants_in(t.source) | constants_in(t.target)
    if isinstance(t, Ctor):
        return frozenset().union(*(constants_in(a) for a in t.args))
    if isinstance(t, Inter):
        return frozenset().union(*(constants_in(p) for p in t.parts))
    raise TypeError(f"not a type: {t!r}")


def ctor_arities(t: Type) -> dict[str, set[int]]:
    """Constructor name -> set of arities used in ``t``."""
    out: dict[str, set[int]] = {}

    def walk(u: Type) -> None:
        if isinstance(u, Ctor):
            out.setdefault(u.name, set()).add(len(u.args))
            for a in u.args:
                walk(a)
        elif isinstance(u, Arrow):
            walk(u.source)
            walk(u.target)
        elif isinstance(u, Inter):
            for p in u.parts:
                walk(p)

    walk(t)
    return out


class Path:
    """A path arg1 -> ... -> argn -> leaf; the leaf is never omega, an arrow,
    or an intersection.  Interned like types."""

    __slots__ = ("args", "leaf", "_hash")

    def __new__(cls, args: tuple, leaf: Type):
        args = tuple(args)
        if isinstance(leaf, (OmegaType, Arrow, Inter)):
            raise ValueError(f"invalid path leaf: {leaf!r}")
        obj = _interned(cls, args, leaf)
        obj.args = args
        obj.leaf = leaf
        return obj

    def __hash__(self) -> int:
        return self._hash

    @property
    def length(self) -> int:
        return len(self.args)

    def to_type(self) -> Type:
        out = self.leaf
        for a in reversed(self.args):
            out = Arrow(a, out)
        return out

    def __repr__(self) -> str:
        from .syntax import render_type

        return f"<path {render_type(self.to_type())}>"


def path_sort_key(p: Path) -> tuple:
    return (len(p.args), tuple(sort_key(a) for a in p.args), sort_key(p.leaf))


OrganizedType = frozenset  # frozenset[Path]; the empty set denotes omega

_organized: dict[Type, frozenset] = {}


def organize(t: Type) -> frozenset:
    """The path set of the organized form of ``t`` (empty set for omega).

    Constructor applications are path leaves; an arrow contributes its source
    to every path of its target.
    """
    t = canonicalize(t)
    cached = _organized.get(t)
    if cached is not None:
        return cached
    if isinstance(t, OmegaType):
        out: frozenset = frozenset()
    elif isinstance(t, (Const, Var, Ctor)):
        out = frozenset((Path((), t),))
    elif isinstance(t, Inter):
        out = frozenset().union(*(organize(p) for p in t.parts))
    elif isinstance(t, Arrow):
        src = t.source
        out = frozenset(Path((src,) + p.args, p.leaf) for p in organize(t.target))
    else:
        raise TypeError(f"not a type: {t!r}")
    _organized[t] = out
    return out


def render_organized(paths: frozenset) -> Type:
    """Rebuild a type from a path set (omega for the empty set)."""
    return intersect(*(p.to_type() for p in sorted(paths, key=path_sort_key)))


def paths_at_least(paths: frozenset, n: int) -> frozenset:
    """The paths whose argument sequence has length >= n."""
    return frozenset(p for p in paths if len(p.args) >= n)


def path_split(p: Path, n: int) -> tuple[tuple, Type]:
    """Split off the first ``n`` arguments; the remainder is rendered as a type."""
    if n > len(p.args):
        raise ValueError(f"cannot split {n} arguments off a path of length {len(p.args)}")
    return p.args[:n], Path(p.args[n:], p.leaf).to_type()


def path_length(t: Type) -> int:
    """Maximal path length of ``t`` (0 for omega)."""
    return max((len(p.args) for p in organize(t)), default=0)


def level0_check(t: Type) -> bool:
    """True iff ``t`` is omega, an atom, or an intersection of atoms."""
    t = canonicalize(t)
    if isinstance(t, (OmegaType, Const, Var)):
        return True
    if isinstance(t, Inter):
        return all(isinstance(p, (Const, Var)) for p in t.parts)
    return False


def uc_normalize(inner: Type) -> Type:
    """Wrap a level-0 type in the usage-context constructor, distributed.

    uc(a & b) = uc(a) & uc(b); uc(omega) = omega.  Raises ValueError for
    arguments that are not level 0.
    """
    inner = canonicalize(inner)
    if not level0_check(inner):
        from .syntax import render_type

        raise ValueError(f"usage-context argument must be level 0: {render_type(inner)}")
    return canonicalize(Ctor(USAGE_CONTEXT, (inner,)))
