"""Memoized inhabitation search producing a tree grammar of all inhabitants.

The search realizes the alternating decision procedure deterministically: for
each goal and each binding it enumerates argument counts ``n`` and
subset-minimal sets ``P`` of instantiated paths whose stripped targets
intersect below the goal, emitting one production per minimal ``P`` with the
intersected argument types as child goals.  Goals already seen (including on
their own ancestry) become shared nonterminals, so infinite solution sets get
a finite cyclic grammar.

Level-0 instantiation is goal-directed.  A variable whose occurrences in a
path template are all covariant only ever needs the empty image (omega) or a
singleton of an atom taxonomy-below a constant of the goal: any multi-atom
image decomposes into a union of such paths with the same intersected
argument goals (constructor gathering restores joint covers), and
goal-irrelevant atoms only strengthen argument goals.  A variable with a
contravariant occurrence ranges over the full image lattice, guarded by the
substitution budget.

Two semantics-preserving reductions keep grammars small: argument goals drop
intersection components that another component already implies, and
productions whose argument goals are pointwise stronger than a sibling's are
pruned (they generate a subset of the sibling's terms).
"""
from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .repository import (
    Binding,
    IDENTITY,
    Repository,
    Substitution,
    SubstitutionSpaceExceeded,
    apply_substitution,
    atoms_of,
    level0_images,
    substitute_path,
)
from .subtyping import Taxonomy, atom_leq, is_subtype
from .types import (
    Arrow,
    Const,
    Ctor,
    Inter,
    OMEGA,
    Path,
    Type,
    Var,
    canonicalize,
    constants_in,
    free_vars,
    intersect,
    organize,
    parts_of,
    path_sort_key,
    sort_key,
)


class InhabitationError(Exception):
    """Engine-level failure (non-ground goal, unknown mode, ...)."""


class NonterminalBudgetExceeded(Exception):
    def __init__(self, goal_count: int, budget: int):
        super().__init__(f"nonterminal budget {budget} exhausted after {goal_count} goals")
        self.goal_count = goal_count
        self.budget = budget


class SearchTimeout(Exception):
    def __init__(self, goal_count: int, timeout: float):
        super().__init__(f"timed out after {timeout}s with {goal_count} goals expanded")
        self.goal_count = goal_count
        self.timeout = timeout


@dataclass(frozen=True, slots=True)
class Goal:
    """A canonicalized type to inhabit."""

    ty: Type

    @classmethod
    def of(cls, ty: Type) -> "Goal":
        return cls(canonicalize(ty))

    def __repr__(self) -> str:
        from .syntax import render_type

        return f"<goal {render_type(self.ty)}>"


def goal_sort_key(g: Goal) -> tuple:
    return sort_key(g.ty)


@dataclass(frozen=True)
class SearchConfig:
    mode: str = "bcl0"  # "bcl0" (level-0 polymorphism) or "fcl" (identity only)
    subst_cap: int = 2**20
    max_nonterminals: int = 100_000
    timeout: float | None = None
    parallelism: int = 1

    def __post_init__(self) -> None:
        if self.mode not in ("bcl0", "fcl"):
            raise InhabitationError(f"unknown mode {self.mode!r}")
        if self.subst_cap <= 0 or self.max_nonterminals <= 0 or self.parallelism <= 0:
            raise InhabitationError("caps and parallelism must be positive")


@dataclass(frozen=True, slots=True)
class Production:
    """One way to produce the owning goal: apply ``comb`` to ``n`` arguments
    inhabiting ``arg_goals``; ``evidence`` records the chosen instantiated
    paths with the substitutions that produced them."""

    comb: str
    n: int
    evidence: tuple[tuple[Path, Substitution], ...]
    arg_goals: tuple[Goal, ...]


def _production_key(p: Production) -> tuple:
    return (p.comb, p.n, tuple(goal_sort_key(g) for g in p.arg_goals))


@dataclass(frozen=True)
class TreeGrammar:
    """Finite representation of the (possibly infinite) inhabitant set."""

    start: Goal
    productions: dict[Goal, tuple[Production, ...]]

    def goals(self) -> tuple[Goal, ...]:
        rest = sorted((g for g in self.productions if g != self.start), key=goal_sort_key)
        return (self.start, *rest)

    def __post_init__(self) -> None:
        for prods in self.productions.values():
            for prod in prods:
                for g in prod.arg_goals:
                    if g not in self.productions:
                        raise InhabitationError(f"argument goal {g!r} has no entry")


class _Deadline:
    __slots__ = ("at", "timeout", "goals")

    def __init__(self, timeout: float | None):
        self.timeout = timeout
        self.at = time.monotonic() + timeout if timeout is not None else None
        self.goals = 0

    def check(self) -> None:
        if self.at is not None and time.monotonic() >= self.at:
            raise SearchTimeout(self.goals, self.timeout)


# ---------------------------------------------------------------------------
# goal-directed candidate generation


def _collect_polarities(t: Type, positive: bool, out: dict[str, set[bool]]) -> None:
    if isinstance(t, Var):
        out.setdefault(t.name, set()).add(positive)
    elif isinstance(t, Ctor):
        for a in t.args:
            _collect_polarities(a, positive, out)
    elif isinstance(t, Inter):
        for p in t.parts:
            _collect_polarities(p, positive, out)
    elif isinstance(t, Arrow):
        _collect_polarities(t.source, not positive, out)
        _collect_polarities(t.target, positive, out)


def _template_polarities(template: Path) -> dict[str, set[bool]]:
    out: dict[str, set[bool]] = {}
    for a in template.args:
        _collect_polarities(a, True, out)
    _collect_polarities(template.leaf, True, out)
    return out


def _relevant_atoms(goal_ty: Type, universe: frozenset, tax: Taxonomy) -> list[str]:
    goal_consts = constants_in(goal_ty)
    return sorted(a for a in universe if any(tax.leq_const(a, k) for k in goal_consts))


def _occurrences(t: Type, out: dict, positive: bool = True, crossed: int = 0) -> dict:
    """Per variable, the occurrence classes within one argument slot:
    ``neg`` (contravariant), ``spine`` (covariant, not under any arrow source),
    ``deep`` (covariant but nested under arrow sources)."""
    if isinstance(t, Var):
        cls = "neg" if not positive else ("spine" if crossed == 0 else "deep")
        out.setdefault(t.name, set()).add(cls)
    elif isinstance(t, Ctor):
        for a in t.args:
            _occurrences(a, out, positive, crossed)
    elif isinstance(t, Inter):
        for p in t.parts:
            _occurrences(p, out, positive, crossed)
    elif isinstance(t, Arrow):
        _occurrences(t.source, out, not positive, crossed + 1)
        _occurrences(t.target, out, positive, crossed)
    return out


class _Cand:
    """A phase-1 candidate: the face (suffix arguments and leaf) is ground,
    while argument slots may still carry unassigned "middle" variables."""

    __slots__ = ("path", "subst", "template", "shared", "free", "group_key")

    def __init__(self, path, subst, template, shared, free, group_key):
        self.path = path
        self.subst = subst
        self.template = template
        self.shared = shared  # middles realized jointly across a member group
        self.free = free  # middles realized per member
        self.group_key = group_key

    def ground(self) -> bool:
        return not (self.shared or self.free)


def _middle_classes(
    template: Path, n: int
) -> tuple[frozenset, tuple, tuple, tuple, frozenset]:
    """Split a template's variables for arity ``n``: face variables, middles
    fixed to omega, shared middles, free middles, and the face variables
    entering the group key.

    A middle occurring only covariantly is dominated by the empty image
    (larger images only strengthen every argument goal), so it is pinned to
    omega outright.  A middle with a contravariant occurrence couples argument
    positions and ranges over the image lattice; it is shareable across a
    member group when, in every argument slot, it occurs either only
    contravariantly or only on the covariant spine (crossed assignments are
    then dominated by the union image).  Deep or mixed occurrences forgo
    sharing.
    """
    slots = template.args[:n]
    face_vars = frozenset().union(
        *(free_vars(a) for a in template.args[n:]),
        free_vars(template.leaf),
    )
    slot_info = [_occurrences(slot, {}) for slot in slots]
    middles = sorted(
        frozenset().union(*(set(info) for info in slot_info), frozenset()) - face_vars
    )
    omega_pinned: list[str] = []
    shared: list[str] = []
    free: list[str] = []
    for v in middles:
        classes = [info[v] for info in slot_info if v in info]
        if all("neg" not in occ for occ in classes):
            omega_pinned.append(v)
        elif all(occ == {"neg"} or occ == {"spine"} for occ in classes):
            shared.append(v)
        else:
            free.append(v)
    # sharing a middle across members needs the slot's other free variables
    # pinned equally; demote middles that spine-co-occur with a free middle
    changed = True
    while changed:
        changed = False
        for v in list(shared):
            for info in slot_info:
                if info.get(v) == {"spine"} and any(u in info for u in free):
                    shared.remove(v)
                    free.append(v)
                    changed = True
                    break
    group_fvars = set()
    for v in shared:
        for slot, info in zip(slots, slot_info):
            if info.get(v) == {"spine"}:
                group_fvars |= free_vars(slot) & face_vars
    return (
        face_vars,
        tuple(omega_pinned),
        tuple(shared),
        tuple(sorted(free)),
        frozenset(group_fvars),
    )


def _candidates_at(
    binding: Binding,
    n: int,
    goal_ty: Type,
    universe: frozenset,
    tax: Taxonomy,
    cfg: SearchConfig,
) -> list[_Cand]:
    """Phase-1 candidates for one binding at one arity: templates with their
    face variables instantiated, middles left symbolic."""
    templates = [
        t for t in sorted(organize(binding.ty), key=path_sort_key) if len(t.args) >= n
    ]
    if cfg.mode == "fcl":
        return [_Cand(t, IDENTITY, t, (), (), ()) for t in templates]

    relevant = None
    full_images = None
    out: list[_Cand] = []
    for template in templates:
        names = free_vars(template.to_type())
        if not names:
            out.append(_Cand(template, IDENTITY, template, (), (), ()))
            continue
        if 2 ** len(universe) > cfg.subst_cap:
            raise SubstitutionSpaceExceeded(2 ** len(universe), cfg.subst_cap)
        face_vars, omega_pinned, shared, free, group_fvars = _middle_classes(template, n)
        polarity = _template_polarities(template)
        pinned = sorted(face_vars)
        per_var: list[list[frozenset]] = []
        for name in pinned:
            if False in polarity.get(name, set()):
                if full_images is None:
                    full_images = list(level0_images(universe, cfg.subst_cap))
                per_var.append(full_images)
            else:
                if relevant is None:
                    relevant = _relevant_atoms(goal_ty, universe, tax)
                per_var.append([frozenset()] + [frozenset((a,)) for a in relevant])
        total = 1
        for options in per_var:
            total *= len(options)
        if total > cfg.subst_cap:
            raise SubstitutionSpaceExceeded(total, cfg.subst_cap)
        empty: frozenset = frozenset()
        for combo in itertools.product(*per_var):
            assignment = dict(zip(pinned, combo))
            assignment.update((v, empty) for v in omega_pinned)
            s = Substitution.of(assignment)
            key = (template, tuple(sorted((v, assignment[v]) for v in group_fvars)))
            for path in substitute_path(template, s):
                out.append(_Cand(path, s, template, shared, free, key))
    return out


def _realizations(
    members: list[_Cand],
    universe: frozenset,
    cfg: SearchConfig,
    deadline: "_Deadline",
) -> list[list[tuple[Path, Substitution]]]:
    """Ground the middles of a chosen path set.

    Same-group members share one image assignment for their shareable middles
    (crossed assignments are dominated by the union image); free middles are
    enumerated per member.
    """
    if all(m.ground() for m in members):
        return [[(m.path, m.subst) for m in members]]
    images = list(level0_images(universe, cfg.subst_cap))
    groups: dict = {}
    for idx, m in enumerate(members):
        groups.setdefault(m.group_key if m.shared else ("", idx), []).append(idx)
    choicepoints: list[tuple[tuple[int, ...], tuple[str, ...]]] = []
    for key in sorted(groups, key=repr):
        idxs = tuple(groups[key])
        shared = members[idxs[0]].shared
        if shared:
            choicepoints.append((idxs, shared))
    for idx, m in enumerate(members):
        if m.free:
            choicepoints.append(((idx,), m.free))
    total = 1
    for _, names in choicepoints:
        total *= len(images) ** len(names)
    if total > cfg.subst_cap:
        raise SubstitutionSpaceExceeded(total, cfg.subst_cap)
    out: list[list[tuple[Path, Substitution]]] = []
    option_lists = [
        list(itertools.product(images, repeat=len(names))) for _, names in choicepoints
    ]
    for combo in itertools.product(*option_lists):
        deadline.check()
        extra: dict[int, dict] = {i: {} for i in range(len(members))}
        for (idxs, names), values in zip(choicepoints, combo):
            for i in idxs:
                extra[i].update(zip(names, values))
        chosen: list[tuple[Path, Substitution]] = []
        for i, m in enumerate(members):
            if extra[i]:
                s_extra = Substitution.of(extra[i])
                merged = Substitution.of({**dict(m.subst.items), **extra[i]})
                grounded = substitute_path(m.path, s_extra)
                if len(grounded) != 1:
                    # a middle image emptied or split the face; cannot happen
                    # since middles never occur in the face
                    raise InhabitationError("middle substitution altered a face")
                chosen.append((grounded[0], merged))
            else:
                chosen.append((m.path, m.subst))
        out.append(chosen)
    return out


# ---------------------------------------------------------------------------
# minimal path-set enumeration


def _suffix(path: Path, n: int) -> Path:
    return Path(path.args[n:], path.leaf)


def _contributes(tax: Taxonomy, face: Path, gpath: Path) -> bool:
    """Can this stripped path take part in covering the given goal path?"""
    if len(face.args) != len(gpath.args):
        return False
    if not all(is_subtype(tax, gpath.args[i], face.args[i]) for i in range(len(gpath.args))):
        return False
    if isinstance(gpath.leaf, (Const, Var)):
        return atom_leq(tax, face.leaf, gpath.leaf)
    return (
        isinstance(face.leaf, Ctor)
        and isinstance(gpath.leaf, Ctor)
        and face.leaf.name == gpath.leaf.name
        and len(face.leaf.args) == len(gpath.leaf.args)
    )


def _gather_ok(tax: Taxonomy, leaves: list[Type], gpath: Path) -> bool:
    leaf = gpath.leaf
    if isinstance(leaf, (Const, Var)):
        return any(atom_leq(tax, f, leaf) for f in leaves)
    return bool(leaves) and all(
        is_subtype(tax, intersect(*(m.args[i] for m in leaves)), leaf.args[i])
        for i in range(len(leaf.args))
    )


def _cover_units(
    tax: Taxonomy, gpath: Path, contributors: list[int], faces: dict[int, Path]
) -> list[frozenset]:
    """Minimal contributor subsets that cover one goal path on their own."""
    if isinstance(gpath.leaf, (Const, Var)):
        return [frozenset((i,)) for i in contributors]
    units: list[frozenset] = []
    for size in range(1, len(contributors) + 1):
        for combo in itertools.combinations(contributors, size):
            chosen = frozenset(combo)
            if any(u <= chosen for u in units):
                continue
            if _gather_ok(tax, [faces[i].leaf for i in combo], gpath):
                units.append(chosen)
    return units


def _prefilter(
    tax: Taxonomy,
    cands: list[_Cand],
    n: int,
    gpaths: list[Path],
) -> list[_Cand]:
    """Keep only candidates that can appear in some maximal production.

    A candidate is dropped when a sibling covers at least the same goal paths
    with pointwise stronger constructor contributions while having pointwise
    weaker argument types: swapping them into any passing path set keeps it
    passing and weakens (or preserves) every argument goal.  Argument slots
    still carrying middle variables are compared only between candidates of
    the same template (variables are rigid there).
    """
    faces = [_suffix(c.path, n) for c in cands]
    coverage = [
        frozenset(j for j, gp in enumerate(gpaths) if _contributes(tax, faces[i], gp))
        for i in range(len(cands))
    ]
    alive = [i for i in range(len(cands)) if coverage[i]]

    def stronger_contribution(i: int, k: int) -> bool:
        """Face k contributes at least as strongly as face i on ctor paths."""
        for j in coverage[i]:
            leaf = gpaths[j].leaf
            if isinstance(leaf, Ctor):
                fi, fk = faces[i].leaf, faces[k].leaf
                if not all(
                    is_subtype(tax, fk.args[m], fi.args[m]) for m in range(len(leaf.args))
                ):
                    return False
        return True

    def weaker_args(i: int, k: int) -> bool:
        ci, ck = cands[i], cands[k]
        if (ci.shared or ci.free or ck.shared or ck.free) and ci.template is not ck.template:
            return False
        return all(
            is_subtype(tax, ci.path.args[m], ck.path.args[m]) for m in range(n)
        )

    kept: list[int] = []
    for i in alive:
        dominated = False
        for k in alive:
            if k == i or not (coverage[i] <= coverage[k]):
                continue
            if not (stronger_contribution(i, k) and weaker_args(i, k)):
                continue
            mutual = (
                coverage[k] <= coverage[i]
                and stronger_contribution(k, i)
                and weaker_args(k, i)
            )
            if mutual and k > i:
                continue  # tie-break: keep the earlier candidate
            dominated = True
            break
        if not dominated:
            kept.append(i)
    return [cands[i] for i in kept]


def _minimal_path_sets(
    tax: Taxonomy,
    cands: list[_Cand],
    n: int,
    goal_ty: Type,
    gpaths: list[Path],
    deadline: _Deadline,
) -> list[tuple[int, ...]]:
    """Indices into ``cands`` forming subset-minimal sets whose stripped
    targets intersect below the goal."""

    def check(indices) -> bool:
        face_ty = intersect(*(_suffix(cands[i].path, n).to_type() for i in indices))
        return is_subtype(tax, face_ty, goal_ty)

    if check(()):
        return [()]
    faces = {i: _suffix(cands[i].path, n) for i in range(len(cands))}
    per_path_units: list[list[frozenset]] = []
    for gpath in gpaths:
        contributors = [i for i in faces if _contributes(tax, faces[i], gpath)]
        units = _cover_units(tax, gpath, contributors, faces)
        if not units:
            return []
        per_path_units.append(units)
    per_path_units.sort(key=len)
    unions: set[frozenset] = {frozenset()}
    for units in per_path_units:
        deadline.check()
        unions = {partial | unit for partial in unions for unit in units}
    results: list[tuple[int, ...]] = []
    for union in sorted(unions, key=sorted):
        deadline.check()
        indices = tuple(sorted(union))
        if not check(indices):
            continue
        # keep only subset-minimal unions; dropped ones reappear as other selections
        if any(check(tuple(sorted(union - {i}))) for i in indices):
            continue
        results.append(indices)
    return [r for r in results if not any(set(o) < set(r) for o in results)]


# ---------------------------------------------------------------------------
# expansion and search


def _drop_subsumed(tax: Taxonomy, ty: Type) -> Type:
    """Remove intersection components implied by another component; collapse
    omega-equivalent types to omega.  The inhabitant set is unchanged."""
    ty = canonicalize(ty)
    if not organize(ty):
        return OMEGA
    parts = parts_of(ty)
    if len(parts) == 1:
        return ty
    kept: list[Type] = []
    for p in parts:
        if any(is_subtype(tax, q, p) for q in kept):
            continue
        kept = [q for q in kept if not is_subtype(tax, p, q)]
        kept.append(p)
    return intersect(*kept)


def expand_goal(
    repo: Repository,
    goal: Goal,
    cfg: SearchConfig | None = None,
    *,
    universe: frozenset | None = None,
    _deadline: _Deadline | None = None,
) -> tuple[Production, ...]:
    """All productions for one goal: per binding, per argument count, one
    production for each subset-minimal passing path set (dominated
    productions pruned)."""
    cfg = cfg or SearchConfig()
    deadline = _deadline if _deadline is not None else _Deadline(cfg.timeout)
    goal_ty = canonicalize(goal.ty)
    if cfg.mode == "bcl0" and free_vars(goal_ty):
        raise InhabitationError(f"goal must be ground: {goal!r}")
    if universe is None:
        universe = atoms_of(repo, goal_ty)
    tax = repo.taxonomy
    gpaths = sorted(organize(goal_ty), key=path_sort_key)
    productions: list[Production] = []
    for binding in repo.bindings:
        max_len = max((len(t.args) for t in organize(binding.ty)), default=0)
        for n in range(0, max_len + 1):
            at_n = _prefilter(
                tax, _candidates_at(binding, n, goal_ty, universe, tax, cfg), n, gpaths
            )
            for indices in _minimal_path_sets(tax, at_n, n, goal_ty, gpaths, deadline):
                members = [at_n[i] for i in indices]
                for chosen in _realizations(members, universe, cfg, deadline):
                    args = tuple(
                        Goal.of(
                            _drop_subsumed(
                                tax, intersect(*(p.args[i] for p, _ in chosen))
                            )
                        )
                        for i in range(n)
                    )
                    evidence = tuple(sorted(chosen, key=lambda c: path_sort_key(c[0])))
                    productions.append(Production(binding.name, n, evidence, args))
    productions = _dedupe(productions)
    productions = _prune_dominated(tax, productions)
    return tuple(sorted(productions, key=_production_key))


def _dedupe(productions: list[Production]) -> list[Production]:
    out: list[Production] = []
    seen: set[tuple] = set()
    for p in productions:
        key = _production_key(p)
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


def _prune_dominated(tax: Taxonomy, productions: list[Production]) -> list[Production]:
    """Drop productions whose argument goals are pointwise stronger than a
    sibling's with the same combinator and arity."""
    groups: dict[tuple[str, int], list[Production]] = {}
    for p in productions:
        groups.setdefault((p.comb, p.n), []).append(p)
    keep: set[int] = set()
    for group in groups.values():
        for p in group:
            dominated = False
            for q in group:
                if q is p or q.arg_goals == p.arg_goals:
                    continue
                if all(
                    is_subtype(tax, pg.ty, qg.ty)
                    for pg, qg in zip(p.arg_goals, q.arg_goals)
                ):
                    # tie-break equivalent argument tuples by production key
                    if all(
                        is_subtype(tax, qg.ty, pg.ty)
                        for pg, qg in zip(p.arg_goals, q.arg_goals)
                    ) and _production_key(q) > _production_key(p):
                        continue
                    dominated = True
                    break
            if not dominated:
                keep.add(id(p))
    return [p for p in productions if id(p) in keep]


def inhabit(repo: Repository, goal: Goal | Type, cfg: SearchConfig | None = None) -> TreeGrammar:
    """Search for all inhabitants of ``goal``, returning a tree grammar.

    Goals reached again (including on their own ancestry) are shared
    nonterminals; the grammar is identical under any parallelism degree.
    """
    cfg = cfg or SearchConfig()
    root = goal if isinstance(goal, Goal) else Goal.of(goal)
    if free_vars(root.ty):
        raise InhabitationError(f"goal must be ground: {root!r}")
    repo.check_type(root.ty)
    universe = atoms_of(repo, root.ty)
    deadline = _Deadline(cfg.timeout)
    memo: dict[Goal, tuple[Production, ...]] = {}
    frontier = [root]
    pool = ThreadPoolExecutor(cfg.parallelism) if cfg.parallelism > 1 else None
    try:
        while frontier:
            batch = sorted({g for g in frontier if g not in memo}, key=goal_sort_key)
            if not batch:
                break
            deadline.goals = len(memo)
            deadline.check()
            if len(memo) + len(batch) > cfg.max_nonterminals:
                raise NonterminalBudgetExceeded(len(memo), cfg.max_nonterminals)

            def expand(g: Goal):
                return expand_goal(repo, g, cfg, universe=universe, _deadline=deadline)

            results = list(pool.map(expand, batch)) if pool else [expand(g) for g in batch]
            frontier = []
            for g, prods in zip(batch, results):
                memo[g] = prods
                for prod in prods:
                    frontier.extend(prod.arg_goals)
    finally:
        if pool:
            pool.shutdown(wait=False)
    return TreeGrammar(root, memo)


# ---------------------------------------------------------------------------
# derivation certificates


@dataclass(frozen=True, slots=True)
class CertNode:
    comb: str
    n: int
    paths: tuple[tuple[Path, Substitution], ...]
    children: tuple["CertNode", ...]


@dataclass(frozen=True, slots=True)
class DerivationCertificate:
    """The recorded existential choices behind one synthesized term,
    re-checkable without search."""

    term: "object"  # solutions.Term; kept untyped to avoid a module cycle
    root: CertNode
    mode: str = "bcl0"


def certificate_for(grammar: TreeGrammar, term, mode: str = "bcl0") -> DerivationCertificate:
    """Build a certificate for a term generated by the grammar."""
    node = _certify(grammar, grammar.start, term)
    if node is None:
        raise InhabitationError(f"term {term!r} is not generated by this grammar")
    return DerivationCertificate(term, node, mode)


def _certify(grammar: TreeGrammar, goal: Goal, term) -> CertNode | None:
    for prod in grammar.productions.get(goal, ()):
        if prod.comb != term.head or prod.n != len(term.args):
            continue
        children = []
        for sub, g in zip(term.args, prod.arg_goals):
            child = _certify(grammar, g, sub)
            if child is None:
                break
            children.append(child)
        else:
            return CertNode(prod.comb, prod.n, prod.evidence, tuple(children))
    return None


def validate(repo: Repository, cert: DerivationCertificate, goal: Goal | Type) -> bool:
    """Re-check every recorded choice of a certificate against the repository.

    Verifies that each recorded path arises from its recorded substitution
    (identity in fcl mode, images inside the permitted universe otherwise),
    that the stripped targets intersect below each node's goal, and that the
    child goals follow from the intersected argument types.
    """
    root = goal if isinstance(goal, Goal) else Goal.of(goal)
    universe = atoms_of(repo, root.ty)
    try:
        return _validate_node(repo, cert.root, root, universe, cert.mode)
    except (KeyError, IndexError):
        return False


def _validate_node(
    repo: Repository, node: CertNode, goal: Goal, universe: frozenset, mode: str
) -> bool:
    if node.comb not in repo:
        return False
    binding = repo[node.comb]
    if len(node.children) != node.n:
        return False
    for path, s in node.paths:
        if len(path.args) < node.n:
            return False
        if mode == "fcl":
            if not s.is_identity():
                return False
        elif not all(image <= universe for _, image in s.items):
            return False
        if path not in organize(apply_substitution(s, binding.ty)):
            return False
    faces = intersect(*(_suffix(p, node.n).to_type() for p, _ in node.paths))
    if not is_subtype(repo.taxonomy, faces, goal.ty):
        return False
    for i, child in enumerate(node.children):
        child_goal = Goal.of(intersect(*(p.args[i] for p, _ in node.paths)))
        if not _validate_node(repo, child, child_goal, universe, mode):
            return False
    return True
