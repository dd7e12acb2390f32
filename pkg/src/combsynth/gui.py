"""GUI synthesis from a repository of interaction nets and GUI fragments.

The repository is a four-level hierarchy (objects, interactions,
alternatives, variants); variants are realized either by GUI fragments
(GUIFs), each tagged with the usage contexts it suits, or by interaction
nets (AINs) whose transitions are labeled with interactions and have to be
realized recursively.  ``translate`` turns such a repository into a typed
combinator environment, ``queries_for`` produces one inhabitation goal per
transition, and ``assemble`` folds synthesized terms back into fully
resolved nets.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .inhabitation import Goal, SearchConfig, TreeGrammar, inhabit
from .repository import Binding, Repository
from .solutions import Term, enumerate_terms
from .subtyping import Taxonomy
from .syntax import ParseError, Token, tokenize as _clr_tokenize
from .types import Arrow, Const, Inter, Type, Var, canonicalize, uc_normalize


class GuiRepositoryError(Exception):
    """Malformed GUI repository: bad hierarchy, dangling references, ..."""


@dataclass(frozen=True, slots=True)
class GuifDef:
    """A GUI fragment realizer with its non-empty usage-context vector."""

    name: str
    contexts: frozenset[str]


@dataclass(frozen=True, slots=True)
class AinRef:
    """A reference to an interaction net realizing the owning variant."""

    name: str


@dataclass(frozen=True, slots=True)
class Variant:
    name: str
    realizers: tuple = ()


@dataclass(frozen=True, slots=True)
class Alternative:
    name: str
    variants: tuple[Variant, ...] = ()


@dataclass(frozen=True, slots=True)
class Interaction:
    name: str
    alternatives: tuple[Alternative, ...] = ()


@dataclass(frozen=True, slots=True)
class ObjectNode:
    name: str
    interactions: tuple[Interaction, ...] = ()


@dataclass(frozen=True, slots=True)
class Transition:
    id: str
    label: str  # names an interaction of the hierarchy


@dataclass(frozen=True, slots=True)
class InteractionNet:
    """An extended Petri-net skeleton: places, labeled transitions, arcs."""

    name: str
    places: frozenset[str] = frozenset()
    transitions: tuple[Transition, ...] = ()
    arcs: frozenset[tuple[str, str]] = frozenset()


@dataclass(frozen=True)
class GuiRepository:
    """Hierarchy plus the contexts universe and the declared nets.

    ``nets`` maps a net name to its definition, or to None when the net is
    declared but its body is unknown; such nets translate to no binding and
    cannot be synthesized against.
    """

    objects: tuple[ObjectNode, ...]
    contexts: frozenset[str]
    nets: dict[str, InteractionNet | None] = field(default_factory=dict)

    def interactions(self) -> tuple[Interaction, ...]:
        return tuple(i for o in self.objects for i in o.interactions)

    def validate(self) -> None:
        _check_unique("object", [o.name for o in self.objects])
        interactions = self.interactions()
        _check_unique("interaction", [i.name for i in interactions])
        interaction_names = {i.name for i in interactions}
        alternatives = [a for i in interactions for a in i.alternatives]
        _check_unique("alternative", [a.name for a in alternatives])
        variants = [v for a in alternatives for v in a.variants]
        _check_unique("variant", [v.name for v in variants])
        realizer_names = []
        for v in variants:
            for r in v.realizers:
                realizer_names.append(r.name)
                if isinstance(r, GuifDef):
                    if not r.contexts:
                        raise GuiRepositoryError(f"GUIF {r.name!r} has an empty context vector")
                    extra = r.contexts - self.contexts
                    if extra:
                        raise GuiRepositoryError(
                            f"GUIF {r.name!r} uses undeclared contexts {sorted(extra)}"
                        )
                elif r.name not in self.nets:
                    raise GuiRepositoryError(f"dangling net reference {r.name!r}")
        _check_unique("realizer", realizer_names)
        for net in self.nets.values():
            if net is None:
                continue
            ids = [t.id for t in net.transitions]
            _check_unique(f"transition of {net.name!r}", ids)
            nodes = net.places | set(ids)
            for src, dst in net.arcs:
                if src not in nodes or dst not in nodes:
                    raise GuiRepositoryError(
                        f"arc ({src}, {dst}) of {net.name!r} references an unknown node"
                    )
                if (src in net.places) == (dst in net.places):
                    raise GuiRepositoryError(
                        f"arc ({src}, {dst}) of {net.name!r} is not place-transition bipartite"
                    )
            for t in net.transitions:
                if t.label not in interaction_names:
                    raise GuiRepositoryError(
                        f"transition {t.id!r} of {net.name!r} is labeled with "
                        f"unknown interaction {t.label!r}"
                    )


def _check_unique(kind: str, names: list[str]) -> None:
    seen: set[str] = set()
    for name in names:
        if name in seen:
            raise GuiRepositoryError(f"duplicate {kind} name {name!r}")
        seen.add(name)


# ---------------------------------------------------------------------------
# translation to a typed repository

CONTEXT_VAR = "ctx"


def _uc_of(contexts: frozenset[str]) -> Type:
    return uc_normalize(canonicalize(Inter(tuple(Const(c) for c in sorted(contexts)))))


def translate(gr: GuiRepository) -> Repository:
    """One binding per GUIF (variant constant & its context vector) and one
    per defined net (arrow over its transition interactions, each & uc of a
    shared variable); the hierarchy becomes taxonomy edges variant <=
    alternative <= interaction."""
    gr.validate()
    edges: set[tuple[str, str]] = set()
    bindings: list[Binding] = []
    ctx_var = Var(CONTEXT_VAR)
    for obj in gr.objects:
        for interaction in obj.interactions:
            for alternative in interaction.alternatives:
                edges.add((alternative.name, interaction.name))
                for variant in alternative.variants:
                    edges.add((variant.name, alternative.name))
                    v_const = Const(variant.name)
                    for realizer in variant.realizers:
                        if isinstance(realizer, GuifDef):
                            ty = canonicalize(v_const & _uc_of(realizer.contexts))
                            bindings.append(Binding(realizer.name, ty))
                        else:
                            net = gr.nets[realizer.name]
                            if net is None:
                                continue  # declared without a body: no binding
                            ty: Type = canonicalize(v_const & uc_normalize(ctx_var))
                            for t in reversed(net.transitions):
                                arg = canonicalize(Const(t.label) & uc_normalize(ctx_var))
                                ty = Arrow(arg, ty)
                            bindings.append(Binding(realizer.name, canonicalize(ty)))
    return Repository(tuple(bindings), Taxonomy(frozenset(edges)))


def queries_for(net: InteractionNet, ctx: frozenset[str] | set[str]) -> tuple[Goal, ...]:
    """One inhabitation goal per transition: its interaction constant & the
    usage-context vector."""
    ctx = frozenset(ctx)
    if not ctx:
        raise GuiRepositoryError("usage context must be non-empty")
    uc_ty = _uc_of(ctx)
    return tuple(Goal.of(Const(t.label) & uc_ty) for t in net.transitions)


# ---------------------------------------------------------------------------
# assembly of inhabitants into resolved nets


@dataclass(frozen=True, slots=True)
class GuifLeaf:
    name: str


@dataclass(frozen=True, slots=True)
class ResolvedNet:
    """A net with every transition realized by a GUIF or, recursively, by
    another fully resolved net."""

    net: InteractionNet
    realization: tuple  # ((transition id, GuifLeaf | ResolvedNet), ...)


def _realizer_index(gr: GuiRepository) -> dict[str, "GuifDef | AinRef"]:
    out: dict[str, GuifDef | AinRef] = {}
    for obj in gr.objects:
        for interaction in obj.interactions:
            for alternative in interaction.alternatives:
                for variant in alternative.variants:
                    for r in variant.realizers:
                        out[r.name] = r
    return out


def assemble(term: Term, gr: GuiRepository) -> "GuifLeaf | ResolvedNet":
    """Fold a synthesized term into a GUIF leaf or a resolved net."""
    index = _realizer_index(gr)
    return _assemble(term, gr, index)


def _assemble(term: Term, gr: GuiRepository, index: dict) -> "GuifLeaf | ResolvedNet":
    realizer = index.get(term.head)
    if realizer is None:
        raise GuiRepositoryError(f"unknown GUIF or net {term.head!r}")
    if isinstance(realizer, GuifDef):
        if term.args:
            raise GuiRepositoryError(f"GUIF {term.head!r} applied to arguments")
        return GuifLeaf(term.head)
    net = gr.nets[term.head]
    if net is None:
        raise GuiRepositoryError(f"net {term.head!r} has no definition")
    if len(term.args) != len(net.transitions):
        raise GuiRepositoryError(
            f"net {term.head!r} has {len(net.transitions)} transitions, "
            f"got {len(term.args)} arguments"
        )
    realization = tuple(
        (t.id, _assemble(arg, gr, index)) for t, arg in zip(net.transitions, term.args)
    )
    return ResolvedNet(net, realization)


@dataclass(frozen=True)
class TransitionSynthesis:
    """The outcome for one transition: the goal asked, every realization found
    up to the size bound, and whether the transition is unrealizable."""

    transition: Transition
    goal: Goal
    terms: tuple[Term, ...]
    realizations: tuple

    @property
    def unrealizable(self) -> bool:
        return not self.realizations


def synthesize_gui(
    gr: GuiRepository,
    ain_name: str,
    ctx: frozenset[str] | set[str],
    cfg: SearchConfig | None = None,
    size_bound: int = 10,
) -> tuple[TransitionSynthesis, ...]:
    """Translate, pose one query per transition of the named net, and
    assemble every inhabitant; transitions with no solution are reported as
    unrealizable."""
    cfg = cfg or SearchConfig()
    net = gr.nets.get(ain_name)
    if ain_name not in gr.nets:
        raise GuiRepositoryError(f"unknown net {ain_name!r}")
    if net is None:
        raise GuiRepositoryError(f"net {ain_name!r} has no definition")
    repo = translate(gr)
    index = _realizer_index(gr)
    out = []
    for transition, goal in zip(net.transitions, queries_for(net, ctx)):
        grammar = inhabit(repo, goal, cfg)
        terms = tuple(enumerate_terms(grammar, size_bound))
        realizations = tuple(_assemble(t, gr, index) for t in terms)
        out.append(TransitionSynthesis(transition, goal, terms, realizations))
    return tuple(out)


def resolved_nets(
    gr: GuiRepository,
    ain_name: str,
    ctx: frozenset[str] | set[str],
    cfg: SearchConfig | None = None,
    size_bound: int = 10,
    limit: int = 10,
) -> tuple[ResolvedNet, ...]:
    """Complete resolved nets for the named net: one per combination of
    per-transition realizations, up to ``limit``."""
    import itertools

    results = synthesize_gui(gr, ain_name, ctx, cfg, size_bound)
    if any(r.unrealizable for r in results):
        return ()
    net = gr.nets[ain_name]
    combos = itertools.islice(
        itertools.product(*(r.realizations for r in results)), limit
    )
    return tuple(
        ResolvedNet(net, tuple((t.id, choice) for t, choice in zip(net.transitions, combo)))
        for combo in combos
    )


def net_to_json(resolved: ResolvedNet) -> dict:
    """JSON-ready structure for a resolved net."""
    return {
        "ain": resolved.net.name,
        "places": sorted(resolved.net.places),
        "arcs": sorted([src, dst] for src, dst in resolved.net.arcs),
        "transitions": [
            {
                "id": tid,
                "label": next(
                    t.label for t in resolved.net.transitions if t.id == tid
                ),
                "realization": (
                    {"guif": r.name} if isinstance(r, GuifLeaf) else {"ain": net_to_json(r)}
                ),
            }
            for tid, r in resolved.realization
        ],
    }


def render_net_json(resolved: ResolvedNet) -> str:
    return json.dumps(net_to_json(resolved), indent=2, sort_keys=False)


# ---------------------------------------------------------------------------
# .gar file format


_GAR_PUNCT = {"{": "LBRACE", "}": "RBRACE", "[": "LBRACK", "]": "RBRACK",
              "(": "LPAREN", ")": "RPAREN", ",": "COMMA", ";": "SEMI", ":": "COLON"}
_GAR_NAME_CHARS = set(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.&-"
)


def _gar_tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
        elif c in " \t\r":
            i += 1
            col += 1
        elif c == "#":
            while i < len(text) and text[i] != "\n":
                i += 1
        elif c in _GAR_PUNCT:
            tokens.append(Token(_GAR_PUNCT[c], c, line, col))
            i += 1
            col += 1
        elif c in _GAR_NAME_CHARS:
            j = i
            while j < len(text) and text[j] in _GAR_NAME_CHARS:
                j += 1
            tokens.append(Token("NAME", text[i:j], line, col))
            col += j - i
            i = j
        else:
            raise ParseError(f"unexpected character {c!r}", line, col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


class _GarParser:
    def __init__(self, text: str):
        self.tokens = _gar_tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, value: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value or kind
            raise ParseError(f"expected {want}, found {tok.value or tok.kind!r}", tok.line, tok.col)
        return self.next()

    def keyword(self) -> str:
        return self.peek().value if self.peek().kind == "NAME" else ""

    def name_list(self) -> list[str]:
        names = []
        if self.peek().kind == "NAME":
            names.append(self.next().value)
            while self.peek().kind == "COMMA":
                self.next()
                names.append(self.expect("NAME").value)
        return names

    def parse(self) -> GuiRepository:
        contexts: set[str] = set()
        objects: list[ObjectNode] = []
        nets: dict[str, InteractionNet | None] = {}
        while self.peek().kind != "EOF":
            kw = self.expect("NAME")
            if kw.value == "contexts":
                self.expect("LBRACE")
                contexts.update(self.name_list())
                self.expect("RBRACE")
            elif kw.value == "object":
                objects.append(self.object_decl())
            elif kw.value == "ain":
                name = self.expect("NAME").value
                if self.peek().kind == "SEMI":
                    self.next()
                    nets.setdefault(name, None)
                else:
                    nets[name] = self.net_body(name)
            else:
                raise ParseError(
                    f"expected 'contexts', 'object' or 'ain', found {kw.value!r}",
                    kw.line,
                    kw.col,
                )
        gr = GuiRepository(tuple(objects), frozenset(contexts), nets)
        try:
            gr.validate()
        except GuiRepositoryError as exc:
            tok = self.peek()
            raise ParseError(str(exc), tok.line, tok.col) from exc
        return gr

    def object_decl(self) -> ObjectNode:
        name = self.expect("NAME").value
        self.expect("LBRACE")
        interactions = []
        while self.keyword() == "interaction":
            self.next()
            interactions.append(self.interaction_decl())
        self.expect("RBRACE")
        return ObjectNode(name, tuple(interactions))

    def interaction_decl(self) -> Interaction:
        name = self.expect("NAME").value
        self.expect("LBRACE")
        alternatives = []
        while self.keyword() == "alternative":
            self.next()
            alternatives.append(self.alternative_decl())
        self.expect("RBRACE")
        return Interaction(name, tuple(alternatives))

    def alternative_decl(self) -> Alternative:
        name = self.expect("NAME").value
        self.expect("LBRACE")
        variants = []
        while self.keyword() == "variant":
            self.next()
            variants.append(self.variant_decl())
        self.expect("RBRACE")
        return Alternative(name, tuple(variants))

    def variant_decl(self) -> Variant:
        name = self.expect("NAME").value
        self.expect("LBRACE")
        realizers: list = []
        while self.keyword() in ("guif", "ain"):
            kw = self.next()
            rname = self.expect("NAME").value
            if kw.value == "guif":
                self.expect("NAME", "ctx")
                self.expect("LBRACE")
                ctxs = frozenset(self.name_list())
                self.expect("RBRACE")
                realizers.append(GuifDef(rname, ctxs))
            else:
                realizers.append(AinRef(rname))
        self.expect("RBRACE")
        return Variant(name, tuple(realizers))

    def net_body(self, name: str) -> InteractionNet:
        self.expect("LBRACE")
        places: frozenset[str] = frozenset()
        transitions: tuple[Transition, ...] = ()
        arcs: set[tuple[str, str]] = set()
        while self.peek().kind != "RBRACE":
            kw = self.expect("NAME")
            self.expect("COLON")
            self.expect("LBRACK")
            if kw.value == "places":
                places = frozenset(self.name_list())
            elif kw.value == "transitions":
                ts = []
                if self.peek().kind == "NAME":
                    while True:
                        tid = self.expect("NAME").value
                        self.expect("COLON")
                        label = self.expect("NAME").value
                        ts.append(Transition(tid, label))
                        if self.peek().kind != "COMMA":
                            break
                        self.next()
                transitions = tuple(ts)
            elif kw.value == "arcs":
                while self.peek().kind == "LPAREN":
                    self.next()
                    src = self.expect("NAME").value
                    self.expect("COMMA")
                    dst = self.expect("NAME").value
                    self.expect("RPAREN")
                    arcs.add((src, dst))
                    if self.peek().kind == "COMMA":
                        self.next()
            else:
                raise ParseError(
                    f"expected 'places', 'transitions' or 'arcs', found {kw.value!r}",
                    kw.line,
                    kw.col,
                )
            self.expect("RBRACK")
            if self.peek().kind == "SEMI":
                self.next()
        self.expect("RBRACE")
        return InteractionNet(name, places, transitions, frozenset(arcs))


def parse_gui_repository(text: str) -> GuiRepository:
    """Parse the ``.gar`` structured text format."""
    return _GarParser(text).parse()
