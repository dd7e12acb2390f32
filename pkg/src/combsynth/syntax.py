"""Parsing and printing for the textual type and repository languages.

Type syntax: ``&`` for intersection (binds tighter than the right-associative
``->``), ``omega`` for the top element, ``'name`` for variables,
``Name(...)`` for constructor applications, ``(t1, ..., tn)`` tuple sugar for
the built-in ``Prodn`` constructors, and ``()`` for the constant ``Unit``.

Repository files (``.clr``) hold ``comb name : type ;`` and
``subtype A <= B ;`` statements with ``#`` line comments.
"""
from __future__ import annotations

import random
import string
from dataclasses import dataclass

from .repository import Binding, Repository, RepositoryError
from .subtyping import Taxonomy
from .types import (
    Arrow,
    Const,
    Ctor,
    Inter,
    OMEGA,
    OmegaType,
    TUPLE_CTOR_PREFIX,
    Type,
    UNIT_NAME,
    Var,
    canonicalize,
    tuple_type,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    value: str
    line: int
    col: int


_IDENT_START = set(string.ascii_letters + "_")
_IDENT_CHARS = set(string.ascii_letters + string.digits + "_.")
_PUNCT = {
    "->": "ARROW",
    "<=": "LEQ",
    "&": "AMP",
    "(": "LPAREN",
    ")": "RPAREN",
    ",": "COMMA",
    ";": "SEMI",
    ":": "COLON",
}


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        two = text[i : i + 2]
        if two in _PUNCT:
            tokens.append(Token(_PUNCT[two], two, line, col))
            i += 2
            col += 2
            continue
        if c in _PUNCT:
            tokens.append(Token(_PUNCT[c], c, line, col))
            i += 1
            col += 1
            continue
        if c == "'":
            j = i + 1
            while j < n and text[j] in _IDENT_CHARS:
                j += 1
            if j == i + 1:
                raise ParseError("expected a variable name after '", line, col)
            tokens.append(Token("VAR", text[i + 1 : j], line, col))
            col += j - i
            i = j
            continue
        if c in _IDENT_START:
            j = i + 1
            while j < n and text[j] in _IDENT_CHARS:
                j += 1
            tokens.append(Token("IDENT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", line, col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {kind}, found {tok.value or tok.kind!r}", tok.line, tok.col)
        return self.next()

    def error(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.col)

    # type := inter ('->' type)?      (right-associative arrow)
    def type_expr(self) -> Type:
        left = self.inter_expr()
        if self.peek().kind == "ARROW":
            self.next()
            return Arrow(left, self.type_expr())
        return left

    def inter_expr(self) -> Type:
        parts = [self.atom_expr()]
        while self.peek().kind == "AMP":
            self.next()
            parts.append(self.atom_expr())
        if len(parts) == 1:
            return parts[0]
        return Inter(tuple(parts))

    def atom_expr(self) -> Type:
        tok = self.peek()
        if tok.kind == "VAR":
            self.next()
            return Var(tok.value)
        if tok.kind == "IDENT":
            self.next()
            if tok.value == "omega":
                return OMEGA
            if self.peek().kind == "LPAREN":
                self.next()
                args = [self.type_expr()]
                while self.peek().kind == "COMMA":
                    self.next()
                    args.append(self.type_expr())
                self.expect("RPAREN")
                return Ctor(tok.value, tuple(args))
            return Const(tok.value)
        if tok.kind == "LPAREN":
            self.next()
            if self.peek().kind == "RPAREN":
                self.next()
                return Const(UNIT_NAME)
            items = [self.type_expr()]
            while self.peek().kind == "COMMA":
                self.next()
                items.append(self.type_expr())
            self.expect("RPAREN")
            if len(items) == 1:
                return items[0]
            return tuple_type(*items)
        raise self.error(f"expected a type, found {tok.value or tok.kind!r}")


def parse_type(text: str) -> Type:
    """Parse a single type expression; the result is canonicalized."""
    parser = _Parser(tokenize(text))
    t = parser.type_expr()
    parser.expect("EOF")
    return canonicalize(t)


def parse_repository(text: str) -> Repository:
    """Parse ``comb``/``subtype`` statements into a validated repository."""
    parser = _Parser(tokenize(text))
    bindings: list[Binding] = []
    seen: set[str] = set()
    edges: set[tuple[str, str]] = set()
    while parser.peek().kind != "EOF":
        tok = parser.expect("IDENT")
        if tok.value == "comb":
            name = parser.expect("IDENT")
            parser.expect("COLON")
            ty = parser.type_expr()
            parser.expect("SEMI")
            if name.value in seen:
                raise ParseError(f"duplicate combinator {name.value!r}", name.line, name.col)
            seen.add(name.value)
            bindings.append(Binding(name.value, canonicalize(ty)))
        elif tok.value == "subtype":
            lo = parser.expect("IDENT")
            parser.expect("LEQ")
            hi = parser.expect("IDENT")
            parser.expect("SEMI")
            edges.add((lo.value, hi.value))
        else:
            raise ParseError(
                f"expected 'comb' or 'subtype', found {tok.value!r}", tok.line, tok.col
            )
    try:
        return Repository(tuple(bindings), Taxonomy(frozenset(edges)))
    except RepositoryError as exc:
        raise ParseError(str(exc), parser.peek().line, parser.peek().col) from exc


def _is_tuple_ctor(t: Type) -> bool:
    return (
        isinstance(t, Ctor)
        and t.name.startswith(TUPLE_CTOR_PREFIX)
        and t.name[len(TUPLE_CTOR_PREFIX) :] == str(len(t.args))
    )


def render_type(t: Type) -> str:
    """Print a type in the surface syntax (parseable for identifier-safe names)."""
    return _render(t, 0)


# precedence levels: 0 arrow, 1 intersection, 2 atom
def _render(t: Type, level: int) -> str:
    if isinstance(t, OmegaType):
        return "omega"
    if isinstance(t, Const):
        return "()" if t.name == UNIT_NAME else t.name
    if isinstance(t, Var):
        return f"'{t.name}"
    if isinstance(t, Ctor):
        if _is_tuple_ctor(t):
            return "(" + ", ".join(_render(a, 0) for a in t.args) + ")"
        return t.name + "(" + ", ".join(_render(a, 0) for a in t.args) + ")"
    if isinstance(t, Arrow):
        body = f"{_render(t.source, 1)} -> {_render(t.target, 0)}"
        return f"({body})" if level > 0 else body
    if isinstance(t, Inter):
        body = " & ".join(_render(p, 2) for p in t.parts)
        return f"({body})" if level > 1 else body
    raise TypeError(f"not a type: {t!r}")


def render_repository(repo: Repository) -> str:
    """Print a repository back in the ``.clr`` statement syntax."""
    lines = [
        f"subtype {lo} <= {hi};"
        for lo, hi in sorted(repo.taxonomy.declared_edges)
    ]
    lines.extend(f"comb {b.name} : {render_type(b.ty)};" for b in repo.bindings)
    return "\n".join(lines) + "\n"


def random_type(rng: random.Random, depth: int, consts: list[str], vars_: list[str]) -> Type:
    """A random type with AST depth <= ``depth``; used by property tests."""
    leaves = ["const"] * 5 + (["var"] * 2 if vars_ else []) + ["omega"]
    if depth <= 0:
        kind = rng.choice(leaves)
    else:
        kind = rng.choice(leaves + ["arrow"] * 4 + ["inter"] * 4)
    if kind == "const":
        return Const(rng.choice(consts))
    if kind == "var":
        return Var(rng.choice(vars_))
    if kind == "omega":
        return OMEGA
    if kind == "arrow":
        return Arrow(
            random_type(rng, depth - 1, consts, vars_),
            random_type(rng, depth - 1, consts, vars_),
        )
    return Inter(
        (
            random_type(rng, depth - 1, consts, vars_),
            random_type(rng, depth - 1, consts, vars_),
        )
    )
