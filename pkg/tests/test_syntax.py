from __future__ import annotations

import random

import pytest

from combsynth.repository import Binding, Repository
from combsynth.subtyping import Taxonomy
from combsynth.syntax import (
    ParseError,
    parse_repository,
    parse_type,
    random_type,
    render_repository,
    render_type,
)
from combsynth.types import Arrow, Const, Ctor, Inter, OMEGA, Var, canonicalize, intersect


class TestTypeParsing:
    def test_precedence(self):
        # & binds tighter than ->; -> is right-associative
        assert parse_type("a & b -> c") == Arrow(intersect(Const("a"), Const("b")), Const("c"))
        assert parse_type("a -> b -> c") == Arrow(Const("a"), Arrow(Const("b"), Const("c")))

    def test_variables(self):
        assert parse_type("'a -> 'a") == Arrow(Var("a"), Var("a"))

    def test_omega(self):
        assert parse_type("omega") is OMEGA

    def test_ctor(self):
        t = parse_type("D(a, b & c)")
        assert isinstance(t, Ctor) and len(t.args) == 2

    def test_tuple_and_unit(self):
        assert parse_type("()") == Const("Unit")
        assert parse_type("(a, b, c)").name == "Prod3"

    def test_error_position(self):
        with pytest.raises(ParseError) as exc:
            parse_type("a -> ->")
        assert exc.value.line == 1 and exc.value.col == 6

    def test_unbalanced(self):
        with pytest.raises(ParseError):
            parse_type("(a -> b")


class TestRepositoryParsing:
    def test_single_binding(self):
        repo = parse_repository("comb cl2fh : R & Cel -> R & Fh;")
        assert repo.names() == ("cl2fh",)
        assert repo["cl2fh"].ty == canonicalize(parse_type("R & Cel -> R & Fh"))

    def test_variable_binding(self):
        repo = parse_repository("comb f : 'a -> 'a;")
        assert repo["f"].ty == Arrow(Var("a"), Var("a"))

    def test_subtype_statement(self):
        repo = parse_repository("subtype A <= B; comb x : A;")
        assert repo.taxonomy.leq_const("A", "B")

    def test_comments_and_whitespace(self):
        repo = parse_repository("# header\ncomb x : a; # trailing\n\ncomb y : b;")
        assert repo.names() == ("x", "y")

    def test_duplicate_combinator(self):
        with pytest.raises(ParseError, match="duplicate"):
            parse_repository("comb x : a; comb x : b;")

    def test_arity_conflict(self):
        with pytest.raises(ParseError, match="arit"):
            parse_repository("comb x : D(a); comb y : D(a, b);")

    def test_syntax_error_has_position(self):
        with pytest.raises(ParseError) as exc:
            parse_repository("comb x : a;\ncomb : b;")
        assert exc.value.line == 2

    def test_unknown_statement(self):
        with pytest.raises(ParseError, match="comb"):
            parse_repository("combinator x : a;")


class TestRoundTrip:
    def test_random_repositories(self):
        rng = random.Random(42)
        for _ in range(200):
            bindings = tuple(
                Binding(f"c{i}", canonicalize(random_type(rng, 3, ["A", "B", "C"], ["x", "y"])))
                for i in range(rng.randint(1, 5))
            )
            edges = frozenset({("A", "B")} if rng.random() < 0.5 else set())
            repo = Repository(bindings, Taxonomy(edges))
            again = parse_repository(render_repository(repo))
            assert again.names() == repo.names()
            for b in repo.bindings:
                assert again[b.name].ty == b.ty
            assert again.taxonomy.declared_edges == repo.taxonomy.declared_edges

    def test_render_parse_types(self):
        rng = random.Random(17)
        for _ in range(300):
            t = canonicalize(random_type(rng, 4, ["a", "b"], ["x"]))
            assert parse_type(render_type(t)) == t
