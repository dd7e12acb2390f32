from __future__ import annotations

import random

from combsynth.repository import Substitution, apply_substitution
from combsynth.subtyping import EMPTY_TAXONOMY, Taxonomy, atom_leq, equiv, is_subtype
from combsynth.syntax import parse_type, random_type
from combsynth.types import OMEGA, Arrow, Const, Inter, Var, canonicalize, intersect

from saturation import SaturatedSubtyping, build_universe

a, b, c = Const("a"), Const("b"), Const("c")
tax0 = EMPTY_TAXONOMY


def rand_types(seed, count, depth=3, consts=("a", "b", "c"), with_vars=False):
    rng = random.Random(seed)
    vars_ = ["x", "y"] if with_vars else []
    return [canonicalize(random_type(rng, depth, list(consts), vars_)) for _ in range(count)]


class TestAtomLeq:
    def test_reflexive(self):
        assert atom_leq(tax0, Const("x"), Const("x"))
        assert atom_leq(tax0, Var("x"), Var("x"))

    def test_omega_is_top(self):
        assert atom_leq(tax0, a, OMEGA)
        assert not atom_leq(tax0, OMEGA, a)

    def test_semantic_structure_edge(self):
        tax = Taxonomy.of([("Cart", "Coord"), ("Polar", "Coord")])
        assert atom_leq(tax, Const("Cart"), Const("Coord"))
        assert not atom_leq(tax, Const("Coord"), Const("Cart"))

    def test_hierarchy_is_transitive(self):
        tax = Taxonomy.of(
            [("ViewIngr&Prep", "ViewRecipeDetails"), ("ViewRecipeDetails", "ViewRecipe")]
        )
        assert atom_leq(tax, Const("ViewIngr&Prep"), Const("ViewRecipe"))

    def test_variables_unrelated_to_constants(self):
        assert not atom_leq(tax0, Var("a"), Const("a"))
        assert not atom_leq(tax0, Const("a"), Var("a"))


class TestAxioms:
    def test_projection(self):
        for s, t in zip(rand_types(1, 50), rand_types(2, 50)):
            assert is_subtype(tax0, intersect(s, t), s)
            assert is_subtype(tax0, intersect(s, t), t)

    def test_arrow_distribution(self):
        assert is_subtype(tax0, parse_type("(a->b) & (a->c)"), parse_type("a -> b & c"))

    def test_omega_arrow(self):
        assert is_subtype(tax0, OMEGA, parse_type("omega -> omega"))
        assert equiv(tax0, OMEGA, parse_type("omega -> omega"))

    def test_everything_below_omega(self):
        for s in rand_types(3, 50):
            assert is_subtype(tax0, s, OMEGA)

    def test_ctor_match_after_substitution(self):
        tax = Taxonomy.of([("Cart", "Coord"), ("Polar", "Coord")])
        s = parse_type("D((R,R) & Cart, R & Gpst, R & Cel)")
        template = parse_type("D((R,R) & 'a, R & 'b, R)")
        subst = Substitution.of({"a": frozenset({"Cart"}), "b": frozenset({"Gpst"})})
        target = apply_substitution(subst, template)
        assert is_subtype(tax, s, target)
        assert not is_subtype(tax, s, parse_type("D((R,R) & Polar, R, R)"))

    def test_ctor_distributivity(self):
        gathered = parse_type("D(a, c) & D(b, c)")
        merged = parse_type("D(a & b, c)")
        assert equiv(tax0, gathered, merged)


class TestEquiv:
    def test_commutative(self):
        assert equiv(tax0, intersect(a, b), intersect(b, a))

    def test_unrelated_constants(self):
        assert not equiv(tax0, a, b)


class TestPreorderLaws:
    def test_reflexivity_and_transitivity(self):
        ts = rand_types(11, 34)
        for s in ts:
            assert is_subtype(tax0, s, s)
        rng = random.Random(5)
        triples = [(rng.choice(ts), rng.choice(ts), rng.choice(ts)) for _ in range(1000)]
        for s, t, u in triples:
            if is_subtype(tax0, s, t) and is_subtype(tax0, t, u):
                assert is_subtype(tax0, s, u)

    def test_congruence(self):
        xs = rand_types(21, 20, depth=2)
        rng = random.Random(9)
        for _ in range(300):
            s, s2, t, t2 = (rng.choice(xs) for _ in range(4))
            if is_subtype(tax0, s, s2) and is_subtype(tax0, t, t2):
                assert is_subtype(tax0, intersect(s, t), intersect(s2, t2))
                assert is_subtype(tax0, Arrow(s2, t), Arrow(s, t2))

    def test_canonicalize_invariance(self):
        rng = random.Random(13)
        for _ in range(200):
            s = random_type(rng, 3, ["a", "b"], [])
            t = random_type(rng, 3, ["a", "b"], [])
            expected = is_subtype(tax0, canonicalize(s), canonicalize(t))
            assert is_subtype(tax0, s, t) == expected
            assert is_subtype(tax0, canonicalize(s), t) == expected
            assert is_subtype(tax0, s, canonicalize(t)) == expected


class TestSaturationAgreement:
    def test_depth_one_universe(self):
        universe = build_universe(("a", "b", "c"), depth=1)
        oracle = SaturatedSubtyping(universe, (("a", "b"),))
        tax = Taxonomy.of([("a", "b")])
        for s in universe:
            for t in universe:
                assert oracle.leq(s, t) == is_subtype(tax, s, t), (s, t)
