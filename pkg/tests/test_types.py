from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from combsynth.subtyping import EMPTY_TAXONOMY, equiv
from combsynth.syntax import parse_type, random_type, render_type
from combsynth.types import (
    Arrow,
    Const,
    Ctor,
    Inter,
    OMEGA,
    Path,
    Var,
    canonicalize,
    intersect,
    organize,
    path_length,
    path_split,
    paths_at_least,
    render_organized,
    tuple_type,
    uc,
    uc_normalize,
)

a, b, c = Const("a"), Const("b"), Const("c")


def types_strategy(max_depth: int = 4):
    atoms = st.sampled_from([a, b, c, OMEGA, Var("x")])
    return st.recursive(
        atoms,
        lambda sub: st.one_of(
            st.tuples(sub, sub).map(lambda p: Arrow(*p)),
            st.tuples(sub, sub).map(lambda p: Inter(p)),
            st.tuples(sub, sub).map(lambda p: Ctor("D", p)),
        ),
        max_leaves=2**max_depth,
    )


class TestCanonicalize:
    def test_idempotent_flatten(self):
        assert canonicalize(Inter((a, Inter((a, b))))) == intersect(a, b)

    def test_omega_absorbed(self):
        assert canonicalize(Inter((a, OMEGA))) == a

    def test_omega_alone(self):
        assert canonicalize(Inter((OMEGA, OMEGA))) is OMEGA

    @given(types_strategy())
    @settings(max_examples=300, deadline=None)
    def test_idempotent(self, t):
        once = canonicalize(t)
        assert canonicalize(once) is once

    def test_idempotent_random_batch(self):
        rng = random.Random(7)
        for _ in range(1000):
            t = random_type(rng, 4, ["a", "b", "c"], ["x"])
            once = canonicalize(t)
            assert canonicalize(once) is once

    @given(types_strategy())
    @settings(max_examples=200, deadline=None)
    def test_order_insensitive(self, t):
        flipped = _permute(t)
        assert canonicalize(t) == canonicalize(flipped)

    def test_uc_distributes(self):
        assert uc(intersect(a, b)) == intersect(uc(a), uc(b))

    def test_uc_absorbs_omega(self):
        assert uc(OMEGA) is OMEGA

    def test_ordinary_ctor_not_distributed(self):
        t = canonicalize(Ctor("D", (intersect(a, b),)))
        assert isinstance(t, Ctor) and t.name == "D"


def _permute(t):
    if isinstance(t, Inter):
        return Inter(tuple(reversed([_permute(p) for p in t.parts])))
    if isinstance(t, Arrow):
        return Arrow(_permute(t.source), _permute(t.target))
    if isinstance(t, Ctor):
        return Ctor(t.name, tuple(_permute(x) for x in t.args))
    return t


class TestOrganize:
    def test_projection_type_three_paths(self):
        t = parse_type("((R,R) & Coord -> R) & (Cart -> Cx) & (Polar -> Radius)")
        paths = organize(t)
        assert len(paths) == 3
        rendered = {render_type(p.to_type()) for p in paths}
        assert rendered == {
            "Coord & (R, R) -> R",
            "Cart -> Cx",
            "Polar -> Radius",
        }

    def test_omega_arrow_is_empty(self):
        assert organize(Arrow(OMEGA, OMEGA)) == frozenset()

    def test_target_intersection_splits(self):
        paths = organize(parse_type("a -> b & c"))
        assert {render_type(p.to_type()) for p in paths} == {"a -> b", "a -> c"}

    def test_ctor_is_leaf(self):
        paths = organize(parse_type("D(a & b, c)"))
        assert len(paths) == 1
        (p,) = paths
        assert p.args == () and isinstance(p.leaf, Ctor)

    @given(types_strategy())
    @settings(max_examples=150, deadline=None)
    def test_equivalent_to_input(self, t):
        assert equiv(EMPTY_TAXONOMY, t, render_organized(organize(t)))

    @given(types_strategy())
    @settings(max_examples=150, deadline=None)
    def test_output_linear_in_leaves(self, t):
        assert len(organize(t)) <= _leaf_count(t)


def _leaf_count(t) -> int:
    if isinstance(t, Arrow):
        return _leaf_count(t.target)
    if isinstance(t, Inter):
        return sum(_leaf_count(p) for p in t.parts)
    return 1


class TestPaths:
    def test_paths_at_least_zero_is_all(self):
        o = organize(parse_type("(a -> b) & c"))
        assert paths_at_least(o, 0) == o

    def test_atom_path_has_length_zero(self):
        o = organize(a)
        assert paths_at_least(o, 1) == frozenset()

    def test_create_controls_two_argument_paths(self):
        t = parse_type("wndHnd & uninitialized -> layoutObj -> wndHnd & initialized")
        o = organize(t)
        assert len(paths_at_least(o, 2)) == 2
        assert paths_at_least(o, 3) == frozenset()

    def test_split_basic(self):
        p = Path((a, b), c)
        assert path_split(p, 2) == ((a, b), c)
        assert path_split(p, 0) == ((), parse_type("a -> b -> c"))

    def test_split_beyond_length(self):
        with pytest.raises(ValueError):
            path_split(Path((a,), b), 2)

    def test_split_conversion_combinator(self):
        # both paths of R & Cel -> R & Fh split into ([R & Cel], leaf)
        t = parse_type("R & Cel -> R & Fh")
        for p in organize(t):
            args, rest = path_split(p, 1)
            assert args == (parse_type("R & Cel"),)
            assert rest in (Const("R"), Const("Fh"))

    def test_split_roundtrip(self):
        rng = random.Random(3)
        for _ in range(200):
            t = canonicalize(random_type(rng, 3, ["a", "b"], []))
            for p in organize(t):
                for n in range(len(p.args) + 1):
                    args, rest = path_split(p, n)
                    rebuilt = rest
                    for arg in reversed(args):
                        rebuilt = Arrow(arg, rebuilt)
                    assert canonicalize(rebuilt) == p.to_type()

    def test_path_length_examples(self):
        assert path_length(OMEGA) == 0
        assert path_length(parse_type("(a -> b) & (a -> b -> c)")) == 2

    def test_path_length_net_binding(self, meal_gui):
        from combsynth.gui import translate

        repo = translate(meal_gui)
        assert path_length(repo["ViewMeal.ain"].ty) == 4


class TestTupleSugar:
    def test_unit(self):
        assert parse_type("()") == Const("Unit")

    def test_pairs_are_prod(self):
        t = parse_type("(a, b)")
        assert t == tuple_type(a, b)
        assert isinstance(t, Ctor) and t.name == "Prod2"

    def test_grouping_is_not_a_tuple(self):
        assert parse_type("(a)") == a


class TestUcNormalize:
    def test_distributes(self):
        s, e, i = Const("s"), Const("e"), Const("i")
        assert uc_normalize(intersect(s, e, i)) == intersect(uc(s), uc(e), uc(i))

    def test_omega(self):
        assert uc_normalize(OMEGA) is OMEGA

    def test_singleton(self):
        p = Const("p")
        out = uc_normalize(p)
        assert isinstance(out, Ctor) and out.args == (p,)

    def test_rejects_non_level0(self):
        with pytest.raises(ValueError):
            uc_normalize(Arrow(a, b))
