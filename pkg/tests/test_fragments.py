import itertools

import numpy as np
import pytest

from halgeo import library
from halgeo.algebra import Point
from halgeo.formula import parse_formula, val
from halgeo.fragments import (Fragment, FormulaGenerator, naive_val, satisfies,
                              term_function_reps)
from halgeo.geometry import definable_closure
from halgeo.pointset import PointSet
from halgeo.syntax import make_sort

X, XY = make_sort("x"), make_sort("x y")


def test_satisfies_by_hand(lib):
    Z4 = lib("Z4")
    f = parse_formula("~(mul(x,x)==e())", X, Z4.spec)
    g, g2 = Z4.element("g"), Z4.element("g2")
    assert satisfies(Z4, {"x": g}, f)
    assert not satisfies(Z4, {"x": g2}, f)


@pytest.mark.parametrize("name", ["S2", "Z3", "CYC3", "V3", "Set3"])
def test_naive_val_matches_val(name):
    H = library.get(name)
    sorts = [X, XY, make_sort("x y z")]
    gen = FormulaGenerator(H, sorts, seed=3)
    for n in range(60):
        sort = sorts[n % 3]
        f = gen.formula(sort, n % 5)
        assert naive_val(H, f) == val(H, f)


def test_generator_is_seeded(lib):
    H = lib("Z3")
    a = [FormulaGenerator(H, [X, XY], seed=9).formula(XY, 4) for _ in range(3)]
    b = [FormulaGenerator(H, [X, XY], seed=9).formula(XY, 4) for _ in range(3)]
    assert a == b
    assert all(f.length == 4 for f in a)


def test_term_function_counts(lib):
    # Z3 in one variable: x, e, x^2
    assert len(term_function_reps(lib("Z3"), X)) == 3
    # semilattice in two variables: x, y, meet(x,y)
    assert len(term_function_reps(lib("S2"), XY)) == 3
    # no operations: just the projections
    assert len(term_function_reps(lib("Set3"), XY)) == 2
    # unary f on the 3-cycle: x, f x, f f x
    assert len(term_function_reps(lib("CYC3"), X)) == 3


def test_term_function_reps_are_distinct_functions(lib):
    H = lib("V4")
    reps = term_function_reps(H, XY)
    keys = {H.term_values(w, XY).tobytes() for w in reps}
    assert len(keys) == len(reps)


def test_fragment_without_operations_in_one_variable(lib):
    frag = Fragment(lib("Set2"), [X], 3)
    assert sorted(len(A) for A in frag.values(X)) == [0, 2]


def test_fragment_formulas_match_their_values(lib):
    H = lib("NEG2")
    frag = Fragment(H, [X, XY], 3)
    for sort in (X, XY):
        for f, A in zip(frag.formulas(sort), frag.values(sort)):
            assert f.length <= 3
            assert val(H, f) == A


def test_fragment_values_are_distinct(lib):
    frag = Fragment(lib("S2"), [X, XY], 3)
    vals = frag.values(XY)
    assert len({A.key() for A in vals}) == len(vals)


def test_fragment_is_monotone_in_length(lib):
    H = lib("Z2")
    small = {A.key() for A in Fragment(H, [X, XY], 2).values(XY)}
    big = {A.key() for A in Fragment(H, [X, XY], 3).values(XY)}
    assert small <= big


@pytest.mark.parametrize("name", ["S2", "NEG2", "CONST2"])
def test_fragment_closure_equals_definable_closure(name):
    H = library.get(name)
    frag = Fragment(H, ["x", "y", "x y"], 4)
    for mask in range(16):
        A = PointSet.from_mask(H, XY, mask)
        assert frag.closure(A) == definable_closure(H, A)


def test_subst_limit(lib):
    with pytest.raises(RuntimeError):
        Fragment(lib("Z4"), [XY], 1, subst_limit=10)
