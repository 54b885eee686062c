import pytest
from hypothesis import given, settings, strategies as st

from halgeo.library import GROUPS, MAGMAS, SEMILATTICES, UNARY
from halgeo.syntax import (App, ParseError, SignatureError, SortError, Substitution, Var,
                           VarietySpec, apply_substitution, compose_substitutions, depth,
                           elementary_substitution, identity_substitution, make_sort, parse_term,
                           print_term, substitution, support, terms_up_to_depth)

XY = make_sort("x y")
X = make_sort("x")


def meet(a, b):
    return App("meet", (a, b))


x, y, z = Var("x"), Var("y"), Var("z")


def test_parse_variable_leaf():
    assert parse_term("x", XY, SEMILATTICES) == x


def test_parse_nested_meet_has_depth_two():
    w = parse_term("meet(x, meet(y, y))", XY, SEMILATTICES)
    assert w == meet(x, meet(y, y))
    assert depth(w) == 2


def test_parse_rejects_variable_outside_sort():
    with pytest.raises(SortError):
        parse_term("mul(x, z)", XY, MAGMAS)


@pytest.mark.parametrize("text,err", [
    ("meet(x)", SignatureError),
    ("foo(x, y)", SignatureError),
    ("meet(x, y", ParseError),
    ("meet(x,, y)", ParseError),
    ("", ParseError),
])
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_term(text, XY, SEMILATTICES)


def test_nullary_written_with_or_without_parentheses():
    assert parse_term("e()", X, GROUPS) == App("e")
    assert parse_term("mul(e, x)", X, GROUPS) == App("mul", (App("e"), x))


def test_sort_invariants():
    with pytest.raises(SortError):
        make_sort([])
    with pytest.raises(SortError):
        make_sort("x x")
    assert make_sort("x y") == make_sort(["x", "y"], "S")
    assert make_sort("x y") != make_sort("y x")


def test_apply_substitution_examples():
    s = substitution(X, XY, {"x": meet(x, y)})
    assert apply_substitution(s, x) == meet(x, y)
    assert apply_substitution(s, meet(x, x)) == meet(meet(x, y), meet(x, y))
    w = meet(x, meet(y, x))
    assert apply_substitution(identity_substitution(XY), w) == w


def test_apply_substitution_sort_mismatch():
    s = substitution(X, XY, {"x": meet(x, y)})
    with pytest.raises(SortError):
        apply_substitution(s, y)


def test_compose_example():
    s = substitution(X, XY, {"x": meet(x, y)})
    s2 = substitution(XY, X, {"x": x, "y": x})
    c = compose_substitutions(s, s2)
    assert c.domain == X and c.codomain == X
    assert c("x") == meet(x, x)


def test_compose_with_identity():
    s = substitution(X, XY, {"x": meet(x, y)})
    assert compose_substitutions(identity_substitution(X), s) == s
    assert compose_substitutions(s, identity_substitution(XY)) == s


def test_compose_sort_mismatch():
    s = substitution(X, XY, {"x": meet(x, y)})
    with pytest.raises(SortError):
        compose_substitutions(s, s)


def test_elementary_substitution():
    assert elementary_substitution("x", x, XY).is_identity()
    s = elementary_substitution("x", meet(x, y), XY)
    assert s.mapping == {"x": meet(x, y), "y": y}
    with pytest.raises(SortError):
        elementary_substitution("x", meet(x, z), XY)
    with pytest.raises(SortError):
        elementary_substitution("z", x, XY)


def test_terms_up_to_depth_counts():
    # unary f over {x}: x, f(x), f(f(x))
    assert [print_term(w) for w in terms_up_to_depth(X, UNARY, 2)] == ["x", "f(x)", "f(f(x))"]
    # meet over {x y}: 2 leaves, 4 of depth 1
    assert len(terms_up_to_depth(XY, SEMILATTICES, 1)) == 6


# --- generated terms ---------------------------------------------------------

SPEC = VarietySpec((("c", 0), ("f", 1), ("g", 2)))
XYZ = make_sort("x y z")


def terms(vars=("x", "y", "z"), max_depth=4):
    leaves = st.sampled_from([Var(v) for v in vars] + [App("c")])
    return st.recursive(
        leaves,
        lambda kids: st.one_of(st.builds(lambda a: App("f", (a,)), kids),
                               st.builds(lambda a, b: App("g", (a, b)), kids, kids)),
        max_leaves=8,
    ).filter(lambda w: depth(w) <= max_depth)


def substitutions(dom, cod):
    return st.tuples(*[terms(cod.vars, 3) for _ in dom.vars]).map(
        lambda imgs: Substitution(dom, cod, imgs))


@settings(max_examples=200, deadline=None)
@given(terms())
def test_print_parse_round_trip(w):
    assert parse_term(print_term(w), XYZ, SPEC) == w


@settings(max_examples=150, deadline=None)
@given(substitutions(XYZ, XY), substitutions(XY, X), terms(max_depth=3))
def test_composite_applies_in_two_stages(s, s2, w):
    lhs = apply_substitution(compose_substitutions(s, s2), w)
    assert lhs == apply_substitution(s2, apply_substitution(s, w))


@settings(max_examples=100, deadline=None)
@given(substitutions(XYZ, XYZ), substitutions(XYZ, XYZ), substitutions(XYZ, XYZ))
def test_composition_associative(s1, s2, s3):
    a = compose_substitutions(compose_substitutions(s1, s2), s3)
    b = compose_substitutions(s1, compose_substitutions(s2, s3))
    assert a == b


@settings(max_examples=150, deadline=None)
@given(substitutions(XYZ, XY), terms(max_depth=3))
def test_support_of_image(s, w):
    bound = set()
    for v in support(w):
        bound |= support(s(v))
    assert support(apply_substitution(s, w)) <= bound
