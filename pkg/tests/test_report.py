import pytest

from halgeo import library
from halgeo.algebra import automorphism_group, isomorphism_search
from halgeo.axioms import verify_halmos_axioms
from halgeo.geometry import ag_equivalent, equations
from halgeo.isotypy import (homogeneity_check, isotypic_check, orbit_partition,
                            type_partition)
from halgeo.pointset import PointSet
from halgeo.report import (render_automorphisms, render_axioms, render_bool,
                           render_homogeneity, render_isomorphism, render_isotypy,
                           render_partition, render_pointset, render_system, render_verdict)
from halgeo.syntax import Var, make_sort

X, XY = make_sort("x"), make_sort("x y")


def test_orbits_machine(lib):
    assert render_partition(orbit_partition(lib("Z3"), X), "machine") == \
        "classes=2\nclass0=0\nclass1=1,2\n"


def test_partition_text(lib):
    out = render_partition(type_partition(lib("Z3"), X, 0), "text")
    lines = out.splitlines()
    assert lines[0] == "Z3 over {x}: 2 classes at rank 0"
    assert lines[1].startswith("class 0: {")
    assert lines[2].startswith("class 1: {")


def test_empty_pointset_machine(lib):
    H = lib("S2")
    assert render_pointset(PointSet.bottom(H, XY), "machine") == "points=0\nmask=0\n"
    assert render_pointset(PointSet.top(H, XY), "machine") == "points=4\nmask=f\n"


def test_bool_rendering():
    assert render_bool("in_theory", True, "machine") == "in_theory=true\n"
    assert render_bool("in_theory", False, "text") == "in theory: false\n"


def test_unknown_format(lib):
    with pytest.raises(ValueError):
        render_bool("x", True, "json")


def test_isotypy_text(lib):
    res = isotypic_check(lib("Z4"), lib("V4"), max_vars=1)
    assert render_isotypy(res) == "NOT ISOTYPIC; witness x=g; separating rank 0\n"
    m = render_isotypy(res, "machine")
    assert m.startswith("verdict=NOT ISOTYPIC\n")
    assert "witness=x=g\n" in m


def test_axioms_text(lib):
    rep = verify_halmos_axioms(lib("S2"), trials=5, seed=0)
    assert render_axioms(rep) == "axioms 2,3a,3b,4a,4b: PASS 5/5\n"
    assert render_axioms(rep, "machine").endswith("ok=true\n")


def test_automorphisms_and_isomorphism(lib):
    Z3 = lib("Z3")
    auts = automorphism_group(Z3)
    assert render_automorphisms(Z3, auts, "machine").startswith("automorphisms=2\n")
    iso = isomorphism_search(lib("Z6"), lib("Z2xZ3"))
    assert render_isomorphism(lib("Z6"), lib("Z2xZ3"), iso).startswith("ISOMORPHIC; ")
    assert render_isomorphism(lib("Z4"), lib("V4"), None, "machine") == "verdict=NOT ISOMORPHIC\n"


def test_verdict_rendering(lib):
    v = ag_equivalent(lib("Z2"), lib("Z3"), depth=1)
    text = render_verdict(v)
    assert text.startswith("NOT-EQUIVALENT; witness ")
    assert "holds in Z2, fails in Z3" in text
    m = render_verdict(v, "machine")
    assert "holds_in=Z2\n" in m and "fails_in=Z3\n" in m


def test_homogeneity_rendering(lib):
    r = homogeneity_check(lib("Z4"), 1)
    assert render_homogeneity(r) == "HOMOGENEOUS up to 1 variables\n"
    assert "orbits1=3\n" in render_homogeneity(r, "machine")


def test_system_rendering(lib):
    T = equations(XY, [(Var("x"), Var("y"))])
    assert render_system(T) == "sort X x y\nx == y\n"
    assert render_system(T, "machine") == "size=1\nitem0=x == y\n"


def test_rendering_is_deterministic(lib):
    P1 = render_partition(type_partition(lib("V4"), XY, 2), "machine")
    P2 = render_partition(type_partition(lib("V4"), XY, 2), "machine")
    assert P1 == P2
