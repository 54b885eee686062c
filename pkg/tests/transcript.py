"""A fixed list of command lines covering every command, with expected exit status."""

CASES = [
    (["eval", "-a", "algebras/s2.alg", "--sort", "x y", "--formula", "E x.(meet(x,y)==y)"], 0),
    (["eval", "-a", "lib:Z4", "--sort", "x", "--formula", "~(mul(x,x)==e())", "--format", "machine"], 0),
    (["theory", "-a", "algebras/z2.alg", "--sort", "x", "--formula", "(mul(x,x)==e())"], 0),
    (["theory", "-a", "algebras/z3.alg", "--sort", "x", "--formula", "(mul(x,x)==e())",
      "--format", "machine"], 0),
    (["solve-eq", "-a", "algebras/s2.alg", "--system", "systems/s2_meet.eq"], 0),
    (["solve-log", "-a", "algebras/z4.alg", "--system", "systems/z4_order4.fs"], 0),
    (["closure-alg", "-a", "algebras/s2.alg", "--sort", "x y", "--points", "x=0 y=1"], 0),
    (["closure-alg", "-a", "algebras/s2.alg", "--system", "systems/s2_meet.eq",
      "--formula", "(meet(x,y)==x)", "--format", "machine"], 0),
    (["closure-log", "-a", "algebras/z4.alg", "--sort", "x", "--points", "x=g"], 0),
    (["closure-log", "-a", "algebras/z4.alg", "--sort", "x", "--points", "x=g",
      "--formula", "~(mul(x,x)==e())"], 0),
    (["definable-closure", "-a", "algebras/z3.alg", "--sort", "x", "--points", "x=g"], 0),
    (["lker", "-a", "algebras/z4.alg", "--sort", "x", "--points", "x=g2",
      "--formula", "(mul(x,x)==e())", "--format", "machine"], 0),
    (["ker", "-a", "algebras/z4.alg", "--sort", "x", "--points", "x=g2"], 0),
    (["ker", "-a", "algebras/z4.alg", "--sort", "x", "--points", "x=g2",
      "--formula", "(mul(x,x)==e())", "--format", "machine"], 0),
    (["aut", "-a", "algebras/v4.alg"], 0),
    (["orbits", "-a", "algebras/z3.alg", "--sort", "x", "--format", "machine"], 0),
    (["orbits", "-a", "algebras/s2.alg", "--sort", "x y"], 0),
    (["types", "-a", "algebras/z4.alg", "--sort", "x", "--rank", "2"], 0),
    (["types", "-a", "algebras/z3.alg", "--sort", "x", "--rank", "0", "--format", "machine"], 0),
    (["check-axioms", "-a", "algebras/s2.alg", "--trials", "100", "--seed", "0"], 0),
    (["check-axioms", "-a", "algebras/z3.alg", "--trials", "20", "--seed", "4",
      "--format", "machine"], 0),
    (["ag-equiv", "-a", "algebras/z2.alg", "--b", "algebras/z3.alg", "--depth", "1"], 1),
    (["ag-equiv", "-a", "lib:S2", "--b", "lib:S2xS2", "--depth", "2", "--max-vars", "1"], 0),
    (["lg-equiv", "-a", "algebras/z4.alg", "--b", "algebras/v4.alg"], 1),
    (["lg-equiv", "-a", "algebras/z6.alg", "--b", "algebras/z2xz3.alg", "--format", "machine"], 0),
    (["isotypic", "--a", "algebras/z4.alg", "--b", "algebras/v4.alg", "--max-vars", "1"], 1),
    (["isotypic", "-a", "algebras/z6.alg", "--b", "algebras/z2xz3.alg", "--max-vars", "2"], 0),
    (["homogeneous", "-a", "algebras/z4.alg", "--max-vars", "1"], 0),
    (["homogeneous", "-a", "lib:Z4", "--max-vars", "1", "--rank", "0", "--depth", "0"], 1),
    (["alg-homogeneous", "-a", "algebras/v4mul.alg", "--max-vars", "2"], 0),
    (["alg-homogeneous", "-a", "algebras/s2.alg", "--max-vars", "1"], 1),
    (["noetherian-reduce", "-a", "algebras/s2.alg", "--system", "systems/s2_reduce.fs"], 0),
    (["iso", "-a", "algebras/z6.alg", "--b", "algebras/z2xz3.alg"], 0),
    (["iso", "-a", "algebras/z4.alg", "--b", "algebras/v4.alg", "--format", "machine"], 1),
    # errors
    (["frobnicate"], 2),
    (["eval", "-a", "algebras/missing.alg", "--sort", "x", "--formula", "(x==x)"], 2),
    (["eval", "-a", "algebras/s2.alg", "--sort", "x", "--formula", "(meet(x,"], 2),
    (["eval", "-a", "algebras/s2.alg", "--sort", "x", "--formula", "(meet(x,y)==x)"], 2),
    (["eval", "-a", "algebras/s2.alg", "--sort", "x", "--formula", "(mul(x,x)==x)"], 2),
    (["eval", "-a", "algebras/s2.alg", "--sort", "x y z", "--formula", "(x==y)", "--cap", "4"], 2),
    (["iso", "-a", "algebras/s2.alg", "--b", "algebras/z2.alg"], 2),
    (["eval", "-a", "algebras/s2.alg", "--sort", "x"], 2),
    (["eval", "--bogus"], 2),
]
