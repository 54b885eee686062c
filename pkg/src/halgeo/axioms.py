"""Semantic check of the Halmos identities on the point-set algebras of H.

Each axiom gets ``trials`` random instances satisfying its side condition;
the identity is compared as exact bit-vector equality (inclusion for 4b).
``exhaustive=True`` instead runs every instance built from a small family of
terms and every point set, which is only sensible for |H| <= 2, |X| <= 2.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .algebra import FiniteAlgebra
from .pointset import PointSet, equality_set, exists_x, transport
from .syntax import (App, Substitution, Term, Var, VarSort, apply_substitution,
                     compose_substitutions, elementary_substitution, make_sort, support,
                     terms_up_to_depth)

AXIOMS = ("2", "3a", "3b", "4a", "4b")

DEFAULT_SORTS = (make_sort("x"), make_sort("x y"), make_sort("x y z"), make_sort("u v"))


@dataclass
class AxiomReport:
    algebra: str
    passed: dict = field(default_factory=lambda: {a: 0 for a in AXIOMS})
    total: dict = field(default_factory=lambda: {a: 0 for a in AXIOMS})
    counterexamples: dict = field(default_factory=dict)

    def record(self, axiom: str, ok: bool, describe):
        self.total[axiom] += 1
        if ok:
            self.passed[axiom] += 1
        elif axiom not in self.counterexamples:
            self.counterexamples[axiom] = describe()

    @property
    def ok(self) -> bool:
        return all(self.passed[a] == self.total[a] for a in AXIOMS)

    def summary(self) -> str:
        totals = {self.total[a] for a in AXIOMS}
        if self.ok and len(totals) == 1:
            t = totals.pop()
            return "axioms %s: PASS %d/%d" % (",".join(AXIOMS), t, t)
        lines = []
        for a in AXIOMS:
            verdict = "PASS" if self.passed[a] == self.total[a] else "FAIL"
            lines.append("axiom %s: %s %d/%d" % (a, verdict, self.passed[a], self.total[a]))
            if a in self.counterexamples:
                lines.append("  counterexample: %s" % self.counterexamples[a])
        return "\n".join(lines)


class _Gen:
    def __init__(self, H: FiniteAlgebra, rng: random.Random, term_depth: int):
        self.H = H
        self.rng = rng
        self.depth = term_depth
        self.ops = sorted(H.spec.ops)

    def term(self, vars, d=None) -> Term:
        d = self.depth if d is None else d
        consts = [op for op, k in self.ops if k == 0]
        if not vars and not consts:
            raise ValueError("no terms over an empty variable set without constants")
        if d == 0 or not self.ops or self.rng.random() < 0.35:
            leaves = [Var(v) for v in vars] + [App(c) for c in consts]
            return self.rng.choice(leaves)
        op, k = self.rng.choice(self.ops)
        return App(op, tuple(self.term(vars, d - 1) for _ in range(k)))

    def subst(self, X: VarSort, Y: VarSort) -> Substitution:
        return Substitution(X, Y, tuple(self.term(Y.vars) for _ in X.vars))

    def pointset(self, X: VarSort) -> PointSet:
        total = self.H.space_size(X)
        p = self.rng.choice((0.2, 0.5, 0.8))
        bits = np.array([self.rng.random() < p for _ in range(total)], dtype=bool)
        return PointSet(self.H, X, bits)


def _show(obj) -> str:
    return obj.render() if isinstance(obj, PointSet) else str(obj)


def _describe(**kw):
    return lambda: "; ".join("%s=%s" % (k, _show(v)) for k, v in kw.items())


def check_axiom_2(rep, H, s, s2, A, B):
    lhs = transport(compose_substitutions(s, s2), A)
    rhs = transport(s2, transport(s, A))
    ok = lhs == rhs
    ok = ok and transport(s, A | B) == transport(s, A) | transport(s, B)
    ok = ok and transport(s, A & B) == transport(s, A) & transport(s, B)
    ok = ok and transport(s, ~A) == ~transport(s, A)
    top = PointSet.top(H, s.domain)
    ok = ok and transport(s, top).is_top() and transport(s, ~top).is_bottom()
    rep.record("2", ok, _describe(s=s, s2=s2, A=A, B=B))


def check_axiom_3a(rep, s1, s2, x, A):
    ok = transport(s1, exists_x(A, x)) == transport(s2, exists_x(A, x))
    rep.record("3a", ok, _describe(s1=s1, s2=s2, x=x, a=A))


def check_axiom_3b(rep, s, x, A):
    y = s(x)
    ok = transport(s, exists_x(A, x)) == exists_x(transport(s, A), y.name)
    rep.record("3b", ok, _describe(s=s, x=x, a=A))


def check_axiom_4a(rep, H, s, w, w2):
    lhs = transport(s, equality_set(H, s.domain, w, w2))
    rhs = equality_set(H, s.codomain, apply_substitution(s, w), apply_substitution(s, w2))
    rep.record("4a", lhs == rhs, _describe(s=s, w=w, w2=w2))


def check_axiom_4b(rep, H, x, w, w2, A):
    X = A.sort
    lhs = transport(elementary_substitution(x, w, X), A) & equality_set(H, X, w, w2)
    rhs = transport(elementary_substitution(x, w2, X), A)
    rep.record("4b", lhs <= rhs, _describe(x=x, w=w, w2=w2, a=A))


def side_condition_3b(s: Substitution, x: str) -> bool:
    y = s(x)
    if not isinstance(y, Var):
        return False
    return all(y.name not in support(w) for x2, w in zip(s.domain.vars, s.images) if x2 != x)


def verify_halmos_axioms(H: FiniteAlgebra, sorts=DEFAULT_SORTS, trials: int = 100, seed: int = 0,
                         term_depth: int = 2, exhaustive: bool = False) -> AxiomReport:
    if exhaustive:
        return _exhaustive(H, sorts)
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = random.Random(seed)
    gen = _Gen(H, rng, term_depth)
    sorts = list(sorts)
    rep = AxiomReport(H.name)
    for _ in range(trials):
        X, Y, Z = (rng.choice(sorts) for _ in range(3))
        check_axiom_2(rep, H, gen.subst(X, Y), gen.subst(Y, Z), gen.pointset(X), gen.pointset(X))
    for _ in range(trials):
        X, Y = rng.choice(sorts), rng.choice(sorts)
        s1 = gen.subst(X, Y)
        x = rng.choice(X.vars)
        images = list(s1.images)
        images[X.index(x)] = gen.term(Y.vars)
        s2 = Substitution(X, Y, tuple(images))
        check_axiom_3a(rep, s1, s2, x, gen.pointset(X))
    done = 0
    while done < trials:
        X, Y = rng.choice(sorts), rng.choice(sorts)
        x = rng.choice(X.vars)
        y = rng.choice(Y.vars)
        rest = [v for v in Y.vars if v != y]
        consts = [op for op, k in H.spec.ops if k == 0]
        if len(X) > 1 and not rest and not consts:
            continue
        images = [Var(y) if v == x else gen.term(rest) for v in X.vars]
        s = Substitution(X, Y, tuple(images))
        check_axiom_3b(rep, s, x, gen.pointset(X))
        done += 1
    for _ in range(trials):
        X, Y = rng.choice(sorts), rng.choice(sorts)
        check_axiom_4a(rep, H, gen.subst(X, Y), gen.term(X.vars), gen.term(X.vars))
    for _ in range(trials):
        X = rng.choice(sorts)
        check_axiom_4b(rep, H, rng.choice(X.vars), gen.term(X.vars), gen.term(X.vars),
                       gen.pointset(X))
    return rep


def representative_terms(H: FiniteAlgebra, sort: VarSort, max_depth: int = 1) -> list:
    """Terms of depth <= max_depth, one per distinct term function on H."""
    seen = {}
    for w in terms_up_to_depth(sort, H.spec, max_depth):
        seen.setdefault(H.term_values(w, sort).tobytes(), w)
    return list(seen.values())


def _all_subs(reps, X, Y):
    for images in product(reps[Y], repeat=len(X)):
        yield Substitution(X, Y, images)


def _exhaustive(H: FiniteAlgebra, sorts) -> AxiomReport:
    sorts = [X for X in sorts if len(X) <= 2]
    rep = AxiomReport(H.name)
    reps = {X: representative_terms(H, X) for X in sorts}
    sets = {}
    for X in sorts:
        total = H.space_size(X)
        sets[X] = [PointSet.from_mask(H, X, m) for m in range(1 << total)]
    for X, Y, Z in product(sorts, repeat=3):
        for s in _all_subs(reps, X, Y):
            for s2 in _all_subs(reps, Y, Z):
                for A in sets[X]:
                    check_axiom_2(rep, H, s, s2, A, ~A)
    for X, Y in product(sorts, repeat=2):
        subs = list(_all_subs(reps, X, Y))
        for s1 in subs:
            for x in X.vars:
                for w in reps[Y]:
                    images = list(s1.images)
                    images[X.index(x)] = w
                    s2 = Substitution(X, Y, tuple(images))
                    for A in sets[X]:
                        check_axiom_3a(rep, s1, s2, x, A)
            for x in X.vars:
                if side_condition_3b(s1, x):
                    for A in sets[X]:
                        check_axiom_3b(rep, s1, x, A)
            for w, w2 in product(reps[X], repeat=2):
                check_axiom_4a(rep, H, s1, w, w2)
    for X in sorts:
        for x in X.vars:
            for w, w2 in product(reps[X], repeat=2):
                for A in sets[X]:
                    check_axiom_4b(rep, H, x, w, w2, A)
    return rep
