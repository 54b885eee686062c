"""Equations versus algebraic sets, formulas versus definable sets.

Algebraic side: ``solve_equations`` computes T' and the closed congruence
A' is handled through :class:`~halgeo.algebra.QuotientPresentation`.
Logical side: ``logical_solve`` computes T^L; the closure A^{LL} of a point
set over a finite algebra is the union of the Aut(H)-orbits meeting it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from pathlib import Path

import numpy as np

from .algebra import (FiniteAlgebra, HalgeoError, automorphism_group, generate_subalgebra,
                      present_closed_congruence)
from .formula import Formula, parse_formula, val
from .pointset import PointSet, automorphism_action, equality_set
from .syntax import (App, ParseError, SortError, Term, Tokens, Var, VarietySpec, VarSort,
                     check_term, make_sort, read_raw_term, resolve_term)

EQUIVALENT = "EQUIVALENT"
NOT_EQUIVALENT = "NOT-EQUIVALENT"
BOUNDED_EQUIVALENT = "BOUNDED-EQUIVALENT"


@dataclass(frozen=True)
class EquationSystem:
    sort: VarSort
    pairs: tuple = ()

    def __str__(self):
        return "{%s}" % ", ".join("%s == %s" % p for p in self.pairs)


@dataclass(frozen=True)
class FormulaSystem:
    sort: VarSort
    formulas: tuple = ()

    def __post_init__(self):
        for f in self.formulas:
            if f.sort != self.sort:
                raise SortError("formula %s has sort %s, system sort is %s"
                                % (f, f.sort.name, self.sort.name))


def equations(sort: VarSort, pairs) -> EquationSystem:
    return EquationSystem(sort, tuple(tuple(p) for p in pairs))


# --------------------------------------------------------------------------
# algebraic sets and closed congruences

def solve_equations(H: FiniteAlgebra, T: EquationSystem) -> PointSet:
    out = PointSet.top(H, T.sort)
    for w, w2 in T.pairs:
        out = out & equality_set(H, T.sort, w, w2)
    return out


class EmptyClosure(HalgeoError):
    pass


def closed_congruence_contains(H: FiniteAlgebra, A: PointSet, w: Term, w2: Term,
                               strict: bool = False) -> bool:
    """(w, w2) in A'_H.  The empty point set gives the full congruence unless ``strict``."""
    check_term(w, A.sort, H.spec)
    check_term(w2, A.sort, H.spec)
    if A.is_bottom():
        if strict:
            raise EmptyClosure("closed congruence of the empty point set")
        return True
    vals = H.term_values(w, A.sort)[A.bits]
    vals2 = H.term_values(w2, A.sort)[A.bits]
    return bool(np.array_equal(vals, vals2))


def algebraic_closure_contains(H: FiniteAlgebra, T: EquationSystem, w: Term, w2: Term,
                               strict: bool = False) -> bool:
    """(w, w2) in T''_H, decided through a presentation of the congruence over T'."""
    A = solve_equations(H, T)
    check_term(w, T.sort, H.spec)
    check_term(w2, T.sort, H.spec)
    if A.is_bottom():
        if strict:
            raise EmptyClosure("system %s has no solutions in %s" % (T, H.name))
        return True
    return present_closed_congruence(H, A.points()).contains(w, w2)


def algebraic_closure_points(H: FiniteAlgebra, A: PointSet) -> PointSet:
    """A''_H: the points whose kernel contains the closed congruence A'_H.

    mu lies in A'' iff adding mu as a further coordinate does not enlarge the
    subalgebra of H^A generated by the variable tuples.
    """
    sort = A.sort
    if A.is_bottom():
        return A
    wit = A.indices()
    cols = H.coordinates(sort)
    gens = [tuple(int(c[i]) for i in wit) for c in cols]
    base = len(generate_subalgebra(H, sort, gens))
    keep = np.zeros_like(A.bits)
    for mu in range(A.bits.size):
        if A.bits[mu]:
            keep[mu] = True
            continue
        ext = [g + (int(c[mu]),) for g, c in zip(gens, cols)]
        keep[mu] = len(generate_subalgebra(H, sort, ext)) == base
    return PointSet(H, sort, keep)


# --------------------------------------------------------------------------
# definable sets and H-closed filters

def logical_solve(H: FiniteAlgebra, T: FormulaSystem) -> PointSet:
    out = PointSet.top(H, T.sort)
    memo = {}
    for f in T.formulas:
        out = out & val(H, f, memo)
    return out


def logical_closure_contains(H: FiniteAlgebra, A: PointSet, f: Formula) -> bool:
    """f in A^L_H, i.e. A is contained in Val(f)."""
    if A.sort != f.sort:
        raise SortError("point set over %s, formula of sort %s" % (A.sort.name, f.sort.name))
    return A <= val(H, f)


def automorphism_permutations(H: FiniteAlgebra, sort: VarSort) -> list:
    return [automorphism_action(H, sort, s) for s in automorphism_group(H)]


def definable_closure(H: FiniteAlgebra, A: PointSet) -> PointSet:
    """Union of the Aut(H)-orbits meeting A."""
    bits = np.zeros_like(A.bits)
    for perm in automorphism_permutations(H, A.sort):
        bits[perm[A.bits]] = True
    return PointSet(H, A.sort, bits)


def is_aut_invariant(H: FiniteAlgebra, A: PointSet) -> bool:
    return all(np.array_equal(A.bits[perm], A.bits) for perm in automorphism_permutations(H, A.sort))


# --------------------------------------------------------------------------
# AG-equivalence by bounded search for separating quasi-identities

@dataclass
class Verdict:
    verdict: str
    witness: object = None
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict != NOT_EQUIVALENT


@dataclass(frozen=True)
class QuasiIdentity:
    premises: EquationSystem
    conclusion: tuple
    holds_in: str
    fails_in: str

    def __str__(self):
        return "%s => %s == %s" % (self.premises, self.conclusion[0], self.conclusion[1])


def quasi_identity_holds(H: FiniteAlgebra, q: QuasiIdentity) -> bool:
    sol = solve_equations(H, q.premises)
    return sol <= equality_set(H, q.premises.sort, *q.conclusion)


def term_functions(algebras, sort: VarSort, max_depth: int) -> list:
    """Representative terms of depth <= max_depth, one per joint term function.

    Terms are built level by level from representatives only, so the number
    of candidates stays bounded by the number of distinct functions.
    """
    spec = algebras[0].spec
    reps = {}

    def key(w):
        return b"".join(H.term_values(w, sort).tobytes() for H in algebras)

    for x in sort.vars:
        reps.setdefault(key(Var(x)), Var(x))
    for d in range(1, max_depth + 1):
        pool = list(reps.values())
        for op, k in sorted(spec.ops):
            if k == 0:
                if d == 1:
                    reps.setdefault(key(App(op)), App(op))
                continue
            for args in product(pool, repeat=k):
                w = App(op, tuple(args))
                reps.setdefault(key(w), w)
    return list(reps.values())


def ag_equivalent(H1: FiniteAlgebra, H2: FiniteAlgebra, depth: int = 2, budget: int = 100000,
                  max_vars: int = 2, max_pairs: int = 2) -> Verdict:
    """Search for a quasi-identity holding in one algebra and failing in the other.

    Systems of at most ``max_pairs`` equations between terms of depth <=
    ``depth`` over sorts of 1..``max_vars`` variables are tried in a fixed
    order, smallest first; the first separating one is returned.  Without a
    witness the verdict is only BOUNDED-EQUIVALENT.
    """
    H1.check_compatible(H2)
    examined = 0
    for m in range(1, max_vars + 1):
        sort = make_sort(_var_names(m))
        terms = term_functions([H1, H2], sort, depth)
        eqs = {}
        for w, w2 in combinations(terms, 2):
            e1 = equality_set(H1, sort, w, w2)
            e2 = equality_set(H2, sort, w, w2)
            eqs.setdefault((e1.key(), e2.key()), (w, w2, e1, e2))
        eqlist = list(eqs.values())
        # premise systems as index tuples into eqlist, deduplicated by solution sets
        seen = set()
        layer = [((), PointSet.top(H1, sort), PointSet.top(H2, sort))]
        for size in range(0, max_pairs + 1):
            nxt = []
            for idx, s1, s2 in layer:
                k = (s1.key(), s2.key())
                if k in seen:
                    continue
                seen.add(k)
                for w, w2, e1, e2 in eqlist:
                    examined += 1
                    if (s1 <= e1) != (s2 <= e2):
                        holds, fails = (H1, H2) if s1 <= e1 else (H2, H1)
                        premises = equations(sort, [eqlist[j][:2] for j in idx])
                        q = QuasiIdentity(premises, (w, w2), holds.name, fails.name)
                        return Verdict(NOT_EQUIVALENT, q, {"examined": examined})
                    if examined >= budget:
                        return Verdict(BOUNDED_EQUIVALENT, None,
                                       {"examined": examined, "exhausted": "budget"})
                if size < max_pairs:
                    for j in range(len(eqlist)):
                        e1, e2 = eqlist[j][2], eqlist[j][3]
                        nxt.append((idx + (j,), s1 & e1, s2 & e2))
            layer = nxt
    return Verdict(BOUNDED_EQUIVALENT, None, {"examined": examined, "exhausted": "search space"})


def _var_names(m: int) -> list:
    base = ["x", "y", "z", "u", "v", "w"]
    if m <= len(base):
        return base[:m]
    return ["x%d" % i for i in range(1, m + 1)]


# --------------------------------------------------------------------------
# LG-equivalence (delegates to the isotypy checker)

def lg_equivalent(H1: FiniteAlgebra, H2: FiniteAlgebra, max_vars: int = 1, rank: int | None = None,
                  depth: int = 2) -> Verdict:
    from .isotypy import ISOTYPIC, isotypic_check, separating_sentence
    res = isotypic_check(H1, H2, max_vars=max_vars, rank=rank, depth=depth)
    if res.verdict == ISOTYPIC:
        return Verdict(EQUIVALENT, None, {"max_vars": res.max_vars, "rank": res.rank})
    sentence = separating_sentence(res)
    return Verdict(NOT_EQUIVALENT, sentence,
                   {"point": res.witness, "in": res.witness_algebra, "max_vars": res.max_vars,
                    "rank": res.rank})


# --------------------------------------------------------------------------
# system files

def _split_header(text: str, source: str):
    header = None
    body = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("sort ") or line == "sort":
            if header is not None:
                raise ParseError("%s:%d: second sort header" % (source, lineno))
            words = line.split()[1:]
            if not words:
                raise ParseError("%s:%d: expected 'sort <name> [vars...]'" % (source, lineno))
            header = (words[0], words[1:])
        else:
            if header is None:
                raise ParseError("%s:%d: missing 'sort' header" % (source, lineno))
            body.append((lineno, line))
    if header is None:
        raise ParseError("%s: missing 'sort' header" % source)
    return header, body


def _header_sort(header, registry, source) -> VarSort:
    name, vars = header
    if vars:
        sort = make_sort(vars, name)
        if name in registry and registry[name] != sort:
            raise SortError("%s: sort %s conflicts with the registered one" % (source, name))
        registry[name] = sort
        return sort
    if name not in registry:
        raise SortError("%s: unknown sort %r (give its variables after the name)" % (source, name))
    return registry[name]


def parse_equation_system(text: str, spec: VarietySpec, registry: dict | None = None,
                          source: str = "<text>") -> EquationSystem:
    registry = {} if registry is None else registry
    header, body = _split_header(text, source)
    sort = _header_sort(header, registry, source)
    pairs = []
    for lineno, line in body:
        tk = Tokens.of(line)
        try:
            w = read_raw_term(tk)
            tk.expect("==")
            w2 = read_raw_term(tk)
            if not tk.done():
                tk.fail("trailing input")
        except ParseError as e:
            raise ParseError("%s:%d: %s" % (source, lineno, e)) from None
        pairs.append((resolve_term(w, sort, spec), resolve_term(w2, sort, spec)))
    return EquationSystem(sort, tuple(pairs))


def parse_formula_system(text: str, spec: VarietySpec, registry: dict | None = None,
                         source: str = "<text>") -> FormulaSystem:
    registry = {} if registry is None else registry
    header, body = _split_header(text, source)
    sort = _header_sort(header, registry, source)
    fs = []
    for lineno, line in body:
        try:
            fs.append(parse_formula(line, sort, spec, registry))
        except ParseError as e:
            raise ParseError("%s:%d: %s" % (source, lineno, e)) from None
    return FormulaSystem(sort, tuple(fs))


def load_system(path, spec: VarietySpec, registry: dict | None = None, kind: str = "formula"):
    text = Path(path).read_text(encoding="utf-8")
    if kind == "equation":
        return parse_equation_system(text, spec, registry, str(path))
    return parse_formula_system(text, spec, registry, str(path))
