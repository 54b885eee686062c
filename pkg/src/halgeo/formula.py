"""Sorted formulas, their values in Hal(H), logical kernels and X-theories.

Formulas are the raw trees of the absolutely free formula algebra.  Every
node carries its sort and its length (equalities have length 0, unary nodes
add one, binary nodes add one to the sum of their children).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .algebra import FiniteAlgebra, Point
from .pointset import PointSet, equality_set, exists_x, transport
from .syntax import (HalgeoError, ParseError, SortError, Substitution, Term, Tokens, Var,
                     VarietySpec, VarSort, apply_substitution, check_term,
                     compose_substitutions, make_sort, read_raw_term, resolve_term, support)


class Formula:
    __slots__ = ()
    sort: VarSort
    length: int

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term
    sort: VarSort

    @property
    def length(self):
        return 0


@dataclass(frozen=True)
class Not(Formula):
    body: Formula

    @property
    def sort(self):
        return self.body.sort

    @property
    def length(self):
        return self.body.length + 1


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def __post_init__(self):
        if self.left.sort != self.right.sort:
            raise SortError("conjunction of formulas of sorts %s and %s"
                            % (self.left.sort.name, self.right.sort.name))

    @property
    def sort(self):
        return self.left.sort

    @property
    def length(self):
        return self.left.length + self.right.length + 1


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def __post_init__(self):
        if self.left.sort != self.right.sort:
            raise SortError("disjunction of formulas of sorts %s and %s"
                            % (self.left.sort.name, self.right.sort.name))

    @property
    def sort(self):
        return self.left.sort

    @property
    def length(self):
        return self.left.length + self.right.length + 1


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula

    def __post_init__(self):
        if self.var not in self.body.sort:
            raise SortError("quantified variable %r not in sort %s" % (self.var, self.body.sort.name))

    @property
    def sort(self):
        return self.body.sort

    @property
    def length(self):
        return self.body.length + 1


@dataclass(frozen=True)
class Subst(Formula):
    subst: Substitution
    body: Formula

    def __post_init__(self):
        if self.subst.domain != self.body.sort:
            raise SortError("substitution from %s applied to a formula of sort %s"
                            % (self.subst.domain.name, self.body.sort.name))

    @property
    def sort(self):
        return self.subst.codomain

    @property
    def length(self):
        return self.body.length + 1


def equality(w: Term, w2: Term, sort: VarSort, spec: VarietySpec | None = None) -> Eq:
    if spec is not None:
        check_term(w, sort, spec)
        check_term(w2, sort, spec)
    else:
        extra = (support(w) | support(w2)) - set(sort.vars)
        if extra:
            raise SortError("variables %s not in sort %s" % (sorted(extra), sort.name))
    return Eq(w, w2, sort)


def forall(x: str, f: Formula) -> Formula:
    return Not(Exists(x, Not(f)))


def conj(fs, sort: VarSort) -> Formula:
    """Right-nested conjunction; the empty conjunction is x == x."""
    fs = list(fs)
    if not fs:
        v = Var(sort.vars[0])
        return Eq(v, v, sort)
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = And(f, out)
    return out


# --------------------------------------------------------------------------
# printing and parsing

def print_formula(f: Formula) -> str:
    if isinstance(f, Eq):
        return "(%s == %s)" % (f.left, f.right)
    if isinstance(f, Not):
        return "~" + print_formula(f.body)
    if isinstance(f, And):
        return "(%s & %s)" % (print_formula(f.left), print_formula(f.right))
    if isinstance(f, Or):
        return "(%s | %s)" % (print_formula(f.left), print_formula(f.right))
    if isinstance(f, Exists):
        return "E %s. %s" % (f.var, print_formula(f.body))
    if isinstance(f, Subst):
        return "%s %s" % (f.subst, print_formula(f.body))
    raise TypeError(f)


class SortRegistry(dict):
    """Named sorts; inline sorts ``{x y}`` are accepted without registration."""

    def register(self, sort: VarSort):
        if sort.name in self and self[sort.name] != sort:
            raise SortError("sort %s already registered with other variables" % sort.name)
        self[sort.name] = sort
        return sort

    def resolve(self, name: str) -> VarSort:
        try:
            return self[name]
        except KeyError:
            raise SortError("unknown sort %r" % name) from None


def _read_sort(tk: Tokens, registry: Mapping) -> VarSort:
    if tk.at("{"):
        tk.next()
        vars = []
        while not tk.at("}"):
            vars.append(tk.ident())
        tk.next()
        return make_sort(vars)
    name = tk.ident()
    if name not in registry:
        raise SortError("unknown sort %r" % name)
    return registry[name]


def _read_formula(tk: Tokens, sort: VarSort, registry, spec) -> Formula:
    if tk.at("~"):
        tk.next()
        return Not(_read_formula(tk, sort, registry, spec))
    kind, v, _ = tk.peek()
    if kind == "id" and v == "E" and tk.peek(1)[0] == "id" and tk.at(".", 2):
        tk.next()
        x = tk.ident()
        tk.expect(".")
        if x not in sort:
            raise SortError("quantified variable %r not in sort %s" % (x, sort.name))
        return Exists(x, _read_formula(tk, sort, registry, spec))
    if tk.at("["):
        tk.next()
        pairs = []
        while True:
            x = tk.ident()
            tk.expect("->")
            pairs.append((x, read_raw_term(tk)))
            if tk.at(","):
                tk.next()
                continue
            break
        tk.expect(":")
        dom = _read_sort(tk, registry)
        tk.expect("->")
        cod = _read_sort(tk, registry)
        tk.expect("]")
        if cod != sort:
            raise SortError("substitution into %s where a formula of sort %s is expected"
                            % (cod.name, sort.name))
        given = dict(pairs)
        if len(given) != len(pairs):
            raise ParseError("variable mapped twice in substitution")
        extra = set(given) - set(dom.vars)
        if extra:
            raise SortError("substitution maps %s outside sort %s" % (sorted(extra), dom.name))
        images = tuple(resolve_term(given[x], cod, spec) if x in given else Var(x)
                       for x in dom.vars)
        for x, w in zip(dom.vars, images):
            if x not in given and x not in cod:
                raise SortError("no image for %r and it is not in %s" % (x, cod.name))
        s = Substitution(dom, cod, images)
        return Subst(s, _read_formula(tk, dom, registry, spec))
    if tk.at("("):
        tk.next()
        save = tk.pos
        try:
            w = read_raw_term(tk)
            is_atom = tk.at("==")
        except ParseError:
            is_atom = False
        if is_atom:
            tk.next()
            w2 = read_raw_term(tk)
            tk.expect(")")
            return Eq(resolve_term(w, sort, spec), resolve_term(w2, sort, spec), sort)
        tk.pos = save
        left = _read_formula(tk, sort, registry, spec)
        if tk.at("&") or tk.at("|"):
            op = tk.next()[1]
            right = _read_formula(tk, sort, registry, spec)
            tk.expect(")")
            return And(left, right) if op == "&" else Or(left, right)
        tk.fail("expected '==', '&' or '|'")
    tk.fail("expected a formula")


def parse_formula(text: str, sort: VarSort, spec: VarietySpec, registry: Mapping | None = None) -> Formula:
    """Read a formula of the given sort.

    Grammar: ``(t == t)``, ``~f``, ``(f & g)``, ``(f | g)``, ``E x. f`` and
    ``[x->t, ... : X -> Y] f``; sorts are registered names or ``{x y}``.
    """
    registry = registry if registry is not None else {}
    tk = Tokens.of(text)
    f = _read_formula(tk, sort, registry, spec)
    if not tk.done():
        tk.fail("trailing input")
    return f


# --------------------------------------------------------------------------
# semantics

def val(H: FiniteAlgebra, f: Formula, _memo: dict | None = None) -> PointSet:
    """Value of f in Hal(H): the set of points satisfying f."""
    memo = {} if _memo is None else _memo
    hit = memo.get(f)
    if hit is not None:
        return hit
    if isinstance(f, Eq):
        out = equality_set(H, f.sort, f.left, f.right)
    elif isinstance(f, Not):
        out = ~val(H, f.body, memo)
    elif isinstance(f, And):
        out = val(H, f.left, memo) & val(H, f.right, memo)
    elif isinstance(f, Or):
        out = val(H, f.left, memo) | val(H, f.right, memo)
    elif isinstance(f, Exists):
        out = exists_x(val(H, f.body, memo), f.var)
    elif isinstance(f, Subst):
        out = transport(f.subst, val(H, f.body, memo))
    else:
        raise TypeError(f)
    memo[f] = out
    return out


def lker_contains(H: FiniteAlgebra, mu: Point, f: Formula) -> bool:
    if mu.sort != f.sort:
        raise SortError("point over %s, formula of sort %s" % (mu.sort.name, f.sort.name))
    return mu.index in val(H, f)


def theory_contains(H: FiniteAlgebra, f: Formula) -> bool:
    return val(H, f).is_top()


def semantically_equal(f: Formula, g: Formula, witnesses) -> bool:
    if f.sort != g.sort:
        raise SortError("formulas of sorts %s and %s" % (f.sort.name, g.sort.name))
    return all(val(H, f) == val(H, g) for H in witnesses)


# --------------------------------------------------------------------------
# normalization

def _subst_into(s: Substitution, g: Formula) -> Formula:
    """Push s_* into g as far as the rewrite rules allow (g already normal)."""
    if s.is_identity():
        return g
    if isinstance(g, Eq):
        return Eq(apply_substitution(s, g.left), apply_substitution(s, g.right), s.codomain)
    if isinstance(g, Subst):
        return _subst_into(compose_substitutions(g.subst, s), g.body)
    if isinstance(g, Not):
        return _not(_subst_into(s, g.body))
    if isinstance(g, And):
        return And(_subst_into(s, g.left), _subst_into(s, g.right))
    if isinstance(g, Or):
        return Or(_subst_into(s, g.left), _subst_into(s, g.right))
    if isinstance(g, Exists):
        y = s(g.var)
        if isinstance(y, Var) and all(y.name not in support(w)
                                      for x, w in zip(s.domain.vars, s.images) if x != g.var):
            return Exists(y.name, _subst_into(s, g.body))
        return Subst(s, g)
    raise TypeError(g)


def _not(g: Formula) -> Formula:
    return g.body if isinstance(g, Not) else Not(g)


def normalize(f: Formula) -> Formula:
    """Rewrite with the oriented Halmos identities until nothing applies.

    Substitutions are pushed through the boolean connectives, into
    equalities, merged when nested, dropped when trivial, and moved under
    a quantifier when the bound variable goes to a fresh variable.  Double
    negations are removed.
    """
    if isinstance(f, Eq):
        return f
    if isinstance(f, Not):
        return _not(normalize(f.body))
    if isinstance(f, And):
        return And(normalize(f.left), normalize(f.right))
    if isinstance(f, Or):
        return Or(normalize(f.left), normalize(f.right))
    if isinstance(f, Exists):
        return Exists(f.var, normalize(f.body))
    if isinstance(f, Subst):
        return _subst_into(f.subst, normalize(f.body))
    raise TypeError(f)


def is_normal(f: Formula) -> bool:
    return normalize(f) == f


def check_formula(f: Formula, spec: VarietySpec) -> Formula:
    """Raise unless every term in f is arity-correct and in scope."""
    if isinstance(f, Eq):
        check_term(f.left, f.sort, spec)
        check_term(f.right, f.sort, spec)
    elif isinstance(f, (Not, Exists)):
        check_formula(f.body, spec)
    elif isinstance(f, (And, Or)):
        check_formula(f.left, spec)
        check_formula(f.right, spec)
    elif isinstance(f, Subst):
        for w in f.subst.images:
            check_term(w, f.subst.codomain, spec)
        check_formula(f.body, spec)
    return f


class FormulaError(HalgeoError):
    pass
