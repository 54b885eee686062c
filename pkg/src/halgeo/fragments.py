"""Reference oracles over small formula fragments.

``satisfies`` is a plain pointwise Tarski evaluator, independent of the
bit-vector machinery.  ``Fragment`` enumerates every value taken by a
formula of length <= L on one algebra, working on values rather than on
syntax: equality atoms come from all term functions, substitution nodes
from all substitutions between the fragment's sorts (up to their action
on points).  One representative formula is kept per value.
"""
from __future__ import annotations

import random
from itertools import product

import numpy as np

from .algebra import FiniteAlgebra, Point
from .formula import And, Eq, Exists, Formula, Not, Or, Subst
from .pointset import PointSet, pullback_indices
from .syntax import App, Substitution, Term, Var, VarSort, make_sort


# --------------------------------------------------------------------------
# pointwise semantics

def eval_at(H: FiniteAlgebra, env: dict, w: Term) -> int:
    if isinstance(w, Var):
        return env[w.name]
    return int(H.tables[w.op][tuple(eval_at(H, env, a) for a in w.args)])


def satisfies(H: FiniteAlgebra, env: dict, f: Formula) -> bool:
    """Does the assignment env (variable -> element index) satisfy f?"""
    if isinstance(f, Eq):
        return eval_at(H, env, f.left) == eval_at(H, env, f.right)
    if isinstance(f, Not):
        return not satisfies(H, env, f.body)
    if isinstance(f, And):
        return satisfies(H, env, f.left) and satisfies(H, env, f.right)
    if isinstance(f, Or):
        return satisfies(H, env, f.left) or satisfies(H, env, f.right)
    if isinstance(f, Exists):
        return any(satisfies(H, {**env, f.var: a}, f.body) for a in range(H.size))
    if isinstance(f, Subst):
        s = f.subst
        inner = {x: eval_at(H, env, w) for x, w in zip(s.domain.vars, s.images)}
        return satisfies(H, inner, f.body)
    raise TypeError(f)


def naive_val(H: FiniteAlgebra, f: Formula) -> PointSet:
    """val computed one point at a time with ``satisfies``."""
    sort = f.sort
    pts = H.points(sort)
    return PointSet(H, sort, [satisfies(H, dict(zip(sort.vars, p.values)), f) for p in pts])


# --------------------------------------------------------------------------
# term functions

def term_function_reps(H: FiniteAlgebra, sort: VarSort, limit: int = 4096) -> list:
    """One term per term function on H^sort, generated to a fixpoint."""
    reps = {}
    frontier = []
    for x in sort.vars:
        w = Var(x)
        k = H.term_values(w, sort).tobytes()
        if k not in reps:
            reps[k] = w
            frontier.append(w)
    ops = sorted(H.spec.ops)
    while True:
        pool = list(reps.values())
        vals = {w: H.term_values(w, sort) for w in pool}
        new = []
        for op, k in ops:
            t = H.tables[op]
            for args in product(pool, repeat=k):
                # skip combinations already tried in earlier rounds
                if k and not any(a in frontier for a in args):
                    continue
                if k == 0:
                    v = np.full(H.space_size(sort), int(t[()]), dtype=np.int64)
                else:
                    v = t[tuple(vals[a] for a in args)]
                key = np.asarray(v, dtype=np.int64).tobytes()
                if key not in reps:
                    reps[key] = App(op, tuple(args))
                    new.append(reps[key])
                    if len(reps) > limit:
                        raise RuntimeError("more than %d term functions on %s" % (limit, sort.name))
        if not new:
            return list(reps.values())
        frontier = new
        ops = [(op, k) for op, k in ops if k > 0]


# --------------------------------------------------------------------------
# random formulas

class FormulaGenerator:
    """Seeded random formulas of a given sort and exact length."""

    def __init__(self, H: FiniteAlgebra, sorts, seed: int = 0, term_depth: int = 2):
        from .axioms import _Gen
        self.rng = random.Random(seed)
        self.gen = _Gen(H, self.rng, term_depth)
        self.sorts = list(sorts)

    def formula(self, sort: VarSort, length: int) -> Formula:
        rng = self.rng
        if length == 0:
            return Eq(self.gen.term(sort.vars), self.gen.term(sort.vars), sort)
        kind = rng.choice(("not", "exists", "subst", "and", "or"))
        if kind == "not":
            return Not(self.formula(sort, length - 1))
        if kind == "exists":
            return Exists(rng.choice(sort.vars), self.formula(sort, length - 1))
        if kind == "subst":
            X = rng.choice(self.sorts)
            return Subst(self.gen.subst(X, sort), self.formula(X, length - 1))
        a = rng.randrange(length)
        left, right = self.formula(sort, a), self.formula(sort, length - 1 - a)
        return And(left, right) if kind == "and" else Or(left, right)

    def substitution(self, X: VarSort, Y: VarSort) -> Substitution:
        return self.gen.subst(X, Y)


# --------------------------------------------------------------------------
# value-level enumeration

class Fragment:
    """All values of formulas of length <= max_length over the given sorts."""

    def __init__(self, H: FiniteAlgebra, sorts, max_length: int = 4, subst_limit: int = 5000):
        self.H = H
        self.sorts = [s if isinstance(s, VarSort) else make_sort(s) for s in sorts]
        self.max_length = max_length
        tfs = {X: term_function_reps(H, X) for X in self.sorts}
        # substitutions X -> Y, deduplicated by their action on points
        self._subs = {}
        for X in self.sorts:
            for Y in self.sorts:
                seen = {}
                count = len(tfs[Y]) ** len(X)
                if count > subst_limit:
                    raise RuntimeError("%d substitutions %s -> %s exceed the limit"
                                       % (count, X.name, Y.name))
                for images in product(tfs[Y], repeat=len(X)):
                    s = Substitution(X, Y, tuple(images))
                    idx = pullback_indices(H, s)
                    seen.setdefault(idx.tobytes(), (s, idx))
                self._subs[(X, Y)] = list(seen.values())
        # levels[l][X]: (bool matrix of values, representative formulas), cumulative
        self._known = {X: {} for X in self.sorts}
        self.levels = []
        level0 = {}
        for X in self.sorts:
            rows, forms = [], []
            vals = [H.term_values(w, X) for w in tfs[X]]
            for i, j in product(range(len(tfs[X])), repeat=2):
                if j <= i:
                    self._add(X, vals[i] == vals[j], Eq(tfs[X][i], tfs[X][j], X), rows, forms)
            level0[X] = (self._stack(rows, X), forms)
        self.levels.append(level0)
        for length in range(1, max_length + 1):
            self.levels.append(self._grow(length))

    def _stack(self, rows, X):
        if rows:
            return np.stack(rows)
        return np.zeros((0, self.H.space_size(X)), dtype=bool)

    def _add(self, X, bits, make, rows, forms):
        key = np.packbits(bits).tobytes() + bytes([len(bits) % 8])
        if key in self._known[X]:
            return
        f = make() if callable(make) else make
        self._known[X][key] = f
        rows.append(np.asarray(bits, dtype=bool))
        forms.append(f)

    def _add_batch(self, X, grid, make, rows, forms):
        if not len(grid):
            return
        _, first = np.unique(np.packbits(grid, axis=1), axis=0, return_index=True)
        for k in sorted(first.tolist()):
            self._add(X, grid[k], lambda k=k: make(k), rows, forms)

    def _upto(self, X, length):
        """All values (and formulas) of length <= length found so far."""
        mats = [lvl[X][0] for lvl in self.levels[:length + 1]]
        forms = [f for lvl in self.levels[:length + 1] for f in lvl[X][1]]
        return np.concatenate(mats), forms

    def _exact(self, X, length):
        return self.levels[length][X]

    def _grow(self, length):
        out = {}
        for X in self.sorts:
            rows, forms = [], []
            prevM, prevF = self._upto(X, length - 1)
            n = self.H.size
            m = len(X)
            for r, f in zip(prevM, prevF):
                self._add(X, ~r, lambda f=f: Not(f), rows, forms)
                cube = r.reshape((n,) * m)
                for i, x in enumerate(X.vars):
                    hit = cube.any(axis=m - 1 - i, keepdims=True)
                    self._add(X, np.broadcast_to(hit, cube.shape).reshape(-1),
                              lambda f=f, x=x: Exists(x, f), rows, forms)
            for Y in self.sorts:
                M, F = self._upto(Y, length - 1)
                for s, idx in self._subs[(Y, X)]:
                    self._add_batch(X, M[:, idx], lambda k, s=s, F=F: Subst(s, F[k]), rows, forms)
            for a in range(length):
                b = length - 1 - a
                if b < a:
                    break
                MA, FA = self._upto(X, a)
                MB, FB = self._upto(X, b)
                nb = len(MB)
                for op, cls in ((np.logical_and, And), (np.logical_or, Or)):
                    grid = op(MA[:, None, :], MB[None, :, :]).reshape(-1, MA.shape[1])
                    self._add_batch(X, grid, lambda k, cls=cls: cls(FA[k // nb], FB[k % nb]),
                                    rows, forms)
            out[X] = (self._stack(rows, X), forms)
        return out

    # queries
    def values(self, sort: VarSort) -> list:
        M, _ = self._upto(sort, self.max_length)
        return [PointSet(self.H, sort, r) for r in M]

    def formulas(self, sort: VarSort) -> list:
        return self._upto(sort, self.max_length)[1]

    def closure(self, A: PointSet) -> PointSet:
        """Intersection of all fragment-definable sets containing A."""
        M, _ = self._upto(A.sort, self.max_length)
        sup = M[np.all(M | ~A.bits, axis=1)]
        return PointSet(self.H, A.sort, np.all(sup, axis=0))
