"""Finite algebras given by operation tables.

Points of the affine space Hom(W(X), H) are indexed canonically: the first
declared variable is the least significant base-|H| digit.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product
from pathlib import Path

import numpy as np

from .syntax import (App, HalgeoError, ParseError, SignatureError, SortError, Term, Var,
                     VarietySpec, VarSort, check_term, support)

DEFAULT_CAP = 1 << 24


class CapExceeded(HalgeoError):
    pass


def point_cap() -> int:
    env = os.environ.get("HALGEO_CAP")
    return int(env) if env else DEFAULT_CAP


class FiniteAlgebra:
    """A finite algebra: named elements and total operation tables.

    ``tables[op]`` is an integer numpy array of shape ``(n,) * arity``.
    Instances are treated as immutable.
    """

    def __init__(self, name: str, elements, tables: dict, spec: VarietySpec | None = None,
                 cap: int | None = None):
        self.name = name
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise SignatureError("duplicate element names in %s" % name)
        if not self.elements:
            raise SignatureError("algebra %s has no elements" % name)
        n = len(self.elements)
        self.tables = {}
        for op, t in tables.items():
            t = np.asarray(t, dtype=np.int64)
            if t.shape != (n,) * t.ndim:
                raise SignatureError("table of %s in %s has shape %s" % (op, name, t.shape))
            if t.size and (t.min() < 0 or t.max() >= n):
                raise SignatureError("table of %s in %s is not closed" % (op, name))
            t.setflags(write=False)
            self.tables[op] = t
        if spec is None:
            spec = VarietySpec(tuple(sorted((op, t.ndim) for op, t in self.tables.items())))
        elif sorted(spec.ops) != sorted((op, t.ndim) for op, t in self.tables.items()):
            raise SignatureError("algebra %s does not match the signature %s" % (name, spec.ops))
        self.spec = spec
        self.cap = cap if cap is not None else point_cap()
        self._index = {e: i for i, e in enumerate(self.elements)}
        self._term_cache = {}
        self._coord_cache = {}
        for lhs, rhs in spec.identities:
            bad = self.identity_counterexample(lhs, rhs, spec.identity_sort)
            if bad is not None:
                raise SignatureError("%s violates identity %s == %s at %s"
                                     % (name, lhs, rhs, bad.render()))

    # -- basics ---------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return "FiniteAlgebra(%s, %d elements)" % (self.name, self.size)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return (self.name == other.name and self.elements == other.elements
                and self.tables.keys() == other.tables.keys()
                and all(np.array_equal(t, other.tables[k]) for k, t in self.tables.items()))

    def __hash__(self):
        return hash((self.name, self.elements))

    def element(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise SignatureError("no element %r in %s" % (name, self.name)) from None

    def apply(self, op: str, *args: int) -> int:
        return int(self.tables[op][tuple(args)])

    def check_compatible(self, other: "FiniteAlgebra"):
        if not self.spec.same_signature(other.spec):
            raise SignatureError("signatures of %s and %s differ" % (self.name, other.name))

    def reduct(self, ops, name: str | None = None) -> "FiniteAlgebra":
        return FiniteAlgebra(name or "%s|%s" % (self.name, ",".join(ops)), self.elements,
                             {op: self.tables[op] for op in ops})

    # -- point space ----------------------------------------------------

    def space_size(self, sort: VarSort) -> int:
        total = self.size ** len(sort)
        if total > self.cap:
            raise CapExceeded("space of %s over %s has %d points, cap is %d"
                              % (self.name, sort.name, total, self.cap))
        return total

    def coordinates(self, sort: VarSort) -> tuple:
        """Per-variable arrays giving the value of each variable at every point."""
        key = len(sort)
        if key not in self._coord_cache:
            total = self.space_size(sort)
            idx = np.arange(total, dtype=np.int64)
            n = self.size
            cols = []
            for i in range(len(sort)):
                c = (idx // n ** i) % n
                c.setflags(write=False)
                cols.append(c)
            self._coord_cache[key] = tuple(cols)
        return self._coord_cache[key]

    def term_values(self, w: Term, sort: VarSort) -> np.ndarray:
        """Value of ``w`` at every point of the space over ``sort``."""
        key = (w, sort.vars)
        hit = self._term_cache.get(key)
        if hit is not None:
            return hit
        cols = self.coordinates(sort)
        out = self._eval_vec(w, sort, cols)
        out = np.broadcast_to(out, cols[0].shape).copy() if np.ndim(out) == 0 else out
        out.setflags(write=False)
        if len(self._term_cache) < 200000:
            self._term_cache[key] = out
        return out

    def _eval_vec(self, w, sort, cols):
        if isinstance(w, Var):
            return cols[sort.index(w.name)]
        table = self.tables.get(w.op)
        if table is None:
            raise SignatureError("%s has no operation %s" % (self.name, w.op))
        if len(w.args) != table.ndim:
            raise SignatureError("operation %s expects %d arguments" % (w.op, table.ndim))
        if not w.args:
            return np.int64(table[()])
        return table[tuple(self._eval_vec(a, sort, cols) for a in w.args)]

    def points(self, sort: VarSort):
        total = self.space_size(sort)
        return [Point.from_index(self, sort, i) for i in range(total)]

    def identity_counterexample(self, lhs: Term, rhs: Term, sort: VarSort):
        a = self.term_values(lhs, sort)
        b = self.term_values(rhs, sort)
        bad = np.flatnonzero(a != b)
        if bad.size:
            return Point.from_index(self, sort, int(bad[0]))
        return None

    # -- products --------------------------------------------------------

    def product(self, other: "FiniteAlgebra", name: str | None = None) -> "FiniteAlgebra":
        """Direct product; element (a, b) is named ``a_b`` and indexed a*|other| + b."""
        self.check_compatible(other)
        m = other.size
        elems = ["%s_%s" % (a, b) for a in self.elements for b in other.elements]
        tables = {}
        for op, t in self.tables.items():
            u = other.tables[op]
            k = t.ndim
            out = np.zeros((self.size * m,) * k, dtype=np.int64)
            for args in product(range(self.size * m), repeat=k):
                left = tuple(a // m for a in args)
                right = tuple(a % m for a in args)
                out[args] = t[left] * m + u[right]
            tables[op] = out
        return FiniteAlgebra(name or "%sx%s" % (self.name, other.name), elems, tables,
                             spec=self.spec)


@dataclass(frozen=True)
class Point:
    """A point mu: X -> H, stored as element indices in sort order."""
    algebra: FiniteAlgebra
    sort: VarSort
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(self.sort):
            raise SortError("point needs one value per variable of %s" % self.sort.name)

    @classmethod
    def from_index(cls, H: FiniteAlgebra, sort: VarSort, index: int) -> "Point":
        n = H.size
        vals = []
        for _ in sort.vars:
            vals.append(index % n)
            index //= n
        return cls(H, sort, tuple(vals))

    @classmethod
    def of(cls, H: FiniteAlgebra, sort: VarSort, assignment: dict) -> "Point":
        missing = [x for x in sort.vars if x not in assignment]
        if missing:
            raise SortError("point misses variables %s" % missing)
        vals = tuple(v if isinstance(v, int) else H.element(v)
                     for v in (assignment[x] for x in sort.vars))
        return cls(H, sort, vals)

    @property
    def index(self) -> int:
        n = self.algebra.size
        return sum(v * n ** i for i, v in enumerate(self.values))

    def __getitem__(self, x: str) -> int:
        return self.values[self.sort.index(x)]

    def render(self) -> str:
        el = self.algebra.elements
        return "(%s)" % ", ".join("%s=%s" % (x, el[v]) for x, v in zip(self.sort.vars, self.values))

    def __str__(self):
        return self.render()


def render_index(H: FiniteAlgebra, sort: VarSort, index: int) -> str:
    return Point.from_index(H, sort, index).render()


# --------------------------------------------------------------------------
# evaluation and kernels

def eval_term(H: FiniteAlgebra, mu: Point, w: Term) -> int:
    if isinstance(w, Var):
        return mu[w.name]
    table = H.tables.get(w.op)
    if table is None:
        raise SignatureError("%s has no operation %s" % (H.name, w.op))
    if len(w.args) != table.ndim:
        raise SignatureError("operation %s expects %d arguments" % (w.op, table.ndim))
    return int(table[tuple(eval_term(H, mu, a) for a in w.args)])


def enumerate_points(H: FiniteAlgebra, sort: VarSort) -> list:
    return H.points(sort)


def kernel_contains(H: FiniteAlgebra, mu: Point, w: Term, w2: Term) -> bool:
    for t in (w, w2):
        extra = support(t) - set(mu.sort.vars)
        if extra:
            raise SortError("term %s uses %s outside sort %s" % (t, sorted(extra), mu.sort.name))
    return eval_term(H, mu, w) == eval_term(H, mu, w2)


# --------------------------------------------------------------------------
# automorphisms and isomorphisms

def _propagate(H1, H2, f, used):
    """Close a partial map under the operations; False on conflict."""
    changed = True
    while changed:
        changed = False
        for op, t1 in H1.tables.items():
            t2 = H2.tables[op]
            k = t1.ndim
            dom = [i for i in range(H1.size) if f[i] >= 0]
            for args in product(dom, repeat=k):
                src = int(t1[args])
                dst = int(t2[tuple(f[a] for a in args)])
                if f[src] < 0:
                    if used[dst]:
                        return False
                    f[src] = dst
                    used[dst] = True
                    changed = True
                elif f[src] != dst:
                    return False
    return True


def _search(H1, H2, first_only):
    H1.check_compatible(H2)
    n = H1.size
    if n != H2.size:
        return []
    found = []

    def rec(f, used):
        if first_only and found:
            return
        free = [i for i in range(n) if f[i] < 0]
        if not free:
            found.append(tuple(f))
            return
        i = free[0]
        for v in range(n):
            if used[v]:
                continue
            g, u = f[:], used[:]
            g[i] = v
            u[v] = True
            if _propagate(H1, H2, g, u):
                rec(g, u)

    f, used = [-1] * n, [False] * n
    if _propagate(H1, H2, f, used):
        rec(f, used)
    return sorted(found)


def automorphism_group(H: FiniteAlgebra) -> list:
    """All automorphisms as tuples ``p`` with ``p[i]`` the image of element i, sorted."""
    return _search(H, H, first_only=False)


def isomorphism_search(H1: FiniteAlgebra, H2: FiniteAlgebra):
    """A table-preserving bijection H1 -> H2 as a tuple, or None."""
    found = _search(H1, H2, first_only=True)
    return found[0] if found else None


def is_homomorphism(H1: FiniteAlgebra, H2: FiniteAlgebra, f) -> bool:
    for op, t1 in H1.tables.items():
        t2 = H2.tables[op]
        for args in product(range(H1.size), repeat=t1.ndim):
            if f[int(t1[args])] != int(t2[tuple(f[a] for a in args)]):
                return False
    return True


# --------------------------------------------------------------------------
# H-closed congruences

class QuotientPresentation:
    """Finite presentation of the congruence A'_H = intersection of Ker(mu), mu in A.

    A pair of terms lies in the congruence iff their evaluations at the
    witness points coincide as tuples.  The quotient W(X)/A'_H is isomorphic
    to the subalgebra of H^A generated by the generator tuples.
    """

    def __init__(self, H: FiniteAlgebra, sort: VarSort, witnesses):
        witnesses = list(witnesses)
        if not witnesses:
            raise HalgeoError("empty point set: the closed congruence of no points is not defined")
        for mu in witnesses:
            if mu.sort != sort:
                raise SortError("witness %s is not over sort %s" % (mu, sort.name))
        self.algebra = H
        self.sort = sort
        self.witnesses = tuple(witnesses)
        self._image = None

    def tuple_of(self, w: Term) -> tuple:
        check_term(w, self.sort, self.algebra.spec)
        return tuple(eval_term(self.algebra, mu, w) for mu in self.witnesses)

    def contains(self, w: Term, w2: Term) -> bool:
        return self.tuple_of(w) == self.tuple_of(w2)

    def generators(self) -> tuple:
        return tuple(tuple(mu[x] for mu in self.witnesses) for x in self.sort.vars)

    @property
    def image(self) -> dict:
        """Generated subalgebra of H^A: element tuple -> a shortest term naming it."""
        if self._image is None:
            self._image = generate_subalgebra(self.algebra, self.sort, self.generators())
        return self._image


def generate_subalgebra(H: FiniteAlgebra, sort: VarSort, gens, limit: int | None = None) -> dict:
    """Subalgebra of a direct power of H generated by tuples, with term names.

    ``gens[i]`` is the tuple assigned to variable ``sort.vars[i]``.  Returns a
    dict from element tuple to the first term found producing it.
    """
    limit = limit or H.cap
    found = {}
    for x, g in zip(sort.vars, gens):
        found.setdefault(tuple(g), Var(x))
    width = len(gens[0]) if gens else 0
    frontier = True
    while frontier:
        frontier = False
        elems = list(found.items())
        for op in sorted(H.tables):
            t = H.tables[op]
            k = t.ndim
            for combo in product(elems, repeat=k):
                if k == 0:
                    val = (int(t[()]),) * width
                else:
                    val = tuple(int(t[tuple(c[0][j] for c in combo)]) for j in range(width))
                if val not in found:
                    found[val] = App(op, tuple(c[1] for c in combo))
                    frontier = True
                    if len(found) > limit:
                        raise CapExceeded("generated subalgebra exceeds %d elements" % limit)
    return found


def present_closed_congruence(H: FiniteAlgebra, points) -> QuotientPresentation:
    points = list(points)
    if not points:
        raise HalgeoError("empty point set: the closed congruence of no points is not defined")
    return QuotientPresentation(H, points[0].sort, points)


def same_kernel(H: FiniteAlgebra, mu: Point, nu: Point) -> bool:
    """Ker(mu) == Ker(nu), via the presentation over the two points.

    The generated subalgebra of H^2 is the graph of a bijection between the
    subalgebras generated by mu and nu exactly when the kernels coincide.
    """
    pres = present_closed_congruence(H, [mu, nu])
    img = pres.image
    left = {a for a, _ in img}
    right = {b for _, b in img}
    return len(left) == len(img) == len(right)


# --------------------------------------------------------------------------
# file format

def parse_algebra(text: str, spec: VarietySpec | None = None, source: str = "<text>") -> FiniteAlgebra:
    name = None
    elements = None
    arities = {}
    rows = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]

        def bad(msg):
            return ParseError("%s:%d: %s" % (source, lineno, msg))

        if head == "algebra":
            if len(words) != 2:
                raise bad("expected 'algebra <name>'")
            name = words[1]
            current = None
        elif head == "elements":
            if len(words) < 2:
                raise bad("expected at least one element")
            elements = words[1:]
            current = None
        elif head == "op":
            if len(words) != 3 or not words[2].isdigit():
                raise bad("expected 'op <name> <arity>'")
            if words[1] in arities:
                raise bad("operation %s declared twice" % words[1])
            arities[words[1]] = int(words[2])
            current = None
        elif head == "table":
            if len(words) != 2 or words[1] not in arities:
                raise bad("table for undeclared operation")
            if elements is None:
                raise bad("table before elements")
            current = words[1]
            if current in rows:
                raise bad("second table for %s" % current)
            rows[current] = {}
        elif current is not None:
            if head not in elements:
                raise bad("unknown directive or element %r" % head)
            k = arities[current]
            if len(words) != k + 1:
                raise bad("expected %d arguments and a result" % k)
            idx = {e: i for i, e in enumerate(elements)}
            try:
                vals = [idx[w] for w in words]
            except KeyError as e:
                raise bad("unknown element %s" % e) from None
            key = tuple(vals[:-1])
            if key in rows[current] and rows[current][key] != vals[-1]:
                raise bad("conflicting row for %s" % current)
            rows[current][key] = vals[-1]
        else:
            raise bad("unknown directive %r" % head)
    if name is None or elements is None:
        raise ParseError("%s: missing 'algebra' or 'elements' line" % source)
    n = len(elements)
    tables = {}
    for op, k in arities.items():
        if op not in rows:
            raise ParseError("%s: no table for %s" % (source, op))
        if len(rows[op]) != n ** k:
            raise ParseError("%s: table %s has %d rows, need %d" % (source, op, len(rows[op]), n ** k))
        t = np.zeros((n,) * k, dtype=np.int64)
        for key, v in rows[op].items():
            t[key] = v
        tables[op] = t
    return FiniteAlgebra(name, elements, tables, spec=spec)


def load_algebra(path, spec: VarietySpec | None = None) -> FiniteAlgebra:
    path = Path(path)
    return parse_algebra(path.read_text(encoding="utf-8"), spec=spec, source=str(path))


def format_algebra(H: FiniteAlgebra) -> str:
    lines = ["algebra %s" % H.name, "elements %s" % " ".join(H.elements)]
    for op in sorted(H.tables):
        lines.append("op %s %d" % (op, H.tables[op].ndim))
    for op in sorted(H.tables):
        t = H.tables[op]
        lines.append("table %s" % op)
        for args in product(range(H.size), repeat=t.ndim):
            lines.append(" ".join([H.elements[a] for a in args] + [H.elements[int(t[args])]]))
    return "\n".join(lines) + "\n"
