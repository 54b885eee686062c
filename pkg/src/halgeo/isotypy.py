"""Bounded-rank types of points, Aut-orbits, and the deciders built on them.

Rank-0 type of a tuple: which equalities between terms of depth <= ``depth``
hold at it.  Rank k+1: the rank-0 type together with the set of rank-k
types of its one-variable extensions (back-and-forth refinement).  Types
are interned in a :class:`TypeTable` shared between algebras, so class ids
are comparable across structures.

A type only depends on the tuple's distinct values in order of first
occurrence plus its equality pattern, so refinement is memoized on these
reduced tuples.  There are at most sum_j n!/(n-j)! of them, which keeps
large ranks cheap.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product

import numpy as np

from .algebra import FiniteAlgebra, Point, isomorphism_search, same_kernel
from .formula import Eq, Exists, Formula, Not, Subst, conj, val
from .geometry import FormulaSystem, automorphism_permutations, logical_solve
from .pointset import PointSet
from .syntax import App, SortError, Substitution, Var, VarSort, make_sort

ISOTYPIC = "ISOTYPIC"
NOT_ISOTYPIC = "NOT ISOTYPIC"
HOMOGENEOUS = "HOMOGENEOUS"
NOT_HOMOGENEOUS = "NOT HOMOGENEOUS"
ALG_HOMOGENEOUS = "ALGEBRAICALLY-HOMOGENEOUS"
NOT_ALG_HOMOGENEOUS = "NOT ALGEBRAICALLY-HOMOGENEOUS"

DEFAULT_DEPTH = 2


def var_names(m: int) -> list:
    base = ["x", "y", "z", "u", "v", "w"]
    if m <= len(base):
        return base[:m]
    return ["x%d" % i for i in range(1, m + 1)]


def reduce_tuple(values) -> tuple:
    """(equality pattern, distinct values in first-occurrence order)."""
    seen = {}
    pattern = []
    for v in values:
        if v not in seen:
            seen[v] = len(seen)
        pattern.append(seen[v])
    return tuple(pattern), tuple(seen)


class TypeTable:
    """Interned rank-k types of reduced tuples over one or more algebras."""

    def __init__(self, depth: int = DEFAULT_DEPTH):
        self.depth = depth
        self._ids = {}
        self._memo = {}
        self._atomic = {}
        self._algebras = {}

    def _intern(self, key) -> int:
        got = self._ids.get(key)
        if got is None:
            got = self._ids[key] = len(self._ids)
        return got

    def _akey(self, H):
        k = id(H)
        self._algebras[k] = H
        return k

    def atomic(self, H: FiniteAlgebra, r: tuple) -> tuple:
        """Canonical form of the term-equality pattern of r up to ``depth``.

        Elements get canonical numbers in order of discovery; at each level
        every operation is applied to every tuple of already named elements
        and the canonical number of the result is recorded.
        """
        ck = (self._akey(H), r)
        hit = self._atomic.get(ck)
        if hit is not None:
            return hit
        names = {v: i for i, v in enumerate(r)}
        vals = list(r)
        levels = [len(r)]
        ops = sorted(H.tables)
        for _ in range(self.depth):
            cur = list(vals)
            row = []
            for op in ops:
                t = H.tables[op]
                for args in product(range(len(cur)), repeat=t.ndim):
                    v = int(t[tuple(cur[a] for a in args)])
                    if v not in names:
                        names[v] = len(vals)
                        vals.append(v)
                    row.append(names[v])
            levels.append(tuple(row))
        key = tuple(levels)
        self._atomic[ck] = key
        return key

    def cls(self, H: FiniteAlgebra, r: tuple, k: int) -> int:
        mk = (self._akey(H), r, k)
        hit = self._memo.get(mk)
        if hit is not None:
            return hit
        if k == 0:
            out = self._intern(("atomic", self.atomic(H, r)))
        else:
            below = self.cls(H, r, k - 1)
            present = set(r)
            ext = frozenset(self.cls(H, r + (a,), k - 1) for a in range(H.size) if a not in present)
            out = self._intern(("rank", k, below, ext))
        self._memo[mk] = out
        return out

    def type_of(self, H: FiniteAlgebra, values, k: int) -> tuple:
        """Type of an arbitrary tuple: its equality pattern and reduced class."""
        pattern, r = reduce_tuple(values)
        return pattern, self.cls(H, r, k)


# --------------------------------------------------------------------------
# partitions

@dataclass
class Partition:
    """A partition of the point space; ``labels[i]`` is the least index in i's class."""
    algebra: FiniteAlgebra
    sort: VarSort
    labels: np.ndarray
    rank: int | None = None
    kind: str = "type"

    def classes(self) -> list:
        out = {}
        for i, lab in enumerate(self.labels.tolist()):
            out.setdefault(lab, []).append(i)
        return [(lab, out[lab]) for lab in sorted(out)]

    def __len__(self):
        return len(set(self.labels.tolist()))

    def same_as(self, other: "Partition") -> bool:
        return bool(np.array_equal(self.labels, other.labels))

    def refines(self, other: "Partition") -> bool:
        """Every class of self lies inside a class of other."""
        m = {}
        for a, b in zip(self.labels.tolist(), other.labels.tolist()):
            if m.setdefault(a, b) != b:
                return False
        return True

    def render(self) -> str:
        lines = []
        for lab, members in self.classes():
            pts = ", ".join(Point.from_index(self.algebra, self.sort, i).render() for i in members)
            lines.append("class %d: {%s}" % (lab, pts))
        return "\n".join(lines)


def _canonical(keys) -> np.ndarray:
    first = {}
    out = np.zeros(len(keys), dtype=np.int64)
    for i, k in enumerate(keys):
        out[i] = first.setdefault(k, i)
    return out


def orbit_partition(H: FiniteAlgebra, sort: VarSort) -> Partition:
    perms = automorphism_permutations(H, sort)
    # perms form a group, so {perm[i]} is the whole orbit of i
    labels = np.min(np.stack(perms), axis=0)
    return Partition(H, sort, labels, None, "orbit")


def type_partition(H: FiniteAlgebra, sort: VarSort, rank: int, depth: int = DEFAULT_DEPTH,
                   table: TypeTable | None = None) -> Partition:
    if rank < 0:
        raise ValueError("rank must be non-negative")
    table = table or TypeTable(depth)
    total = H.space_size(sort)
    keys = [table.type_of(H, Point.from_index(H, sort, i).values, rank) for i in range(total)]
    return Partition(H, sort, _canonical(keys), rank, "type")


def same_type_cross(H1: FiniteAlgebra, mu: Point, H2: FiniteAlgebra, nu: Point, rank: int,
                    depth: int = DEFAULT_DEPTH, table: TypeTable | None = None) -> bool:
    H1.check_compatible(H2)
    if mu.sort != nu.sort:
        raise SortError("points over %s and %s" % (mu.sort.name, nu.sort.name))
    table = table or TypeTable(depth)
    return table.type_of(H1, mu.values, rank) == table.type_of(H2, nu.values, rank)


def stabilization_rank(H: FiniteAlgebra, sort: VarSort, depth: int = DEFAULT_DEPTH,
                       limit: int | None = None) -> int:
    """Least k with type_partition(k) == type_partition(k+1)."""
    table = TypeTable(depth)
    limit = limit if limit is not None else H.size * len(sort) + H.size
    prev = type_partition(H, sort, 0, table=table)
    for k in range(limit + 1):
        nxt = type_partition(H, sort, k + 1, table=table)
        if prev.same_as(nxt):
            return k
        prev = nxt
    raise RuntimeError("type partition of %s did not stabilize by rank %d" % (H.name, limit))


# --------------------------------------------------------------------------
# isotypy

@dataclass
class IsotypyResult:
    verdict: str
    max_vars: int
    rank: int
    depth: int
    witness: Point | None = None
    witness_algebra: str | None = None
    other_algebra: str | None = None
    separating_rank: int | None = None
    isomorphism: tuple | None = None
    table: TypeTable | None = field(default=None, repr=False)
    algebras: tuple = field(default=(), repr=False)

    @property
    def ok(self) -> bool:
        return self.verdict == ISOTYPIC


def default_rank(H1, H2, max_vars) -> int:
    return H1.size + H2.size + max_vars


def isotypic_check(H1: FiniteAlgebra, H2: FiniteAlgebra, max_vars: int = 1, rank: int | None = None,
                   depth: int = DEFAULT_DEPTH, cross_validate: bool = True) -> IsotypyResult:
    """Compare the types realized in H1^X and H2^X for all |X| <= max_vars."""
    H1.check_compatible(H2)
    if max_vars < 1:
        raise ValueError("max_vars must be at least 1")
    rank = default_rank(H1, H2, max_vars) if rank is None else rank
    table = TypeTable(depth)
    iso = isomorphism_search(H1, H2) if cross_validate else None
    res = IsotypyResult(ISOTYPIC, max_vars, rank, depth, isomorphism=iso, table=table,
                        algebras=(H1, H2))
    for j in range(1, max_vars + 1):
        tuples = {H: list(permutations(range(H.size), j)) for H in (H1, H2)}
        realized = {H: {table.cls(H, r, rank) for r in tuples[H]} for H in (H1, H2)}
        best = None
        for side, (A, B) in enumerate(((H1, H2), (H2, H1))):
            for r in tuples[A]:
                if table.cls(A, r, rank) in realized[B]:
                    continue
                # report the unmatched tuple that separates at the lowest rank
                sep = next(k for k in range(rank + 1)
                           if table.cls(A, r, k) not in {table.cls(B, q, k) for q in tuples[B]})
                if best is None or sep < best[0]:
                    best = (sep, A, B, r)
        if best is not None:
            sep, A, B, r = best
            res.verdict = NOT_ISOTYPIC
            res.witness = Point(A, make_sort(var_names(j)), r)
            res.witness_algebra = A.name
            res.other_algebra = B.name
            res.separating_rank = sep
            return res
    return res


# --------------------------------------------------------------------------
# distinguishing formulas

def _fresh(sort: VarSort) -> str:
    for name in ["z", "u", "v", "w"] + ["z%d" % i for i in range(1, 100)]:
        if name not in sort:
            return name
    raise SortError("no fresh variable name")


def _joint_terms(structs, sort: VarSort, depth: int) -> list:
    """Terms of depth <= depth, one per joint value over several (algebra, tuple) pairs."""
    spec = structs[0][0].spec
    reps = {}

    def value(H, t, w):
        if isinstance(w, Var):
            return t[sort.index(w.name)]
        return int(H.tables[w.op][tuple(value(H, t, a) for a in w.args)])

    cache = {}

    def key(w):
        if isinstance(w, Var):
            k = tuple(t[sort.index(w.name)] for _, t in structs)
        else:
            argk = [cache[a] for a in w.args]
            k = tuple(int(H.tables[w.op][tuple(ak[i] for ak in argk)])
                      for i, (H, _) in enumerate(structs))
        cache[w] = k
        return k

    for x in sort.vars:
        reps.setdefault(key(Var(x)), Var(x))
    for d in range(1, depth + 1):
        pool = list(reps.values())
        for op, k in sorted(spec.ops):
            if k == 0 and d > 1:
                continue
            for args in product(pool, repeat=k):
                w = App(op, tuple(args))
                reps.setdefault(key(w), w)
    return [(w, cache[w]) for w in reps.values()]


def separating_literal(H1, t1, H2s_t2s, sort, depth):
    """A literal true at t1 in H1 and false at every given (H2, t2), or None."""
    structs = [(H1, t1)] + list(H2s_t2s)
    terms = _joint_terms(structs, sort, depth)
    for i in range(len(terms)):
        for j in range(i):
            (u, ku), (v, kv) = terms[i], terms[j]
            truth = [a == b for a, b in zip(ku, kv)]
            if all(t != truth[0] for t in truth[1:]):
                atom = Eq(u, v, sort)
                return atom if truth[0] else Not(atom)
    return None


def _close(f: Formula, z: str, sort: VarSort) -> Formula:
    """E z. f as a formula of ``sort`` (f lives on sort + z)."""
    ext = f.sort
    images = tuple(Var(x) if x != z else Var(sort.vars[0]) for x in ext.vars)
    return Subst(Substitution(ext, sort, images), Exists(z, f))


def distinguish(table: TypeTable, H1, t1, H2, t2, sort: VarSort, rank: int) -> Formula:
    """A formula of ``sort`` true at t1 in H1 and false at t2 in H2.

    Requires the rank-``rank`` types of the two tuples to differ; the
    construction follows the back-and-forth refinement.
    """
    if table.type_of(H1, t1, 0) != table.type_of(H2, t2, 0):
        lit = separating_literal(H1, t1, [(H2, t2)], sort, table.depth)
        if lit is None:
            raise RuntimeError("atomic types differ but no separating literal found")
        return lit
    k = next(j for j in range(1, rank + 1) if table.type_of(H1, t1, j) != table.type_of(H2, t2, j))
    z = _fresh(sort)
    ext = make_sort(sort.vars + (z,))
    ext1 = {a: table.type_of(H1, t1 + (a,), k - 1) for a in range(H1.size)}
    ext2 = {b: table.type_of(H2, t2 + (b,), k - 1) for b in range(H2.size)}
    for a in range(H1.size):
        if ext1[a] not in ext2.values():
            parts = _dedupe(distinguish(table, H1, t1 + (a,), H2, t2 + (b,), ext, k - 1)
                            for b in range(H2.size))
            return _close(conj(parts, ext), z, sort)
    for b in range(H2.size):
        if ext2[b] not in ext1.values():
            parts = _dedupe(distinguish(table, H2, t2 + (b,), H1, t1 + (a,), ext, k - 1)
                            for a in range(H1.size))
            return Not(_close(conj(parts, ext), z, sort))
    raise RuntimeError("types differ but no separating extension found")


def _dedupe(fs) -> list:
    out = []
    for f in fs:
        if f not in out:
            out.append(f)
    return out


def characterizing_formula(table: TypeTable, A, t, B, sort: VarSort, rank: int) -> Formula:
    """A formula true at t in A and false at every point of B over ``sort``."""
    others = [tuple(p.values) for p in B.points(sort)]
    lit = separating_literal(A, t, [(B, o) for o in others], sort, table.depth)
    if lit is not None:
        return lit
    return conj(_dedupe(distinguish(table, A, t, B, o, sort, rank) for o in others), sort)


def separating_sentence(res: IsotypyResult) -> Formula:
    """A closed-up formula whose value is everything in one algebra and nothing in the other."""
    if res.verdict == ISOTYPIC:
        raise ValueError("isotypic algebras have no separating sentence")
    H1, H2 = res.algebras
    A, B = (H1, H2) if res.witness.algebra is H1 else (H2, H1)
    sort = res.witness.sort
    f = characterizing_formula(res.table, A, res.witness.values, B, sort, res.rank)
    for x in reversed(sort.vars):
        f = Exists(x, f)
    return f


# --------------------------------------------------------------------------
# homogeneity

@dataclass
class HomogeneityResult:
    verdict: str
    max_vars: int
    rank: int | None = None
    counterexample: tuple | None = None
    orbit_counts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def homogeneity_check(H: FiniteAlgebra, max_vars: int = 1, rank: int | None = None,
                      depth: int = DEFAULT_DEPTH) -> HomogeneityResult:
    """Type-equal points must lie in one Aut(H)-orbit, for every |X| <= max_vars."""
    rank = H.size + max_vars if rank is None else rank
    table = TypeTable(depth)
    res = HomogeneityResult(HOMOGENEOUS, max_vars, rank)
    for m in range(1, max_vars + 1):
        sort = make_sort(var_names(m))
        tp = type_partition(H, sort, rank, table=table)
        op = orbit_partition(H, sort)
        res.orbit_counts[m] = len(op)
        seen = {}
        for i, (a, b) in enumerate(zip(tp.labels.tolist(), op.labels.tolist())):
            j = seen.setdefault(a, i)
            if op.labels[j] != b:
                res.verdict = NOT_HOMOGENEOUS
                res.counterexample = (Point.from_index(H, sort, j), Point.from_index(H, sort, i))
                return res
    return res


def algebraic_homogeneity_check(H: FiniteAlgebra, max_vars: int = 1) -> HomogeneityResult:
    """Kernel-equal points must lie in one Aut(H)-orbit, for every |X| <= max_vars."""
    res = HomogeneityResult(ALG_HOMOGENEOUS, max_vars)
    for m in range(1, max_vars + 1):
        sort = make_sort(var_names(m))
        op = orbit_partition(H, sort)
        res.orbit_counts[m] = len(op)
        pts = H.points(sort)
        groups = {}
        for p in pts:
            groups.setdefault(reduce_tuple(p.values)[0], []).append(p)
        for group in groups.values():
            for i, mu in enumerate(group):
                for nu in group[i + 1:]:
                    if op.labels[mu.index] != op.labels[nu.index] and same_kernel(H, mu, nu):
                        res.verdict = NOT_ALG_HOMOGENEOUS
                        res.counterexample = (mu, nu)
                        return res
    return res


# --------------------------------------------------------------------------
# LG-noetherian reduction of a finite system

def noetherian_reduce(H: FiniteAlgebra, T: FormulaSystem) -> FormulaSystem:
    """Greedy left-to-right removal of formulas not needed to cut out T^L_H."""
    fs = []
    for f in T.formulas:
        if f not in fs:
            fs.append(f)
    target = logical_solve(H, T)
    memo = {}
    vals = [val(H, f, memo) for f in fs]
    keep = list(range(len(fs)))
    for i in range(len(fs)):
        trial = [j for j in keep if j != i]
        got = PointSet.top(H, T.sort)
        for j in trial:
            got = got & vals[j]
        if got == target:
            keep = trial
    return FormulaSystem(T.sort, tuple(fs[j] for j in keep))
