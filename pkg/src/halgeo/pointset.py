"""The extended boolean algebras of subsets of an affine space Hom(W(X), H).

A PointSet is a boolean numpy vector indexed by point index.  Boolean
operations are pointwise, ``exists_x`` is the cylinder along one variable and
``transport`` pulls points back along a substitution.
"""
from __future__ import annotations

import numpy as np

from .algebra import FiniteAlgebra, Point, render_index
from .syntax import SortError, Substitution, Term, VarSort, check_term


class PointSet:
    __slots__ = ("algebra", "sort", "bits")

    def __init__(self, algebra: FiniteAlgebra, sort: VarSort, bits):
        bits = np.asarray(bits, dtype=bool)
        total = algebra.space_size(sort)
        if bits.shape != (total,):
            raise SortError("bit-vector of length %d for a space of %d points" % (bits.size, total))
        if bits.flags.writeable:
            bits = bits.copy()
            bits.setflags(write=False)
        self.algebra = algebra
        self.sort = sort
        self.bits = bits

    # constructors
    @classmethod
    def top(cls, H: FiniteAlgebra, sort: VarSort) -> "PointSet":
        return cls(H, sort, np.ones(H.space_size(sort), dtype=bool))

    @classmethod
    def bottom(cls, H: FiniteAlgebra, sort: VarSort) -> "PointSet":
        return cls(H, sort, np.zeros(H.space_size(sort), dtype=bool))

    @classmethod
    def from_indices(cls, H: FiniteAlgebra, sort: VarSort, indices) -> "PointSet":
        bits = np.zeros(H.space_size(sort), dtype=bool)
        bits[list(indices)] = True
        return cls(H, sort, bits)

    @classmethod
    def from_points(cls, H: FiniteAlgebra, sort: VarSort, points) -> "PointSet":
        return cls.from_indices(H, sort, [p.index for p in points])

    @classmethod
    def from_mask(cls, H: FiniteAlgebra, sort: VarSort, mask: int) -> "PointSet":
        total = H.space_size(sort)
        return cls(H, sort, [(mask >> i) & 1 for i in range(total)])

    # comparisons and boolean structure
    def _check(self, other: "PointSet"):
        if not isinstance(other, PointSet):
            raise TypeError("expected a PointSet")
        if other.sort != self.sort or not (other.algebra is self.algebra or other.algebra == self.algebra):
            raise SortError("point sets over %s/%s and %s/%s cannot be combined"
                            % (self.algebra.name, self.sort.name, other.algebra.name, other.sort.name))

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return (self.sort == other.sort and self.algebra == other.algebra
                and bool(np.array_equal(self.bits, other.bits)))

    def __hash__(self):
        return hash((self.sort, self.bits.tobytes()))

    def __or__(self, other):
        self._check(other)
        return PointSet(self.algebra, self.sort, self.bits | other.bits)

    def __and__(self, other):
        self._check(other)
        return PointSet(self.algebra, self.sort, self.bits & other.bits)

    def __invert__(self):
        return PointSet(self.algebra, self.sort, ~self.bits)

    def __le__(self, other):
        self._check(other)
        return bool(np.all(~self.bits | other.bits))

    def __ge__(self, other):
        return other <= self

    def __contains__(self, mu):
        if isinstance(mu, Point):
            if mu.sort != self.sort:
                raise SortError("point over %s, set over %s" % (mu.sort.name, self.sort.name))
            mu = mu.index
        return bool(self.bits[mu])

    def __len__(self):
        return int(self.bits.sum())

    def is_top(self) -> bool:
        return bool(self.bits.all())

    def is_bottom(self) -> bool:
        return not self.bits.any()

    def indices(self) -> list:
        return [int(i) for i in np.flatnonzero(self.bits)]

    def points(self) -> list:
        return [Point.from_index(self.algebra, self.sort, i) for i in self.indices()]

    @property
    def mask(self) -> int:
        packed = np.packbits(self.bits, bitorder="little")
        return int.from_bytes(packed.tobytes(), "little")

    def hex(self) -> str:
        return "%x" % self.mask

    def render(self) -> str:
        body = ", ".join(render_index(self.algebra, self.sort, i) for i in self.indices())
        return "{%s}" % body

    def __repr__(self):
        return "PointSet(%s, %s, mask=%s)" % (self.algebra.name, self.sort.name, self.hex())

    def key(self) -> bytes:
        return self.bits.tobytes()


def union(a: PointSet, b: PointSet) -> PointSet:
    return a | b


def intersection(a: PointSet, b: PointSet) -> PointSet:
    return a & b


def complement(a: PointSet) -> PointSet:
    return ~a


def equality_set(H: FiniteAlgebra, sort: VarSort, w: Term, w2: Term) -> PointSet:
    """[w == w2]_H: the points at which both terms take the same value."""
    check_term(w, sort, H.spec)
    check_term(w2, sort, H.spec)
    return PointSet(H, sort, H.term_values(w, sort) == H.term_values(w2, sort))


def exists_x(A: PointSet, x: str) -> PointSet:
    """Cylinder of A along x: mu is in the result iff some nu in A differs from mu at most on x."""
    i = A.sort.index(x)
    n = A.algebra.size
    m = len(A.sort)
    # C-order reshape: variable i sits on axis m-1-i
    cube = A.bits.reshape((n,) * m)
    axis = m - 1 - i
    hit = cube.any(axis=axis, keepdims=True)
    return PointSet(A.algebra, A.sort, np.broadcast_to(hit, cube.shape).reshape(-1))


def pullback_indices(H: FiniteAlgebra, s: Substitution) -> np.ndarray:
    """For every point mu over the codomain, the index of the point mu∘s over the domain."""
    n = H.size
    total = H.space_size(s.codomain)
    H.space_size(s.domain)
    out = np.zeros(total, dtype=np.int64)
    for i, w in enumerate(s.images):
        out += H.term_values(w, s.codomain) * (n ** i)
    return out


def pullback_point(H: FiniteAlgebra, s: Substitution, mu: Point) -> Point:
    """s~(mu) = mu∘s, a point over the domain of s."""
    if mu.sort != s.codomain:
        raise SortError("point over %s, substitution into %s" % (mu.sort.name, s.codomain.name))
    from .algebra import eval_term
    return Point(H, s.domain, tuple(eval_term(H, mu, w) for w in s.images))


def transport(s: Substitution, A: PointSet) -> PointSet:
    """s_*A over the codomain: mu belongs iff mu∘s belongs to A."""
    if A.sort != s.domain:
        raise SortError("set over %s, substitution from %s" % (A.sort.name, s.domain.name))
    idx = pullback_indices(A.algebra, s)
    return PointSet(A.algebra, s.codomain, A.bits[idx])


def automorphism_action(H: FiniteAlgebra, sort: VarSort, sigma) -> np.ndarray:
    """Index permutation of the point space induced by an automorphism."""
    n = H.size
    sig = np.asarray(sigma, dtype=np.int64)
    out = np.zeros(H.space_size(sort), dtype=np.int64)
    for i, c in enumerate(H.coordinates(sort)):
        out += sig[c] * (n ** i)
    return out


def act(sigma_perm: np.ndarray, A: PointSet) -> PointSet:
    """Image of A under a point permutation: {sigma(mu) | mu in A}."""
    bits = np.zeros_like(A.bits)
    bits[sigma_perm[A.bits]] = True
    return PointSet(A.algebra, A.sort, bits)
