"""Signatures, variable sorts, terms of the absolutely free algebra and substitutions.

Terms are never compared modulo the identities of a variety; two terms are
equal only when they are the same tree.  Everything semantic happens by
evaluation in a finite algebra.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence


class HalgeoError(Exception):
    """Base class for all errors raised by the package."""


class ParseError(HalgeoError):
    pass


class SortError(HalgeoError):
    pass


class SignatureError(HalgeoError):
    pass


# --------------------------------------------------------------------------
# terms

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    op: str
    args: tuple = ()

    def __str__(self):
        return "%s(%s)" % (self.op, ", ".join(str(a) for a in self.args))


Term = Var | App


def support(w: Term) -> frozenset:
    """Set of variable names occurring in ``w``."""
    if isinstance(w, Var):
        return frozenset([w.name])
    out = frozenset()
    for a in w.args:
        out |= support(a)
    return out


def depth(w: Term) -> int:
    """Nesting depth; variables have depth 0 and constants depth 1."""
    if isinstance(w, Var):
        return 0
    return 1 + max((depth(a) for a in w.args), default=0)


def size(w: Term) -> int:
    if isinstance(w, Var):
        return 1
    return 1 + sum(size(a) for a in w.args)


# --------------------------------------------------------------------------
# signatures and sorts

@dataclass(frozen=True)
class VarietySpec:
    """Operation symbols with arities plus an optional list of identities.

    ``identities`` holds ``(lhs, rhs)`` term pairs over ``identity_sort``.
    """
    ops: tuple                      # ((name, arity), ...)
    identities: tuple = ()
    identity_sort: "VarSort | None" = None

    def __post_init__(self):
        names = [n for n, _ in self.ops]
        if len(set(names)) != len(names):
            raise SignatureError("duplicate operation symbol in %r" % (names,))
        for n, k in self.ops:
            if not _IDENT.fullmatch(n):
                raise SignatureError("bad operation name %r" % n)
            if not isinstance(k, int) or k < 0:
                raise SignatureError("bad arity %r for %s" % (k, n))
        if self.identities:
            if self.identity_sort is None:
                raise SignatureError("identities need a declared variable sort")
            for lhs, rhs in self.identities:
                check_term(lhs, self.identity_sort, self)
                check_term(rhs, self.identity_sort, self)

    @property
    def arities(self) -> dict:
        return dict(self.ops)

    def arity(self, op: str) -> int:
        try:
            return self.arities[op]
        except KeyError:
            raise SignatureError("unknown operation symbol %r" % op) from None

    def same_signature(self, other: "VarietySpec") -> bool:
        return sorted(self.ops) == sorted(other.ops)

    def with_identities(self, sort: "VarSort", pairs) -> "VarietySpec":
        return VarietySpec(self.ops, tuple(pairs), sort)


@dataclass(frozen=True, eq=False)
class VarSort:
    """An ordered finite set of variables.

    Two sorts are equal when they list the same variables in the same order;
    the name is only a label used when printing.
    """
    name: str
    vars: tuple

    def __post_init__(self):
        if not self.vars:
            raise SortError("a sort needs at least one variable")
        if len(set(self.vars)) != len(self.vars):
            raise SortError("duplicate variable in sort %r" % (self.vars,))
        for v in self.vars:
            if not _IDENT.fullmatch(v):
                raise SortError("bad variable name %r" % v)

    def __eq__(self, other):
        return isinstance(other, VarSort) and self.vars == other.vars

    def __hash__(self):
        return hash(self.vars)

    def __len__(self):
        return len(self.vars)

    def __iter__(self):
        return iter(self.vars)

    def __contains__(self, v):
        return v in self.vars

    def index(self, v: str) -> int:
        try:
            return self.vars.index(v)
        except ValueError:
            raise SortError("variable %r not in sort %s" % (v, self.name)) from None

    def __str__(self):
        return self.name

    def __repr__(self):
        return "VarSort(%s)" % self.name


def make_sort(vars, name: str | None = None) -> VarSort:
    """Build a sort from a list (or space separated string) of variables.

    Anonymous sorts are named by their inline form ``{x y}`` so that they can
    be printed and read back without a registry.
    """
    if isinstance(vars, str):
        vars = vars.split()
    vars = tuple(vars)
    if name is None:
        name = "{%s}" % " ".join(vars)
    return VarSort(name, vars)


def check_term(w: Term, sort: VarSort, spec: VarietySpec) -> Term:
    """Raise unless ``w`` is arity-correct and only uses variables of ``sort``."""
    if isinstance(w, Var):
        if w.name not in sort:
            raise SortError("variable %r not in sort %s" % (w.name, sort.name))
        return w
    k = spec.arity(w.op)
    if len(w.args) != k:
        raise SignatureError("operation %s expects %d arguments, got %d"
                             % (w.op, k, len(w.args)))
    for a in w.args:
        check_term(a, sort, spec)
    return w


# --------------------------------------------------------------------------
# substitutions

@dataclass(frozen=True)
class Substitution:
    """A homomorphism W(X) -> W(Y), given by the images of the variables of X."""
    domain: VarSort
    codomain: VarSort
    images: tuple                   # image of domain.vars[i], in order

    def __post_init__(self):
        if len(self.images) != len(self.domain):
            raise SortError("substitution must give an image for every variable of %s"
                            % self.domain.name)
        for w in self.images:
            extra = support(w) - set(self.codomain.vars)
            if extra:
                raise SortError("image term uses %s outside sort %s"
                                % (sorted(extra), self.codomain.name))

    def __call__(self, x: str) -> Term:
        return self.images[self.domain.index(x)]

    @property
    def mapping(self) -> dict:
        return dict(zip(self.domain.vars, self.images))

    def is_identity(self) -> bool:
        return (self.domain == self.codomain
                and all(w == Var(x) for x, w in zip(self.domain.vars, self.images)))

    def __str__(self):
        body = ", ".join("%s->%s" % (x, w) for x, w in zip(self.domain.vars, self.images))
        return "[%s : %s -> %s]" % (body, self.domain.name, self.codomain.name)


def substitution(domain: VarSort, codomain: VarSort, mapping: Mapping) -> Substitution:
    """Build a substitution; variables missing from ``mapping`` go to themselves."""
    images = []
    for x in domain.vars:
        w = mapping.get(x, Var(x))
        if isinstance(w, str):
            w = Var(w)
        images.append(w)
    return Substitution(domain, codomain, tuple(images))


def identity_substitution(sort: VarSort) -> Substitution:
    return Substitution(sort, sort, tuple(Var(x) for x in sort.vars))


def _apply(images: dict, w: Term) -> Term:
    if isinstance(w, Var):
        return images[w.name]
    return App(w.op, tuple(_apply(images, a) for a in w.args))


def apply_substitution(s: Substitution, w: Term) -> Term:
    extra = support(w) - set(s.domain.vars)
    if extra:
        raise SortError("term %s uses %s outside sort %s" % (w, sorted(extra), s.domain.name))
    return _apply(s.mapping, w)


def compose_substitutions(s: Substitution, s2: Substitution) -> Substitution:
    """The substitution "apply ``s`` then ``s2``": x -> s2(s(x))."""
    if s.codomain != s2.domain:
        raise SortError("cannot compose %s -> %s with %s -> %s"
                        % (s.domain.name, s.codomain.name, s2.domain.name, s2.codomain.name))
    m = s2.mapping
    return Substitution(s.domain, s2.codomain, tuple(_apply(m, w) for w in s.images))


def elementary_substitution(x: str, w: Term, sort: VarSort) -> Substitution:
    """The endomorphism of W(sort) sending x to w and fixing every other variable."""
    if x not in sort:
        raise SortError("variable %r not in sort %s" % (x, sort.name))
    return substitution(sort, sort, {x: w})


# --------------------------------------------------------------------------
# term enumeration

def terms_up_to_depth(sort: VarSort, spec: VarietySpec, max_depth: int) -> list:
    """All terms over ``sort`` of depth <= max_depth, shallow ones first.

    Nullary operations count as depth 1.  The list grows very quickly with
    the depth; callers deduplicate by evaluation when they can.
    """
    levels = [[Var(x) for x in sort.vars]]
    seen = list(levels[0])
    for d in range(1, max_depth + 1):
        new = []
        pool = seen[:]
        for op, k in sorted(spec.ops):
            if k == 0:
                if d == 1:
                    new.append(App(op, ()))
                continue
            for args in _products(pool, k):
                if max(depth(a) for a in args) == d - 1:
                    new.append(App(op, tuple(args)))
        levels.append(new)
        seen.extend(new)
    return seen


def _products(pool: Sequence, k: int) -> Iterator[tuple]:
    from itertools import product
    return product(pool, repeat=k)


# --------------------------------------------------------------------------
# parsing

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_TOKEN = re.compile(r"\s*(?:(==|->)|([A-Za-z_][A-Za-z0-9_']*)|(.))")


@dataclass
class Tokens:
    text: str
    toks: list = field(default_factory=list)
    pos: int = 0

    @classmethod
    def of(cls, text: str) -> "Tokens":
        toks = []
        i = 0
        text = text.rstrip()
        while i < len(text):
            m = _TOKEN.match(text, i)
            if m is None:
                break
            sym, ident, ch = m.groups()
            if ident is not None:
                toks.append(("id", ident, m.start(2)))
            elif sym is not None:
                toks.append(("sym", sym, m.start(1)))
            elif ch is not None:
                if ch not in "(),~&|.[]:{}":
                    raise ParseError("unexpected character %r at %d in %r" % (ch, m.start(3), text))
                toks.append(("sym", ch, m.start(3)))
            i = m.end()
        return cls(text, toks)

    def peek(self, ahead: int = 0):
        i = self.pos + ahead
        return self.toks[i] if i < len(self.toks) else ("eof", "", len(self.text))

    def next(self):
        t = self.peek()
        self.pos += 1
        return t

    def at(self, value: str, ahead: int = 0) -> bool:
        kind, v, _ = self.peek(ahead)
        return kind == "sym" and v == value

    def expect(self, value: str):
        kind, v, p = self.next()
        if kind != "sym" or v != value:
            raise ParseError("expected %r at %d in %r, found %r" % (value, p, self.text, v or "end"))

    def ident(self) -> str:
        kind, v, p = self.next()
        if kind != "id":
            raise ParseError("expected identifier at %d in %r, found %r" % (p, self.text, v or "end"))
        return v

    def done(self) -> bool:
        return self.pos >= len(self.toks)

    def fail(self, what: str):
        kind, v, p = self.peek()
        raise ParseError("%s at %d in %r, found %r" % (what, p, self.text, v or "end"))


def read_raw_term(tk: Tokens) -> Term:
    """Read a term without resolving bare identifiers (they come back as Var)."""
    name = tk.ident()
    if tk.at("("):
        tk.next()
        args = []
        if not tk.at(")"):
            args.append(read_raw_term(tk))
            while tk.at(","):
                tk.next()
                args.append(read_raw_term(tk))
        tk.expect(")")
        return App(name, tuple(args))
    return Var(name)


def resolve_term(w: Term, sort: VarSort, spec: VarietySpec) -> Term:
    """Turn bare nullary-operation names into applications and check the result."""
    if isinstance(w, Var):
        is_var = w.name in sort
        is_const = spec.arities.get(w.name) == 0
        if is_var and is_const:
            raise ParseError("%r is both a variable and a constant; write %s()" % (w.name, w.name))
        if is_const:
            return App(w.name, ())
        if not is_var:
            if w.name in spec.arities:
                raise SignatureError("operation %s used without arguments" % w.name)
            raise SortError("variable %r not in sort %s" % (w.name, sort.name))
        return w
    if w.op not in spec.arities:
        raise SignatureError("unknown operation symbol %r" % w.op)
    return check_term(App(w.op, tuple(resolve_term(a, sort, spec) for a in w.args)), sort, spec)


def parse_term(text: str, sort: VarSort, spec: VarietySpec) -> Term:
    tk = Tokens.of(text)
    w = read_raw_term(tk)
    if not tk.done():
        tk.fail("trailing input")
    return resolve_term(w, sort, spec)


def print_term(w: Term) -> str:
    return str(w)
