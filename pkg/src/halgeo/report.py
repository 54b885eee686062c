"""Rendering of results for people (``text``) and for harnesses (``machine``).

Machine output is ``key=value`` lines in a fixed key order, always ending
with a newline.  Nothing here depends on dict ordering of unsorted input
or on object identity, so equal inputs give byte-identical output.
"""
from __future__ import annotations

from .algebra import FiniteAlgebra, Point
from .pointset import PointSet

FORMATS = ("text", "machine")


def _check(fmt):
    if fmt not in FORMATS:
        raise ValueError("unknown format %r" % fmt)


def machine(pairs) -> str:
    return "".join("%s=%s\n" % (k, v) for k, v in pairs)


def _bool(b) -> str:
    return "true" if b else "false"


def point_plain(p: Point) -> str:
    """x=g, y=e (no parentheses), as used inside one-line verdicts."""
    el = p.algebra.elements
    return ", ".join("%s=%s" % (x, el[v]) for x, v in zip(p.sort.vars, p.values))


def render_pointset(A: PointSet, fmt: str = "text") -> str:
    _check(fmt)
    if fmt == "machine":
        return machine([("points", len(A)), ("mask", A.hex())])
    return "%s\nmask: %s\n" % (A.render(), A.hex())


def render_bool(key: str, value: bool, fmt: str = "text") -> str:
    _check(fmt)
    if fmt == "machine":
        return machine([(key, _bool(value))])
    return "%s: %s\n" % (key.replace("_", " "), _bool(value))


def render_partition(P, fmt: str = "text") -> str:
    _check(fmt)
    classes = P.classes()
    if fmt == "machine":
        pairs = [("classes", len(classes))]
        pairs += [("class%d" % lab, ",".join(str(i) for i in members)) for lab, members in classes]
        return machine(pairs)
    head = "%s over %s: %d %s" % (P.algebra.name, P.sort.name, len(classes),
                                 "orbits" if P.kind == "orbit" else "classes")
    if P.rank is not None:
        head += " at rank %d" % P.rank
    return head + "\n" + P.render() + "\n"


def render_automorphisms(H: FiniteAlgebra, auts, fmt: str = "text") -> str:
    _check(fmt)
    if fmt == "machine":
        pairs = [("automorphisms", len(auts))]
        pairs += [("aut%d" % i, ",".join(str(v) for v in a)) for i, a in enumerate(auts)]
        return machine(pairs)
    lines = ["%s: %d automorphisms" % (H.name, len(auts))]
    for a in auts:
        lines.append("  " + ", ".join("%s->%s" % (H.elements[i], H.elements[v])
                                      for i, v in enumerate(a)))
    return "\n".join(lines) + "\n"


def render_isomorphism(H1: FiniteAlgebra, H2: FiniteAlgebra, iso, fmt: str = "text") -> str:
    _check(fmt)
    if fmt == "machine":
        pairs = [("verdict", "ISOMORPHIC" if iso is not None else "NOT ISOMORPHIC")]
        if iso is not None:
            pairs.append(("map", ",".join(str(v) for v in iso)))
        return machine(pairs)
    if iso is None:
        return "NOT ISOMORPHIC\n"
    return "ISOMORPHIC; %s\n" % ", ".join("%s->%s" % (H1.elements[i], H2.elements[v])
                                          for i, v in enumerate(iso))


def render_axioms(rep, fmt: str = "text") -> str:
    _check(fmt)
    if fmt == "machine":
        from .axioms import AXIOMS
        pairs = [("axiom%s" % a, "%d/%d" % (rep.passed[a], rep.total[a])) for a in AXIOMS]
        pairs.append(("ok", _bool(rep.ok)))
        return machine(pairs)
    return rep.summary() + "\n"


def render_isotypy(res, fmt: str = "text") -> str:
    _check(fmt)
    if fmt == "machine":
        pairs = [("verdict", res.verdict), ("max_vars", res.max_vars), ("rank", res.rank),
                 ("depth", res.depth)]
        if res.witness is not None:
            pairs += [("witness", point_plain(res.witness)),
                      ("witness_algebra", res.witness_algebra),
                      ("separating_rank", res.separating_rank)]
        pairs.append(("isomorphic", _bool(res.isomorphism is not None)))
        return machine(pairs)
    if res.witness is None:
        return "%s up to %d variables (rank %d)\n" % (res.verdict, res.max_vars, res.rank)
    return "%s; witness %s; separating rank %d\n" % (res.verdict, point_plain(res.witness),
                                                     res.separating_rank)


def render_homogeneity(res, fmt: str = "text") -> str:
    _check(fmt)
    if fmt == "machine":
        pairs = [("verdict", res.verdict), ("max_vars", res.max_vars)]
        if res.rank is not None:
            pairs.append(("rank", res.rank))
        pairs += [("orbits%d" % m, c) for m, c in sorted(res.orbit_counts.items())]
        if res.counterexample is not None:
            mu, nu = res.counterexample
            pairs += [("point1", point_plain(mu)), ("point2", point_plain(nu))]
        return machine(pairs)
    if res.counterexample is None:
        return "%s up to %d variables\n" % (res.verdict, res.max_vars)
    mu, nu = res.counterexample
    return "%s; counterexample %s and %s\n" % (res.verdict, mu.render(), nu.render())


def render_verdict(v, fmt: str = "text") -> str:
    """AG/LG-equivalence verdicts."""
    _check(fmt)
    detail_keys = sorted(k for k in v.details if k not in ("point",))
    if fmt == "machine":
        pairs = [("verdict", v.verdict)]
        if v.witness is not None:
            pairs.append(("witness", v.witness))
            if hasattr(v.witness, "holds_in"):
                pairs += [("holds_in", v.witness.holds_in), ("fails_in", v.witness.fails_in)]
        if "point" in v.details:
            pairs.append(("point", point_plain(v.details["point"])))
        pairs += [(k, v.details[k]) for k in detail_keys]
        return machine(pairs)
    line = v.verdict
    if v.witness is not None:
        line += "; witness %s" % v.witness
        if hasattr(v.witness, "holds_in"):
            line += "; holds in %s, fails in %s" % (v.witness.holds_in, v.witness.fails_in)
    extra = ", ".join("%s=%s" % (k, v.details[k]) for k in detail_keys)
    if extra:
        line += " (%s)" % extra
    return line + "\n"


def render_system(system, fmt: str = "text") -> str:
    _check(fmt)
    items = getattr(system, "formulas", None)
    if items is None:
        items = ["%s == %s" % (w, w2) for w, w2 in system.pairs]
    if fmt == "machine":
        pairs = [("size", len(items))] + [("item%d" % i, f) for i, f in enumerate(items)]
        return machine(pairs)
    name = "X" if system.sort.name.startswith("{") else system.sort.name
    return "sort %s %s\n" % (name, " ".join(system.sort.vars)) + \
        "".join("%s\n" % f for f in items)
