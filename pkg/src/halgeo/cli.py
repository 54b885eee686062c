"""Command-line front end: ``halgeo <command> [flags]``.

Exit status: 0 on success, 1 when a verdict command answers in the negative
(NOT ISOTYPIC, NOT-EQUIVALENT, NOT ISOMORPHIC, NOT HOMOGENEOUS, a failed
axiom check), 2 on any error.  Error messages start with ``error: <kind>:``
where kind is one of command, usage, parse, sort, signature, cap, io, invalid.
"""
from __future__ import annotations

import argparse
import re
import sys

from . import library, report
from .algebra import (CapExceeded, FiniteAlgebra, Point, automorphism_group, isomorphism_search,
                      kernel_contains, load_algebra, present_closed_congruence)
from .axioms import verify_halmos_axioms
from .formula import Eq, lker_contains, parse_formula, theory_contains, val
from .geometry import (EquationSystem, FormulaSystem, NOT_EQUIVALENT, ag_equivalent,
                       algebraic_closure_contains, algebraic_closure_points, closed_congruence_contains,
                       definable_closure, lg_equivalent, load_system, logical_closure_contains,
                       logical_solve, solve_equations)
from .isotypy import (ALG_HOMOGENEOUS, HOMOGENEOUS, ISOTYPIC, algebraic_homogeneity_check,
                      homogeneity_check, isotypic_check, noetherian_reduce, orbit_partition,
                      type_partition)
from .pointset import PointSet
from .syntax import HalgeoError, ParseError, SignatureError, SortError, VarSort, make_sort

COMMANDS = ("eval", "theory", "solve-eq", "solve-log", "closure-alg", "closure-log",
            "definable-closure", "lker", "ker", "aut", "orbits", "types", "check-axioms",
            "ag-equiv", "lg-equiv", "isotypic", "homogeneous", "alg-homogeneous",
            "noetherian-reduce", "iso")

VARIETIES = {
    "semilattices": library.SEMILATTICES,
    "groups": library.GROUPS,
    "abelian-groups": library.ABELIAN_GROUPS,
    "magmas": library.MAGMAS,
    "unary": library.UNARY,
    "sets": library.PURE_SETS,
}


class UsageError(HalgeoError):
    pass


class UnknownCommand(UsageError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-a", "--algebra", help="algebra file, or lib:NAME for a built-in algebra")
    common.add_argument("--b", dest="b", help="second algebra (file or lib:NAME)")
    common.add_argument("--sort", help="space-separated variables or a sort name from --system")
    common.add_argument("--formula", help="a formula, or an atom (w == w2) for ker/closure-alg")
    common.add_argument("--system", help="equation or formula system file")
    common.add_argument("--points", help="points such as 'x=0 y=1; x=1 y=1'")
    common.add_argument("--rank", type=int)
    common.add_argument("--depth", type=int)
    common.add_argument("--max-vars", type=int, default=None)
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--exhaustive", action="store_true", help="check-axioms: exhaustive mode")
    common.add_argument("--variety", choices=sorted(VARIETIES),
                        help="check loaded algebras against these identities")
    common.add_argument("--format", choices=report.FORMATS, default="text")
    common.add_argument("--cap", type=int, help="maximum number of points in any space")
    parser = _Parser(prog="halgeo", description="Halmos algebras and logical geometry of finite algebras")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


# --------------------------------------------------------------------------
# workspace loading

class Workspace:
    def __init__(self, args):
        self.args = args
        self.registry = {}
        self.spec = VARIETIES.get(args.variety) if args.variety else None

    def algebra(self, ref: str | None, flag: str = "--algebra") -> FiniteAlgebra:
        if not ref:
            raise UsageError("%s is required" % flag)
        if ref.startswith("lib:"):
            name = ref[4:]
            if name not in library.names():
                raise UsageError("no built-in algebra %r" % name)
            H = library.get(name)
            spec = self.spec or H.spec
            return FiniteAlgebra(H.name, H.elements, H.tables, spec=spec, cap=self.args.cap)
        H = load_algebra(ref, spec=self.spec)
        if self.args.cap is not None:
            H.cap = self.args.cap
        return H

    def sort(self, H: FiniteAlgebra | None = None, default: VarSort | None = None) -> VarSort:
        text = self.args.sort
        if text is None:
            if default is not None:
                return default
            raise UsageError("--sort is required")
        words = text.replace(",", " ").split()
        if not words:
            raise UsageError("--sort is empty")
        if len(words) == 1 and words[0] in self.registry:
            return self.registry[words[0]]
        return make_sort(words)

    def system(self, H: FiniteAlgebra, kind: str):
        if not self.args.system:
            raise UsageError("--system is required")
        return load_system(self.args.system, H.spec, self.registry, kind)

    def formula(self, H: FiniteAlgebra, sort: VarSort):
        if not self.args.formula:
            raise UsageError("--formula is required")
        return parse_formula(self.args.formula, sort, H.spec, self.registry)

    def atom(self, H: FiniteAlgebra, sort: VarSort) -> Eq:
        f = self.formula(H, sort)
        if not isinstance(f, Eq):
            raise UsageError("expected an equality atom '(w == w2)'")
        return f

    def points(self, H: FiniteAlgebra, sort: VarSort) -> list:
        text = self.args.points or ""
        out = []
        for chunk in re.split(r"[;]|\)\s*,\s*\(", text):
            chunk = chunk.strip().strip("()").strip()
            if not chunk:
                continue
            assignment = {}
            for item in re.split(r"[\s,]+", chunk):
                if not item:
                    continue
                if "=" not in item:
                    raise ParseError("point component %r is not of the form var=element" % item)
                x, v = item.split("=", 1)
                if x not in sort:
                    raise SortError("variable %r not in sort %s" % (x, sort.name))
                assignment[x] = v
            out.append(Point.of(H, sort, assignment))
        return out

    def point(self, H, sort) -> Point:
        pts = self.points(H, sort)
        if len(pts) != 1:
            raise UsageError("--points must give exactly one point")
        return pts[0]

    def point_set(self, H: FiniteAlgebra, kind: str = "equation") -> PointSet:
        """A from --points (over --sort) or as the solution set of --system."""
        if self.args.points is not None:
            sort = self.sort(H)
            return PointSet.from_points(H, sort, self.points(H, sort))
        T = self.system(H, kind)
        if isinstance(T, EquationSystem):
            return solve_equations(H, T)
        return logical_solve(H, T)


# --------------------------------------------------------------------------
# commands (each returns (text, exit status))

def _verdict_status(ok: bool) -> int:
    return 0 if ok else 1


def cmd_eval(ws, fmt):
    H = ws.algebra(ws.args.algebra)
    sort = ws.sort(H)
    return report.render_pointset(val(H, ws.formula(H, sort)), fmt), 0


def cmd_theory(ws, fmt):
    H = ws.algebra(ws.args.algebra)
    sort = ws.sort(H)
    return report.render_bool("in_theory", theory_contains(H, ws.formula(H, sort)), fmt), 0


def cmd_solve_eq(ws, fmt):
    H = ws.algebra(ws.args.algebra)
    return report.render_pointset(solve_equations(H, ws.system(H, "equation")), fmt), 0


def cmd_solve_log(ws, fmt):
    H = ws.algebra(ws.args.algebra)
    return report.render_pointset(logical_solve(H, ws.system(H, "formula")), fmt), 0


def cmd_closure_alg(ws, fmt):
    H = ws.algebra(ws.args.algebra)
    if ws.args.formula and ws.args.points is None:
        T = ws.system(H, "equation")
        atom = ws.atom(H, T.sort)
        return report.render_bool("in_closure",
                                  algebraic_closure_contains(H, T, atom.left, atom.right), fmt), 0
    A = ws.point_set(H, "equation")
    if ws.args.formula:
        atom = ws.atom(H, A.sort)
        return report.render_bool("in_closure",
                                  closed_congruence_contains(H, A, atom.left, atom.right), fmt), 0
    return report.render_pointset(algebraic_closure_points(H, A), fmt), 0


def cmd_closure_log(ws, fmt):
    H = ws.algebra(ws.args.algebra)
    A = ws.point_set(H, "formula")
    if not ws.args.formula:
        return report.render_pointset(definable_closure(H, A), fmt), 0
    f = ws.formula(H, A.sort)
    return report.render_bool("in_closure", logical_closure_contains(H, A, f), fmt), 0


def cmd_definable_closure(ws, fmt):
    H = ws.algebra(ws.args.algebra)
    return report.render_pointset(definable_closure(H, ws.point_set(H, "formula")), fmt), 0


def cmd_lker(ws, fmt):
    H = ws.algebra(ws.args.algebra)
    sort = ws.sort(H)
    mu = ws.point(H, sort)
    return report.render_bool("in_lker", lker_contains(H, mu, ws.formula(H, sort)), fmt), 0


def cmd_ker(ws, fmt):
    H = ws.algebra(ws.args.algebra)
    sort = ws.sort(H)
    mu = ws.point(H, sort)
    if ws.args.formula:
        atom = ws.atom(H, sort)
        return report.render_bool("in_ker", kernel_contains(H, mu, atom.left, atom.right), fmt), 0
    pres = present_closed_congruence(H, [mu])
    image = pres.image
    names = sorted(H.elements[t[0]] for t in image)
    if fmt == "machine":
        return report.machine([("image_size", len(image)), ("image", ",".join(names))]), 0
    return "Ker%s: W(X)/Ker is the subalgebra {%s} (%d elements)\n" % (
        mu.render(), ", ".join(names), len(image)), 0


def cmd_aut(ws, fmt):
    H = ws.algebra(ws.args.algebra)
    return report.render_automorphisms(H, automorphism_group(H), fmt), 0


def cmd_orbits(ws, fmt):
    H = ws.algebra(ws.args.algebra)
    return report.render_partition(orbit_partition(H, ws.sort(H)), fmt), 0


def cmd_types(ws, fmt):
    H = ws.algebra(ws.args.algebra)
    sort = ws.sort(H)
    rank = ws.args.rank if ws.args.rank is not None else H.size + len(sort)
    depth = ws.args.depth if ws.args.depth is not None else 2
    return report.render_partition(type_partition(H, sort, rank, depth), fmt), 0


def cmd_check_axioms(ws, fmt):
    H = ws.algebra(ws.args.algebra)
    depth = ws.args.depth if ws.args.depth is not None else 2
    rep = verify_halmos_axioms(H, trials=ws.args.trials, seed=ws.args.seed, term_depth=depth,
                               exhaustive=ws.args.exhaustive)
    return report.render_axioms(rep, fmt), _verdict_status(rep.ok)


def _pair(ws):
    return ws.algebra(ws.args.algebra), ws.algebra(ws.args.b, "--b")


def cmd_ag_equiv(ws, fmt):
    H1, H2 = _pair(ws)
    depth = ws.args.depth if ws.args.depth is not None else 2
    max_vars = ws.args.max_vars if ws.args.max_vars is not None else 2
    v = ag_equivalent(H1, H2, depth=depth, max_vars=max_vars)
    return report.render_verdict(v, fmt), _verdict_status(v.verdict != NOT_EQUIVALENT)


def cmd_lg_equiv(ws, fmt):
    H1, H2 = _pair(ws)
    depth = ws.args.depth if ws.args.depth is not None else 2
    v = lg_equivalent(H1, H2, max_vars=ws.args.max_vars or 1, rank=ws.args.rank, depth=depth)
    return report.render_verdict(v, fmt), _verdict_status(v.verdict != NOT_EQUIVALENT)


def cmd_isotypic(ws, fmt):
    H1, H2 = _pair(ws)
    depth = ws.args.depth if ws.args.depth is not None else 2
    res = isotypic_check(H1, H2, max_vars=ws.args.max_vars or 1, rank=ws.args.rank, depth=depth)
    return report.render_isotypy(res, fmt), _verdict_status(res.verdict == ISOTYPIC)


def cmd_homogeneous(ws, fmt):
    H = ws.algebra(ws.args.algebra)
    depth = ws.args.depth if ws.args.depth is not None else 2
    res = homogeneity_check(H, max_vars=ws.args.max_vars or 1, rank=ws.args.rank, depth=depth)
    return report.render_homogeneity(res, fmt), _verdict_status(res.verdict == HOMOGENEOUS)


def cmd_alg_homogeneous(ws, fmt):
    H = ws.algebra(ws.args.algebra)
    res = algebraic_homogeneity_check(H, max_vars=ws.args.max_vars or 1)
    return report.render_homogeneity(res, fmt), _verdict_status(res.verdict == ALG_HOMOGENEOUS)


def cmd_noetherian_reduce(ws, fmt):
    H = ws.algebra(ws.args.algebra)
    T = ws.system(H, "formula")
    return report.render_system(noetherian_reduce(H, T), fmt), 0


def cmd_iso(ws, fmt):
    H1, H2 = _pair(ws)
    H1.check_compatible(H2)
    iso = isomorphism_search(H1, H2)
    return report.render_isomorphism(H1, H2, iso, fmt), _verdict_status(iso is not None)


HANDLERS = {name: globals()["cmd_" + name.replace("-", "_")] for name in COMMANDS}


# --------------------------------------------------------------------------

def _error_kind(e: Exception) -> str:
    if isinstance(e, UnknownCommand):
        return "command"
    if isinstance(e, UsageError):
        return "usage"
    if isinstance(e, CapExceeded):
        return "cap"
    if isinstance(e, ParseError):
        return "parse"
    if isinstance(e, SortError):
        return "sort"
    if isinstance(e, SignatureError):
        return "signature"
    if isinstance(e, OSError):
        return "io"
    return "invalid"


def run(argv) -> tuple:
    """Execute one command line; returns (stdout text, stderr text, exit status)."""
    argv = list(argv)
    try:
        if not argv or argv[0] in ("-h", "--help"):
            return build_parser().format_help(), "", 0 if argv else 2
        if argv[0] not in COMMANDS:
            raise UnknownCommand("unknown command %r (commands: %s)" % (argv[0], ", ".join(COMMANDS)))
        args = build_parser().parse_args(argv)
        if args.cap is not None and args.cap < 1:
            raise UsageError("--cap must be positive")
        out, status = HANDLERS[args.command](Workspace(args), args.format)
        return out, "", status
    except SystemExit as e:
        # argparse --help
        return "", "", int(e.code or 0)
    except (HalgeoError, OSError, ValueError, KeyError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        return "", "error: %s: %s\n" % (_error_kind(e), msg), 2


def main(argv=None) -> int:
    out, err, status = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return status


if __name__ == "__main__":
    sys.exit(main())
