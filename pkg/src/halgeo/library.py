"""Small named algebras used in examples and tests.

``get("Z4")`` returns a cyclic group, ``get("S2")`` the two element
meet-semilattice, and so on; ``names()`` lists everything available.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

from .algebra import FiniteAlgebra
from .syntax import App, HalgeoError, Var, VarietySpec, make_sort

_XYZ = make_sort("x y z")
_x, _y, _z = Var("x"), Var("y"), Var("z")


def _mul(a, b):
    return App("mul", (a, b))


def _meet(a, b):
    return App("meet", (a, b))


SEMILATTICES = VarietySpec(
    (("meet", 2),),
    identities=(
        (_meet(_x, _x), _x),
        (_meet(_x, _y), _meet(_y, _x)),
        (_meet(_x, _meet(_y, _z)), _meet(_meet(_x, _y), _z)),
    ),
    identity_sort=_XYZ,
)

GROUPS = VarietySpec(
    (("e", 0), ("inv", 1), ("mul", 2)),
    identities=(
        (_mul(_x, _mul(_y, _z)), _mul(_mul(_x, _y), _z)),
        (_mul(App("e"), _x), _x),
        (_mul(_x, App("e")), _x),
        (_mul(App("inv", (_x,)), _x), App("e")),
    ),
    identity_sort=_XYZ,
)

ABELIAN_GROUPS = GROUPS.with_identities(_XYZ, GROUPS.identities + ((_mul(_x, _y), _mul(_y, _x)),))

MAGMAS = VarietySpec((("mul", 2),))
UNARY = VarietySpec((("f", 1),))
PURE_SETS = VarietySpec(())


def semilattice(name, elements, meet) -> FiniteAlgebra:
    n = len(elements)
    t = np.array([[meet(a, b) for b in range(n)] for a in range(n)])
    return FiniteAlgebra(name, elements, {"meet": t}, spec=SEMILATTICES)


def chain(n: int, name: str | None = None) -> FiniteAlgebra:
    return semilattice(name or "C%d" % n, [str(i) for i in range(n)], min)


def cyclic_group(n: int, name: str | None = None) -> FiniteAlgebra:
    if n == 2:
        elements = ["e", "a"]
    else:
        elements = (["e", "g"] + ["g%d" % i for i in range(2, n)])[:n]
    mul = np.array([[(a + b) % n for b in range(n)] for a in range(n)])
    inv = np.array([(-a) % n for a in range(n)])
    return FiniteAlgebra(name or "Z%d" % n, elements,
                         {"mul": mul, "inv": inv, "e": np.array(0)}, spec=ABELIAN_GROUPS)


def klein_group() -> FiniteAlgebra:
    mul = np.array([[a ^ b for b in range(4)] for a in range(4)])
    return FiniteAlgebra("V4", ["e", "a", "b", "c"],
                         {"mul": mul, "inv": np.arange(4), "e": np.array(0)}, spec=ABELIAN_GROUPS)


def unary(name, elements, f) -> FiniteAlgebra:
    return FiniteAlgebra(name, elements, {"f": np.array(list(f))}, spec=UNARY)


def pure_set(n: int) -> FiniteAlgebra:
    return FiniteAlgebra("Set%d" % n, [str(i) for i in range(n)], {}, spec=PURE_SETS)


def _diamond():
    # 0 < a, b < 1
    order = {(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)}
    le = lambda p, q: p == q or (p, q) in order

    def meet(p, q):
        lower = [r for r in range(4) if le(r, p) and le(r, q)]
        return max(lower, key=lambda r: sum(le(s, r) for s in range(4)))
    return semilattice("M2", ["0", "a", "b", "1"], meet)


def _vee():
    # 0 below two incomparable atoms
    return semilattice("V3", ["0", "a", "b"], lambda p, q: p if p == q else 0)


def _claw():
    return semilattice("K4", ["0", "a", "b", "c"], lambda p, q: p if p == q else 0)


def _left_zero(n=2):
    t = np.array([[a for b in range(n)] for a in range(n)])
    return FiniteAlgebra("L%d" % n, [str(i) for i in range(n)], {"mul": t}, spec=MAGMAS)


_BUILDERS = {
    "S1": lambda: chain(1, "S1"),
    "S2": lambda: chain(2, "S2"),
    "C3": lambda: chain(3),
    "C4": lambda: chain(4),
    "V3": _vee,
    "K4": _claw,
    "M2": _diamond,
    "Z1": lambda: cyclic_group(1),
    "Z2": lambda: cyclic_group(2),
    "Z3": lambda: cyclic_group(3),
    "Z4": lambda: cyclic_group(4),
    "Z6": lambda: cyclic_group(6),
    "V4": klein_group,
    "NEG2": lambda: unary("NEG2", ["0", "1"], [1, 0]),
    "CONST2": lambda: unary("CONST2", ["0", "1"], [0, 0]),
    "ID2": lambda: unary("ID2", ["0", "1"], [0, 1]),
    "CYC3": lambda: unary("CYC3", ["0", "1", "2"], [1, 2, 0]),
    "PATH3": lambda: unary("PATH3", ["0", "1", "2"], [1, 2, 2]),
    "FIX3": lambda: unary("FIX3", ["0", "1", "2"], [0, 0, 2]),
    "CYC4": lambda: unary("CYC4", ["0", "1", "2", "3"], [1, 2, 3, 0]),
    "SWAP4": lambda: unary("SWAP4", ["0", "1", "2", "3"], [1, 0, 3, 2]),
    "Set2": lambda: pure_set(2),
    "Set3": lambda: pure_set(3),
    "L2": _left_zero,
    "S2xS2": lambda: get("S2").product(get("S2")),
    "Z2xZ2": lambda: get("Z2").product(get("Z2")),
    "Z2xZ3": lambda: get("Z2").product(get("Z3")),
    "V4mul": lambda: klein_group().reduct(["mul"], "V4mul"),
}


def names() -> list:
    return sorted(_BUILDERS)


@lru_cache(maxsize=None)
def get(name: str) -> FiniteAlgebra:
    try:
        build = _BUILDERS[name]
    except KeyError:
        raise HalgeoError("no library algebra named %r (have %s)" % (name, ", ".join(names()))) from None
    return build()


def small_library(max_size: int = 4) -> list:
    """Library algebras with at most ``max_size`` elements, in name order."""
    return [get(n) for n in names() if get(n).size <= max_size]


def all_tables(spec_ops, n: int):
    """Every algebra structure on n elements for a signature (tiny cases only)."""
    ops = sorted(spec_ops)
    spaces = []
    for op, k in ops:
        cells = list(product(range(n), repeat=k))
        spaces.append([(op, k, cells, vals) for vals in product(range(n), repeat=len(cells))])
    for choice in product(*spaces):
        tables = {}
        for op, k, cells, vals in choice:
            t = np.zeros((n,) * k, dtype=np.int64)
            for c, v in zip(cells, vals):
                t[c] = v
            tables[op] = t
        yield tables
