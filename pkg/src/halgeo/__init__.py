"""Halmos algebras of finite algebras and their algebraic and logical geometry."""
from .syntax import (App, HalgeoError, ParseError, SignatureError, SortError, Substitution, Var,
                     VarietySpec, VarSort, apply_substitution, compose_substitutions, make_sort,
                     parse_term, substitution)
from .algebra import (CapExceeded, FiniteAlgebra, Point, automorphism_group, eval_term,
                      isomorphism_search, kernel_contains, load_algebra, parse_algebra,
                      present_closed_congruence, same_kernel)
from .pointset import PointSet, equality_set, exists_x, transport
from .axioms import verify_halmos_axioms
from .formula import (Formula, lker_contains, normalize, parse_formula, semantically_equal,
                      theory_contains, val)
from .geometry import (EquationSystem, FormulaSystem, ag_equivalent, algebraic_closure_contains,
                       closed_congruence_contains, definable_closure, lg_equivalent,
                       logical_closure_contains, logical_solve, solve_equations)
from .isotypy import (algebraic_homogeneity_check, homogeneity_check, isotypic_check,
                      noetherian_reduce, orbit_partition, same_type_cross, separating_sentence,
                      type_partition)
from . import library

__version__ = "0.1.0"
