"""Exact computations with polynomial identities of nonassociative algebras.

Identities in degree 3 with implication certificates, operad component
dimensions, Koszul duals of binary quadratic operads, the generating-series
Koszulity test, and window checks on concrete algebras over a Z-indexed basis.
"""

__version__ = "0.1.0"

from .exact import Rational, SparseRow, Subspace, express, member, rref, subspace_equal
from .identities import Certificate, builtin, equiv3, implies3, orbit_span, span_of
from .magma import (MLPoly, apply_permutation, enumerate_monomials, format_poly, parse_poly,
                    substitute, var)
from .models import (BiAlgebra, SpanAlgebra, SpanElement, Verdict, check_axioms, check_identity,
                     depolarize, localize, make_aS, make_derivation_algebra, make_witt_np,
                     polarize)
from .operad import (RelationSet, consequence_space, gen_series, koszul_dual, koszul_test,
                     koszulity_residual, named_relation_set, normal_form, operad_dims,
                     relation_set)
from .series import PowerSeries, compose_series

__all__ = [
    "BiAlgebra", "Certificate", "MLPoly", "PowerSeries", "Rational", "RelationSet",
    "SpanAlgebra", "SpanElement", "SparseRow", "Subspace", "Verdict", "apply_permutation",
    "builtin", "check_axioms", "check_identity", "compose_series", "consequence_space",
    "depolarize", "enumerate_monomials", "equiv3", "express", "format_poly", "gen_series",
    "implies3", "koszul_dual", "koszul_test", "koszulity_residual", "localize", "make_aS",
    "make_derivation_algebra", "make_witt_np", "member", "named_relation_set", "normal_form",
    "operad_dims", "orbit_span", "parse_poly", "polarize", "relation_set", "rref", "span_of",
    "subspace_equal", "substitute", "var",
]
