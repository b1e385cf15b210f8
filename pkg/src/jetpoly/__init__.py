"""Exact computations with jet polynomials under inversion.

The package models polynomials in the derivative coordinates of a curve,
expands them on the jets of the reciprocal curve, decides when such a
polynomial pairs with a partner polynomial at a given level, and computes
dimensions and bases of the graded spaces of all such polynomials with
exact rational linear algebra.  A command-line front end
(``python -m jetpoly`` or the ``jetpoly`` script) exposes the same
operations with text, JSON and CSV reports.
"""

from .algebra import Coeff, JetMonomial, JetPolynomial, LaurentExpansion
from .calculus import (
    NotAMember,
    derive,
    inversion_expansion,
    is_member,
    monomial_inversion,
    partner,
    reciprocal_derivative,
    reciprocal_product,
)
from .combinatorics import (
    compositions,
    count_permutations_with_partial_sum,
    decomposition_sum,
    iter_compositions,
    iter_multiset_permutations,
    iter_permutations_with_partial_sum,
    multinomial,
    multiset_of,
    multiset_permutations,
    partial_sums,
    permutations_with_partial_sum,
    shift_split_permutation,
    weighted_sum,
)
from .identities import (
    DimensionProbe,
    IdentityReport,
    degree_two_basis,
    degree_two_level_dimension,
    extremal_degree_two_element,
    probe_dimensions,
    verify_degree_two_basis,
    verify_general_identity,
    verify_split_identity,
)
from .subspaces import (
    MAX_CANDIDATES,
    ConstraintMatrix,
    SizeLimitError,
    SubspaceQuery,
    SubspaceReport,
    candidate_monomials,
    count_candidate_monomials,
    kernel_basis,
    membership_constraints,
    solve_subspace,
)
from .textio import ParseError, format_laurent, format_polynomial, parse_polynomial

__version__ = "0.1.0"

__all__ = [
    "Coeff",
    "JetMonomial",
    "JetPolynomial",
    "LaurentExpansion",
    "NotAMember",
    "derive",
    "inversion_expansion",
    "is_member",
    "monomial_inversion",
    "partner",
    "reciprocal_derivative",
    "reciprocal_product",
    "compositions",
    "iter_compositions",
    "multinomial",
    "decomposition_sum",
    "multiset_of",
    "multiset_permutations",
    "iter_multiset_permutations",
    "partial_sums",
    "permutations_with_partial_sum",
    "iter_permutations_with_partial_sum",
    "count_permutations_with_partial_sum",
    "shift_split_permutation",
    "weighted_sum",
    "IdentityReport",
    "DimensionProbe",
    "degree_two_basis",
    "degree_two_level_dimension",
    "extremal_degree_two_element",
    "verify_split_identity",
    "verify_general_identity",
    "verify_degree_two_basis",
    "probe_dimensions",
    "MAX_CANDIDATES",
    "ConstraintMatrix",
    "SizeLimitError",
    "SubspaceQuery",
    "SubspaceReport",
    "candidate_monomials",
    "count_candidate_monomials",
    "kernel_basis",
    "membership_constraints",
    "solve_subspace",
    "ParseError",
    "parse_polynomial",
    "format_polynomial",
    "format_laurent",
]
