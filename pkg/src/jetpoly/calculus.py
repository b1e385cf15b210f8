"""Inversion calculus: jets of 1/x, compatibility partners, and derivation.

The expansion of the k-th derivative of ``1/x`` in the jets of ``x`` is
given by the classical Faa di Bruno formula:

    (1/x)^(k)  =  sum over compositions p of k of
                  c_p * x1**p1 * ... * xk**pk / x0**(|p| + 1),

where ``c_p = k! * (-1)**|p| / ((1!)**p1 * ... * (k!)**pk) * multinomial(p)``
is always an integer.  Substituting these expansions for every variable of
a jet polynomial (with x0 itself replaced by 1/x0) produces its *inversion
expansion*, a :class:`~jetpoly.algebra.LaurentExpansion`.

A nonzero polynomial ``rho`` admits a *partner at level n* when its
inversion expansion has no x0 power below ``-n``; the partner is then the
polynomial ``x0**n * expansion`` and the relation is involutive: taking
the partner twice returns ``rho``.  :class:`NotAMember` records the
evidence when no partner exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Optional, Union

from .algebra import Coeff, JetMonomial, JetPolynomial, LaurentExpansion
from .combinatorics import iter_compositions, multinomial, decomposition_sum

# Expansions of single variables are tiny and reused constantly; the cache
# is append-only, which is safe under concurrent readers.
_VARIABLE_CACHE: dict[int, LaurentExpansion] = {}


def reciprocal_derivative(k: int) -> LaurentExpansion:
    """Expansion of the k-th derivative of 1/x in the jets of x (k >= 1).

    Every term has numerator weight exactly k and x0 power in
    [-(k+1), -2]; the coefficients are integers.
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError("need k >= 1")
    cached = _VARIABLE_CACHE.get(k)
    if cached is not None:
        return cached
    fact_k = factorial(k)
    terms = {}
    for p in iter_compositions(k, k):
        w = sum(p)
        denom = 1
        for i, e in enumerate(p, 1):
            if e:
                denom *= factorial(i) ** e
        coeff = fact_k * multinomial(p)
        assert coeff % denom == 0
        coeff //= denom
        if w % 2:
            coeff = -coeff
        numer = JetMonomial((i, e) for i, e in enumerate(p, 1) if e)
        terms[(numer, -(w + 1))] = coeff
    expansion = LaurentExpansion._raw(terms)
    _VARIABLE_CACHE[k] = expansion
    return expansion


def reciprocal_product(k1: int, k2: int) -> LaurentExpansion:
    """Closed-form expansion of the product of the k1-th and k2-th derivatives of 1/x.

    Computed directly from the split counts of
    :func:`~jetpoly.combinatorics.decomposition_sum`, not by multiplying
    the two individual expansions; the two routes are compared in the
    test suite.
    """
    if not (isinstance(k1, int) and isinstance(k2, int) and k1 >= k2 >= 1):
        raise ValueError("need k1 >= k2 >= 1")
    scale = factorial(k1) * factorial(k2)
    terms = {}
    for mu in iter_compositions(k1, k1 + k2):
        count = decomposition_sum(mu, k1, k2)
        if not count:
            continue
        denom = 1
        for i, e in enumerate(mu, 1):
            if e:
                denom *= factorial(i) ** e
        w = sum(mu)
        coeff = Fraction(scale * count, denom)
        assert coeff.denominator == 1
        coeff = int(coeff)
        if w % 2:
            coeff = -coeff
        numer = JetMonomial((i, e) for i, e in enumerate(mu, 1) if e)
        terms[(numer, -(w + 2))] = coeff
    return LaurentExpansion._raw(terms)


def _variable_expansion(order: int) -> LaurentExpansion:
    if order == 0:
        return LaurentExpansion.x0_power(-1)
    return reciprocal_derivative(order)


def derivative_part_expansion(mono: JetMonomial, cache: dict) -> LaurentExpansion:
    """Expansion of a monomial free of x0, with memoized sub-products.

    The recursion strips one factor of the highest order at a time, so all
    monomials sharing a divisor chain reuse the same intermediate
    expansions through ``cache``.
    """
    found = cache.get(mono)
    if found is not None:
        return found
    if not mono:
        result = LaurentExpansion.x0_power(0)
    else:
        order, rest = mono.split_highest()
        result = derivative_part_expansion(rest, cache) * reciprocal_derivative(order)
    cache[mono] = result
    return result


def monomial_inversion(mono: JetMonomial, cache: Optional[dict] = None) -> LaurentExpansion:
    """Inversion expansion of a single jet monomial.

    Every numerator produced has weight equal to the weight of ``mono``,
    and degrees of numerators range over [degree - e0, weight].
    """
    if cache is None:
        cache = {}
    e0, deriv = mono.split_order_zero()
    expansion = derivative_part_expansion(deriv, cache)
    return expansion.shifted(-e0) if e0 else expansion


def inversion_expansion(poly: JetPolynomial, cache: Optional[dict] = None) -> LaurentExpansion:
    """Inversion expansion of a jet polynomial (termwise, exact).

    The zero polynomial maps to the empty expansion.
    """
    if cache is None:
        cache = {}
    acc: dict = {}
    for mono, coeff in poly.terms.items():
        for key, c in monomial_inversion(mono, cache).terms.items():
            new = acc.get(key, 0) + coeff * c
            if new:
                acc[key] = new
            else:
                acc.pop(key, None)
    return LaurentExpansion._raw(acc)


@dataclass(frozen=True)
class NotAMember:
    """Evidence that a polynomial admits no partner at the requested level.

    ``min_x0_power`` is the offending minimal x0 power of the inversion
    expansion (strictly below ``-level``), and the witness fields identify
    one term realizing a power below ``-level``.
    """

    level: int
    min_x0_power: int
    witness_numerator: JetMonomial
    witness_power: int
    witness_coefficient: Coeff

    def __bool__(self):
        return False


PartnerResult = Union[JetPolynomial, NotAMember]


def partner(poly: JetPolynomial, n: int, cache: Optional[dict] = None) -> PartnerResult:
    """The unique level-n partner of ``poly``, or :class:`NotAMember` evidence.

    For a member, the partner is ``x0**n`` times the inversion expansion,
    reinterpreted as a polynomial; the construction is involutive and
    pairs homogeneous degree d with degree n - d while preserving weight.
    """
    if not isinstance(n, int) or n < 0:
        raise ValueError("level must be a nonnegative int")
    if not poly:
        raise ValueError("the zero polynomial has no partner; handle it separately")
    expansion = inversion_expansion(poly, cache)
    low = expansion.min_x0_power
    if low >= -n:
        return expansion.shifted(n).to_polynomial()
    (numer, power), coeff = min(
        ((key, c) for key, c in expansion.terms.items() if key[1] < -n),
        key=lambda kv: (kv[0][1], kv[0][0].sort_key()),
    )
    return NotAMember(n, low, numer, power, coeff)


def is_member(poly: JetPolynomial, n: int, cache: Optional[dict] = None) -> bool:
    """True when ``poly`` admits a level-n partner."""
    return isinstance(partner(poly, n, cache), JetPolynomial)


def derive(poly: JetPolynomial) -> JetPolynomial:
    """Total derivative: raise one derivative order per term by the product rule.

    Each variable xr maps to x(r+1); on members of a level-n space of any
    homogeneous degree the result lands in the level-(n+1) space of the
    same degree.
    """
    acc: dict[JetMonomial, Coeff] = {}
    for mono, coeff in poly.terms.items():
        for r, e in mono.exps:
            bumped = dict(mono.exps)
            if e == 1:
                del bumped[r]
            else:
                bumped[r] = e - 1
            bumped[r + 1] = bumped.get(r + 1, 0) + 1
            new_mono = JetMonomial._raw(tuple(sorted(bumped.items())))
            new = acc.get(new_mono, 0) + coeff * e
            if new:
                acc[new_mono] = new
            else:
                acc.pop(new_mono, None)
    return JetPolynomial._raw(acc)
