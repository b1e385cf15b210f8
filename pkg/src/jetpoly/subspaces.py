"""Brute-force subspace solver: dimensions and bases via exact kernels.

A homogeneous jet polynomial of degree d in the variables x0..x(n-1)
admits a level-n partner exactly when its inversion expansion has no x0
power below -n.  Collecting, for every candidate monomial, the
coefficients of all such *forbidden* Laurent terms yields an exact linear
system whose kernel is the subspace of partner-admissible polynomials.
This module computes that kernel with fraction-preserving Gaussian
elimination and no floating point anywhere.

Two equivalent strategies are provided:

* ``method="direct"`` builds the one big system over all candidates, the
  most literal form of the brute force.
* ``method="graded"`` (the default) splits the candidates by derivative
  weight first.  This is sound because membership is decided weight by
  weight: the partner construction preserves weight termwise, so the
  subspace is the direct sum of its weight slices.  Within a slice two
  further exact savings apply, proved in ``_slice_dimension``:

  - if the weight exceeds (n - d) * (n - 1), a triangular subsystem of
    the constraints already forces the zero space, with no expansion work;
  - otherwise the slice is small enough to solve outright.

The two strategies are cross-checked against each other in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb, gcd
from typing import Iterable, Optional, Sequence

from .algebra import JetMonomial, JetPolynomial
from .calculus import derivative_part_expansion, reciprocal_derivative

#: Refuse eliminations whose materialized candidate set exceeds this size.
MAX_CANDIDATES = 200_000


class SizeLimitError(Exception):
    """A query would materialize more candidates than the solver allows."""

    def __init__(self, count: int, limit: int = MAX_CANDIDATES):
        super().__init__(f"{count} candidate monomials exceed the limit of {limit}")
        self.count = count
        self.limit = limit


@dataclass(frozen=True)
class SubspaceQuery:
    """Parameters (n, d, optional weight level) of a subspace computation."""

    n: int
    d: int
    level: Optional[int] = None

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError("level bound n must be a nonnegative int")
        if not isinstance(self.d, int) or not 0 <= self.d <= self.n:
            raise ValueError(f"degree d must satisfy 0 <= d <= n, got {self.d}")
        if self.level is not None and (not isinstance(self.level, int) or self.level < 0):
            raise ValueError("weight level must be a nonnegative int when given")


@dataclass
class SubspaceReport:
    """Exact dimension and explicit basis answering a :class:`SubspaceQuery`."""

    query: SubspaceQuery
    dimension: int
    basis: list[JetPolynomial]
    candidate_count: int
    level_dimensions: Optional[dict[int, int]] = field(default=None)


def _iter_level_exponents(max_order: int, d: int, l: int):
    """Exponent dicts over orders 0..max_order with degree d and weight l."""
    if d == 0:
        if l == 0:
            yield {}
        return
    if max_order == 0:
        if l == 0:
            yield {0: d}
        return
    top = max_order
    # e copies of x_top leave weight l - top*e for lower orders, bounded by
    # (d - e) * (top - 1).
    for e in range(0, d + 1):
        rest = l - top * e
        if rest < 0:
            break
        if rest > (d - e) * (top - 1):
            continue
        for tail in _iter_level_exponents(top - 1, d - e, rest):
            if e:
                out = dict(tail)
                out[top] = e
                yield out
            else:
                yield tail


def candidate_monomials(n: int, d: int, level: Optional[int] = None) -> list[JetMonomial]:
    """All monomials of degree d in x0..x(n-1), optionally of weight ``level``.

    The bound on the top variable's exponent is not imposed here; the
    kernel computation must discover it on its own.
    """
    SubspaceQuery(n, d, level)
    if n == 0:
        mons = [JetMonomial()] if d == 0 and level in (None, 0) else []
    elif level is None:
        mons = [
            JetMonomial((r, combo.count(r)) for r in set(combo))
            for combo in combinations_with_replacement(range(n), d)
        ]
    else:
        mons = [JetMonomial(exps) for exps in _iter_level_exponents(n - 1, d, level)]
    mons.sort(key=lambda m: m.sort_key())
    return mons


@lru_cache(maxsize=None)
def _count_level(max_order: int, d: int, l: int) -> int:
    if d == 0:
        return 1 if l == 0 else 0
    if max_order == 0:
        return 1 if l == 0 else 0
    total = 0
    for e in range(0, d + 1):
        rest = l - max_order * e
        if rest < 0:
            break
        if rest > (d - e) * (max_order - 1):
            continue
        total += _count_level(max_order - 1, d - e, rest)
    return total


def count_candidate_monomials(n: int, d: int, level: Optional[int] = None) -> int:
    """Candidate count without materializing the monomials."""
    SubspaceQuery(n, d, level)
    if n == 0:
        return 1 if d == 0 and level in (None, 0) else 0
    if level is None:
        return comb(n + d - 1, d)
    return _count_level(n - 1, d, level)


@dataclass
class ConstraintMatrix:
    """Dense exact constraint matrix with its Laurent row keys."""

    candidates: list[JetMonomial]
    row_keys: list[tuple[JetMonomial, int]]
    rows: list[list[Fraction]]


def membership_constraints(candidates: Sequence[JetMonomial], n: int) -> ConstraintMatrix:
    """Rows indexed by the forbidden Laurent terms (x0 power below -n).

    Entry (t, j) is the coefficient of term t in the inversion expansion
    of candidate j; the kernel of the matrix consists of the coefficient
    vectors of partner-admissible combinations.
    """
    cache: dict = {}
    columns: dict[tuple[JetMonomial, int], dict[int, int]] = {}
    for j, mono in enumerate(candidates):
        e0, deriv = mono.split_order_zero()
        for (numer, power), coeff in derivative_part_expansion(deriv, cache).terms.items():
            shifted = power - e0
            if shifted < -n:
                columns.setdefault((numer, shifted), {})[j] = coeff
    row_keys = sorted(columns, key=lambda key: (key[1], key[0].sort_key()))
    rows = [
        [Fraction(columns[key].get(j, 0)) for j in range(len(candidates))]
        for key in row_keys
    ]
    return ConstraintMatrix(list(candidates), row_keys, rows)


# The solver's inner loops run over *packed* numerator monomials: the
# exponent of order r sits in bit field r-1 of an integer, 8 bits per
# field, so multiplying two numerators is a single integer addition.
# Exponents stay below 256 for every query the guardrail admits.
_PACK_BITS = 8


@lru_cache(maxsize=None)
def _packed_variable_expansion(order: int):
    """Expansion of x(order) as {x0 power: ((packed numerator, coeff), ...)}."""
    buckets: dict[int, list] = {}
    for (numer, power), coeff in reciprocal_derivative(order).terms.items():
        packed = 0
        for r, e in numer.exps:
            packed |= e << (_PACK_BITS * (r - 1))
        buckets.setdefault(power, []).append((packed, coeff))
    return {p: tuple(v) for p, v in buckets.items()}


def _packed_expansion(counts, cache):
    """Expansion of a derivative part (counts[0] == 0) bucketed by x0 power.

    Returns {x0 power: {packed numerator: integer coefficient}}.  Same
    divisor-chain recursion as
    :func:`jetpoly.calculus.derivative_part_expansion`, shared through
    ``cache`` across all candidates of a query.
    """
    found = cache.get(counts)
    if found is not None:
        return found
    top = 0
    for r in range(len(counts) - 1, 0, -1):
        if counts[r]:
            top = r
            break
    if not top:
        result = {0: {0: 1}}
    else:
        rest = list(counts)
        rest[top] -= 1
        base = _packed_expansion(tuple(rest), cache)
        var = _packed_variable_expansion(top)
        result = {}
        for p1, numers in base.items():
            for p2, terms in var.items():
                bucket = result.setdefault(p1 + p2, {})
                bget = bucket.get
                for n1, v1 in numers.items():
                    for n2, v2 in terms:
                        key = n1 + n2
                        new = bget(key, 0) + v1 * v2
                        if new:
                            bucket[key] = new
                        else:
                            del bucket[key]
    cache[counts] = result
    return result


def _int_row(row: dict) -> dict[int, int]:
    """Clear denominators and divide out the content; canonical sign."""
    scale = 1
    has_fraction = False
    for v in row.values():
        if v.__class__ is Fraction:
            has_fraction = True
            den = v.denominator
            scale = scale // gcd(scale, den) * den
    if has_fraction:
        r = {c: int(v * scale) for c, v in row.items() if v}
    else:
        r = {c: v for c, v in row.items() if v}
    if not r:
        return r
    g = 0
    for v in r.values():
        g = gcd(g, v)
    if r[min(r)] < 0:
        g = -g
    if g != 1:
        r = {c: v // g for c, v in r.items()}
    return r


def _sparse_kernel(rows: Iterable[dict], ncols: int) -> list[dict[int, Fraction]]:
    """Exact kernel basis of a sparse row system, canonical regardless of row order.

    The streaming phase is fraction-free: rows are scaled to integers and
    eliminated by cross-multiplication, dividing out the content every few
    steps to bound growth.  Pivoting takes the leftmost nonzero column of
    each incoming row.  The surviving pivot rows are back-substituted to
    reduced echelon form at the end, so the free-column parametrization is
    the canonical kernel basis whatever the row order was.
    """
    unique: dict[tuple, dict[int, int]] = {}
    for row in rows:
        r = _int_row(row)
        if r:
            unique.setdefault(tuple(sorted(r.items())), r)
    # Sparse rows first: their pivots stay short, which keeps the fill-in
    # of every later reduction small.  The kernel itself is order-free.
    ordered = sorted(unique.items(), key=lambda kv: (len(kv[1]), kv[0]))
    # pivot column -> (pivot value, remainder of the row without that column)
    pivots: dict[int, tuple[int, dict[int, int]]] = {}
    for _, r in ordered:
        steps = 0
        while r:
            lead = min(r)
            piv = pivots.get(lead)
            if piv is None:
                g = 0
                for v in r.values():
                    g = gcd(g, v)
                pv = r.pop(lead)
                if pv < 0:
                    g = -g
                if g != 1:
                    pv //= g
                    r = {c: v // g for c, v in r.items()}
                pivots[lead] = (pv, r)
                break
            pv, prest = piv
            f = r.pop(lead)
            g = gcd(f, pv)
            mr = pv // g
            mf = f // g
            if mr != 1:
                for c in r:
                    r[c] *= mr
            rget = r.get
            for c, v in prest.items():
                nv = rget(c, 0) - mf * v
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
            steps += 1
            if steps % 16 == 0 and r:
                g = 0
                for v in r.values():
                    g = gcd(g, v)
                if g > 1:
                    r = {c: v // g for c, v in r.items()}
        if len(pivots) == ncols:
            return []
    # Back-substitute to reduced echelon form over Fractions; this phase
    # touches only the rank-many pivot rows and is cheap.
    reduced: dict[int, dict[int, Fraction]] = {}
    for col in sorted(pivots, reverse=True):
        pv, rest = pivots[col]
        frow = {c: Fraction(v, pv) for c, v in rest.items()}
        for pc in [c for c in frow if c in reduced]:
            f = frow.pop(pc)
            if not f:
                continue
            for c, v in reduced[pc].items():
                nv = frow.get(c, 0) - f * v
                if nv:
                    frow[c] = nv
                else:
                    frow.pop(c, None)
        reduced[col] = frow
    basis = []
    for free_col in range(ncols):
        if free_col in reduced:
            continue
        vec: dict[int, Fraction] = {free_col: Fraction(1)}
        for pcol, prow in reduced.items():
            v = prow.get(free_col)
            if v:
                vec[pcol] = -v
        lead_val = vec[min(vec)]
        if lead_val != 1:
            vec = {c: v / lead_val for c, v in vec.items()}
        basis.append(vec)
    return basis


def kernel_basis(matrix, ncols: Optional[int] = None) -> list[list[Fraction]]:
    """Dense kernel basis of a :class:`ConstraintMatrix` or list-of-rows matrix."""
    if isinstance(matrix, ConstraintMatrix):
        rows = matrix.rows
        ncols = len(matrix.candidates)
    else:
        rows = [list(row) for row in matrix]
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for an empty matrix")
            ncols = len(rows[0])
    sparse_rows = ({j: v for j, v in enumerate(row) if v} for row in rows)
    vectors = _sparse_kernel(sparse_rows, ncols)
    return [[vec.get(j, Fraction(0)) for j in range(ncols)] for vec in vectors]


def rank(rows: Iterable[dict], ncols: int) -> int:
    """Exact rank of a sparse row system (helper for span comparisons)."""
    return ncols - len(_sparse_kernel(rows, ncols))


def _vectors_to_polynomials(vectors, candidates) -> list[JetPolynomial]:
    out = []
    for vec in vectors:
        terms = {candidates[j]: coeff for j, coeff in vec.items() if coeff}
        out.append(JetPolynomial(terms))
    return out


def _counts_sort_key(counts):
    degree = sum(counts)
    weight = sum(r * c for r, c in enumerate(counts))
    tail = tuple((-r, -counts[r]) for r in range(len(counts) - 1, -1, -1) if counts[r])
    return (degree, weight, tail)


def _counts_to_monomial(counts) -> JetMonomial:
    return JetMonomial((r, c) for r, c in enumerate(counts) if c)


def _slice_dimension(n: int, d: int, l: int, cache: dict):
    """Dimension and basis of the weight-l slice of the (n, d) subspace."""
    count = count_candidate_monomials(n, d, l)
    if count == 0:
        return 0, [], count
    if l > (n - d) * (n - 1):
        # Order the slice candidates by ascending x0 exponent e0 and look
        # at each candidate's shallowest expansion term: substituting the
        # single-part expansion of every derivative factor reproduces the
        # candidate's own derivative part over x0 power -(2d - e0), with
        # coefficient +-1.  That term appears in no other candidate of the
        # same e0, and in candidates of larger e0 only.  Here every
        # candidate has e0 < 2d - n, so all these terms are forbidden and
        # the resulting square subsystem is triangular with unit diagonal:
        # the kernel is zero without expanding anything.
        return 0, [], count
    if count > MAX_CANDIDATES:
        raise SizeLimitError(count)
    # Exponents must fit the packed bit fields of the expansion engine.
    assert d * max(n - 1, 1) < (1 << _PACK_BITS)
    width = max(n, 1)
    candidates = sorted(
        (
            tuple(exps.get(r, 0) for r in range(width))
            for exps in _iter_level_exponents(n - 1, d, l)
        ),
        key=_counts_sort_key,
    )
    zeros = (0,) * width
    # rows, bucketed by x0 power: {power: {packed numerator: {column: coeff}}}
    columns: dict[int, dict[int, dict[int, int]]] = {}
    for j, counts in enumerate(candidates):
        e0 = counts[0]
        deriv = zeros[:1] + counts[1:] if e0 else counts
        if deriv == zeros:
            continue  # pure x0 power, expansion never dips below -n
        top = max(r for r in range(width) if deriv[r])
        rest = list(deriv)
        rest[top] -= 1
        base = _packed_expansion(tuple(rest), cache)
        var = _packed_variable_expansion(top)
        # Stream the candidate's own expansion straight into the rows; the
        # top-level product is used once, so caching it would only cost
        # memory.  The forbidden-power test hoists out of the inner loops.
        for p1, numers in base.items():
            for p2, terms in var.items():
                power = p1 + p2 - e0
                if power >= -n:
                    continue
                bucket = columns.setdefault(power, {})
                bget = bucket.get
                for n1, v1 in numers.items():
                    for n2, v2 in terms:
                        key = n1 + n2
                        cell = bget(key)
                        if cell is None:
                            bucket[key] = {j: v1 * v2}
                        else:
                            new = cell.get(j, 0) + v1 * v2
                            if new:
                                cell[j] = new
                            else:
                                del cell[j]
    rows = (row for bucket in columns.values() for row in bucket.values())
    vectors = _sparse_kernel(rows, len(candidates))
    mono_candidates = [_counts_to_monomial(c) for c in candidates]
    return len(vectors), _vectors_to_polynomials(vectors, mono_candidates), count


def solve_subspace(
    n: int,
    d: int,
    level: Optional[int] = None,
    method: str = "graded",
) -> SubspaceReport:
    """Dimension and explicit basis of the degree-d, level-n subspace.

    With ``level`` given, only the slice of that derivative weight is
    computed.  ``method="graded"`` (default) works weight by weight and is
    the only way large queries fit the candidate guardrail; the guardrail
    is applied to each elimination actually materialized.
    """
    query = SubspaceQuery(n, d, level)
    if method == "direct":
        return _solve_direct(query)
    if method != "graded":
        raise ValueError(f"unknown method {method!r}")
    cache: dict = {}
    max_level = d * (n - 1) if n > 0 else 0
    levels = [level] if level is not None else list(range(max_level + 1))
    dimension = 0
    basis: list[JetPolynomial] = []
    candidate_count = 0
    level_dimensions: dict[int, int] = {}
    for l in levels:
        dim, vectors, count = _slice_dimension(n, d, l, cache)
        dimension += dim
        basis.extend(vectors)
        candidate_count += count
        level_dimensions[l] = dim
    return SubspaceReport(query, dimension, basis, candidate_count, level_dimensions)


def _solve_direct(query: SubspaceQuery) -> SubspaceReport:
    count = count_candidate_monomials(query.n, query.d, query.level)
    if count > MAX_CANDIDATES:
        raise SizeLimitError(count)
    candidates = candidate_monomials(query.n, query.d, query.level)
    matrix = membership_constraints(candidates, query.n)
    sparse_rows = ({j: v for j, v in enumerate(row) if v} for row in matrix.rows)
    vectors = _sparse_kernel(sparse_rows, len(candidates))
    basis = _vectors_to_polynomials(vectors, candidates)
    return SubspaceReport(query, len(basis), basis, count, None)
