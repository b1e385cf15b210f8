"""Weighted compositions, multiset permutations and split-count identities.

A *weighted composition* of k with m slots is a tuple p = (p1, ..., pm) of
nonnegative integers with ``1*p1 + 2*p2 + ... + m*pm == k``; slot i counts
how many parts of size i occur, so these are partitions of k with parts
bounded by m, recorded by multiplicity.  Its weight ``|p|`` is ``sum(p)``,
the number of parts.

Every composition r induces the multiset {1 repeated r1 times, 2 repeated
r2 times, ...}; permutations of that multiset and their strictly
increasing partial sums drive the counting identities verified in
:mod:`jetpoly.identities`.

Compositions and permutations are plain tuples of ints.  Enumeration
orders are deterministic: compositions in colexicographic order of the
slot tuple, permutations in lexicographic order of the entry sequence.
"""

from __future__ import annotations

from math import factorial
from typing import Iterator, Sequence, Tuple

Composition = Tuple[int, ...]
Permutation = Tuple[int, ...]


def weighted_sum(parts: Sequence[int]) -> int:
    """The value ``1*p1 + 2*p2 + ...`` encoded by a composition tuple."""
    return sum(i * p for i, p in enumerate(parts, 1))


def is_composition(parts: Sequence[int], m: int, k: int) -> bool:
    """True when ``parts`` lies in the (m, k) composition space."""
    return (
        len(parts) == m
        and all(isinstance(p, int) and p >= 0 for p in parts)
        and weighted_sum(parts) == k
    )


def trim(parts: Sequence[int]) -> Composition:
    """Drop trailing zero slots; compositions equal up to trailing zeros agree."""
    parts = tuple(parts)
    end = len(parts)
    while end and parts[end - 1] == 0:
        end -= 1
    return parts[:end]


def iter_compositions(m: int, k: int) -> Iterator[Composition]:
    """All tuples p of length m with ``weighted_sum(p) == k``, colexicographically.

    >>> list(iter_compositions(2, 2))
    [(2, 0), (0, 1)]
    >>> list(iter_compositions(3, 3))
    [(3, 0, 0), (1, 1, 0), (0, 0, 1)]
    """
    if m < 1 or k < 1:
        raise ValueError("m and k must be positive")
    return _iter_compositions(m, k)


def _iter_compositions(m: int, k: int) -> Iterator[Composition]:
    if m == 1:
        yield (k,)
        return
    for last in range(k // m + 1):
        for head in _iter_compositions(m - 1, k - m * last):
            yield head + (last,)


def compositions(m: int, k: int) -> list[Composition]:
    return list(iter_compositions(m, k))


def multinomial(parts: Sequence[int]) -> int:
    """``sum(parts)! / prod(p!)``, the number of multiset orderings."""
    out = factorial(sum(parts))
    for p in parts:
        if p > 1:
            out //= factorial(p)
    return out


def decomposition_sum(mu: Sequence[int], k1: int, k2: int) -> int:
    """Sum of ``multinomial(p) * multinomial(q)`` over splittings mu = p + q.

    Here p runs over compositions of k1 with k1 slots, q over compositions
    of k2 with k2 slots, and q is padded with zeros before the slotwise
    addition.  ``mu`` must encode the value k1 + k2; if its support does
    not fit in k1 slots, or no splitting exists, the sum is 0.
    """
    if not (k1 >= k2 >= 1):
        raise ValueError("need k1 >= k2 >= 1")
    mu = trim(mu)
    if weighted_sum(mu) != k1 + k2:
        raise ValueError(f"composition {mu} does not encode {k1 + k2}")
    if len(mu) > k1:
        return 0
    mu = mu + (0,) * (k1 - len(mu))
    total = 0
    for q in _iter_compositions(k2, k2):
        p = tuple(mu[i] - (q[i] if i < k2 else 0) for i in range(k1))
        if min(p) >= 0:
            total += multinomial(p) * multinomial(q)
    return total


def multiset_of(parts: Sequence[int]) -> Tuple[int, ...]:
    """The sorted multiset {1^p1, 2^p2, ...} induced by a composition."""
    return tuple(i for i, p in enumerate(parts, 1) for _ in range(p))


def iter_multiset_permutations(parts: Sequence[int]) -> Iterator[Permutation]:
    """All distinct orderings of ``multiset_of(parts)`` in lexicographic order.

    The number of orderings equals ``multinomial(parts)``.
    """
    if sum(parts) < 1:
        raise ValueError("the multiset must be nonempty")
    values = [i for i, p in enumerate(parts, 1) if p > 0]
    counts = {i: p for i, p in enumerate(parts, 1) if p > 0}
    total = sum(counts.values())
    buf: list[int] = []

    def rec() -> Iterator[Permutation]:
        if len(buf) == total:
            yield tuple(buf)
            return
        for v in values:
            if counts[v]:
                counts[v] -= 1
                buf.append(v)
                yield from rec()
                buf.pop()
                counts[v] += 1

    return rec()


def multiset_permutations(parts: Sequence[int]) -> list[Permutation]:
    return list(iter_multiset_permutations(parts))


def partial_sums(omega: Sequence[int]) -> Tuple[int, ...]:
    """Running totals of a permutation; strictly increasing, ending at the total.

    >>> partial_sums((1, 2, 1))
    (1, 3, 4)
    """
    if not omega:
        raise ValueError("partial sums of an empty sequence are undefined")
    out = []
    s = 0
    for a in omega:
        s += a
        out.append(s)
    return tuple(out)


def iter_permutations_with_partial_sum(parts: Sequence[int], target: int) -> Iterator[Permutation]:
    """Orderings of ``multiset_of(parts)`` whose partial sums contain ``target``.

    Lexicographic order.  Branches whose running total passes ``target``
    without hitting it are pruned, since partial sums only increase.
    """
    values = sorted({i for i, p in enumerate(parts, 1) if p > 0})
    counts = {i: p for i, p in enumerate(parts, 1) if p > 0}
    total = sum(counts.values())
    buf: list[int] = []

    def rec(s: int, hit: bool) -> Iterator[Permutation]:
        if len(buf) == total:
            if hit:
                yield tuple(buf)
            return
        for v in values:
            if not counts[v]:
                continue
            ns = s + v
            if not hit and ns > target:
                break  # values ascend, so every later choice overshoots too
            counts[v] -= 1
            buf.append(v)
            yield from rec(ns, hit or ns == target)
            buf.pop()
            counts[v] += 1

    return rec(0, False)


def permutations_with_partial_sum(parts: Sequence[int], target: int) -> list[Permutation]:
    return list(iter_permutations_with_partial_sum(parts, target))


def count_permutations_with_partial_sum(parts: Sequence[int], target: int) -> int:
    """Cardinality of :func:`permutations_with_partial_sum` without materializing it.

    Once the running total hits ``target`` every completion qualifies, so
    the remaining orderings are counted by a multinomial in one step.
    """
    values = sorted({i for i, p in enumerate(parts, 1) if p > 0})
    counts = {i: p for i, p in enumerate(parts, 1) if p > 0}

    def rec(s: int) -> int:
        if s == target:
            return multinomial(tuple(counts.values()))
        if s > target:
            return 0
        total = 0
        for v in values:
            if not counts[v]:
                continue
            if s + v > target:
                break
            counts[v] -= 1
            total += rec(s + v)
            counts[v] += 1
        return total

    return rec(0)


def shift_split_permutation(omega: Sequence[int], n: int, mu: Sequence[int]) -> Permutation:
    """Map a permutation whose partial sums contain n-1 to one containing n-2.

    ``mu`` must encode 2n-4 with at least n-1 parts, none larger than n-2,
    and ``omega`` must be an ordering of its multiset hitting n-1.  Write
    omega = a + b where the prefix a sums to n-1.  If a starts with a 1,
    the 1 is rotated to the end of the prefix.  Otherwise there is a
    prefix partial sum S and a suffix partial sum T with S - 1 == T (a
    pigeonhole consequence of having at least n-1 distinct partial sums
    squeezed into {1, ..., n-2}); taking the smallest such S at prefix
    index i and the matching suffix index j, the blocks are swapped to

        b[:j] + a[i:] + a[:i] + b[j:].

    The result hits n-2, and over the full set of inputs the map is a
    bijection onto the permutations hitting n-2 (verified exhaustively in
    the identity suite).
    """
    if not isinstance(n, int) or n < 4:
        raise ValueError("need n >= 4")
    mu_t = trim(mu)
    if weighted_sum(mu_t) != 2 * n - 4 or len(mu_t) > n - 1:
        raise ValueError(f"{tuple(mu)} is not a composition of {2 * n - 4} on n-1 slots")
    if sum(mu_t) < n - 1:
        raise ValueError("composition must have at least n-1 parts")
    omega = tuple(omega)
    if tuple(sorted(omega)) != multiset_of(mu_t):
        raise ValueError("permutation does not match the composition's multiset")

    sums = partial_sums(omega)
    if n - 1 not in sums:
        raise ValueError("partial sums do not contain n-1")
    split = sums.index(n - 1) + 1
    a, b = omega[:split], omega[split:]

    if a[0] == 1:
        return a[1:] + (1,) + b

    prefix_sums = partial_sums(a)
    suffix_sums = set(partial_sums(b)) if b else set()
    for i, s in enumerate(prefix_sums, 1):
        if s - 1 in suffix_sums:
            t = s - 1
            j = partial_sums(b).index(t) + 1
            return b[:j] + a[i:] + a[:i] + b[j:]
    raise ValueError("no matching partial sums; input outside the mapped set")
