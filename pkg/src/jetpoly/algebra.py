"""Exact sparse arithmetic for jet polynomials and their Laurent-type expansions.

Jet variables are written x0, x1, x2, ... where xr stands for the r-th
derivative coordinate of a curve at a fixed base point.  All coefficients
are exact integers or ``fractions.Fraction`` values; floats are rejected
outright, so equality of expressions is always decidable.

Two gradings are used throughout the package:

* ``degree`` is the sum of the exponents of a monomial;
* ``weight`` is the derivative-weighted sum ``sum(r * exponent)``, the
  classical weight of a differential monomial.

A :class:`LaurentExpansion` is a finite sum of terms

    coefficient * (monomial in x1, x2, ...) * x0**e,   with e any integer,

which is exactly the shape produced by substituting the jets of ``1/x``
into a jet polynomial (see :mod:`jetpoly.calculus`).

All values are immutable after construction and safe to share between
threads; every operation returns a fresh value.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Tuple, Union

#: Exact scalar type used everywhere.  Plain ints are kept as ints so that
#: integer-only pipelines never pay Fraction overhead; mixing is safe since
#: int and Fraction compare and hash consistently.
Coeff = Union[int, Fraction]

ExponentPairs = Tuple[Tuple[int, int], ...]


def check_coeff(value) -> Coeff:
    """Return ``value`` unchanged if it is an exact scalar, else raise."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    raise TypeError(f"exact int or Fraction required, got {type(value).__name__}")


class JetMonomial:
    """A monomial in the jet variables, stored as sparse (order, exponent) pairs.

    The pairs are kept sorted by derivative order with all exponents
    positive, so structurally equal monomials are identical objects in the
    ``==``/``hash`` sense.  The empty monomial represents the constant 1.
    """

    __slots__ = ("exps", "degree", "weight", "_hash")

    def __init__(self, exps: Union[Mapping[int, int], Iterable[Tuple[int, int]]] = ()):
        acc: dict[int, int] = {}
        items = exps.items() if isinstance(exps, Mapping) else exps
        for order, exponent in items:
            if not isinstance(order, int) or isinstance(order, bool) or order < 0:
                raise ValueError(f"derivative order must be a nonnegative int, got {order!r}")
            if not isinstance(exponent, int) or isinstance(exponent, bool) or exponent < 0:
                raise ValueError(f"exponent must be a nonnegative int, got {exponent!r}")
            if exponent:
                acc[order] = acc.get(order, 0) + exponent
        self.exps = tuple(sorted(acc.items()))
        self.degree = sum(e for _, e in self.exps)
        self.weight = sum(r * e for r, e in self.exps)
        self._hash = hash(self.exps)

    @classmethod
    def _raw(cls, exps: ExponentPairs) -> "JetMonomial":
        # Internal fast path: exps must already be sorted, positive, canonical.
        self = object.__new__(cls)
        self.exps = exps
        self.degree = sum(e for _, e in exps)
        self.weight = sum(r * e for r, e in exps)
        self._hash = hash(exps)
        return self

    @classmethod
    def one(cls) -> "JetMonomial":
        return _MONOMIAL_ONE

    @classmethod
    def variable(cls, order: int) -> "JetMonomial":
        return cls(((order, 1),))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if isinstance(other, JetMonomial):
            return self.exps == other.exps
        return NotImplemented

    def __bool__(self):
        return bool(self.exps)

    def __mul__(self, other):
        if not isinstance(other, JetMonomial):
            return NotImplemented
        if not self.exps:
            return other
        if not other.exps:
            return self
        acc = dict(self.exps)
        for r, e in other.exps:
            acc[r] = acc.get(r, 0) + e
        return JetMonomial._raw(tuple(sorted(acc.items())))

    def exponent(self, order: int) -> int:
        for r, e in self.exps:
            if r == order:
                return e
        return 0

    @property
    def max_order(self) -> int:
        """Highest derivative order present, or -1 for the constant monomial."""
        return self.exps[-1][0] if self.exps else -1

    def sort_key(self):
        """Canonical order: degree, then weight, then highest derivative content first.

        Used for all deterministic iteration, printing and pivoting.
        """
        return (self.degree, self.weight, tuple((-r, -e) for r, e in reversed(self.exps)))

    def split_order_zero(self) -> Tuple[int, "JetMonomial"]:
        """Return ``(e0, rest)`` with the x0 factor removed from ``rest``."""
        if self.exps and self.exps[0][0] == 0:
            return self.exps[0][1], JetMonomial._raw(self.exps[1:])
        return 0, self

    def split_highest(self) -> Tuple[int, "JetMonomial"]:
        """Remove one factor of the highest-order variable; return (order, rest)."""
        if not self.exps:
            raise ValueError("cannot split the constant monomial")
        r, e = self.exps[-1]
        rest = self.exps[:-1] if e == 1 else self.exps[:-1] + ((r, e - 1),)
        return r, JetMonomial._raw(rest)

    def __repr__(self):
        if not self.exps:
            return "JetMonomial(1)"
        body = "*".join(
            f"x{r}^{e}" if e > 1 else f"x{r}" for r, e in reversed(self.exps)
        )
        return f"JetMonomial({body})"


_MONOMIAL_ONE = JetMonomial()


def monomial_sort_key(monomial: JetMonomial):
    return monomial.sort_key()


class JetPolynomial:
    """A jet polynomial: finite map from :class:`JetMonomial` to nonzero scalars.

    The zero polynomial is the empty map; ``degree`` and ``weight`` are
    undefined for it and raise ``ValueError`` rather than returning a
    sentinel.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Union[Mapping[JetMonomial, Coeff], Iterable[Tuple[JetMonomial, Coeff]], None] = None):
        acc: dict[JetMonomial, Coeff] = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for mono, coeff in items:
                if not isinstance(mono, JetMonomial):
                    raise TypeError(f"JetMonomial key required, got {type(mono).__name__}")
                coeff = check_coeff(coeff)
                prev = acc.get(mono, 0)
                new = prev + coeff
                if new:
                    acc[mono] = new
                else:
                    acc.pop(mono, None)
        self.terms = acc
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "JetPolynomial":
        # Internal fast path: terms must already be canonical (no zeros).
        self = object.__new__(cls)
        self.terms = terms
        self._hash = None
        return self

    @classmethod
    def zero(cls) -> "JetPolynomial":
        return cls._raw({})

    @classmethod
    def constant(cls, value) -> "JetPolynomial":
        value = check_coeff(value)
        return cls._raw({_MONOMIAL_ONE: value} if value else {})

    @classmethod
    def variable(cls, order: int) -> "JetPolynomial":
        return cls._raw({JetMonomial.variable(order): 1})

    @classmethod
    def monomial(cls, exps, coeff: Coeff = 1) -> "JetPolynomial":
        coeff = check_coeff(coeff)
        if not coeff:
            return cls.zero()
        return cls._raw({JetMonomial(exps): coeff})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, JetPolynomial):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other):
        if not isinstance(other, JetPolynomial):
            return NotImplemented
        acc = dict(self.terms)
        for mono, coeff in other.terms.items():
            new = acc.get(mono, 0) + coeff
            if new:
                acc[mono] = new
            else:
                acc.pop(mono, None)
        return JetPolynomial._raw(acc)

    def __sub__(self, other):
        if not isinstance(other, JetPolynomial):
            return NotImplemented
        acc = dict(self.terms)
        for mono, coeff in other.terms.items():
            new = acc.get(mono, 0) - coeff
            if new:
                acc[mono] = new
            else:
                acc.pop(mono, None)
        return JetPolynomial._raw(acc)

    def __neg__(self):
        return JetPolynomial._raw({m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, JetPolynomial):
            acc: dict[JetMonomial, Coeff] = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    mono = m1 * m2
                    new = acc.get(mono, 0) + c1 * c2
                    if new:
                        acc[mono] = new
                    else:
                        acc.pop(mono, None)
            return JetPolynomial._raw(acc)
        coeff = check_coeff(other)
        if not coeff:
            return JetPolynomial.zero()
        return JetPolynomial._raw({m: c * coeff for m, c in self.terms.items()})

    def __rmul__(self, other):
        coeff = check_coeff(other)
        if not coeff:
            return JetPolynomial.zero()
        return JetPolynomial._raw({m: coeff * c for m, c in self.terms.items()})

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a nonnegative int")
        out = JetPolynomial.constant(1)
        for _ in range(exponent):
            out = out * self
        return out

    @property
    def degree(self) -> int:
        """Total degree (maximum over terms); undefined for the zero polynomial."""
        if not self.terms:
            raise ValueError("degree of the zero polynomial is undefined")
        return max(m.degree for m in self.terms)

    @property
    def weight(self) -> int:
        """Derivative weight (maximum over terms); undefined for the zero polynomial."""
        if not self.terms:
            raise ValueError("weight of the zero polynomial is undefined")
        return max(m.weight for m in self.terms)

    @property
    def max_order(self) -> int:
        """Highest derivative order appearing in any term (-1 if none)."""
        return max((m.max_order for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        degrees = {m.degree for m in self.terms}
        return len(degrees) <= 1

    def homogeneous_component(self, d: int) -> "JetPolynomial":
        """Sum of the terms of total degree exactly ``d`` (zero if none)."""
        return JetPolynomial._raw({m: c for m, c in self.terms.items() if m.degree == d})

    def weight_component(self, l: int) -> "JetPolynomial":
        """Sum of the terms of derivative weight exactly ``l`` (zero if none)."""
        return JetPolynomial._raw({m: c for m, c in self.terms.items() if m.weight == l})

    def homogeneous_components(self) -> dict[int, "JetPolynomial"]:
        out: dict[int, JetPolynomial] = {}
        for m, c in self.terms.items():
            out.setdefault(m.degree, {})[m] = c  # type: ignore[index]
        return {d: JetPolynomial._raw(t) for d, t in sorted(out.items())}

    def weight_components(self) -> dict[int, "JetPolynomial"]:
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            out.setdefault(m.weight, {})[m] = c
        return {l: JetPolynomial._raw(t) for l, t in sorted(out.items())}

    def sorted_terms(self) -> list[Tuple[JetMonomial, Coeff]]:
        """Terms in the canonical monomial order (stable across runs)."""
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __repr__(self):
        from .textio import format_polynomial

        return f"JetPolynomial({format_polynomial(self)})"


LaurentKey = Tuple[JetMonomial, int]


class LaurentExpansion:
    """Finite sum of terms ``c * numerator * x0**power`` with integer powers.

    Numerators are jet monomials in the variables x1, x2, ... only; the
    whole x0 content lives in the (possibly negative) power.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Union[Mapping[LaurentKey, Coeff], Iterable[Tuple[LaurentKey, Coeff]], None] = None):
        acc: dict[LaurentKey, Coeff] = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for (numer, power), coeff in items:
                if not isinstance(numer, JetMonomial):
                    raise TypeError("numerator must be a JetMonomial")
                if numer.exps and numer.exps[0][0] == 0:
                    raise ValueError("numerator must not involve x0; use the power slot")
                if not isinstance(power, int) or isinstance(power, bool):
                    raise TypeError("x0 power must be an int")
                coeff = check_coeff(coeff)
                key = (numer, power)
                new = acc.get(key, 0) + coeff
                if new:
                    acc[key] = new
                else:
                    acc.pop(key, None)
        self.terms = acc

    @classmethod
    def _raw(cls, terms: dict) -> "LaurentExpansion":
        self = object.__new__(cls)
        self.terms = terms
        return self

    @classmethod
    def zero(cls) -> "LaurentExpansion":
        return cls._raw({})

    @classmethod
    def single(cls, numer: JetMonomial, power: int, coeff: Coeff = 1) -> "LaurentExpansion":
        return cls({(numer, power): coeff})

    @classmethod
    def x0_power(cls, power: int, coeff: Coeff = 1) -> "LaurentExpansion":
        return cls({(_MONOMIAL_ONE, power): coeff})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, LaurentExpansion):
            return self.terms == other.terms
        return NotImplemented

    def __add__(self, other):
        if not isinstance(other, LaurentExpansion):
            return NotImplemented
        acc = dict(self.terms)
        for key, coeff in other.terms.items():
            new = acc.get(key, 0) + coeff
            if new:
                acc[key] = new
            else:
                acc.pop(key, None)
        return LaurentExpansion._raw(acc)

    def __sub__(self, other):
        if not isinstance(other, LaurentExpansion):
            return NotImplemented
        acc = dict(self.terms)
        for key, coeff in other.terms.items():
            new = acc.get(key, 0) - coeff
            if new:
                acc[key] = new
            else:
                acc.pop(key, None)
        return LaurentExpansion._raw(acc)

    def __neg__(self):
        return LaurentExpansion._raw({k: -c for k, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, LaurentExpansion):
            return NotImplemented
        acc: dict[LaurentKey, Coeff] = {}
        for (n1, p1), c1 in self.terms.items():
            for (n2, p2), c2 in other.terms.items():
                key = (n1 * n2, p1 + p2)
                new = acc.get(key, 0) + c1 * c2
                if new:
                    acc[key] = new
                else:
                    acc.pop(key, None)
        return LaurentExpansion._raw(acc)

    def scaled(self, coeff: Coeff) -> "LaurentExpansion":
        coeff = check_coeff(coeff)
        if not coeff:
            return LaurentExpansion.zero()
        return LaurentExpansion._raw({k: c * coeff for k, c in self.terms.items()})

    def shifted(self, power: int) -> "LaurentExpansion":
        """Multiply by x0**power (shift every x0 exponent)."""
        if not power:
            return self
        return LaurentExpansion._raw({(n, p + power): c for (n, p), c in self.terms.items()})

    @property
    def min_x0_power(self) -> int:
        """Smallest x0 power across terms; undefined for the empty expansion."""
        if not self.terms:
            raise ValueError("min_x0_power of the empty expansion is undefined")
        return min(p for _, p in self.terms)

    def to_polynomial(self) -> JetPolynomial:
        """Reinterpret as a jet polynomial; every x0 power must be >= 0."""
        acc: dict[JetMonomial, Coeff] = {}
        for (numer, power), coeff in self.terms.items():
            if power < 0:
                raise ValueError(f"negative x0 power {power} cannot become a polynomial")
            mono = JetMonomial._raw(((0, power),) + numer.exps) if power else numer
            acc[mono] = coeff
        return JetPolynomial._raw(acc)

    def sorted_terms(self) -> list[Tuple[LaurentKey, Coeff]]:
        """Terms ordered by (x0 power ascending, numerator order)."""
        return sorted(self.terms.items(), key=lambda kv: (kv[0][1], kv[0][0].sort_key()))

    def __repr__(self):
        from .textio import format_laurent

        return f"LaurentExpansion({format_laurent(self)})"


def polynomial_inversion_image(expansion: LaurentExpansion, n: int) -> JetPolynomial:
    """Shift an expansion by x0**n and convert; helper for partner computation."""
    return expansion.shifted(n).to_polynomial()


def iter_monomials(poly: JetPolynomial) -> Iterator[Tuple[JetMonomial, Coeff]]:
    return iter(poly.sorted_terms())
