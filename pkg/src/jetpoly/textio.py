"""Text format for jet polynomials: a small exact-rational expression grammar.

    expr   := term (('+' | '-') term)*
    term   := [coeff '*'] factor ('*' factor)* | coeff
    factor := 'x' NAT ['^' NAT]
    coeff  := ['-'] NAT ['/' NAT]

Whitespace is insignificant; NAT is an unbounded decimal natural number.
``parse_polynomial`` and ``format_polynomial`` are exact inverses on
canonical polynomials: parse(format(p)) == p for every p.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import JetMonomial, JetPolynomial, LaurentExpansion


class ParseError(ValueError):
    """Syntax error with 1-based line/column position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


_PUNCT = set("+-*/^x")


def _tokenize(text: str):
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("NAT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in _PUNCT:
            tokens.append((ch, ch, line, col))
            col += 1
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(("END", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message):
        kind, value, line, col = self.peek()
        shown = "end of input" if kind == "END" else repr(value)
        raise ParseError(f"{message}, got {shown}", line, col)

    def expect(self, kind):
        if self.peek()[0] != kind:
            self.fail(f"expected {kind!r}")
        return self.next()

    def parse(self) -> JetPolynomial:
        poly = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            rhs = self.term()
            poly = poly + rhs if op == "+" else poly - rhs
        if self.peek()[0] != "END":
            self.fail("expected '+', '-' or end of input")
        return poly

    def term(self) -> JetPolynomial:
        kind = self.peek()[0]
        if kind in ("NAT", "-"):
            coeff = self.coeff()
            if self.peek()[0] == "*":
                self.next()
                mono = self.factors()
                return JetPolynomial({mono: coeff})
            return JetPolynomial.constant(coeff)
        if kind == "x":
            return JetPolynomial({self.factors(): 1})
        self.fail("expected a coefficient or a variable")

    def coeff(self):
        negative = False
        if self.peek()[0] == "-":
            self.next()
            negative = True
        num = int(self.expect("NAT")[1])
        if self.peek()[0] == "/":
            _, _, line, col = self.next()
            den_tok = self.expect("NAT")
            den = int(den_tok[1])
            if den == 0:
                raise ParseError("zero denominator", den_tok[2], den_tok[3])
            value = Fraction(num, den)
        else:
            value = num
        return -value if negative else value

    def factors(self) -> JetMonomial:
        pairs = [self.factor()]
        while self.peek()[0] == "*":
            save = self.pos
            self.next()
            if self.peek()[0] != "x":
                self.pos = save
                break
            pairs.append(self.factor())
        return JetMonomial(pairs)

    def factor(self):
        self.expect("x")
        order = int(self.expect("NAT")[1])
        exponent = 1
        if self.peek()[0] == "^":
            self.next()
            exponent = int(self.expect("NAT")[1])
        return (order, exponent)


def parse_polynomial(text: str) -> JetPolynomial:
    """Parse the grammar above into a canonical polynomial (like terms merge)."""
    return _Parser(text).parse()


def _format_factors(mono: JetMonomial) -> str:
    # Highest derivative order first, matching the canonical term order.
    return "*".join(f"x{r}^{e}" if e > 1 else f"x{r}" for r, e in reversed(mono.exps))


def format_polynomial(poly: JetPolynomial) -> str:
    """Canonical rendering; ``parse_polynomial`` inverts it exactly."""
    terms = poly.sorted_terms()
    if not terms:
        return "0"
    pieces = []
    for index, (mono, coeff) in enumerate(terms):
        if index == 0:
            body = _one_term(coeff, mono)
        else:
            sep = " - " if coeff < 0 else " + "
            body = sep + _one_term(abs(coeff), mono)
        pieces.append(body)
    return "".join(pieces)


def _one_term(coeff, mono: JetMonomial) -> str:
    if not mono.exps:
        return str(coeff)
    if coeff == 1:
        return _format_factors(mono)
    # The grammar has no bare leading minus, so -x2 renders as -1*x2.
    return f"{coeff}*{_format_factors(mono)}"


def format_laurent(expansion: LaurentExpansion) -> str:
    """Render an expansion with explicit x0 denominators, largest power first."""
    if not expansion:
        return "0"
    terms = sorted(
        expansion.terms.items(), key=lambda kv: (-kv[0][1], kv[0][0].sort_key())
    )
    pieces = []
    for index, ((numer, power), coeff) in enumerate(terms):
        sign = ""
        if index == 0:
            if coeff < 0:
                sign = "-"
                coeff = -coeff
        else:
            sign = " - " if coeff < 0 else " + "
            coeff = abs(coeff)
        top = []
        if coeff != 1 or (not numer.exps and power >= 0):
            top.append(str(coeff))
        if numer.exps:
            top.append(_format_factors(numer))
        if power > 0:
            top.append(f"x0^{power}" if power > 1 else "x0")
        body = "*".join(top) if top else "1"
        if power < 0:
            body += f"/x0^{-power}" if power < -1 else "/x0"
        pieces.append(sign + body)
    return "".join(pieces)


def parse_range(text: str) -> range:
    """Parse 'a' or 'a..b' (inclusive) into a range."""
    if ".." in text:
        lo_text, hi_text = text.split("..", 1)
        lo, hi = int(lo_text), int(hi_text)
    else:
        lo = hi = int(text)
    if hi < lo:
        raise ValueError(f"empty range {text!r}")
    return range(lo, hi + 1)


def parse_parts(text: str):
    """Parse a comma-separated composition such as '2,1,0'."""
    try:
        parts = tuple(int(piece.strip()) for piece in text.split(","))
    except ValueError as exc:
        raise ValueError(f"bad composition {text!r}") from exc
    if any(p < 0 for p in parts):
        raise ValueError(f"negative slot in composition {text!r}")
    return parts
