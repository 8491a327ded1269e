"""Exact arithmetic for the three supported field kinds.

Supported fields: the rationals Q, real quadratic extensions
Q(sqrt d) for squarefree d, and a single level of rational-function
fields Q(t1, ..., tm) or Q(sqrt d)(t1, ..., tm).  Every element is
kept in a canonical form so that mathematical equality coincides with
structural equality:

* rationals: reduced ``Fraction`` (positive denominator);
* quadratic elements: a pair (a, b) of reduced rationals for
  a + b*sqrt(d);
* rational functions: a gcd-reduced fraction of multivariate
  polynomials whose denominator is monic under graded-lex order.

No floating point appears anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .errors import DenominatorVanishes, DivisionByZero, ParseError, SpecMismatch
from .lexer import Token, TokenStream, tokenize
from .polys import Poly, exact_div, grlex_key, poly_gcd

RATIONALS = "rationals"
QUADRATIC = "quadratic"
RATFUNC = "ratfunc"

#: Names that may not be used as indeterminates of a function field.
RESERVED_WORDS = frozenset({
    "field", "hom", "der", "map", "form", "genpoly", "check", "classify",
    "quadratic", "with", "dictionary", "degree", "rank", "mult", "add",
    "translates", "points", "verify", "polarize", "at", "on", "samples",
    "span", "seed", "Q", "sqrt", "conj", "id", "zero", "x", "trace",
    "product", "mapprod", "lift", "lincomb", "additive", "multiplicative",
    "leibniz",
})


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        while n % p == 0:
            n //= p
        p += 1
    return True


class QuadRat:
    """Exact element a + b*sqrt(d) of a quadratic extension of Q."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    def __add__(self, other):
        other = self._coerce(other)
        return QuadRat(self.a + other.a, self.b + other.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return QuadRat(self.a - other.a, self.b - other.b, self.d)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return QuadRat(
            self.a * other.a + self.d * self.b * other.b,
            self.a * other.b + self.b * other.a,
            self.d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        nrm = other.a * other.a - other.d * other.b * other.b
        if nrm == 0:
            raise DivisionByZero("division by zero quadratic element")
        conj = QuadRat(other.a, -other.b, other.d)
        prod = self * conj
        return QuadRat(prod.a / nrm, prod.b / nrm, self.d)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __neg__(self):
        return QuadRat(-self.a, -self.b, self.d)

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, QuadRat):
            return self.a == other.a and self.b == other.b and self.d == other.d
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def conjugate(self) -> "QuadRat":
        return QuadRat(self.a, -self.b, self.d)

    def _coerce(self, other) -> "QuadRat":
        if isinstance(other, QuadRat):
            if other.d != self.d:
                raise SpecMismatch("mixing distinct quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadRat(other, 0, self.d)
        raise TypeError(f"cannot coerce {other!r} into Q(sqrt {self.d})")

    def __repr__(self):
        return f"QuadRat({self.a}, {self.b}, d={self.d})"


@dataclass(frozen=True)
class FieldSpec:
    """Description of one of the supported computable fields."""

    kind: str
    d: int | None = None
    base: "FieldSpec | None" = None
    variables: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind == RATIONALS:
            if self.d is not None or self.base is not None or self.variables:
                raise SpecMismatch("rationals take no parameters")
        elif self.kind == QUADRATIC:
            if self.d in (0, 1) or self.d is None or not is_squarefree(self.d):
                raise SpecMismatch(f"quadratic radicand must be squarefree and not 0 or 1, got {self.d}")
        elif self.kind == RATFUNC:
            if self.base is None or self.base.kind == RATFUNC:
                raise SpecMismatch("function-field base must be Q or Q(sqrt d)")
            if not self.variables:
                raise SpecMismatch("function field needs at least one indeterminate")
            if len(set(self.variables)) != len(self.variables):
                raise SpecMismatch("indeterminate names must be distinct")
            for name in self.variables:
                if not name or name in RESERVED_WORDS:
                    raise SpecMismatch(f"indeterminate name {name!r} is reserved or empty")
        else:
            raise SpecMismatch(f"unknown field kind {self.kind!r}")

    # -- constructors ------------------------------------------------

    @staticmethod
    def rationals() -> "FieldSpec":
        return FieldSpec(RATIONALS)

    @staticmethod
    def quadratic(d: int) -> "FieldSpec":
        return FieldSpec(QUADRATIC, d=d)

    @staticmethod
    def ratfunc(base: "FieldSpec", variables) -> "FieldSpec":
        return FieldSpec(RATFUNC, base=base, variables=tuple(variables))

    # -- basic elements ----------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def radicand(self) -> int | None:
        if self.kind == QUADRATIC:
            return self.d
        if self.kind == RATFUNC and self.base.kind == QUADRATIC:
            return self.base.d
        return None

    def scalar_one(self):
        if self.kind == RATFUNC:
            return self.base.scalar_one()
        if self.kind == QUADRATIC:
            return QuadRat(1, 0, self.d)
        return Fraction(1)

    def zero(self) -> "FieldElement":
        return self.from_int(0)

    def one(self) -> "FieldElement":
        return self.from_int(1)

    def from_int(self, n) -> "FieldElement":
        return self.from_fraction(Fraction(n))

    def from_fraction(self, q: Fraction) -> "FieldElement":
        if self.kind == RATIONALS:
            return FieldElement(self, Fraction(q))
        if self.kind == QUADRATIC:
            return FieldElement(self, QuadRat(q, 0, self.d))
        num = Poly.const(self.nvars, self.base.scalar_one() * q)
        den = Poly.const(self.nvars, self.base.scalar_one())
        return FieldElement(self, (num, den))

    def sqrt_element(self) -> "FieldElement":
        """The element sqrt(d) of this field (or of its base)."""
        d = self.radicand
        if d is None:
            raise SpecMismatch("field has no quadratic generator")
        if self.kind == QUADRATIC:
            return FieldElement(self, QuadRat(0, 1, d))
        coeff = QuadRat(0, 1, d)
        num = Poly.const(self.nvars, coeff)
        den = Poly.const(self.nvars, self.base.scalar_one())
        return FieldElement(self, (num, den))

    def var(self, name: str) -> "FieldElement":
        if self.kind != RATFUNC or name not in self.variables:
            raise SpecMismatch(f"{name!r} is not an indeterminate of {self.describe()}")
        i = self.variables.index(name)
        num = Poly.variable(self.nvars, i, self.base.scalar_one())
        den = Poly.const(self.nvars, self.base.scalar_one())
        return FieldElement(self, (num, den))

    def element(self, text: str) -> "FieldElement":
        return parse_element(text, self)

    def describe(self) -> str:
        if self.kind == RATIONALS:
            return "Q"
        if self.kind == QUADRATIC:
            return f"Q(sqrt {self.d})"
        return f"{self.base.describe()}({', '.join(self.variables)})"


Payload = Union[Fraction, QuadRat, tuple]


@dataclass(frozen=True, eq=False)
class FieldElement:
    """Canonical exact element of one of the supported fields."""

    spec: FieldSpec
    payload: Payload

    # -- operators ----------------------------------------------------

    def __add__(self, other):
        return field_arith("add", self, other)

    def __radd__(self, other):
        return field_arith("add", self, other)

    def __sub__(self, other):
        return field_arith("sub", self, other)

    def __rsub__(self, other):
        return field_arith("sub", _coerce(self.spec, other), self)

    def __mul__(self, other):
        return field_arith("mul", self, other)

    def __rmul__(self, other):
        return field_arith("mul", self, other)

    def __truediv__(self, other):
        return field_arith("div", self, other)

    def __rtruediv__(self, other):
        return field_arith("div", _coerce(self.spec, other), self)

    def __pow__(self, k: int):
        return field_arith("pow", self, k)

    def __neg__(self):
        return field_arith("mul", self, -1)

    def is_zero(self) -> bool:
        if self.spec.kind == RATFUNC:
            return self.payload[0].is_zero()
        return not self.payload

    def is_one(self) -> bool:
        return self == self.spec.one()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.spec.from_fraction(Fraction(other))
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.spec == other.spec and self.payload == other.payload

    def __hash__(self):
        payload = self.payload
        if isinstance(payload, tuple):
            payload_hash = hash((payload[0], payload[1]))
        else:
            payload_hash = hash(payload)
        return hash((self.spec, payload_hash))

    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return f"<{format_element(self)} in {self.spec.describe()}>"


def _coerce(spec: FieldSpec, value) -> FieldElement:
    if isinstance(value, FieldElement):
        if value.spec != spec:
            raise SpecMismatch(
                f"operands live in different fields: {value.spec.describe()} vs {spec.describe()}")
        return value
    if isinstance(value, (int, Fraction)):
        return spec.from_fraction(Fraction(value))
    raise SpecMismatch(f"cannot interpret {value!r} as an element of {spec.describe()}")


def normalize_fraction(spec: FieldSpec, num: Poly, den: Poly) -> FieldElement:
    """Canonical rational function: gcd-reduced, denominator grlex-monic."""
    if den.is_zero():
        raise DivisionByZero("zero denominator")
    if num.is_zero():
        one = Poly.const(spec.nvars, spec.base.scalar_one())
        return FieldElement(spec, (Poly.zero(spec.nvars), one))
    g = poly_gcd(num, den)
    if not g.is_const():
        num = exact_div(num, g)
        den = exact_div(den, g)
    _, lc = den.lead()
    num = num.divscale(lc)
    den = den.divscale(lc)
    return FieldElement(spec, (num, den))


def normalize(e) -> FieldElement:
    """Canonicalize a raw (spec, num, den) triple or re-normalize an element.

    Idempotent by construction; raises DivisionByZero on a vanishing
    denominator.
    """
    if isinstance(e, FieldElement):
        if e.spec.kind == RATFUNC:
            return normalize_fraction(e.spec, *e.payload)
        return e
    spec, num, den = e
    if spec.kind == RATFUNC:
        return normalize_fraction(spec, num, den)
    if spec.kind == QUADRATIC:
        if not den:
            raise DivisionByZero("zero denominator")
        return FieldElement(spec, num / den)
    if den == 0:
        raise DivisionByZero("zero denominator")
    return FieldElement(spec, Fraction(num, den))


def _monic_pair(spec: FieldSpec, num: Poly, den: Poly) -> FieldElement:
    _, lc = den.lead()
    if lc == spec.base.scalar_one():
        return FieldElement(spec, (num, den))
    return FieldElement(spec, (num.divscale(lc), den.divscale(lc)))


def _add_reduced(spec: FieldSpec, n1: Poly, d1: Poly, n2: Poly, d2: Poly,
                 subtract: bool) -> FieldElement:
    # Henrici: with both operands reduced, only gcd(d1, d2) and a final
    # gcd against it can cancel.
    g = poly_gcd(d1, d2)
    if g.is_const():
        num = n1 * d2 - n2 * d1 if subtract else n1 * d2 + n2 * d1
        if num.is_zero():
            return spec.zero()
        return _monic_pair(spec, num, d1 * d2)
    d2g = exact_div(d2, g)
    num = n1 * d2g - n2 * exact_div(d1, g) if subtract else n1 * d2g + n2 * exact_div(d1, g)
    if num.is_zero():
        return spec.zero()
    h = poly_gcd(num, g)
    if not h.is_const():
        num = exact_div(num, h)
        den = exact_div(d1, h) * d2g
    else:
        den = d1 * d2g
    return _monic_pair(spec, num, den)


def _mul_reduced(spec: FieldSpec, n1: Poly, d1: Poly, n2: Poly, d2: Poly) -> FieldElement:
    # cross-cancel: the factors of each reduced operand are coprime, so
    # gcd(n1 n2, d1 d2) = gcd(n1, d2) * gcd(n2, d1)
    if n1.is_zero() or n2.is_zero():
        return spec.zero()
    g1 = poly_gcd(n1, d2)
    if not g1.is_const():
        n1 = exact_div(n1, g1)
        d2 = exact_div(d2, g1)
    g2 = poly_gcd(n2, d1)
    if not g2.is_const():
        n2 = exact_div(n2, g2)
        d1 = exact_div(d1, g2)
    return _monic_pair(spec, n1 * n2, d1 * d2)


def field_arith(op: str, lhs: FieldElement, rhs) -> FieldElement:
    """Exact field operation; ``pow`` takes an integer exponent."""
    spec = lhs.spec
    if op == "pow":
        if not isinstance(rhs, int):
            raise SpecMismatch("pow exponent must be an integer")
        return _power(lhs, rhs)
    rhs = _coerce(spec, rhs)
    if spec.kind == RATFUNC:
        n1, d1 = lhs.payload
        n2, d2 = rhs.payload
        if op == "add":
            return _add_reduced(spec, n1, d1, n2, d2, subtract=False)
        if op == "sub":
            return _add_reduced(spec, n1, d1, n2, d2, subtract=True)
        if op == "mul":
            return _mul_reduced(spec, n1, d1, n2, d2)
        if op == "div":
            if n2.is_zero():
                raise DivisionByZero("division by zero element")
            return _mul_reduced(spec, n1, d1, d2, n2)
    else:
        a, b = lhs.payload, rhs.payload
        if op == "add":
            return FieldElement(spec, a + b)
        if op == "sub":
            return FieldElement(spec, a - b)
        if op == "mul":
            return FieldElement(spec, a * b)
        if op == "div":
            if not b:
                raise DivisionByZero("division by zero element")
            return FieldElement(spec, a / b)
    raise ValueError(f"unknown operation {op!r}")


def _power(base: FieldElement, k: int) -> FieldElement:
    spec = base.spec
    if k < 0:
        if base.is_zero():
            raise DivisionByZero("0 raised to a negative power")
        return _power(spec.one() / base, -k)
    if spec.kind == RATFUNC:
        # a reduced fraction stays reduced under powers: no gcd needed
        num, den = base.payload
        return _monic_pair(spec, num ** k, den ** k) if k else spec.one()
    result = spec.one()
    acc = base
    while k:
        if k & 1:
            result = result * acc
        acc = acc * acc
        k >>= 1
    return result


def conjugate_element(e: FieldElement) -> FieldElement:
    """Apply quadratic conjugation sqrt(d) -> -sqrt(d) to an element."""
    spec = e.spec
    if spec.kind == QUADRATIC:
        return FieldElement(spec, e.payload.conjugate())
    if spec.kind == RATFUNC and spec.base.kind == QUADRATIC:
        num, den = e.payload
        return normalize_fraction(spec, num.map_coeffs(lambda c: c.conjugate()),
                                  den.map_coeffs(lambda c: c.conjugate()))
    if spec.kind in (RATIONALS,) or (spec.kind == RATFUNC and spec.base.kind == RATIONALS):
        return e
    raise SpecMismatch("conjugation is not defined on this field")


def _lift_scalar(spec: FieldSpec, c) -> FieldElement:
    """Embed a base-field scalar into the (function) field."""
    if spec.kind == RATFUNC:
        num = Poly.const(spec.nvars, c if not isinstance(c, Fraction) else spec.base.scalar_one() * c)
        den = Poly.const(spec.nvars, spec.base.scalar_one())
        return FieldElement(spec, (num, den))
    return FieldElement(spec, c)


def eval_poly_at(spec: FieldSpec, p: Poly, values: list[FieldElement]) -> FieldElement:
    """Evaluate a numerator/denominator polynomial at field elements."""
    total = spec.zero()
    for exps, coeff in p.terms.items():
        term = _lift_scalar(spec, coeff)
        for v, k in zip(values, exps):
            if k:
                term = term * _power(v, k)
        total = total + term
    return total


def substitute(e: FieldElement, images: dict[str, FieldElement]) -> FieldElement:
    """Substitute elements for the indeterminates of a rational function.

    Raises DenominatorVanishes when the substituted denominator is the
    zero element, which signals that the images do not define a valid
    embedding for this particular element.
    """
    spec = e.spec
    if spec.kind != RATFUNC:
        raise SpecMismatch("substitution applies to rational-function elements")
    values = []
    for name in spec.variables:
        if name not in images:
            raise SpecMismatch(f"no image supplied for indeterminate {name!r}")
        values.append(_coerce(spec, images[name]))
    num, den = e.payload
    den_val = eval_poly_at(spec, den, values)
    if den_val.is_zero():
        raise DenominatorVanishes(f"denominator of {format_element(e)} vanishes under substitution")
    num_val = eval_poly_at(spec, num, values)
    return num_val / den_val


# -- parsing ----------------------------------------------------------


def parse_element(text: str, spec: FieldSpec) -> FieldElement:
    """Parse the element grammar: integers, sqrt(d), indeterminates,
    ``+ - * / ^`` and parentheses; the result is canonical."""
    stream = TokenStream(tokenize(text))
    value = parse_element_tokens(stream, spec)
    tok = stream.peek()
    if tok.kind != "end":
        raise ParseError(f"trailing input {tok.text!r}", tok.pos,
                         expected={"end of input"}, line=tok.line, column=tok.column)
    return value


def parse_element_tokens(stream: TokenStream, spec: FieldSpec) -> FieldElement:
    """Element sub-parser operating on an existing token stream."""
    return _parse_sum(stream, spec)


def parse_element_primary(stream: TokenStream, spec: FieldSpec) -> FieldElement:
    """Single element atom with an optional exponent; used when element
    literals are embedded in a larger grammar that owns the operators."""
    return _parse_power(stream, spec)


def _parse_sum(stream: TokenStream, spec: FieldSpec) -> FieldElement:
    value = _parse_product(stream, spec)
    while stream.at("+", "-"):
        op = stream.next().kind
        rhs = _parse_product(stream, spec)
        value = value + rhs if op == "+" else value - rhs
    return value


def _parse_product(stream: TokenStream, spec: FieldSpec) -> FieldElement:
    value = _parse_unary(stream, spec)
    while stream.at("*", "/"):
        op = stream.next().kind
        rhs = _parse_unary(stream, spec)
        value = value * rhs if op == "*" else value / rhs
    return value


def _parse_unary(stream: TokenStream, spec: FieldSpec) -> FieldElement:
    if stream.accept("-"):
        return -_parse_unary(stream, spec)
    if stream.accept("+"):
        return _parse_unary(stream, spec)
    return _parse_power(stream, spec)


def _parse_power(stream: TokenStream, spec: FieldSpec) -> FieldElement:
    base = _parse_atom(stream, spec)
    if stream.accept("^"):
        exponent = _parse_exponent(stream)
        return base ** exponent
    return base


def _parse_exponent(stream: TokenStream) -> int:
    sign = 1
    if stream.accept("("):
        if stream.accept("-"):
            sign = -1
        tok = stream.expect("int", "integer exponent")
        stream.expect(")")
        return sign * int(tok.text)
    if stream.accept("-"):
        sign = -1
    tok = stream.expect("int", "integer exponent")
    return sign * int(tok.text)


def _parse_atom(stream: TokenStream, spec: FieldSpec) -> FieldElement:
    tok = stream.peek()
    if tok.kind == "int":
        stream.next()
        return spec.from_int(int(tok.text))
    if tok.kind == "(":
        stream.next()
        value = _parse_sum(stream, spec)
        stream.expect(")")
        return value
    if tok.kind == "name":
        if tok.text == "sqrt":
            stream.next()
            stream.expect("(")
            neg = bool(stream.accept("-"))
            arg = stream.expect("int", "integer radicand")
            stream.expect(")")
            d = -int(arg.text) if neg else int(arg.text)
            if spec.radicand is None:
                raise SpecMismatch(f"sqrt({d}) is not an element of {spec.describe()}")
            if d != spec.radicand:
                raise SpecMismatch(
                    f"sqrt({d}) does not belong to {spec.describe()} (expected sqrt({spec.radicand}))")
            return spec.sqrt_element()
        if spec.kind == RATFUNC and tok.text in spec.variables:
            stream.next()
            return spec.var(tok.text)
        raise SpecMismatch(f"{tok.text!r} is not valid in {spec.describe()}")
    raise ParseError(
        f"unexpected {tok.kind if tok.kind != 'end' else 'end of input'}",
        tok.pos,
        expected={"integer", "name", "'('"},
        line=tok.line,
        column=tok.column,
    )


# -- formatting -------------------------------------------------------


def _format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _format_quad(c: QuadRat) -> str:
    if not c.b:
        return _format_fraction(c.a)
    if c.b == 1:
        root = f"sqrt({c.d})"
    elif c.b == -1:
        root = f"-sqrt({c.d})"
    else:
        root = f"{_format_fraction(c.b)}*sqrt({c.d})"
    if not c.a:
        return root
    return _format_fraction(c.a) + (root if root.startswith("-") else "+" + root)


def _coeff_pieces(c) -> tuple[str, bool]:
    """Render a scalar coefficient; the flag says it must be parenthesized
    when multiplied against a monomial."""
    if isinstance(c, QuadRat):
        text = _format_quad(c)
        return text, bool(c.a) and bool(c.b)
    return _format_fraction(c), False


def _format_poly(p: Poly, names: tuple[str, ...]) -> str:
    if p.is_zero():
        return "0"
    pieces = []
    for exps in sorted(p.terms, key=grlex_key, reverse=True):
        coeff = p.terms[exps]
        varpart = "*".join(
            name if k == 1 else f"{name}^{k}"
            for name, k in zip(names, exps) if k
        )
        if not varpart:
            pieces.append(_coeff_pieces(coeff)[0])
            continue
        text, need_parens = _coeff_pieces(coeff)
        if text == "1":
            pieces.append(varpart)
        elif text == "-1":
            pieces.append("-" + varpart)
        elif need_parens:
            pieces.append(f"({text})*{varpart}")
        else:
            pieces.append(f"{text}*{varpart}")
    out = pieces[0]
    for piece in pieces[1:]:
        out += piece if piece.startswith("-") else "+" + piece
    return out


def _has_toplevel_sum(text: str) -> bool:
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > 0:
            return True
    return False


def format_element(e: FieldElement) -> str:
    """Canonical text: graded-lex term order, sqrt(d) spelled out, and
    just enough parentheses to round-trip through parse_element."""
    spec = e.spec
    if spec.kind == RATIONALS:
        return _format_fraction(e.payload)
    if spec.kind == QUADRATIC:
        return _format_quad(e.payload)
    num, den = e.payload
    num_text = _format_poly(num, spec.variables)
    if den.is_const():
        return num_text
    den_text = _format_poly(den, spec.variables)
    if _has_toplevel_sum(num_text):
        num_text = f"({num_text})"
    if _has_toplevel_sum(den_text) or sum(1 for k in den.lead()[0] if k) > 1:
        den_text = f"({den_text})"
    return f"{num_text}/{den_text}"
