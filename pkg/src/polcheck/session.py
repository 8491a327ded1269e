"""Session language: parser, executor and report emission.

The language is line-oriented with mandatory semicolons and ``#``
comments.  Declarations bind objects over the most recently declared
field; commands reference declared names.  Example::

    field F = Q(sqrt 2);
    hom c = conj;
    form N2 = product(id, c);
    genpoly f = trace(N2);
    check f(x^2) == f(x)^2 on span(1, sqrt(2), 1+sqrt(2));

Reports are byte-stable for a fixed session, seed and tool version:
the JSON form carries no wall-clock data (timing appears only in the
text rendering).
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field

from . import __version__
from .errors import (
    ArityTooLarge,
    NameResolutionError,
    ParseError,
    PolcheckError,
    SpecMismatch,
    TypeMismatch,
)
from .fields import (
    FieldElement,
    FieldSpec,
    format_element,
    parse_element_primary,
    parse_element_tokens,
)
from .forms import (
    FormProduct,
    GenMonomial,
    LinComb,
    Lift,
    MapOfProduct,
    ProductSym,
    SymmetricForm,
    eval_form,
    polarize,
    trace,
)
from .funceq import (
    HOLDS_ON_SAMPLE,
    HOLDS_ON_SPAN,
    INCONCLUSIVE,
    NOT_APPLICABLE,
    REFUTED,
    EquationReport,
    PolySpec,
    check_pointwise,
    check_symmetrized,
    classify_quadratic_square,
    degree_precheck,
)
from .genpoly import GenPoly, degree_estimate, genpoly_from, variety_rank
from .lexer import Token, TokenStream, tokenize
from .maps import (
    AdditiveMap,
    build_derivation,
    build_endomorphism,
    compose_maps,
    identity_map,
    scale_map,
    sum_maps,
    verify_map_laws,
    zero_map,
)
from .oracle import Oracle, SampleConfig, from_element, matches, o_is_zero, random_element

PASS = "pass"
ERROR = "ERROR"
_PASSING = {HOLDS_ON_SAMPLE, HOLDS_ON_SPAN, PASS}

#: Hard ceiling on form arity; the CLI flag can only lower it.
ARITY_CEILING = 8
DEGREE_CAP = 6


@dataclass
class RunOptions:
    seed: int = 0
    samples: int = 20
    max_arity: int = ARITY_CEILING
    oracle_check: bool = False
    max_height: int = 5
    max_degree: int = 2

    def sample_config(self, count=None, seed=None) -> SampleConfig:
        return SampleConfig(seed=self.seed if seed is None else seed,
                            count=self.samples if count is None else count,
                            max_height=self.max_height,
                            max_degree=self.max_degree)


def default_probes(spec: FieldSpec) -> list[FieldElement]:
    """Documented probe defaults: nonzero elements whose rational span
    exercises the field at desk scale."""
    if spec.kind == "rationals":
        return [spec.from_int(1), spec.from_int(2), spec.from_int(3)]
    if spec.kind == "quadratic":
        s = spec.sqrt_element()
        return [spec.one(), s, spec.one() + s]
    probes = [spec.one()]
    for name in spec.variables:
        v = spec.var(name)
        probes.extend([v, v + spec.one(), v * v, v - spec.one()])
    return probes


def default_span_generators(spec: FieldSpec) -> list[FieldElement]:
    """Documented span-generator defaults (kept small: span checks scale
    with |generators|^arity)."""
    if spec.kind == "rationals":
        return [spec.from_int(1), spec.from_int(2), spec.from_int(3)]
    if spec.kind == "quadratic":
        s = spec.sqrt_element()
        return [spec.one(), s, spec.one() + s]
    v = spec.var(spec.variables[0])
    return [spec.one(), v, v + spec.one()]


# -- statement objects -------------------------------------------------


@dataclass
class Command:
    kind: str
    text: str
    payload: dict


@dataclass
class Session:
    env: dict
    fields: dict
    commands: list[Command]
    digest: str
    source: str
    statements: list[str] = field(default_factory=list)


def format_session(session: Session) -> str:
    """Canonical source: one whitespace-normalized statement per line.
    Reparsing the result yields the same statements (a fixpoint)."""
    return "\n".join(session.statements) + "\n"


# -- parser ------------------------------------------------------------


_BUILTIN_MAPS = ("id", "conj", "zero")


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.stream = TokenStream(tokenize(source))
        self.env: dict = {}
        self.fields: dict = {}
        self.current_field: FieldSpec | None = None
        self.commands: list[Command] = []

    # helpers ----------------------------------------------------------

    def _require_field(self) -> FieldSpec:
        if self.current_field is None:
            raise self.stream.error("no field declared yet", expected={"field declaration"})
        return self.current_field

    def _declare(self, name: str, obj) -> None:
        if name in self.env or name in self.fields:
            raise NameResolutionError(f"{name!r} is already declared")
        if name in _BUILTIN_MAPS or name == "x":
            raise NameResolutionError(f"{name!r} is reserved")
        self.env[name] = obj

    def _lookup(self, token: Token):
        if token.text in self.env:
            return self.env[token.text]
        raise NameResolutionError(
            f"unknown name {token.text!r} at line {token.line}, column {token.column}")

    def _command_text(self, start: Token) -> str:
        end = self.stream.peek().pos
        return " ".join(self.source[start.pos:end].split())

    # entry point --------------------------------------------------------

    def parse(self) -> Session:
        statements = []
        while not self.stream.at("end"):
            tok = self.stream.peek()
            if tok.kind != "name":
                raise self.stream.error("expected a statement keyword",
                                        expected={"field", "hom", "der", "map", "form",
                                                  "genpoly", "check", "classify", "degree",
                                                  "rank", "verify", "polarize"})
            handler = getattr(self, f"_stmt_{tok.text}", None)
            if handler is None:
                raise self.stream.error(f"unknown statement {tok.text!r}")
            handler()
            semi = self.stream.tokens[self.stream.index - 1]
            statements.append(" ".join(self.source[tok.pos:semi.pos].split()) + ";")
        normalized = " ".join(self.source.split())
        digest = hashlib.sha256(normalized.encode()).hexdigest()
        return Session(self.env, self.fields, self.commands, digest, self.source, statements)

    # declarations ------------------------------------------------------

    def _stmt_field(self):
        self.stream.next()
        name = self.stream.expect("name", "field name").text
        if name in self.fields or name in self.env:
            raise NameResolutionError(f"{name!r} is already declared")
        self.stream.expect("=")
        base_tok = self.stream.expect("name", "Q")
        if base_tok.text != "Q":
            raise ParseError("field must start from Q", base_tok.pos,
                             expected={"Q"}, line=base_tok.line, column=base_tok.column)
        spec = FieldSpec.rationals()
        if self.stream.accept("("):
            if self.stream.at("name") and self.stream.peek().text == "sqrt":
                self.stream.next()
                neg = bool(self.stream.accept("-"))
                d_tok = self.stream.expect("int", "integer radicand")
                d = -int(d_tok.text) if neg else int(d_tok.text)
                try:
                    spec = FieldSpec.quadratic(d)
                except SpecMismatch as exc:
                    raise TypeMismatch(str(exc)) from exc
                self.stream.expect(")")
                if self.stream.accept("("):
                    spec = self._finish_ratfunc(spec)
            else:
                spec = self._finish_ratfunc(spec)
        self.stream.expect(";")
        self.fields[name] = spec
        self.current_field = spec

    def _finish_ratfunc(self, base: FieldSpec) -> FieldSpec:
        names = [self.stream.expect("name", "indeterminate").text]
        while self.stream.accept(","):
            names.append(self.stream.expect("name", "indeterminate").text)
        self.stream.expect(")")
        try:
            return FieldSpec.ratfunc(base, names)
        except SpecMismatch as exc:
            raise TypeMismatch(str(exc)) from exc

    def _parse_images(self, spec: FieldSpec) -> dict[str, FieldElement]:
        images = {}
        while True:
            gen = self.stream.expect("name", "indeterminate").text
            self.stream.expect("->")
            images[gen] = parse_element_tokens(self.stream, spec)
            if not self.stream.accept(","):
                break
        return images

    def _stmt_hom(self):
        self.stream.next()
        name = self.stream.expect("name", "map name").text
        spec = self._require_field()
        try:
            if self.stream.accept("="):
                kind = self.stream.expect("name", "id or conj").text
                if kind == "conj":
                    obj = build_endomorphism(spec, conjugate_base=True)
                elif kind == "id":
                    obj = identity_map(spec)
                else:
                    raise TypeMismatch(f"hom shorthand must be id or conj, not {kind!r}")
            else:
                self.stream.expect(":")
                obj = build_endomorphism(spec, self._parse_images(spec))
        except PolcheckError as exc:
            if isinstance(exc, (ParseError, NameResolutionError, TypeMismatch)):
                raise
            raise TypeMismatch(str(exc)) from exc
        self.stream.expect(";")
        self._declare(name, obj)

    def _stmt_der(self):
        self.stream.next()
        name = self.stream.expect("name", "map name").text
        spec = self._require_field()
        self.stream.expect(":")
        try:
            obj = build_derivation(spec, self._parse_images(spec))
        except PolcheckError as exc:
            if isinstance(exc, (ParseError, NameResolutionError, TypeMismatch)):
                raise
            raise TypeMismatch(str(exc)) from exc
        self.stream.expect(";")
        self._declare(name, obj)

    def _stmt_map(self):
        self.stream.next()
        name = self.stream.expect("name", "map name").text
        self.stream.expect("=")
        obj = self._parse_map_expr()
        self.stream.expect(";")
        self._declare(name, obj)

    # map expressions ---------------------------------------------------

    def _parse_map_expr(self) -> AdditiveMap:
        term = self._parse_map_term()
        while self.stream.at("+", "-"):
            op = self.stream.next().kind
            rhs = self._parse_map_term()
            if op == "-":
                rhs = scale_map(-1, rhs)
            term = sum_maps(term, rhs)
        return term

    def _parse_scalar(self, spec: FieldSpec) -> FieldElement | None:
        """A scalar prefix: ['-'] (INT | '(' element ')') followed by '*'."""
        mark = self.stream.save()
        sign = -1 if self.stream.accept("-") else 1
        value = None
        tok = self.stream.peek()
        try:
            if tok.kind == "int":
                self.stream.next()
                value = spec.from_int(int(tok.text))
            elif tok.kind == "(":
                self.stream.next()
                value = parse_element_tokens(self.stream, spec)
                self.stream.expect(")")
            else:
                self.stream.restore(mark)
                return None
            self.stream.expect("*")
        except PolcheckError:
            self.stream.restore(mark)
            return None
        return value if sign == 1 else -value

    def _parse_map_term(self) -> AdditiveMap:
        spec = self._require_field()
        scalar = self._parse_scalar(spec)
        m = self._parse_map_factor()
        while self.stream.accept("@"):
            m = compose_maps(m, self._parse_map_factor())
        if scalar is not None:
            m = scale_map(scalar, m)
        return m

    def _parse_map_factor(self) -> AdditiveMap:
        spec = self._require_field()
        if self.stream.accept("("):
            m = self._parse_map_expr()
            self.stream.expect(")")
            return m
        tok = self.stream.expect("name", "map name")
        if tok.text == "id":
            return identity_map(spec)
        if tok.text == "zero":
            return zero_map(spec)
        if tok.text == "conj":
            try:
                return build_endomorphism(spec, conjugate_base=True)
            except PolcheckError as exc:
                raise TypeMismatch(str(exc)) from exc
        obj = self._lookup(tok)
        if not isinstance(obj, AdditiveMap):
            raise TypeMismatch(f"{tok.text!r} is not a map")
        return obj

    # form expressions ---------------------------------------------------

    def _stmt_form(self):
        self.stream.next()
        name = self.stream.expect("name", "form name").text
        self.stream.expect("=")
        obj = self._parse_form_expr()
        self.stream.expect(";")
        self._declare(name, obj)

    def _parse_form_expr(self) -> SymmetricForm:
        tok = self.stream.expect("name", "form constructor or name")
        try:
            if tok.text == "product":
                self.stream.expect("(")
                maps = [self._parse_map_expr()]
                while self.stream.accept(","):
                    maps.append(self._parse_map_expr())
                self.stream.expect(")")
                return ProductSym(tuple(maps))
            if tok.text == "mapprod":
                self.stream.expect("(")
                m = self._parse_map_expr()
                self.stream.expect(",")
                n = int(self.stream.expect("int", "arity").text)
                self.stream.expect(")")
                return MapOfProduct(m, n)
            if tok.text == "lift":
                self.stream.expect("(")
                inner = self._parse_form_expr()
                self.stream.expect(",")
                k = int(self.stream.expect("int", "lift exponent").text)
                self.stream.expect(")")
                return Lift(inner, k)
            if tok.text == "lincomb":
                self.stream.expect("(")
                terms = [self._parse_lincomb_term()]
                while self.stream.accept(","):
                    terms.append(self._parse_lincomb_term())
                self.stream.expect(")")
                return LinComb(tuple(terms))
        except PolcheckError as exc:
            if isinstance(exc, (ParseError, NameResolutionError, TypeMismatch)):
                raise
            raise TypeMismatch(str(exc)) from exc
        obj = self._lookup(tok)
        if isinstance(obj, SymmetricForm):
            return obj
        raise TypeMismatch(f"{tok.text!r} is not a form")

    def _parse_lincomb_term(self):
        spec = self._require_field()
        scalar = self._parse_scalar(spec)
        form = self._parse_form_expr()
        if scalar is None:
            scalar = form.codomain_spec.one()
        return (scalar, form)

    def _stmt_genpoly(self):
        self.stream.next()
        name = self.stream.expect("name", "polynomial name").text
        self.stream.expect("=")
        components = [self._parse_trace_term()]
        while self.stream.accept("+"):
            components.append(self._parse_trace_term())
        self.stream.expect(";")
        try:
            obj = genpoly_from(components)
        except PolcheckError as exc:
            raise TypeMismatch(str(exc)) from exc
        self._declare(name, obj)

    def _parse_trace_term(self) -> GenMonomial:
        tok = self.stream.expect("name", "trace")
        if tok.text != "trace":
            raise ParseError("generalized polynomials are sums of traces", tok.pos,
                             expected={"trace"}, line=tok.line, column=tok.column)
        self.stream.expect("(")
        form = self._parse_form_expr()
        self.stream.expect(")")
        return trace(form)

    # polynomial-in-one-symbol parsing for check commands ----------------

    def _parse_coeffpoly(self, spec: FieldSpec, fname: str | None) -> list[FieldElement]:
        """Parse an expression into dense coefficients over one symbol.

        With ``fname`` None the symbol is the metavariable x (the P
        side); otherwise the symbol is the application ``fname(x)`` and
        bare x is rejected (the Q side).
        """
        return self._cp_sum(spec, fname)

    def _cp_normalize(self, coeffs: list) -> list:
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        return coeffs

    def _cp_add(self, a, b, spec):
        out = list(a) + [spec.zero()] * max(0, len(b) - len(a))
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return self._cp_normalize(out)

    def _cp_neg(self, a):
        return [-c for c in a]

    def _cp_mul(self, a, b, spec):
        if not a or not b:
            return []
        out = [spec.zero()] * (len(a) + len(b) - 1)
        for i, c in enumerate(a):
            for j, d in enumerate(b):
                out[i + j] = out[i + j] + c * d
        return self._cp_normalize(out)

    def _cp_sum(self, spec, fname):
        value = self._cp_product(spec, fname)
        while self.stream.at("+", "-"):
            op = self.stream.next().kind
            rhs = self._cp_product(spec, fname)
            if op == "-":
                rhs = self._cp_neg(rhs)
            value = self._cp_add(value, rhs, spec)
        return value

    def _cp_product(self, spec, fname):
        value = self._cp_unary(spec, fname)
        while self.stream.at("*", "/"):
            op = self.stream.next().kind
            rhs = self._cp_unary(spec, fname)
            if op == "*":
                value = self._cp_mul(value, rhs, spec)
            else:
                if len(rhs) > 1:
                    raise TypeMismatch("cannot divide by an expression containing the unknown")
                if not rhs:
                    raise TypeMismatch("division by zero in a check expression")
                value = [c / rhs[0] for c in value]
        return value

    def _cp_unary(self, spec, fname):
        if self.stream.accept("-"):
            return self._cp_neg(self._cp_unary(spec, fname))
        if self.stream.accept("+"):
            return self._cp_unary(spec, fname)
        value = self._cp_atom(spec, fname)
        if self.stream.accept("^"):
            k = int(self.stream.expect("int", "exponent").text)
            out = [spec.one()]
            for _ in range(k):
                out = self._cp_mul(out, value, spec)
            value = out
        return value

    def _cp_atom(self, spec, fname):
        tok = self.stream.peek()
        if tok.kind == "(":
            self.stream.next()
            value = self._cp_sum(spec, fname)
            self.stream.expect(")")
            return value
        if tok.kind == "name" and tok.text == "x":
            if fname is not None:
                raise TypeMismatch("the right side must be a polynomial in "
                                   f"{fname}(x); bare x is not allowed")
            self.stream.next()
            return [spec.zero(), spec.one()]
        if tok.kind == "name" and fname is not None and tok.text == fname:
            self.stream.next()
            self.stream.expect("(")
            inner = self.stream.expect("name", "x")
            if inner.text != "x":
                raise TypeMismatch(f"{fname} may only be applied to x in a check")
            self.stream.expect(")")
            return [spec.zero(), spec.one()]
        element = parse_element_primary(self.stream, spec)
        return self._cp_normalize([element])

    # commands -----------------------------------------------------------

    def _stmt_check(self):
        start = self.stream.peek()
        self.stream.next()
        fname_tok = self.stream.expect("name", "genpoly name")
        f = self._lookup(fname_tok)
        if isinstance(f, GenMonomial):
            f = genpoly_from([f])
        if not isinstance(f, GenPoly):
            raise TypeMismatch(f"{fname_tok.text!r} is not a generalized polynomial")
        spec = f.domain_spec
        self.stream.expect("(")
        p_coeffs = self._parse_coeffpoly(spec, None)
        self.stream.expect(")")
        self.stream.expect("==")
        q_coeffs = self._parse_coeffpoly(f.codomain_spec, fname_tok.text)
        mode = {"mode": "default"}
        if self.stream.at("name") and self.stream.peek().text == "on":
            self.stream.next()
            which_tok = self.stream.expect("name", "samples or span")
            which = which_tok.text
            if which not in ("samples", "span"):
                raise ParseError("expected samples(...) or span(...)", which_tok.pos,
                                 expected={"samples", "span"},
                                 line=which_tok.line, column=which_tok.column)
            self.stream.expect("(")
            if which == "samples":
                count = int(self.stream.expect("int", "sample count").text)
                seed = None
                if self.stream.accept(","):
                    kw = self.stream.expect("name", "seed")
                    if kw.text != "seed":
                        raise ParseError("expected seed=<int>", kw.pos, expected={"seed"},
                                         line=kw.line, column=kw.column)
                    self.stream.expect("=")
                    seed = int(self.stream.expect("int", "seed value").text)
                mode = {"mode": "samples", "count": count, "seed": seed}
            else:
                gens = [parse_element_tokens(self.stream, spec)]
                while self.stream.accept(","):
                    gens.append(parse_element_tokens(self.stream, spec))
                mode = {"mode": "span", "generators": gens}
            self.stream.expect(")")
        text = self._command_text(start)
        self.stream.expect(";")
        p = PolySpec.from_coefficients(p_coeffs, side="domain")
        q = PolySpec.from_coefficients(q_coeffs, side="codomain")
        self.commands.append(Command("check", text, {
            "name": fname_tok.text, "f": f, "p": p, "q": q, **mode}))

    def _stmt_classify(self):
        start = self.stream.peek()
        self.stream.next()
        kw = self.stream.expect("name", "quadratic")
        if kw.text != "quadratic":
            raise ParseError("only quadratic classification is supported", kw.pos,
                             expected={"quadratic"}, line=kw.line, column=kw.column)
        form = self._parse_form_expr()
        if form.arity != 2:
            raise TypeMismatch("classify quadratic needs an arity-2 form")
        with_tok = self.stream.expect("name", "with")
        if with_tok.text != "with":
            raise ParseError("expected with dictionary(...)", with_tok.pos,
                             expected={"with"}, line=with_tok.line, column=with_tok.column)
        dict_tok = self.stream.expect("name", "dictionary")
        if dict_tok.text != "dictionary":
            raise ParseError("expected dictionary(...)", dict_tok.pos,
                             expected={"dictionary"}, line=dict_tok.line, column=dict_tok.column)
        self.stream.expect("(")
        dictionary = [self._parse_map_expr()]
        while self.stream.accept(","):
            dictionary.append(self._parse_map_expr())
        self.stream.expect(")")
        text = self._command_text(start)
        self.stream.expect(";")
        self.commands.append(Command("classify", text, {
            "form": form, "dictionary": dictionary}))

    def _stmt_degree(self):
        start = self.stream.peek()
        self.stream.next()
        tok = self.stream.expect("name", "genpoly name")
        f = self._lookup(tok)
        if isinstance(f, GenMonomial):
            f = genpoly_from([f])
        if not isinstance(f, GenPoly):
            raise TypeMismatch(f"{tok.text!r} is not a generalized polynomial")
        text = self._command_text(start)
        self.stream.expect(";")
        self.commands.append(Command("degree", text, {"name": tok.text, "f": f}))

    def _stmt_rank(self):
        start = self.stream.peek()
        self.stream.next()
        tok = self.stream.expect("name", "genpoly name")
        f = self._lookup(tok)
        if isinstance(f, GenMonomial):
            f = genpoly_from([f])
        if not isinstance(f, GenPoly):
            raise TypeMismatch(f"{tok.text!r} is not a generalized polynomial")
        spec = f.domain_spec
        operation = "add"
        if self.stream.at("name") and self.stream.peek().text in ("mult", "add"):
            operation = self.stream.next().text
        kw = self.stream.expect("name", "translates")
        if kw.text != "translates":
            raise ParseError("expected translates(...)", kw.pos, expected={"translates"},
                             line=kw.line, column=kw.column)
        self.stream.expect("(")
        translates = [parse_element_tokens(self.stream, spec)]
        while self.stream.accept(","):
            translates.append(parse_element_tokens(self.stream, spec))
        self.stream.expect(")")
        kw = self.stream.expect("name", "points")
        if kw.text != "points":
            raise ParseError("expected points(...)", kw.pos, expected={"points"},
                             line=kw.line, column=kw.column)
        self.stream.expect("(")
        points = [parse_element_tokens(self.stream, spec)]
        while self.stream.accept(","):
            points.append(parse_element_tokens(self.stream, spec))
        self.stream.expect(")")
        text = self._command_text(start)
        self.stream.expect(";")
        self.commands.append(Command("rank", text, {
            "name": tok.text, "f": f, "operation": operation,
            "translates": translates, "points": points}))

    def _stmt_verify(self):
        start = self.stream.peek()
        self.stream.next()
        law = self.stream.expect("name", "law").text
        if law not in ("additive", "multiplicative", "leibniz"):
            raise TypeMismatch(f"unknown law {law!r}")
        tok = self.stream.expect("name", "map name")
        m = self._lookup(tok)
        if not isinstance(m, AdditiveMap):
            raise TypeMismatch(f"{tok.text!r} is not a map")
        text = self._command_text(start)
        self.stream.expect(";")
        self.commands.append(Command("verify", text, {"law": law, "map": m, "name": tok.text}))

    def _stmt_polarize(self):
        start = self.stream.peek()
        self.stream.next()
        tok = self.stream.expect("name", "monomial name")
        obj = self._lookup(tok)
        if isinstance(obj, GenPoly):
            if len(obj.components) != 1:
                raise TypeMismatch("polarize needs a single generalized monomial")
            monomial = obj.components[0]
        elif isinstance(obj, GenMonomial):
            monomial = obj
        elif isinstance(obj, SymmetricForm):
            monomial = trace(obj)
        else:
            raise TypeMismatch(f"{tok.text!r} is not a monomial or form")
        at_tok = self.stream.expect("name", "at")
        if at_tok.text != "at":
            raise ParseError("expected at (y1, ..., yn)", at_tok.pos, expected={"at"},
                             line=at_tok.line, column=at_tok.column)
        self.stream.expect("(")
        spec = monomial.domain_spec
        ys = [parse_element_tokens(self.stream, spec)]
        while self.stream.accept(","):
            ys.append(parse_element_tokens(self.stream, spec))
        self.stream.expect(")")
        if len(ys) != monomial.degree:
            raise TypeMismatch(
                f"polarize needs exactly {monomial.degree} increments, got {len(ys)}")
        text = self._command_text(start)
        self.stream.expect(";")
        self.commands.append(Command("polarize", text, {
            "name": tok.text, "monomial": monomial, "ys": ys}))


def parse_session(source: str) -> Session:
    """Parse and bind a session; errors carry line/column positions."""
    return _Parser(source).parse()


# -- execution ---------------------------------------------------------


@dataclass
class ReportDocument:
    session_digest: str
    seed: int
    oracle_check: bool
    entries: list
    consistent: bool = True
    elapsed: float = 0.0

    @property
    def exit_code(self) -> int:
        if not self.consistent:
            return 3
        for entry in self.entries:
            if entry["verdict"] not in _PASSING:
                return 1
        return 0

    def to_json_bytes(self) -> bytes:
        doc = {
            "schema": "1",
            "tool": "polcheck",
            "version": __version__,
            "session": self.session_digest,
            "seed": self.seed,
            "oracle_check": self.oracle_check,
            "consistent": self.consistent,
            "entries": self.entries,
        }
        return (json.dumps(doc, indent=2, sort_keys=False) + "\n").encode()

    def to_text(self) -> bytes:
        lines = [
            f"polcheck {__version__}  session {self.session_digest[:16]}  seed {self.seed}",
            f"oracle check: {'on' if self.oracle_check else 'off'}"
            + ("" if self.consistent else "  ** ENGINE/ORACLE MISMATCH **"),
            f"elapsed: {self.elapsed:.3f}s",
            "",
        ]
        for entry in self.entries:
            lines.append(f"[{entry['index']}] {entry['command']}")
            lines.append(f"    verdict: {entry['verdict']}")
            for key in ("degree", "rank", "value"):
                if key in entry:
                    lines.append(f"    {key}: {entry[key]}")
            if entry.get("detail"):
                lines.append(f"    {entry['detail']}")
            if entry.get("samples"):
                lines.append(f"    samples: {entry['samples']}")
            for w in entry.get("witnesses", []):
                lines.append(f"    witness: {w}")
            if "classification" in entry:
                c = entry["classification"]
                lines.append(f"    classification: {json.dumps(c, sort_keys=False)}")
            for note in entry.get("oracle_mismatches", []):
                lines.append(f"    ORACLE MISMATCH: {note}")
            lines.append("")
        lines.append(f"exit code: {self.exit_code}")
        return ("\n".join(lines) + "\n").encode()


def _witness_strings(report: EquationReport) -> list[str]:
    return [w.describe() for w in report.witnesses]


def _classification_dict(c) -> dict:
    out = {}
    if c.f_at_1 is not None:
        out["f_at_1"] = format_element(c.f_at_1)
    if c.factors:
        out["factors"] = list(c.factor_descriptors())
    if c.case_tag:
        out["case"] = c.case_tag
    for key, value in c.extras:
        out[key] = value
    return out


class _Executor:
    def __init__(self, session: Session, options: RunOptions):
        self.session = session
        self.options = options
        self.mismatches_total = 0

    def run(self) -> ReportDocument:
        started = time.monotonic()
        entries = []
        for index, command in enumerate(self.session.commands):
            entry = {"index": index, "command": command.text, "kind": command.kind}
            try:
                getattr(self, f"_run_{command.kind}")(command, entry)
            except ArityTooLarge as exc:
                entry["verdict"] = ERROR
                entry["detail"] = f"arity too large: {exc}"
            except PolcheckError as exc:
                entry["verdict"] = ERROR
                entry["detail"] = f"{type(exc).__name__}: {exc}"
            entries.append(entry)
        doc = ReportDocument(
            session_digest=self.session.digest,
            seed=self.options.seed,
            oracle_check=self.options.oracle_check,
            entries=entries,
            consistent=self.mismatches_total == 0,
            elapsed=time.monotonic() - started,
        )
        return doc

    # sampling ----------------------------------------------------------

    def _samples_for(self, spec: FieldSpec, count: int, seed: int | None):
        probes = default_probes(spec)
        cfg = self.options.sample_config(count=count, seed=seed)
        extra = []
        index = 0
        while len(extra) < count:
            extra.append(random_element(spec, cfg, index))
            index += 1
        description = (f"default probes + {count} seeded samples "
                       f"(seed={cfg.seed}, height={cfg.max_height}, degree={cfg.max_degree})")
        return probes + extra, description

    def _note_mismatches(self, entry: dict, notes: list[str]):
        if notes:
            entry["oracle_mismatches"] = notes
            self.mismatches_total += len(notes)
        elif self.options.oracle_check:
            entry["oracle_checked"] = True

    # check ---------------------------------------------------------------

    def _run_check(self, command: Command, entry: dict):
        f: GenPoly = command.payload["f"]
        p: PolySpec = command.payload["p"]
        q: PolySpec = command.payload["q"]
        spec = f.domain_spec
        if f.degree >= 1:
            precheck = degree_precheck(f.degree, p, q)
            if not precheck.passed:
                entry["verdict"] = NOT_APPLICABLE
                entry["detail"] = precheck.describe()
                return
        mode = command.payload["mode"]
        if mode == "span":
            generators = command.payload["generators"]
            if len(f.components) != 1:
                entry["verdict"] = NOT_APPLICABLE
                entry["detail"] = "span certificates need a single monomial"
                return
            monomial = f.components[0]
            self._check_arity(monomial.degree * max(p.degree, 1))
            report = check_symmetrized(monomial, p, q, generators)
            entry["verdict"] = report.verdict
            entry["samples"] = report.sample_description
            if report.detail:
                entry["detail"] = report.detail
            if report.witnesses:
                entry["witnesses"] = _witness_strings(report)
            if self.options.oracle_check and report.verdict in (HOLDS_ON_SPAN, REFUTED):
                self._note_mismatches(entry, self._oracle_check_span(monomial, p, q, generators))
            return
        if mode == "samples":
            count = command.payload["count"]
            seed = command.payload["seed"]
        else:
            count = self.options.samples
            seed = None
        samples, description = self._samples_for(spec, count, seed)
        report = check_pointwise(f, p, q, samples, description)
        entry["verdict"] = report.verdict
        entry["samples"] = report.sample_description
        if report.detail:
            entry["detail"] = report.detail
        if report.witnesses:
            entry["witnesses"] = _witness_strings(report)
        if self.options.oracle_check:
            self._note_mismatches(entry, self._oracle_check_pointwise(f, p, q, samples))

    def _check_arity(self, arity: int):
        cap = min(ARITY_CEILING, self.options.max_arity)
        if arity > cap:
            raise ArityTooLarge(f"span check needs arity {arity}, cap is {cap}")

    def _oracle_check_pointwise(self, f, p, q, samples) -> list[str]:
        from .errors import DenominatorVanishes

        oracle = Oracle(f.domain_spec)
        notes = []
        for x in samples:
            try:
                lhs = f(p.evaluate(x))
                rhs = q.evaluate(f(x))
            except DenominatorVanishes:
                continue
            ox = from_element(x)
            o_lhs = oracle.eval_genpoly(f, oracle.eval_polyspec(p, ox))
            o_rhs = oracle.eval_polyspec(q, oracle.eval_genpoly(f, ox))
            if not matches(lhs, o_lhs):
                notes.append(f"lhs at x = {format_element(x)}: engine {format_element(lhs)}")
            if not matches(rhs, o_rhs):
                notes.append(f"rhs at x = {format_element(x)}: engine {format_element(rhs)}")
        return notes

    def _oracle_check_span(self, monomial, p, q, generators) -> list[str]:
        from .funceq import probe_tuples

        k, _ = p.monomial_parts()
        _, lam = q.monomial_parts()
        lhs_form = Lift(monomial.form, k)
        rhs_form = LinComb(((lam, FormProduct((monomial.form,) * k)),))
        oracle = Oracle(monomial.domain_spec)
        notes = []
        for tup in probe_tuples(generators, monomial.degree * k):
            args = list(tup)
            oargs = [from_element(a) for a in args]
            for label, form in (("lhs", lhs_form), ("rhs", rhs_form)):
                engine = eval_form(form, args)
                o_val = oracle.eval_form(form, oargs)
                if not matches(engine, o_val):
                    notes.append(
                        f"{label} at ({', '.join(format_element(a) for a in args)}): "
                        f"engine {format_element(engine)}")
        return notes

    # classify --------------------------------------------------------------

    def _run_classify(self, command: Command, entry: dict):
        from .errors import DictionaryInsufficient

        form = command.payload["form"]
        dictionary = command.payload["dictionary"]
        probes = default_probes(form.domain_spec)
        try:
            report = classify_quadratic_square(form, dictionary, probes)
        except DictionaryInsufficient as exc:
            entry["verdict"] = INCONCLUSIVE
            entry["detail"] = f"DictionaryInsufficient: {exc}"
            return
        entry["verdict"] = report.verdict
        entry["samples"] = report.sample_description
        if report.detail:
            entry["detail"] = report.detail
        if report.witnesses:
            entry["witnesses"] = _witness_strings(report)
        if report.classification is not None:
            entry["classification"] = _classification_dict(report.classification)
        if self.options.oracle_check:
            self._note_mismatches(entry, self._oracle_check_classify(form, probes, report))

    def _oracle_check_classify(self, form, probes, report) -> list[str]:
        from .funceq import probe_tuples, quartic_form_value

        oracle = Oracle(form.domain_spec)
        one = form.domain_spec.one()
        all_probes = probes if one in probes else [one] + probes
        notes = []
        for tup in probe_tuples(all_probes, 4):
            engine = quartic_form_value(form, *tup)
            x1, x2, x3, x4 = [from_element(a) for a in tup]
            f2 = lambda u, v: oracle.eval_form(form, [u, v])
            from .oracle import o_add, o_mul, o_neg

            o_val = o_add(
                o_add(f2(o_mul(x1, x2), o_mul(x3, x4)), f2(o_mul(x1, x3), o_mul(x2, x4))),
                f2(o_mul(x1, x4), o_mul(x2, x3)))
            o_val = o_add(o_val, o_neg(o_add(
                o_add(o_mul(f2(x1, x2), f2(x3, x4)), o_mul(f2(x1, x3), f2(x2, x4))),
                o_mul(f2(x1, x4), f2(x2, x3)))))
            if not matches(engine, o_val):
                notes.append(
                    f"quartic form at ({', '.join(format_element(a) for a in tup)}): "
                    f"engine {format_element(engine)}")
        if report.classification is not None and report.classification.factors:
            from .maps import apply_map

            phi1, phi2 = report.classification.factors
            f1 = report.classification.f_at_1
            for x in all_probes:
                engine = eval_form(form, [x, x])
                ox = from_element(x)
                o_val = o_mul(o_mul(from_element(f1), oracle.apply_map(phi1, ox)),
                              oracle.apply_map(phi2, ox))
                if not matches(engine, o_val):
                    notes.append(f"certificate at {format_element(x)}")
        return notes

    # degree ------------------------------------------------------------------

    def _run_degree(self, command: Command, entry: dict):
        f: GenPoly = command.payload["f"]
        spec = f.domain_spec
        probes = default_probes(spec)
        estimate = degree_estimate(f, probes, DEGREE_CAP, spec)
        if estimate is None:
            entry["verdict"] = INCONCLUSIVE
            entry["degree"] = "NO_BOUND_FOUND"
            entry["detail"] = f"no vanishing difference order found up to cap {DEGREE_CAP}"
        else:
            entry["verdict"] = PASS
            entry["degree"] = estimate
            entry["detail"] = (f"on-sample certificate: differences of order {estimate + 1} "
                               f"vanish on the default probes")
        if self.options.oracle_check:
            notes = []
            oracle = Oracle(spec)
            o_estimate = self._oracle_degree(oracle, f, probes)
            if o_estimate != estimate:
                notes.append(f"oracle degree estimate {o_estimate} != engine {estimate}")
            self._note_mismatches(entry, notes)

    def _oracle_degree(self, oracle: Oracle, f: GenPoly, probes):
        from .genpoly import probe_tuples

        o_probes = [from_element(p) for p in probes]
        zero = from_element(f.domain_spec.zero())
        evaluator = lambda v: oracle.eval_genpoly(f, v)
        for n in range(DEGREE_CAP + 1):
            if all(o_is_zero(oracle.delta_many(evaluator, list(tup), zero))
                   for tup in probe_tuples(o_probes, n + 1)):
                return n
        return None

    # rank ----------------------------------------------------------------------

    def _run_rank(self, command: Command, entry: dict):
        f: GenPoly = command.payload["f"]
        translates = command.payload["translates"]
        points = command.payload["points"]
        operation = command.payload["operation"]
        value = variety_rank(f, translates, points, operation)
        entry["verdict"] = PASS
        entry["rank"] = value
        entry["detail"] = (f"on-sample lower bound for the variety dimension "
                           f"({operation} translates)")
        if self.options.oracle_check:
            oracle = Oracle(f.domain_spec)
            matrix = []
            for g in translates:
                og = from_element(g)
                row = []
                for h in points:
                    oh = from_element(h)
                    arg = o_add_point(og, oh, operation)
                    row.append(oracle.eval_genpoly(f, arg))
                matrix.append(row)
            o_rank_value = oracle.rank(matrix)
            notes = []
            if o_rank_value != value:
                notes.append(f"oracle rank {o_rank_value} != engine {value}")
            self._note_mismatches(entry, notes)

    # verify ---------------------------------------------------------------------

    def _run_verify(self, command: Command, entry: dict):
        m = command.payload["map"]
        law = command.payload["law"]
        spec = m.domain_spec
        probes = default_probes(spec)
        pairs = [(x, y) for x in probes for y in probes]
        cfg = self.options.sample_config(count=5)
        pairs += [(random_element(spec, cfg, 2 * i), random_element(spec, cfg, 2 * i + 1))
                  for i in range(5)]
        report = verify_map_laws(m, law, pairs)
        entry["verdict"] = PASS if report.passed else REFUTED
        entry["detail"] = report.describe()
        if self.options.oracle_check:
            notes = []
            oracle = Oracle(spec)
            for x, y in pairs:
                ox, oy = from_element(x), from_element(y)
                from .maps import apply_map
                from .oracle import o_add as oadd, o_mul as omul

                if law == "additive":
                    lhs, rhs = apply_map(m, x + y), apply_map(m, x) + apply_map(m, y)
                    o_lhs = oracle.apply_map(m, oadd(ox, oy))
                    o_rhs = oadd(oracle.apply_map(m, ox), oracle.apply_map(m, oy))
                elif law == "multiplicative":
                    lhs, rhs = apply_map(m, x * y), apply_map(m, x) * apply_map(m, y)
                    o_lhs = oracle.apply_map(m, omul(ox, oy))
                    o_rhs = omul(oracle.apply_map(m, ox), oracle.apply_map(m, oy))
                else:
                    lhs = apply_map(m, x * y)
                    rhs = apply_map(m, x) * y + x * apply_map(m, y)
                    o_lhs = oracle.apply_map(m, omul(ox, oy))
                    o_rhs = oadd(omul(oracle.apply_map(m, ox), oy),
                                 omul(ox, oracle.apply_map(m, oy)))
                if not matches(lhs, o_lhs) or not matches(rhs, o_rhs):
                    notes.append(f"law values at ({format_element(x)}, {format_element(y)})")
            self._note_mismatches(entry, notes)

    # polarize --------------------------------------------------------------------

    def _run_polarize(self, command: Command, entry: dict):
        monomial = command.payload["monomial"]
        ys = command.payload["ys"]
        value = polarize(monomial, ys)
        entry["verdict"] = PASS
        entry["value"] = format_element(value)
        direct = eval_form(monomial.form, ys)
        if direct != value:
            entry["verdict"] = ERROR
            entry["detail"] = (f"polarized value {format_element(value)} disagrees with the "
                               f"direct form value {format_element(direct)}")
        if self.options.oracle_check:
            import math as _math

            from .oracle import o_divint

            oracle = Oracle(monomial.domain_spec)
            zero = from_element(monomial.domain_spec.zero())
            o_val = oracle.delta_many(lambda v: oracle.eval_monomial(monomial, v),
                                      [from_element(y) for y in ys], zero)
            o_val = o_divint(o_val, _math.factorial(monomial.degree))
            notes = []
            if not matches(value, o_val):
                notes.append("polarized value")
            self._note_mismatches(entry, notes)


def o_add_point(og, oh, operation):
    from .oracle import o_add, o_mul

    return o_add(og, oh) if operation == "add" else o_mul(og, oh)


def run_session(session: Session, options: RunOptions | None = None) -> ReportDocument:
    """Execute all commands in order; one command failing does not stop
    the rest.  Exit code 0 iff every verdict passes, 1 on refutations or
    inapplicable checks, 3 on engine/oracle disagreement."""
    return _Executor(session, options or RunOptions()).run()


def emit_report(doc: ReportDocument, fmt: str = "text") -> bytes:
    if fmt == "json":
        return doc.to_json_bytes()
    if fmt == "text":
        return doc.to_text()
    raise ValueError(f"unknown format {fmt!r}")
