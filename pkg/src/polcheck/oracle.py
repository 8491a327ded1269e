"""Independent brute-force evaluator and seeded element generator.

Everything here is deliberately naive and kept separate from the main
evaluation paths so that engine bugs and oracle bugs stay statistically
independent.  Values are unreduced fractions of integer-coefficient
polynomials (the quadratic generator sqrt(d) is just one more symbol,
reduced by s^2 -> d during multiplication); equality is decided by
cross-multiplication, so no gcd, no canonical form and no code above
Python's integers is shared with the engine.  Symmetrized forms are
evaluated by the full permutation sums that define them.

The oracle may be orders of magnitude slower than the engine; that is
the point.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .errors import DenominatorVanishes, DivisionByZero, SpecMismatch
from .fields import (
    QUADRATIC,
    RATFUNC,
    RATIONALS,
    FieldElement,
    FieldSpec,
    QuadRat,
)
from .lexer import TokenStream, tokenize


@dataclass(frozen=True)
class SampleConfig:
    """Deterministic sampling parameters (bounds are inclusive)."""

    seed: int = 0
    count: int = 20
    max_height: int = 5
    max_degree: int = 2

    def __post_init__(self):
        if self.count < 1 or self.max_height < 1 or self.max_degree < 0:
            raise SpecMismatch("sample bounds must be positive (degree may be 0)")


def _rng(spec: FieldSpec, cfg: SampleConfig, index: int, salt: str = "") -> random.Random:
    return random.Random(f"{cfg.seed}:{index}:{salt}:{spec.describe()}")


def random_element(spec: FieldSpec, cfg: SampleConfig, index: int = 0) -> FieldElement:
    """Deterministic element for (spec, cfg, index); denominators are
    resampled until nonzero."""
    rng = _rng(spec, cfg, index)
    h = cfg.max_height
    if spec.kind == RATIONALS:
        p = rng.randint(-h, h)
        q = 0
        while q == 0:
            q = rng.randint(-h, h)
        return spec.from_fraction(Fraction(p, q))
    if spec.kind == QUADRATIC:
        def frac():
            p = rng.randint(-h, h)
            q = 0
            while q == 0:
                q = rng.randint(-h, h)
            return Fraction(p, q)

        return FieldElement(spec, QuadRat(frac(), frac(), spec.d))

    def coeff():
        if spec.base.kind == QUADRATIC:
            return QuadRat(rng.randint(-h, h), rng.randint(-h, h), spec.base.d)
        return Fraction(rng.randint(-h, h))

    def poly(avoid_zero: bool) -> FieldElement:
        from .polys import Poly

        while True:
            terms = {}
            for _ in range(rng.randint(1, 3)):
                exps = tuple(rng.randint(0, cfg.max_degree) for _ in spec.variables)
                c = coeff()
                if c:
                    terms[exps] = terms.get(exps, coeff() * 0) + c
            p = Poly(spec.nvars, terms)
            if not (avoid_zero and p.is_zero()):
                return p

    num = poly(avoid_zero=False)
    den = poly(avoid_zero=True)
    from .fields import normalize_fraction

    return normalize_fraction(spec, num, den)


def sample_elements(spec: FieldSpec, cfg: SampleConfig, avoid_zero: bool = False):
    """The first cfg.count elements of the deterministic sample stream."""
    out = []
    index = 0
    while len(out) < cfg.count:
        e = random_element(spec, cfg, index)
        index += 1
        if avoid_zero and e.is_zero():
            continue
        out.append(e)
    return out


# -- naive values -----------------------------------------------------


class OVal:
    """Unreduced fraction of integer-coefficient polynomial dicts."""

    __slots__ = ("num", "den", "nsyms", "d")

    def __init__(self, num: dict, den: dict, nsyms: int, d: int | None):
        self.num = num
        self.den = den
        self.nsyms = nsyms
        self.d = d

    def __repr__(self):
        return f"OVal({self.num}, {self.den})"


def _pd_add(p: dict, q: dict) -> dict:
    out = dict(p)
    for e, c in q.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def _pd_neg(p: dict) -> dict:
    return {e: -c for e, c in p.items()}


def _pd_mul(p: dict, q: dict, rad: int | None, d: int | None) -> dict:
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            c = c1 * c2
            if rad is not None and e[rad] >= 2:
                c *= d ** (e[rad] // 2)
                e = e[:rad] + (e[rad] % 2,) + e[rad + 1:]
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def _context(spec: FieldSpec) -> tuple[int, int | None, int | None]:
    """(symbol count, radical index, radicand) for a field spec."""
    d = spec.radicand
    nvars = spec.nvars if spec.kind == RATFUNC else 0
    if d is None:
        return nvars, None, None
    return nvars + 1, nvars, d


def o_zero(spec: FieldSpec) -> OVal:
    nsyms, _, d = _context(spec)
    return OVal({}, {(0,) * nsyms: 1}, nsyms, d)


def o_int(spec: FieldSpec, n: int) -> OVal:
    nsyms, _, d = _context(spec)
    if n == 0:
        return o_zero(spec)
    return OVal({(0,) * nsyms: n}, {(0,) * nsyms: 1}, nsyms, d)


def o_is_zero(v: OVal) -> bool:
    return not v.num


def _rad_index(v: OVal) -> int | None:
    return v.nsyms - 1 if v.d is not None else None


def o_add(u: OVal, v: OVal) -> OVal:
    rad = _rad_index(u)
    num = _pd_add(_pd_mul(u.num, v.den, rad, u.d), _pd_mul(v.num, u.den, rad, u.d))
    return OVal(num, _pd_mul(u.den, v.den, rad, u.d), u.nsyms, u.d)


def o_neg(u: OVal) -> OVal:
    return OVal(_pd_neg(u.num), u.den, u.nsyms, u.d)


def o_sub(u: OVal, v: OVal) -> OVal:
    return o_add(u, o_neg(v))


def o_mul(u: OVal, v: OVal) -> OVal:
    rad = _rad_index(u)
    return OVal(_pd_mul(u.num, v.num, rad, u.d), _pd_mul(u.den, v.den, rad, u.d), u.nsyms, u.d)


def o_div(u: OVal, v: OVal) -> OVal:
    if o_is_zero(v):
        raise DivisionByZero("oracle division by zero")
    rad = _rad_index(u)
    return OVal(_pd_mul(u.num, v.den, rad, u.d), _pd_mul(u.den, v.num, rad, u.d), u.nsyms, u.d)


def o_divint(u: OVal, n: int) -> OVal:
    rad = _rad_index(u)
    return OVal(u.num, _pd_mul(u.den, {(0,) * u.nsyms: n}, rad, u.d), u.nsyms, u.d)


def o_mulint(u: OVal, n: int) -> OVal:
    if n == 0:
        return OVal({}, u.den, u.nsyms, u.d)
    return OVal({e: c * n for e, c in u.num.items()}, u.den, u.nsyms, u.d)


def o_pow(u: OVal, k: int) -> OVal:
    if k < 0:
        if o_is_zero(u):
            raise DivisionByZero("oracle: 0 to a negative power")
        return o_pow(OVal(u.den, u.num, u.nsyms, u.d), -k)
    rad = _rad_index(u)
    num = {(0,) * u.nsyms: 1}
    den = {(0,) * u.nsyms: 1}
    for _ in range(k):
        num = _pd_mul(num, u.num, rad, u.d)
        den = _pd_mul(den, u.den, rad, u.d)
    return OVal(num, den, u.nsyms, u.d)


def o_eq(u: OVal, v: OVal) -> bool:
    rad = _rad_index(u)
    lhs = _pd_mul(u.num, v.den, rad, u.d)
    rhs = _pd_mul(v.num, u.den, rad, u.d)
    return lhs == rhs


def from_element(e: FieldElement) -> OVal:
    """Convert an engine element into the oracle representation."""
    spec = e.spec
    nsyms, rad, d = _context(spec)

    def from_scalar(c) -> OVal:
        if isinstance(c, QuadRat):
            den = c.a.denominator * c.b.denominator
            num = {}
            base = (0,) * nsyms
            if c.a:
                num[base] = c.a.numerator * c.b.denominator
            if c.b:
                exps = base[:rad] + (1,) + base[rad + 1:]
                num[exps] = c.b.numerator * c.a.denominator
            return OVal(num, {base: den}, nsyms, d)
        c = Fraction(c)
        num = {(0,) * nsyms: c.numerator} if c.numerator else {}
        return OVal(num, {(0,) * nsyms: c.denominator}, nsyms, d)

    if spec.kind in (RATIONALS, QUADRATIC):
        return from_scalar(e.payload)

    def from_poly(p) -> OVal:
        total = o_zero(spec)
        for exps, coeff in p.terms.items():
            term = from_scalar(coeff)
            mono = {tuple(exps) + ((0,) if rad is not None else ()): 1}
            term = o_mul(term, OVal(mono, {(0,) * nsyms: 1}, nsyms, d))
            total = o_add(total, term)
        return total

    num, den = e.payload
    return o_div(from_poly(num), from_poly(den))


def matches(engine_value: FieldElement, oracle_value: OVal) -> bool:
    """Exact agreement between an engine element and an oracle value."""
    return o_eq(from_element(engine_value), oracle_value)


# -- naive map and form evaluation -------------------------------------


class Oracle:
    """Naive recursive evaluator mirroring the engine's semantics.

    Applications of maps are memoized (pure functions; caching changes
    cost, not values).
    """

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.nsyms, self.rad, self.d = _context(spec)
        self._map_cache: dict = {}
        self._form_cache: dict = {}

    # map application ------------------------------------------------

    def _key(self, v: OVal):
        return (frozenset(v.num.items()), frozenset(v.den.items()))

    def apply_map(self, m, v: OVal) -> OVal:
        from .maps import Compose, Derivation, Endo, Identity, MapSum, Scale, Zero

        key = (id(m), self._key(v))
        cached = self._map_cache.get(key)
        if cached is not None:
            return cached
        if isinstance(m, Identity):
            result = v
        elif isinstance(m, Zero):
            result = o_zero(self.spec)
        elif isinstance(m, Endo):
            result = self._apply_endo(m, v)
        elif isinstance(m, Derivation):
            result = self._apply_derivation(m, v)
        elif isinstance(m, Scale):
            result = o_mul(from_element(m.factor), self.apply_map(m.inner, v))
        elif isinstance(m, MapSum):
            result = o_zero(self.spec)
            for term in m.terms:
                result = o_add(result, self.apply_map(term, v))
        elif isinstance(m, Compose):
            result = self.apply_map(m.outer, self.apply_map(m.inner, v))
        else:
            raise TypeError(f"oracle cannot apply {m!r}")
        self._map_cache[key] = result
        return result

    def _conj(self, p: dict) -> dict:
        rad = self.rad
        return {e: (-c if e[rad] % 2 else c) for e, c in p.items()}

    def _apply_endo(self, m, v: OVal) -> OVal:
        if self.spec.kind == QUADRATIC:
            if m.conjugate_base:
                return OVal(self._conj(v.num), self._conj(v.den), v.nsyms, v.d)
            return v
        if self.spec.kind == RATIONALS:
            return v
        num, den = v.num, v.den
        if m.conjugate_base:
            num, den = self._conj(num), self._conj(den)
        images = [from_element(img) for _, img in m.images]
        new_num = self._subst(num, images)
        new_den = self._subst(den, images)
        if o_is_zero(new_den):
            raise DenominatorVanishes("oracle: denominator vanished under substitution")
        return o_div(new_num, new_den)

    def _subst(self, p: dict, images: list[OVal]) -> OVal:
        total = o_zero(self.spec)
        sqrt_val = None
        if self.rad is not None:
            mono = (0,) * (self.nsyms - 1) + (1,)
            sqrt_val = OVal({mono: 1}, {(0,) * self.nsyms: 1}, self.nsyms, self.d)
        for exps, coeff in p.items():
            term = o_int(self.spec, coeff)
            for i, img in enumerate(images):
                if exps[i]:
                    term = o_mul(term, o_pow(img, exps[i]))
            if self.rad is not None and exps[self.rad]:
                term = o_mul(term, sqrt_val)
            total = o_add(total, term)
        return total

    def _pd_derivative(self, p: dict, i: int) -> dict:
        out = {}
        for e, c in p.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                s = out.get(ne, 0) + c * e[i]
                if s:
                    out[ne] = s
        return out

    def _apply_derivation(self, m, v: OVal) -> OVal:
        total = o_zero(self.spec)
        q_sq = _pd_mul(v.den, v.den, self.rad, self.d)
        for i, (_, image) in enumerate(m.images):
            dnum = self._pd_derivative(v.num, i)
            dden = self._pd_derivative(v.den, i)
            numerator = _pd_add(
                _pd_mul(dnum, v.den, self.rad, self.d),
                _pd_neg(_pd_mul(v.num, dden, self.rad, self.d)),
            )
            part = OVal(numerator, q_sq, v.nsyms, v.d)
            total = o_add(total, o_mul(part, from_element(image)))
        return total

    # form evaluation --------------------------------------------------

    def eval_form(self, form, args: list[OVal]) -> OVal:
        """Full-permutation evaluation of the defining symmetrization.

        The sum over all n! permutations is computed literally but with
        equal terms grouped (repeated argument values make many
        permutations coincide); grouping changes the cost, not the sum.
        """
        from .forms import ConstForm, FormProduct, LinComb, Lift, MapOfProduct, ProductSym

        if isinstance(form, ConstForm):
            return from_element(form.value)
        if isinstance(form, MapOfProduct):
            product = o_int(self.spec, 1)
            for a in args:
                product = o_mul(product, a)
            return self.apply_map(form.map, product)
        if isinstance(form, LinComb):
            total = o_zero(self.spec)
            for coeff, inner in form.terms:
                total = o_add(total, o_mul(from_element(coeff), self.eval_form(inner, args)))
            return total
        if isinstance(form, (ProductSym, Lift, FormProduct)):
            cache_key = (id(form), tuple(self._key(a) for a in args))
            cached = self._form_cache.get(cache_key)
            if cached is not None:
                return cached
            result = self._eval_symmetrized(form, args)
            self._form_cache[cache_key] = result
            return result
        raise TypeError(f"oracle cannot evaluate {form!r}")

    def _eval_symmetrized(self, form, args: list[OVal]) -> OVal:
        from collections import Counter

        from .forms import FormProduct, Lift, ProductSym

        n = form.arity
        table: list[OVal] = []
        index_of: dict = {}
        indices = []
        for a in args:
            key = self._key(a)
            if key not in index_of:
                index_of[key] = len(table)
                table.append(a)
            indices.append(index_of[key])
        counter = Counter(tuple(indices[i] for i in sigma)
                          for sigma in permutations(range(n)))
        total = o_zero(self.spec)
        for assignment in sorted(counter):
            mult = counter[assignment]
            if isinstance(form, ProductSym):
                term = o_int(self.spec, 1)
                for i, j in enumerate(assignment):
                    term = o_mul(term, self.apply_map(form.maps[i], table[j]))
            elif isinstance(form, Lift):
                k = form.k
                blocks = []
                for b in range(n // k):
                    product = o_int(self.spec, 1)
                    for j in assignment[b * k:(b + 1) * k]:
                        product = o_mul(product, table[j])
                    blocks.append(product)
                term = self.eval_form(form.inner, blocks)
            else:
                term = o_int(self.spec, 1)
                offset = 0
                for factor in form.factors:
                    block = [table[j] for j in assignment[offset:offset + factor.arity]]
                    term = o_mul(term, self.eval_form(factor, block))
                    offset += factor.arity
            total = o_add(total, o_mulint(term, mult))
        return o_divint(total, math.factorial(n))

    def eval_monomial(self, monomial, x: OVal) -> OVal:
        if monomial.degree == 0:
            return from_element(monomial.form.value)
        return self.eval_form(monomial.form, [x] * monomial.degree)

    def eval_genpoly(self, p, x: OVal) -> OVal:
        total = o_zero(self.spec)
        for component in p.components:
            total = o_add(total, self.eval_monomial(component, x))
        return total

    def eval_polyspec(self, p, x: OVal) -> OVal:
        total = o_zero(self.spec)
        for k in range(p.degree, -1, -1):
            total = o_mul(total, x)
            total = o_add(total, from_element(p.coefficients[k]) if k < len(p.coefficients) else o_zero(self.spec))
        return total

    def delta_many(self, f, ys: list[OVal], x0: OVal) -> OVal:
        m = len(ys)
        sums = [x0]
        for y in ys:
            sums.extend(o_add(s, y) for s in list(sums))
        total = o_zero(self.spec)
        for mask in range(1 << m):
            value = f(sums[mask])
            if (m - bin(mask).count("1")) & 1:
                value = o_neg(value)
            total = o_add(total, value)
        return total

    def rank(self, matrix: list[list[OVal]]) -> int:
        """Fraction-free row reduction on oracle values."""
        rows = [list(r) for r in matrix]
        if not rows:
            return 0
        ncols = len(rows[0])
        r = 0
        for col in range(ncols):
            pivot_row = None
            for i in range(r, len(rows)):
                if not o_is_zero(rows[i][col]):
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
            pivot = rows[r][col]
            for i in range(r + 1, len(rows)):
                if o_is_zero(rows[i][col]):
                    continue
                factor = rows[i][col]
                rows[i] = [o_sub(o_mul(a, pivot), o_mul(b, factor))
                           for a, b in zip(rows[i], rows[r])]
            r += 1
            if r == len(rows):
                break
        return r


def oracle_eval(text: str, env: dict, spec: FieldSpec) -> OVal:
    """Naively evaluate a closed arithmetic expression over declared
    maps, forms, generalized polynomials and elements.

    Grammar: the element grammar plus function application
    ``name(expression)`` for declared callables.
    """
    oracle = Oracle(spec)
    stream = TokenStream(tokenize(text))
    value = _oe_sum(stream, oracle, env, spec)
    tok = stream.peek()
    if tok.kind != "end":
        raise stream.error(f"trailing input {tok.text!r}", expected={"end of input"})
    return value


def _oe_sum(stream, oracle, env, spec):
    value = _oe_product(stream, oracle, env, spec)
    while stream.at("+", "-"):
        op = stream.next().kind
        rhs = _oe_product(stream, oracle, env, spec)
        value = o_add(value, rhs) if op == "+" else o_sub(value, rhs)
    return value


def _oe_product(stream, oracle, env, spec):
    value = _oe_unary(stream, oracle, env, spec)
    while stream.at("*", "/"):
        op = stream.next().kind
        rhs = _oe_unary(stream, oracle, env, spec)
        value = o_mul(value, rhs) if op == "*" else o_div(value, rhs)
    return value


def _oe_unary(stream, oracle, env, spec):
    if stream.accept("-"):
        return o_neg(_oe_unary(stream, oracle, env, spec))
    if stream.accept("+"):
        return _oe_unary(stream, oracle, env, spec)
    value = _oe_atom(stream, oracle, env, spec)
    if stream.accept("^"):
        sign = -1 if stream.accept("-") else 1
        tok = stream.expect("int", "integer exponent")
        value = o_pow(value, sign * int(tok.text))
    return value


def _oe_atom(stream, oracle, env, spec):
    from .forms import GenMonomial, SymmetricForm
    from .genpoly import GenPoly
    from .maps import AdditiveMap

    tok = stream.peek()
    if tok.kind == "int":
        stream.next()
        return o_int(spec, int(tok.text))
    if tok.kind == "(":
        stream.next()
        value = _oe_sum(stream, oracle, env, spec)
        stream.expect(")")
        return value
    if tok.kind == "name":
        name = tok.text
        if name == "sqrt":
            stream.next()
            stream.expect("(")
            arg = stream.expect("int", "integer radicand")
            stream.expect(")")
            if spec.radicand != int(arg.text):
                raise SpecMismatch(f"sqrt({arg.text}) is not available in {spec.describe()}")
            return from_element(spec.sqrt_element())
        if spec.kind == RATFUNC and name in spec.variables:
            stream.next()
            return from_element(spec.var(name))
        if name in env:
            obj = env[name]
            stream.next()
            if isinstance(obj, FieldElement):
                return from_element(obj)
            stream.expect("(")
            arg = _oe_sum(stream, oracle, env, spec)
            stream.expect(")")
            if isinstance(obj, AdditiveMap):
                return oracle.apply_map(obj, arg)
            if isinstance(obj, GenMonomial):
                return oracle.eval_monomial(obj, arg)
            if isinstance(obj, GenPoly):
                return oracle.eval_genpoly(obj, arg)
            if isinstance(obj, SymmetricForm):
                raise SpecMismatch(f"{name} is a form; apply its trace instead")
            raise SpecMismatch(f"{name} is not applicable")
        raise SpecMismatch(f"unknown name {name!r}")
    raise stream.error("unexpected token", expected={"integer", "name", "'('"})
