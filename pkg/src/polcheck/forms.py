"""Symmetric n-additive forms, their traces, the difference operator
and the polarization formula as executable procedures.

Constructors mirror the four explicit ways the underlying theory
builds such forms:

* ``ProductSym``: the symmetrized product of n additive maps,
  ``(1/n!) * sum over permutations of m1(x_s(1)) ... mn(x_s(n))``;
* ``MapOfProduct``: ``a(x1 ... xn)`` for a single additive map a;
* ``Lift``: blockwise composition raising an arity-r form to arity
  r*k via products of k arguments per slot, symmetrized over all ways
  of grouping the arguments into blocks (the blockwise formula itself
  is not symmetric; averaging restores symmetry without changing the
  trace);
* ``LinComb``: codomain-linear combinations;
* ``FormProduct``: the symmetrized pointwise product of lower forms
  (used to expand powers such as f(x)^k into a single form).

Evaluation is pure and exact, so permutation sums may be computed in
any order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, permutations

from .errors import ArityTooLarge, SpecMismatch
from .fields import FieldElement, FieldSpec, format_element
from .maps import AdditiveMap, apply_map

#: Largest form arity the evaluators accept (8! = 40320 permutation terms).
DEFAULT_ARITY_CAP = 8

#: Largest number of increments the iterated difference operator expands.
DELTA_CAP = 12


class SymmetricForm:
    """Base class for symmetric multi-additive form nodes."""

    arity: int
    domain_spec: FieldSpec
    codomain_spec: FieldSpec

    def __call__(self, *args: FieldElement) -> FieldElement:
        return eval_form(self, list(args))


@dataclass(frozen=True)
class ConstForm(SymmetricForm):
    """Arity-0 form: a plain constant (any constant is 0-additive)."""

    value: FieldElement

    @property
    def arity(self):
        return 0

    @property
    def domain_spec(self):
        return self.value.spec

    @property
    def codomain_spec(self):
        return self.value.spec


@dataclass(frozen=True)
class ProductSym(SymmetricForm):
    maps: tuple[AdditiveMap, ...]

    def __post_init__(self):
        if not self.maps:
            raise SpecMismatch("product form needs at least one map")
        if len(self.maps) > DEFAULT_ARITY_CAP:
            raise ArityTooLarge(f"arity {len(self.maps)} exceeds cap {DEFAULT_ARITY_CAP}")
        first = self.maps[0]
        for m in self.maps[1:]:
            if m.domain_spec != first.domain_spec or m.codomain_spec != first.codomain_spec:
                raise SpecMismatch("all factor maps must share domain and codomain")

    @property
    def arity(self):
        return len(self.maps)

    @property
    def domain_spec(self):
        return self.maps[0].domain_spec

    @property
    def codomain_spec(self):
        return self.maps[0].codomain_spec


@dataclass(frozen=True)
class MapOfProduct(SymmetricForm):
    map: AdditiveMap
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise SpecMismatch("arity must be positive")
        if self.n > DEFAULT_ARITY_CAP:
            raise ArityTooLarge(f"arity {self.n} exceeds cap {DEFAULT_ARITY_CAP}")

    @property
    def arity(self):
        return self.n

    @property
    def domain_spec(self):
        return self.map.domain_spec

    @property
    def codomain_spec(self):
        return self.map.codomain_spec


@dataclass(frozen=True)
class Lift(SymmetricForm):
    inner: SymmetricForm
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise SpecMismatch("lift exponent must be a positive integer")
        if self.inner.arity < 1:
            raise SpecMismatch("cannot lift a constant form")
        if self.inner.arity * self.k > DEFAULT_ARITY_CAP:
            raise ArityTooLarge(
                f"lift arity {self.inner.arity * self.k} exceeds cap {DEFAULT_ARITY_CAP}")

    @property
    def arity(self):
        return self.inner.arity * self.k

    @property
    def domain_spec(self):
        return self.inner.domain_spec

    @property
    def codomain_spec(self):
        return self.inner.codomain_spec


@dataclass(frozen=True)
class LinComb(SymmetricForm):
    terms: tuple[tuple[FieldElement, SymmetricForm], ...]

    def __post_init__(self):
        if not self.terms:
            raise SpecMismatch("linear combination needs at least one term")
        arity = self.terms[0][1].arity
        for coeff, form in self.terms:
            if form.arity != arity:
                raise SpecMismatch("linear combination mixes arities")
            if coeff.spec != form.codomain_spec:
                raise SpecMismatch("coefficient lives outside the codomain field")

    @property
    def arity(self):
        return self.terms[0][1].arity

    @property
    def domain_spec(self):
        return self.terms[0][1].domain_spec

    @property
    def codomain_spec(self):
        return self.terms[0][1].codomain_spec


@dataclass(frozen=True)
class FormProduct(SymmetricForm):
    """Symmetrization of the tensor product of lower-arity forms."""

    factors: tuple[SymmetricForm, ...]

    def __post_init__(self):
        if not self.factors:
            raise SpecMismatch("form product needs at least one factor")
        total = sum(f.arity for f in self.factors)
        if total > DEFAULT_ARITY_CAP:
            raise ArityTooLarge(f"arity {total} exceeds cap {DEFAULT_ARITY_CAP}")
        first = self.factors[0]
        for f in self.factors:
            if f.domain_spec != first.domain_spec or f.codomain_spec != first.codomain_spec:
                raise SpecMismatch("all factors must share domain and codomain")

    @property
    def arity(self):
        return sum(f.arity for f in self.factors)

    @property
    def domain_spec(self):
        return self.factors[0].domain_spec

    @property
    def codomain_spec(self):
        return self.factors[0].codomain_spec


def _block_partitions(indices: tuple[int, ...], k: int):
    """Partitions of ``indices`` into unordered blocks of size k."""
    if not indices:
        yield ()
        return
    head, rest = indices[0], indices[1:]
    for companions in combinations(rest, k - 1):
        block = (head,) + companions
        remaining = tuple(i for i in rest if i not in companions)
        for tail in _block_partitions(remaining, k):
            yield (block,) + tail


def _ordered_partitions(indices: tuple[int, ...], sizes: tuple[int, ...]):
    """Ordered set partitions of ``indices`` into blocks of given sizes."""
    if not sizes:
        yield ()
        return
    first, rest_sizes = sizes[0], sizes[1:]
    for block in combinations(indices, first):
        taken = set(block)
        remaining = tuple(i for i in indices if i not in taken)
        for tail in _ordered_partitions(remaining, rest_sizes):
            yield (block,) + tail


def eval_form(form: SymmetricForm, args: list[FieldElement]) -> FieldElement:
    """Exact value of the form at ``args`` (length must equal arity)."""
    if len(args) != form.arity:
        raise SpecMismatch(f"form of arity {form.arity} applied to {len(args)} arguments")
    for a in args:
        if a.spec != form.domain_spec:
            raise SpecMismatch("form argument outside the domain field")
    return _eval(form, list(args))


def _eval(form: SymmetricForm, args: list[FieldElement]) -> FieldElement:
    codomain = form.codomain_spec
    if isinstance(form, ConstForm):
        return form.value
    if isinstance(form, ProductSym):
        n = form.arity
        values = [[apply_map(m, a) for a in args] for m in form.maps]
        total = codomain.zero()
        for sigma in permutations(range(n)):
            term = codomain.one()
            for i, j in enumerate(sigma):
                term = term * values[i][j]
            total = total + term
        return total / math.factorial(n)
    if isinstance(form, MapOfProduct):
        product = form.domain_spec.one()
        for a in args:
            product = product * a
        return apply_map(form.map, product)
    if isinstance(form, Lift):
        indices = tuple(range(form.arity))
        products: dict[tuple[int, ...], FieldElement] = {}

        def block_product(block: tuple[int, ...]) -> FieldElement:
            cached = products.get(block)
            if cached is None:
                cached = args[block[0]]
                for i in block[1:]:
                    cached = cached * args[i]
                products[block] = cached
            return cached

        total = codomain.zero()
        count = 0
        for partition in _block_partitions(indices, form.k):
            total = total + _eval(form.inner, [block_product(b) for b in partition])
            count += 1
        return total / count
    if isinstance(form, LinComb):
        total = codomain.zero()
        for coeff, inner in form.terms:
            total = total + coeff * _eval(inner, args)
        return total
    if isinstance(form, FormProduct):
        sizes = tuple(f.arity for f in form.factors)
        indices = tuple(range(form.arity))
        total = codomain.zero()
        count = 0
        for partition in _ordered_partitions(indices, sizes):
            term = codomain.one()
            for factor, block in zip(form.factors, partition):
                term = term * _eval(factor, [args[i] for i in block])
            total = total + term
            count += 1
        return total / count
    raise TypeError(f"unknown form node {form!r}")


@dataclass(frozen=True)
class GenMonomial:
    """Generalized monomial: the trace of a symmetric form.

    Degree 0 is a plain constant; for degree n >= 1 the evaluator is
    x -> form(x, ..., x).
    """

    degree: int
    form: SymmetricForm

    def __post_init__(self):
        if self.degree != self.form.arity:
            raise SpecMismatch("monomial degree must equal the form arity")

    @property
    def domain_spec(self):
        return self.form.domain_spec

    @property
    def codomain_spec(self):
        return self.form.codomain_spec

    def __call__(self, x: FieldElement) -> FieldElement:
        if self.degree == 0:
            return self.form.value
        return eval_form(self.form, [x] * self.degree)


def trace(form: SymmetricForm) -> GenMonomial:
    """Diagonalization x -> F(x, ..., x) of a symmetric form."""
    return GenMonomial(form.arity, form)


def delta(f, y: FieldElement):
    """Difference operator: returns the evaluator x -> f(x+y) - f(x)."""
    return lambda x: f(x + y) - f(x)


def delta_many(f, ys: list[FieldElement], x0: FieldElement) -> FieldElement:
    """Iterated difference at base point x0, expanded by
    inclusion-exclusion over the 2^m subset sums of the increments."""
    m = len(ys)
    if m > DELTA_CAP:
        raise ArityTooLarge(f"{m} increments exceed the cap {DELTA_CAP}")
    if m == 0:
        return f(x0)
    sums = [x0]
    for y in ys:
        sums.extend(s + y for s in list(sums))
    total = None
    for mask in range(1 << m):
        value = f(sums[mask])
        if (m - bin(mask).count("1")) & 1:
            value = -value
        total = value if total is None else total + value
    return total


def polarize(p: GenMonomial, ys: list[FieldElement]) -> FieldElement:
    """Recover the underlying form's value at ``ys`` from the trace:
    Delta_{y1..yn} p(0) / n!.  The base point 0 is immaterial for a
    degree-n monomial; independence is itself a tested property."""
    if len(ys) != p.degree:
        raise SpecMismatch("polarization needs exactly degree-many increments")
    if p.degree == 0:
        return p.form.value
    zero = p.domain_spec.zero()
    return delta_many(p, ys, zero) / math.factorial(p.degree)


@dataclass(frozen=True)
class PolarizationReport:
    """Both sides of the polarization identity for one probe."""

    arity: int
    increments: int
    lhs: FieldElement
    rhs: FieldElement | None
    applicable: bool
    passed: bool

    def describe(self) -> str:
        if not self.applicable:
            return f"not applicable: {self.increments} increments on an arity-{self.arity} form"
        status = "pass" if self.passed else "MISMATCH"
        rhs = format_element(self.rhs) if self.rhs is not None else "0"
        return f"{status}: lhs = {format_element(self.lhs)}, rhs = {rhs}"


def polarization_check(form: SymmetricForm, x: FieldElement,
                       ys: list[FieldElement]) -> PolarizationReport:
    """Verify Delta_{y1..ym} A*(x) = 0 for m > n and = n! A(y1..yn) for
    m = n, exactly; both sides are reported on mismatch."""
    n = form.arity
    m = len(ys)
    tr = trace(form)
    if m < n:
        zero = form.codomain_spec.zero()
        return PolarizationReport(n, m, zero, None, False, False)
    lhs = delta_many(tr, ys, x)
    if m > n:
        rhs = form.codomain_spec.zero()
    else:
        rhs = eval_form(form, ys) * math.factorial(n)
    return PolarizationReport(n, m, lhs, rhs, True, lhs == rhs)


@dataclass(frozen=True)
class ZeroTraceReport:
    """Outcome of the vanishing-trace-implies-vanishing-form check."""

    applicable: bool
    passed: bool
    precondition_witness: FieldElement | None = None
    inconsistencies: tuple = ()

    def describe(self) -> str:
        if not self.applicable:
            return (f"NOT_APPLICABLE: trace is nonzero at "
                    f"{format_element(self.precondition_witness)}")
        if self.passed:
            return "pass: form vanishes on all sampled tuples"
        items = ", ".join(
            "(" + ", ".join(format_element(a) for a in tup) + f") -> {format_element(v)}"
            for tup, v in self.inconsistencies)
        return f"INCONSISTENT: nonzero values at {items}"


def zero_trace_implies_zero_check(form: SymmetricForm,
                                  sample_tuples: list[list[FieldElement]]) -> ZeroTraceReport:
    """Executable version of "a vanishing trace forces a vanishing
    symmetric form": first confirm the trace vanishes on sums from the
    sampled points, then confirm the form itself vanishes on every
    sampled tuple, computing its values by polarization from the trace
    and directly.  Any nonzero value is an inconsistency (engine bug or
    a span too small), reported rather than raised."""
    tr = trace(form)
    points = []
    for tup in sample_tuples:
        for a in tup:
            if a not in points:
                points.append(a)
    span_sample = list(points)
    span_sample.extend(g + g for g in points)
    span_sample.extend(g + h for i, g in enumerate(points) for h in points[i + 1:])
    if points:
        total = points[0]
        for g in points[1:]:
            total = total + g
        span_sample.append(total)
    for s in span_sample:
        if not tr(s).is_zero():
            return ZeroTraceReport(False, False, precondition_witness=s)
    bad = []
    for tup in sample_tuples:
        if len(tup) != form.arity:
            raise SpecMismatch("sample tuple length must equal the form arity")
        polarized = polarize(tr, list(tup))
        direct = eval_form(form, list(tup))
        if not polarized.is_zero():
            bad.append((tuple(tup), polarized))
        elif not direct.is_zero():
            bad.append((tuple(tup), direct))
    return ZeroTraceReport(True, not bad, inconsistencies=tuple(bad))
