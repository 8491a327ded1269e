"""Generalized polynomials: sums of monomial components, empirical
degree detection by iterated differencing, component extraction by
polarization peeling, and sample-based variety rank.

Degree and rank results are certificates on the sampled set, never
theorems; reports and docs carry that qualifier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement

from .errors import InconsistentPeeling, SpecMismatch
from .fields import FieldElement, FieldSpec, format_element
from .forms import DELTA_CAP, GenMonomial, delta_many
from .linalg import rank as matrix_rank

#: Sentinel for a failed degree search.
NO_BOUND_FOUND = None


@dataclass(frozen=True)
class GenPoly:
    """Finite sum of generalized monomials of pairwise distinct degrees."""

    components: tuple[GenMonomial, ...]
    domain_spec: FieldSpec
    codomain_spec: FieldSpec

    def __post_init__(self):
        degrees = [c.degree for c in self.components]
        if len(set(degrees)) != len(degrees):
            raise SpecMismatch("component degrees must be pairwise distinct")
        for c in self.components:
            if c.domain_spec != self.domain_spec or c.codomain_spec != self.codomain_spec:
                raise SpecMismatch("component fields disagree with the polynomial's fields")

    @property
    def degree(self) -> int:
        return max((c.degree for c in self.components), default=0)

    def __call__(self, x: FieldElement) -> FieldElement:
        return eval_genpoly(self, x)


def genpoly_from(components, domain_spec=None, codomain_spec=None) -> GenPoly:
    components = tuple(components)
    if components:
        domain_spec = domain_spec or components[0].domain_spec
        codomain_spec = codomain_spec or components[0].codomain_spec
    return GenPoly(components, domain_spec, codomain_spec)


def eval_genpoly(p: GenPoly, x: FieldElement) -> FieldElement:
    total = p.codomain_spec.zero()
    for component in p.components:
        total = total + component(x)
    return total


def probe_tuples(probes, size: int):
    """Unordered probe tuples; the difference operator is symmetric in
    its increments, so multisets cover all ordered choices."""
    return combinations_with_replacement(probes, size)


def degree_estimate(f, probes: list[FieldElement], cap: int,
                    domain_spec: FieldSpec):
    """Smallest n <= cap with Delta_{y1..y(n+1)} f(0) = 0 for every
    sampled probe tuple; NO_BOUND_FOUND when the scan is exhausted.

    A sample-based upper-degree certificate, not a proof.
    """
    if cap > DELTA_CAP:
        raise SpecMismatch(f"cap {cap} exceeds the difference-operator cap {DELTA_CAP}")
    if not probes:
        raise SpecMismatch("probes must be nonempty")
    for y in probes:
        if y.is_zero():
            raise SpecMismatch("probes must be nonzero")
    zero = domain_spec.zero()
    for n in range(cap + 1):
        if all(delta_many(f, list(tup), zero).is_zero()
               for tup in probe_tuples(probes, n + 1)):
            return n
    return NO_BOUND_FOUND


def _component_evaluator(f, degree: int, zero: FieldElement):
    if degree == 0:
        constant = f(zero)
        return lambda x: constant
    fact = math.factorial(degree)
    return lambda x: delta_many(f, [x] * degree, zero) / fact


def extract_component(f, degree: int, basis_probes: list[FieldElement],
                      top_degree: int, domain_spec: FieldSpec) -> dict:
    """Values of the degree-``degree`` component on the probes.

    The caller supplies ``top_degree`` (a known degree certificate for
    f, e.g. from degree_estimate).  The top component is read off as
    Delta^N_y f(0) / N!; lower ones are obtained by peeling: subtract
    the reconstructed component and recurse.  Raises
    InconsistentPeeling when a residual keeps its degree, which signals
    that f is not a generalized polynomial of the claimed degree on the
    sample.
    """
    if degree > top_degree:
        raise SpecMismatch("requested degree exceeds the known degree bound")
    zero = domain_spec.zero()
    for tup in probe_tuples(basis_probes, top_degree + 1):
        if not delta_many(f, list(tup), zero).is_zero():
            raise InconsistentPeeling(
                f"claimed degree {top_degree} is wrong: differences of order "
                f"{top_degree + 1} do not vanish on the probes")
    current = f
    for n in range(top_degree, degree, -1):
        component = _component_evaluator(current, n, zero)
        previous = current
        current = (lambda g, c: (lambda x: g(x) - c(x)))(previous, component)
        for y in basis_probes:
            if not delta_many(current, [y] * n, zero).is_zero():
                raise InconsistentPeeling(
                    f"residual still has degree {n} at probe {format_element(y)}")
    component = _component_evaluator(current, degree, zero)
    if degree == 0:
        constant = current(zero)
        for y in basis_probes:
            if current(y) != constant:
                raise InconsistentPeeling(
                    f"degree-0 residual is not constant at probe {format_element(y)}")
        return {y: constant for y in basis_probes}
    return {y: component(y) for y in basis_probes}


ADDITIVE_TRANSLATES = "add"
MULTIPLICATIVE_TRANSLATES = "mult"


def variety_rank(f, translates: list[FieldElement], points: list[FieldElement],
                 operation: str = ADDITIVE_TRANSLATES) -> int:
    """Exact rank of the translate-value matrix [f(h_j op g_i)].

    The rank of the sampled matrix is a lower bound for the dimension
    of the variety of f (the linear space spanned by its translates)
    over the codomain field.
    """
    if operation not in (ADDITIVE_TRANSLATES, MULTIPLICATIVE_TRANSLATES):
        raise SpecMismatch(f"unknown translate operation {operation!r}")
    if not translates:
        raise SpecMismatch("need at least one translate")
    if len(points) < len(translates):
        raise SpecMismatch("need at least as many points as translates")
    if operation == MULTIPLICATIVE_TRANSLATES:
        for g in translates:
            if g.is_zero():
                raise SpecMismatch("multiplicative translates must be nonzero")
    matrix = []
    for g in translates:
        if operation == ADDITIVE_TRANSLATES:
            row = [f(h + g) for h in points]
        else:
            row = [f(h * g) for h in points]
        matrix.append(row)
    return matrix_rank(matrix)
