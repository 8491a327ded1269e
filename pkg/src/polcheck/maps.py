"""Additive maps built from field endomorphisms, derivations, rational
scalar combinations and compositions.

Every constructible map here is additive by structural induction:
endomorphisms and derivations are additive wherever defined, and
scaling, summing and composing preserve additivity.  Multiplicativity
and the Leibniz rule are never assumed for composites; they are only
ever checked by :func:`verify_map_laws`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidImage, SpecMismatch, UnsupportedSpec
from .fields import (
    RATFUNC,
    RATIONALS,
    QUADRATIC,
    FieldElement,
    FieldSpec,
    conjugate_element,
    eval_poly_at,
    format_element,
    normalize_fraction,
)
from .polys import Poly


class AdditiveMap:
    """Base class; nodes are immutable and evaluation is pure."""

    domain_spec: FieldSpec
    codomain_spec: FieldSpec

    def __call__(self, x: FieldElement) -> FieldElement:
        return apply_map(self, x)

    def __add__(self, other: "AdditiveMap") -> "AdditiveMap":
        return sum_maps(self, other)

    def __sub__(self, other: "AdditiveMap") -> "AdditiveMap":
        return sum_maps(self, scale_map(-1, other))

    def __neg__(self) -> "AdditiveMap":
        return scale_map(-1, self)

    def __rmul__(self, factor) -> "AdditiveMap":
        return scale_map(factor, self)

    def __matmul__(self, inner: "AdditiveMap") -> "AdditiveMap":
        return compose_maps(self, inner)

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Identity(AdditiveMap):
    spec: FieldSpec

    @property
    def domain_spec(self):
        return self.spec

    @property
    def codomain_spec(self):
        return self.spec

    def describe(self):
        return "id"


@dataclass(frozen=True)
class Zero(AdditiveMap):
    spec: FieldSpec

    @property
    def domain_spec(self):
        return self.spec

    @property
    def codomain_spec(self):
        return self.spec

    def describe(self):
        return "zero"


@dataclass(frozen=True)
class Endo(AdditiveMap):
    """Field endomorphism given by generator images, with optional
    conjugation of the (quadratic) base field."""

    spec: FieldSpec
    images: tuple[tuple[str, FieldElement], ...]
    conjugate_base: bool = False

    @property
    def domain_spec(self):
        return self.spec

    @property
    def codomain_spec(self):
        return self.spec

    def image_map(self) -> dict[str, FieldElement]:
        return dict(self.images)

    def describe(self):
        if self.spec.kind == QUADRATIC:
            return "conj" if self.conjugate_base else "id"
        parts = [f"{name} -> {format_element(img)}" for name, img in self.images]
        if self.conjugate_base:
            parts.append("conj")
        return "hom(" + ", ".join(parts) + ")"


@dataclass(frozen=True)
class Derivation(AdditiveMap):
    """Derivation of a purely transcendental extension, defined by its
    values on the generators and extended by the quotient rule."""

    spec: FieldSpec
    images: tuple[tuple[str, FieldElement], ...]

    @property
    def domain_spec(self):
        return self.spec

    @property
    def codomain_spec(self):
        return self.spec

    def describe(self):
        parts = [f"{name} -> {format_element(img)}" for name, img in self.images]
        return "der(" + ", ".join(parts) + ")"


@dataclass(frozen=True)
class Scale(AdditiveMap):
    factor: FieldElement
    inner: AdditiveMap

    @property
    def domain_spec(self):
        return self.inner.domain_spec

    @property
    def codomain_spec(self):
        return self.inner.codomain_spec

    def describe(self):
        return f"{format_element(self.factor)}*{_wrap(self.inner)}"


@dataclass(frozen=True)
class MapSum(AdditiveMap):
    terms: tuple[AdditiveMap, ...]

    @property
    def domain_spec(self):
        return self.terms[0].domain_spec

    @property
    def codomain_spec(self):
        return self.terms[0].codomain_spec

    def describe(self):
        return " + ".join(_wrap(t) for t in self.terms)


@dataclass(frozen=True)
class Compose(AdditiveMap):
    outer: AdditiveMap
    inner: AdditiveMap

    @property
    def domain_spec(self):
        return self.inner.domain_spec

    @property
    def codomain_spec(self):
        return self.outer.codomain_spec

    def describe(self):
        return f"{_wrap(self.outer)} @ {_wrap(self.inner)}"


def _wrap(m: AdditiveMap) -> str:
    text = m.describe()
    if isinstance(m, (MapSum,)):
        return f"({text})"
    return text


def identity_map(spec: FieldSpec) -> Identity:
    return Identity(spec)


def zero_map(spec: FieldSpec) -> Zero:
    return Zero(spec)


def scale_map(factor, inner: AdditiveMap) -> AdditiveMap:
    if isinstance(factor, (int, Fraction)):
        factor = inner.codomain_spec.from_fraction(Fraction(factor))
    if factor.spec != inner.codomain_spec:
        raise SpecMismatch("scalar lives outside the codomain field")
    return Scale(factor, inner)


def sum_maps(*terms: AdditiveMap) -> AdditiveMap:
    flat: list[AdditiveMap] = []
    for term in terms:
        flat.extend(term.terms if isinstance(term, MapSum) else (term,))
    first = flat[0]
    for term in flat[1:]:
        if term.domain_spec != first.domain_spec or term.codomain_spec != first.codomain_spec:
            raise SpecMismatch("cannot add maps with different domains or codomains")
    return MapSum(tuple(flat))


def compose_maps(outer: AdditiveMap, inner: AdditiveMap) -> AdditiveMap:
    if outer.domain_spec != inner.codomain_spec:
        raise SpecMismatch("composition requires matching inner codomain and outer domain")
    return Compose(outer, inner)


def build_endomorphism(spec: FieldSpec, images: dict[str, FieldElement] | None = None,
                       conjugate_base: bool = False) -> AdditiveMap:
    """Field endomorphism on ``spec``.

    For Q(sqrt d) the only choices are identity and conjugation, so
    ``images`` must be empty.  For function fields the listed generator
    images must be non-constant (a constant image is not injective, so
    it does not extend to the fraction field); unlisted generators map
    to themselves.
    """
    images = dict(images or {})
    if spec.kind == RATIONALS:
        if images or conjugate_base:
            raise SpecMismatch("the rationals admit only the identity endomorphism")
        return Identity(spec)
    if spec.kind == QUADRATIC:
        if images:
            raise SpecMismatch("quadratic endomorphisms take no generator images")
        if not conjugate_base:
            return Identity(spec)
        return Endo(spec, (), True)
    if conjugate_base and spec.base.kind != QUADRATIC:
        raise UnsupportedSpec("base field has no conjugation")
    resolved = []
    for name in spec.variables:
        img = images.pop(name, None)
        if img is None:
            img = spec.var(name)
        elif img.spec != spec:
            raise SpecMismatch(f"image of {name!r} lives in a different field")
        num, den = img.payload
        if num.is_const() and den.is_const():
            raise InvalidImage(
                f"image of {name!r} is the constant {format_element(img)}; not a field embedding")
        resolved.append((name, img))
    if images:
        raise SpecMismatch(f"unknown indeterminates in images: {sorted(images)}")
    return Endo(spec, tuple(resolved), conjugate_base)


def build_derivation(spec: FieldSpec, images: dict[str, FieldElement]) -> AdditiveMap:
    """Derivation determined by its values on the transcendental
    generators.  Only function fields carry nonzero derivations here:
    on Q and Q(sqrt d) every derivation vanishes (d(2)=0 forces
    2*sqrt(d)*d(sqrt d)=0), so callers must use the zero map there.
    """
    if spec.kind != RATFUNC:
        raise UnsupportedSpec(
            f"{spec.describe()} carries only the zero derivation; use the zero map")
    images = dict(images)
    resolved = []
    for name in spec.variables:
        img = images.pop(name, None)
        if img is None:
            img = spec.zero()
        elif img.spec != spec:
            raise SpecMismatch(f"image of {name!r} lives in a different field")
        resolved.append((name, img))
    if images:
        raise SpecMismatch(f"unknown indeterminates in images: {sorted(images)}")
    return Derivation(spec, tuple(resolved))


def apply_map(m: AdditiveMap, x: FieldElement) -> FieldElement:
    """Evaluate a map tree at an element, exactly."""
    if x.spec != m.domain_spec:
        raise SpecMismatch("argument does not belong to the map's domain")
    if isinstance(m, Identity):
        return x
    if isinstance(m, Zero):
        return m.codomain_spec.zero()
    if isinstance(m, Endo):
        return _apply_endo(m, x)
    if isinstance(m, Derivation):
        return _apply_derivation(m, x)
    if isinstance(m, Scale):
        return m.factor * apply_map(m.inner, x)
    if isinstance(m, MapSum):
        total = m.codomain_spec.zero()
        for term in m.terms:
            total = total + apply_map(term, x)
        return total
    if isinstance(m, Compose):
        return apply_map(m.outer, apply_map(m.inner, x))
    raise TypeError(f"unknown map node {m!r}")


def _apply_endo(m: Endo, x: FieldElement) -> FieldElement:
    spec = m.spec
    if spec.kind == RATIONALS:
        return x
    if spec.kind == QUADRATIC:
        return conjugate_element(x) if m.conjugate_base else x
    if m.conjugate_base:
        x = conjugate_element(x)
    from .fields import substitute

    return substitute(x, m.image_map())


def _apply_derivation(m: Derivation, x: FieldElement) -> FieldElement:
    spec = m.spec
    num, den = x.payload
    den_sq = den * den
    total = spec.zero()
    for i, (name, image) in enumerate(m.images):
        if image.is_zero():
            continue
        dnum = num.derivative(i)
        dden = den.derivative(i)
        partial = normalize_fraction(spec, dnum * den - num * dden, den_sq)
        total = total + partial * image
    return total


ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"
LEIBNIZ = "leibniz"

_LAWS = (ADDITIVE, MULTIPLICATIVE, LEIBNIZ)


@dataclass(frozen=True)
class LawReport:
    """Outcome of checking one algebraic law on sample pairs."""

    law: str
    passed: bool
    checked: int
    witness: tuple[FieldElement, FieldElement, FieldElement, FieldElement] | None = None

    def describe(self) -> str:
        if self.passed:
            return f"{self.law}: pass ({self.checked} pairs)"
        x, y, lhs, rhs = self.witness
        return (f"{self.law}: violated at x = {format_element(x)}, y = {format_element(y)}: "
                f"lhs = {format_element(lhs)}, rhs = {format_element(rhs)}, "
                f"diff = {format_element(lhs - rhs)}")


def verify_map_laws(m: AdditiveMap, law: str,
                    samples: list[tuple[FieldElement, FieldElement]]) -> LawReport:
    """Check one law exactly on every sample pair; violations are
    reported (first offending pair with both sides), never raised."""
    if law not in _LAWS:
        raise ValueError(f"unknown law {law!r}; expected one of {_LAWS}")
    if not samples:
        raise ValueError("samples must be nonempty")
    for x, y in samples:
        if law == ADDITIVE:
            lhs = apply_map(m, x + y)
            rhs = apply_map(m, x) + apply_map(m, y)
        elif law == MULTIPLICATIVE:
            lhs = apply_map(m, x * y)
            rhs = apply_map(m, x) * apply_map(m, y)
        else:
            lhs = apply_map(m, x * y)
            rhs = apply_map(m, x) * y + x * apply_map(m, y)
        if lhs != rhs:
            return LawReport(law, False, len(samples), (x, y, lhs, rhs))
    return LawReport(law, True, len(samples))
