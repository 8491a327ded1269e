"""Exact field arithmetic, canonical forms, parsing and formatting."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polcheck.errors import DenominatorVanishes, DivisionByZero, ParseError, SpecMismatch
from polcheck.fields import (
    FieldElement,
    FieldSpec,
    QuadRat,
    field_arith,
    format_element,
    normalize,
    parse_element,
    substitute,
)
from polcheck.oracle import from_element, matches, o_mul
from polcheck.polys import Poly

Q = FieldSpec.rationals()
Q2 = FieldSpec.quadratic(2)
Q5 = FieldSpec.quadratic(5)
QT = FieldSpec.ratfunc(Q, ["t"])
QTU = FieldSpec.ratfunc(Q2, ["t", "u"])


# -- spec construction ---------------------------------------------------

def test_quadratic_radicand_must_be_squarefree():
    for bad in (0, 1, 4, 12, -8):
        with pytest.raises(SpecMismatch):
            FieldSpec.quadratic(bad)
    FieldSpec.quadratic(-1)
    FieldSpec.quadratic(-6)


def test_ratfunc_rules():
    with pytest.raises(SpecMismatch):
        FieldSpec.ratfunc(QT, ["u"])  # no towers
    with pytest.raises(SpecMismatch):
        FieldSpec.ratfunc(Q, ["t", "t"])
    with pytest.raises(SpecMismatch):
        FieldSpec.ratfunc(Q, ["sqrt"])  # reserved
    with pytest.raises(SpecMismatch):
        FieldSpec.ratfunc(Q, [])


# -- arithmetic examples -------------------------------------------------

def test_add_rationals():
    assert Q.element("1/2") + Q.element("1/3") == Fraction(5, 6)


def test_mul_quadratic_norm_pair():
    # (1+sqrt2)(1-sqrt2) = -1; cross-checked against the naive oracle
    lhs = Q2.element("1+sqrt(2)")
    rhs = Q2.element("1-sqrt(2)")
    product = lhs * rhs
    assert product == Q2.from_int(-1)
    assert matches(product, o_mul(from_element(lhs), from_element(rhs)))


def test_pow_ratfunc():
    result = QT.element("t^2+1") ** 2
    assert format_element(result) == "t^4+2*t^2+1"
    assert result == QT.element("(t^2+1)*(t^2+1)")


def test_field_arith_entry_point():
    assert field_arith("add", Q.element("1/2"), Q.element("1/3")) == Fraction(5, 6)
    assert field_arith("pow", QT.element("t"), -1) == QT.element("1/t")
    with pytest.raises(DivisionByZero):
        field_arith("div", Q.one(), Q.zero())
    with pytest.raises(DivisionByZero):
        field_arith("pow", Q.zero(), -2)
    with pytest.raises(SpecMismatch):
        field_arith("add", Q.one(), Q2.one())


# -- normalization --------------------------------------------------------

def test_normalize_reduces_and_makes_denominator_monic():
    e = QT.element("(2*t^2 + 2*t)/(2*t)")
    assert format_element(e) == "t+1"


def test_normalize_plain_fraction():
    assert normalize((Q, 4, 8)) == Fraction(1, 2)
    assert normalize((Q, 0, 7)) == Q.zero()
    with pytest.raises(DivisionByZero):
        normalize((Q, 1, 0))


def test_normalize_idempotent_on_elements():
    e = QT.element("(t^2-1)/(t^2+2*t+1)")
    assert normalize(e) == e
    assert format_element(e) == "(t-1)/(t+1)"


def test_zero_normalizes_to_canonical_zero():
    e = QT.element("0/(t-1)")
    assert e == QT.zero()
    num, den = e.payload
    assert num.is_zero() and den == Poly.const(1, Fraction(1))


# -- substitution ----------------------------------------------------------

def test_substitute_polynomial_composition():
    assert substitute(QT.element("t^2+1"), {"t": QT.element("t^2")}) == QT.element("t^4+1")


def test_substitute_shift():
    assert substitute(QT.element("1/(t-1)"), {"t": QT.element("t+1")}) == QT.element("1/t")


def test_substitute_denominator_vanishes():
    with pytest.raises(DenominatorVanishes):
        substitute(QT.element("1/(t^2-t)"), {"t": QT.one()})


def test_substitute_requires_all_images():
    with pytest.raises(SpecMismatch):
        substitute(QTU.element("t+u"), {"t": QTU.element("t")})


# -- parsing ----------------------------------------------------------------

def test_parse_fraction_of_polynomials():
    e = parse_element("(t^2+1)/(t-1)", QT)
    num, den = e.payload
    assert format_element(e) == "(t^2+1)/(t-1)"
    assert den.terms[(1,)] == Fraction(1)


def test_parse_quadratic_pair():
    e = parse_element("1+sqrt(2)", Q2)
    assert e.payload == QuadRat(1, 1, 2)


def test_parse_error_position():
    with pytest.raises(ParseError) as err:
        parse_element("t/", QT)
    assert err.value.position == 2


def test_parse_spec_mismatch():
    with pytest.raises(SpecMismatch):
        parse_element("t", Q)
    with pytest.raises(SpecMismatch):
        parse_element("sqrt(3)", Q2)
    with pytest.raises(SpecMismatch):
        parse_element("u", QT)


def test_parse_negative_exponent_forms():
    assert parse_element("t^-1", QT) == QT.element("1/t")
    assert parse_element("t^(-2)", QT) == QT.element("1/t^2")


# -- formatting round trips ---------------------------------------------------

ROUND_TRIP_TEXTS = [
    ("5/6", Q), ("-3", Q), ("0", Q),
    ("1+sqrt(2)", Q2), ("sqrt(2)", Q2), ("-1/2*sqrt(2)", Q2), ("1-2*sqrt(2)", Q2),
    ("t^4+2*t^2+1", QT), ("(t^2+1)/(t-1)", QT), ("1/t", QT), ("t+1", QT),
    ("2*t/(t+1)", QT), ("1/2*t^2", QT),
    ("t*u", QTU), ("1/(t*u)", QTU), ("(1+sqrt(2))*t", QTU),
    ("sqrt(2)*t^2-1/2", QTU), ("t^2*u/(u^2-2)", QTU), ("(1+sqrt(2))/u", QTU),
]


@pytest.mark.parametrize("text,spec", ROUND_TRIP_TEXTS)
def test_format_parse_round_trip(text, spec):
    e = parse_element(text, spec)
    assert parse_element(format_element(e), spec) == e
    assert format_element(e) == text


# -- hypothesis: field axioms --------------------------------------------------

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def rationals_elements():
    return small_fractions.map(Q.from_fraction)


def quadratic_elements():
    return st.tuples(small_fractions, small_fractions).map(
        lambda ab: FieldElement(Q2, QuadRat(ab[0], ab[1], 2)))


def ratfunc_elements():
    coeff = st.integers(min_value=-3, max_value=3)
    poly = st.lists(st.tuples(st.integers(min_value=0, max_value=2), coeff),
                    min_size=1, max_size=3)

    def build(pair):
        num_terms, den_terms = pair
        num = Poly(1, {(e,): Fraction(c) for e, c in num_terms})
        den = Poly(1, {(e,): Fraction(c) for e, c in den_terms})
        if den.is_zero():
            den = Poly.const(1, Fraction(1))
        from polcheck.fields import normalize_fraction

        return normalize_fraction(QT, num, den)

    return st.tuples(poly, poly).map(build)


@pytest.mark.parametrize("elements", [rationals_elements, quadratic_elements, ratfunc_elements])
def test_field_axioms_on_samples(elements):
    @settings(max_examples=40, deadline=None)
    @given(elements(), elements(), elements())
    def axioms(a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        if not a.is_zero():
            assert a * (a.spec.one() / a) == a.spec.one()

    axioms()


@given(quadratic_elements(), quadratic_elements())
@settings(max_examples=40, deadline=None)
def test_quadratic_mul_matches_poly_mod_x2_minus_d(a, b):
    # multiply (a0 + a1 X)(b0 + b1 X) and reduce X^2 -> 2
    a0, a1 = a.payload.a, a.payload.b
    b0, b1 = b.payload.a, b.payload.b
    c0 = a0 * b0 + 2 * a1 * b1
    c1 = a0 * b1 + a1 * b0
    assert (a * b).payload == QuadRat(c0, c1, 2)


@given(ratfunc_elements())
@settings(max_examples=40, deadline=None)
def test_normalize_idempotent_property(e):
    assert normalize(e) == e


@given(ratfunc_elements())
@settings(max_examples=40, deadline=None)
def test_round_trip_property(e):
    assert parse_element(format_element(e), QT) == e


@given(quadratic_elements())
@settings(max_examples=40, deadline=None)
def test_round_trip_quadratic_property(e):
    assert parse_element(format_element(e), Q2) == e
