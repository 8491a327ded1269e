"""The naive oracle: determinism, bounds, and engine agreement."""

from fractions import Fraction

import pytest

from polcheck.errors import SpecMismatch
from polcheck.fields import FieldSpec
from polcheck.forms import Lift, MapOfProduct, ProductSym, eval_form, trace
from polcheck.maps import apply_map, build_derivation, build_endomorphism, identity_map, sum_maps
from polcheck.oracle import (
    Oracle,
    SampleConfig,
    from_element,
    matches,
    o_add,
    o_div,
    o_eq,
    o_is_zero,
    o_mul,
    o_pow,
    oracle_eval,
    random_element,
    sample_elements,
)

Q = FieldSpec.rationals()
Q2 = FieldSpec.quadratic(2)
QT = FieldSpec.ratfunc(Q, ["t"])

CFG = SampleConfig(seed=17, count=10, max_height=5, max_degree=2)


# -- sampling ------------------------------------------------------------

def test_same_seed_same_element():
    assert random_element(QT, CFG, 3) == random_element(QT, CFG, 3)
    assert sample_elements(Q2, CFG) == sample_elements(Q2, CFG)


def test_different_indices_vary():
    draws = {random_element(Q, CFG, i) for i in range(10)}
    assert len(draws) > 3


def test_rational_height_bound():
    for i in range(30):
        e = random_element(Q, SampleConfig(seed=1, count=1, max_height=5, max_degree=0), i)
        assert abs(e.payload.numerator) <= 5 and e.payload.denominator <= 5


def test_ratfunc_shape_bound():
    for i in range(10):
        e = random_element(QT, SampleConfig(seed=2, count=1, max_height=3, max_degree=2), i)
        num, den = e.payload
        assert num.total_degree() <= 2 and den.total_degree() <= 2
        assert not den.is_zero()


def test_config_validation():
    with pytest.raises(SpecMismatch):
        SampleConfig(seed=1, count=0)


# -- naive arithmetic -----------------------------------------------------

def test_cross_multiplication_equality():
    half = from_element(Q.element("1/2"))
    other = o_div(from_element(Q.from_int(2)), from_element(Q.from_int(4)))
    assert o_eq(half, other)
    assert not o_eq(half, from_element(Q.element("1/3")))


def test_radical_reduction():
    s = from_element(Q2.sqrt_element())
    assert o_eq(o_mul(s, s), from_element(Q2.from_int(2)))
    assert o_eq(o_pow(s, 4), from_element(Q2.from_int(4)))


def test_zero_detection():
    e = from_element(QT.element("(t-1)/(t+1)"))
    diff = o_add(e, from_element(-QT.element("(t-1)/(t+1)")))
    assert o_is_zero(o_mul(diff, from_element(QT.element("t^5"))))


# -- the oracle expression evaluator ----------------------------------------

def test_norm_of_square_is_one():
    conj = build_endomorphism(Q2, conjugate_base=True)
    norm = trace(ProductSym((identity_map(Q2), conj)))
    value = oracle_eval("N((1+sqrt(2))^2)", {"N": norm}, Q2)
    assert matches(Q2.one(), value)


def test_naive_derivative():
    d = build_derivation(QT, {"t": QT.one()})
    value = oracle_eval("d(t^2+1)", {"d": d}, QT)
    assert matches(QT.element("2*t"), value)


def test_golden_difference_value():
    # f(x) = a(x^2) with a = d + id; f(t^2) - f(t)^2 = -4 t^2
    d = build_derivation(QT, {"t": QT.one()})
    f = trace(MapOfProduct(sum_maps(d, identity_map(QT)), 2))
    value = oracle_eval("f(t^2)-f(t)^2", {"f": f}, QT)
    assert matches(QT.element("-4*t^2"), value)


def test_oracle_eval_rejects_unknown_names():
    with pytest.raises(SpecMismatch):
        oracle_eval("g(2)", {}, Q)


# -- engine agreement on random samples ----------------------------------------

def test_map_application_agreement():
    d = build_derivation(QT, {"t": QT.element("t")})
    s = build_endomorphism(QT, {"t": QT.element("t^2+1")})
    oracle = Oracle(QT)
    for m in (d, s, sum_maps(d, identity_map(QT))):
        for i, x in enumerate(sample_elements(QT, CFG)):
            assert matches(apply_map(m, x), oracle.apply_map(m, from_element(x)))


def test_form_evaluation_agreement_including_lift():
    conj = build_endomorphism(Q2, conjugate_base=True)
    base = ProductSym((identity_map(Q2), conj))
    lifted = Lift(base, 2)
    oracle = Oracle(Q2)
    args = sample_elements(Q2, SampleConfig(seed=23, count=4, max_height=2, max_degree=0))
    assert matches(eval_form(lifted, args),
                   oracle.eval_form(lifted, [from_element(a) for a in args]))


def test_genpoly_and_delta_agreement():
    from polcheck.forms import delta_many
    from polcheck.genpoly import genpoly_from

    conj = build_endomorphism(Q2, conjugate_base=True)
    norm = trace(ProductSym((identity_map(Q2), conj)))
    p = genpoly_from([norm])
    oracle = Oracle(Q2)
    ys = sample_elements(Q2, SampleConfig(seed=29, count=3, max_height=2, max_degree=0))
    engine = delta_many(p, ys, Q2.zero())
    naive = oracle.delta_many(lambda v: oracle.eval_genpoly(p, v),
                              [from_element(y) for y in ys],
                              from_element(Q2.zero()))
    assert matches(engine, naive)
