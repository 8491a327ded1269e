"""Equation checking and the constructive classifiers."""

from fractions import Fraction

import pytest

from polcheck.errors import DenominatorVanishes, DictionaryInsufficient, SpecMismatch
from polcheck.fields import FieldSpec, format_element
from polcheck.forms import LinComb, MapOfProduct, ProductSym, eval_form, trace
from polcheck.funceq import (
    HOLDS_ON_SAMPLE,
    HOLDS_ON_SPAN,
    NOT_APPLICABLE,
    REFUTED,
    LogExp,
    PolySpec,
    TwoExp,
    affine_check,
    check_pointwise,
    check_power_identity,
    check_symmetrized,
    check_values,
    classify_quadratic_square,
    degree_precheck,
    derive_power_coefficients,
    levicivita_verify,
    quartic_form_value,
    quartic_solve,
)
from polcheck.genpoly import genpoly_from
from polcheck.maps import (
    apply_map,
    build_derivation,
    build_endomorphism,
    identity_map,
    scale_map,
    sum_maps,
)
from polcheck.oracle import Oracle, SampleConfig, from_element, matches, sample_elements
from polcheck.session import default_probes, default_span_generators

Q = FieldSpec.rationals()
Q2 = FieldSpec.quadratic(2)
QT = FieldSpec.ratfunc(Q, ["t"])

CONJ = build_endomorphism(Q2, conjugate_base=True)
NORM_FORM = ProductSym((identity_map(Q2), CONJ))
NORM = trace(NORM_FORM)
DDT = build_derivation(QT, {"t": QT.one()})
A_MAP = sum_maps(DDT, identity_map(QT))
F28_FORM = MapOfProduct(A_MAP, 2)
F28 = trace(F28_FORM)
E = Q2.element("1+sqrt(2)")


def xk(spec, k, coeff=None, side="domain"):
    return PolySpec.monomial(spec, k, coeff, side)


# -- degree precheck ----------------------------------------------------------

def test_precheck_pass_and_fail():
    assert degree_precheck(2, xk(Q, 2), xk(Q, 2, side="codomain")).passed
    report = degree_precheck(2, xk(Q, 2), xk(Q, 3, side="codomain"))
    assert not report.passed and report.verdict == NOT_APPLICABLE
    assert degree_precheck(1, xk(Q, 1), xk(Q, 1, side="codomain")).passed


def test_polyspec_shape():
    p = PolySpec.from_coefficients([Q.zero(), Q.one(), Q.zero()])
    assert p.degree == 1
    assert p.describe() == "x"
    assert xk(Q, 3, Q.from_int(2)).describe() == "2*x^3"
    assert p.monomial_parts() == (1, Q.one())
    assert PolySpec.from_coefficients([Q.one(), Q.one()]).monomial_parts() is None


# -- pointwise checks -----------------------------------------------------------

def test_norm_square_holds_pointwise():
    report = check_pointwise(NORM, xk(Q2, 2), xk(Q2, 2, side="codomain"), [E])
    assert report.verdict == HOLDS_ON_SAMPLE


def test_example28_refuted_with_witness():
    report = check_pointwise(F28, xk(QT, 2), xk(QT, 2, side="codomain"), [QT.element("t")])
    assert report.verdict == REFUTED
    w = report.witnesses[0]
    assert w.difference == QT.element("-4*t^2")


def test_zero_function_holds_for_zero_fixing_q():
    zero_poly = genpoly_from([], Q, Q)
    q = PolySpec.from_coefficients([Q.zero(), Q.from_int(5), Q.one()], side="codomain")
    report = check_pointwise(zero_poly, xk(Q, 2), q, [Q.one(), Q.from_int(2)])
    assert report.verdict == HOLDS_ON_SAMPLE


def test_denominator_vanishes_is_skipped_and_noted():
    # dependent images are only caught lazily, at application time
    qtu = FieldSpec.ratfunc(Q, ["t", "u"])
    s = build_endomorphism(qtu, {"t": qtu.element("t"), "u": qtu.element("t")})
    f = trace(ProductSym((s,)))
    samples = [qtu.element("1/(t-u)"), qtu.element("t*u")]
    report = check_pointwise(f, xk(qtu, 1), xk(qtu, 1, side="codomain"), samples)
    assert report.verdict == HOLDS_ON_SAMPLE
    assert "skipped" in report.sample_description
    assert any(w.note for w in report.witnesses)


def test_refutation_soundness_against_oracle():
    report = check_pointwise(F28, xk(QT, 2), xk(QT, 2, side="codomain"),
                             [QT.element("t"), QT.element("t+1")])
    oracle = Oracle(QT)
    p = genpoly_from([F28])
    for w in report.witnesses:
        ox = from_element(w.input)
        lhs = oracle.eval_genpoly(p, oracle.eval_polyspec(xk(QT, 2), ox))
        rhs = oracle.eval_polyspec(xk(QT, 2, side="codomain"), oracle.eval_genpoly(p, ox))
        assert matches(w.lhs, lhs) and matches(w.rhs, rhs)
        assert not matches(w.difference - w.difference, from_element(w.difference))


# -- symmetrized span checks ------------------------------------------------------

def test_norm_span_certificate():
    report = check_symmetrized(NORM, xk(Q2, 2), xk(Q2, 2, side="codomain"),
                               default_span_generators(Q2))
    assert report.verdict == HOLDS_ON_SPAN


def test_example28_span_refuted_with_tuple_witness():
    report = check_symmetrized(F28, xk(QT, 2), xk(QT, 2, side="codomain"),
                               [QT.one(), QT.element("t")])
    assert report.verdict == REFUTED
    assert isinstance(report.witnesses[0].input, tuple)


def test_zero_monomial_span_holds():
    from polcheck.maps import zero_map

    z = trace(MapOfProduct(zero_map(Q2), 2))
    report = check_symmetrized(z, xk(Q2, 2), xk(Q2, 2, side="codomain"), [Q2.one(), E])
    assert report.verdict == HOLDS_ON_SPAN


def test_span_requires_monomial_sides():
    p = PolySpec.from_coefficients([Q2.one(), Q2.one()])  # 1 + x
    report = check_symmetrized(NORM, p, xk(Q2, 1, side="codomain"), [Q2.one()])
    assert report.verdict == NOT_APPLICABLE
    report = check_symmetrized(NORM, xk(Q2, 2, Q2.from_int(2)),
                               xk(Q2, 2, side="codomain"), [Q2.one()])
    assert report.verdict == NOT_APPLICABLE


def test_span_consistency_implies_pointwise_on_span_elements():
    gens = default_span_generators(Q2)
    span_report = check_symmetrized(NORM, xk(Q2, 2), xk(Q2, 2, side="codomain"), gens)
    assert span_report.verdict == HOLDS_ON_SPAN
    # rational combinations of the generators
    combos = [gens[0] + gens[1], Q2.from_fraction(Fraction(2, 3)) * gens[2],
              gens[0] - gens[2] + gens[1]]
    pointwise = check_pointwise(NORM, xk(Q2, 2), xk(Q2, 2, side="codomain"), combos)
    assert pointwise.verdict == HOLDS_ON_SAMPLE


# -- Lemma families ------------------------------------------------------------------

def _qt_endos():
    return (build_endomorphism(QT, {"t": QT.element("t^2")}),
            build_endomorphism(QT, {"t": QT.element("t+1")}))


@pytest.mark.parametrize("k", [2, 3])
def test_products_of_homomorphisms_satisfy_power_identity(k):
    s, u = _qt_endos()
    cases = [
        (trace(ProductSym((identity_map(Q2), CONJ))), Q2),
        (trace(ProductSym((s, u))), QT),
    ]
    for monomial, spec in cases:
        gens = default_span_generators(spec)
        report = check_symmetrized(monomial, xk(spec, k), xk(spec, k, side="codomain"), gens)
        assert report.verdict == HOLDS_ON_SPAN, (k, spec.describe(), report.detail)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_homomorphism_pairs_hold_pointwise_up_to_fourth_power(k):
    s, u = _qt_endos()
    cases = [(Q2, [(identity_map(Q2), CONJ), (CONJ, CONJ)]),
             (QT, [(s, u), (s, s), (u, identity_map(QT))])]
    for spec, pairs in cases:
        from polcheck.session import default_probes

        for phi1, phi2 in pairs:
            f = trace(ProductSym((phi1, phi2)))
            report = check_pointwise(f, xk(spec, k), xk(spec, k, side="codomain"),
                                     default_probes(spec))
            assert report.verdict == HOLDS_ON_SAMPLE, (spec.describe(), k)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_derivation_power_family(n, k):
    # f(x) = d(x^n) satisfies f(x^k) = k x^((k-1) n) f(x), checked
    # pointwise with the right side supplied as an expression.
    f = trace(MapOfProduct(DDT, n))
    samples = [x for x in sample_elements(QT, SampleConfig(seed=21, count=20,
                                                           max_height=3, max_degree=2))
               if not x.is_zero()]
    lhs = lambda x: f(x ** k)
    rhs = lambda x: QT.from_int(k) * x ** ((k - 1) * n) * f(x)
    report = check_values(lhs, rhs, samples)
    assert report.verdict == HOLDS_ON_SAMPLE, report.witnesses


# -- quadratic classification -----------------------------------------------------------

def test_classify_norm_two_homomorphisms():
    report = classify_quadratic_square(NORM_FORM, [identity_map(Q2), CONJ],
                                       default_probes(Q2))
    assert report.verdict == HOLDS_ON_SAMPLE
    c = report.classification
    assert c.case_tag == "two independent homomorphisms"
    assert c.f_at_1 == Q2.one()
    assert set(c.factor_descriptors()) == {"id", "conj"}
    phi1, phi2 = c.factors
    for p in default_probes(Q2):
        assert eval_form(NORM_FORM, [p, p]) == apply_map(phi1, p) * apply_map(phi2, p)


def test_classify_squared_homomorphism():
    form = ProductSym((identity_map(Q), identity_map(Q)))
    report = classify_quadratic_square(form, [identity_map(Q)], default_probes(Q))
    assert report.verdict == HOLDS_ON_SAMPLE
    assert report.classification.case_tag == "single homomorphism squared"


def test_classify_example28_refuted_with_quartic_witness():
    report = classify_quadratic_square(F28_FORM, [identity_map(QT)], default_probes(QT))
    assert report.verdict == REFUTED
    w = report.witnesses[0]
    assert isinstance(w.input, tuple) and len(w.input) == 4
    # the oracle confirms the quartic form is nonzero at the witness
    oracle = Oracle(QT)
    x1, x2, x3, x4 = [from_element(a) for a in w.input]
    from polcheck.oracle import o_add, o_mul, o_neg, o_is_zero

    f2 = lambda u, v: oracle.eval_form(F28_FORM, [u, v])
    naive = o_add(o_add(f2(o_mul(x1, x2), o_mul(x3, x4)),
                        f2(o_mul(x1, x3), o_mul(x2, x4))),
                  f2(o_mul(x1, x4), o_mul(x2, x3)))
    naive = o_add(naive, o_neg(o_add(o_add(o_mul(f2(x1, x2), f2(x3, x4)),
                                            o_mul(f2(x1, x3), f2(x2, x4))),
                                      o_mul(f2(x1, x4), f2(x2, x3)))))
    assert not o_is_zero(naive)
    assert matches(w.lhs, naive)


def test_classify_zero_form():
    from polcheck.maps import zero_map

    form = MapOfProduct(zero_map(Q), 2)
    report = classify_quadratic_square(form, [identity_map(Q)], default_probes(Q))
    assert report.verdict == HOLDS_ON_SAMPLE
    assert report.classification.case_tag == "zero function"
    assert report.classification.f_at_1.is_zero()


def test_classify_dictionary_insufficient():
    with pytest.raises(DictionaryInsufficient):
        classify_quadratic_square(NORM_FORM, [identity_map(Q2)], default_probes(Q2))


def test_classify_round_trip_certificate():
    s, u = _qt_endos()
    form = ProductSym((s, u))
    report = classify_quadratic_square(form, [s, u, identity_map(QT)], default_probes(QT))
    assert report.verdict == HOLDS_ON_SAMPLE
    phi1, phi2 = report.classification.factors
    f = trace(form)
    for p in default_probes(QT):
        assert f(p) == report.classification.f_at_1 * apply_map(phi1, p) * apply_map(phi2, p)


# -- power identity corollary ---------------------------------------------------------

def test_negative_norm_passes_cubic():
    neg = trace(LinComb(((Q2.from_int(-1), NORM_FORM),)))
    report = check_power_identity(neg, 3, default_span_generators(Q2))
    assert report.verdict == HOLDS_ON_SPAN
    assert report.classification.f_at_1 == Q2.from_int(-1)


def test_negative_norm_fails_square_gate():
    neg = trace(LinComb(((Q2.from_int(-1), NORM_FORM),)))
    report = check_power_identity(neg, 2, default_span_generators(Q2))
    assert report.verdict == REFUTED
    assert "root of unity" in report.detail


def test_norm_passes_cubic_with_derived_constants():
    report = check_power_identity(NORM, 3, default_span_generators(Q2))
    assert report.verdict == HOLDS_ON_SPAN
    extras = dict(report.classification.extras)
    assert extras["alpha"] == "-1" and extras["beta"] == "2"


def test_derived_constants_match_theorem_for_unit_value():
    alpha, beta = derive_power_coefficients(2, Q.one())
    assert alpha == Q.from_int(-1) and beta == Q.from_int(2)


# -- affine remark -----------------------------------------------------------------------

def test_affine_conditions_hold_for_product_form():
    form = ProductSym((identity_map(Q), identity_map(Q)))
    report = affine_check(form, Q.from_int(3), Q.zero(), Q.from_int(9), Q.zero(),
                          default_probes(Q))
    assert report.verdict == HOLDS_ON_SAMPLE
    assert all(c.holds for c in report.conditions)


def test_affine_nonzero_b_contradiction():
    form = ProductSym((identity_map(Q), identity_map(Q)))
    report = affine_check(form, Q.from_int(3), Q.one(), Q.from_int(9), Q.one(),
                          default_probes(Q))
    assert report.verdict == REFUTED
    assert not report.conditions[0].holds


def test_affine_zero_form_trivially_holds():
    from polcheck.maps import zero_map

    form = MapOfProduct(zero_map(Q), 2)
    report = affine_check(form, Q.from_int(3), Q.one(), Q.from_int(9), Q.zero(),
                          default_probes(Q))
    assert report.verdict == HOLDS_ON_SAMPLE


# -- quartic equation f(x^2) = a(x)^4 ------------------------------------------------------

@pytest.mark.parametrize("c,scalar", [(1, 1), (2, 16), (-3, 81)])
def test_quartic_solve_scalar_identity(c, scalar):
    a = scale_map(c, identity_map(Q))
    report = quartic_solve(a, default_probes(Q))
    assert report.verdict == HOLDS_ON_SAMPLE
    assert report.classification.f_at_1 == Q.from_int(scalar)
    assert report.classification.factors[0].describe() == "id"


def test_quartic_solve_rejects_example28_map():
    report = quartic_solve(A_MAP, default_probes(QT))
    assert report.verdict == REFUTED
    assert report.witnesses[0].input == QT.element("t")


def test_quartic_solve_dictionary_insufficient():
    s = build_endomorphism(QT, {"t": QT.element("t^2")})
    with pytest.raises(DictionaryInsufficient):
        quartic_solve(s, default_probes(QT), dictionary=[identity_map(QT)])


def test_quartic_candidate_matches_oracle():
    a = scale_map(2, identity_map(Q))
    oracle = Oracle(Q)
    one = from_element(Q.one())
    for p in default_probes(Q):
        engine = apply_map(a, p) ** 4
        naive = oracle.apply_map(a, from_element(p))
        from polcheck.oracle import o_mul

        naive4 = o_mul(o_mul(naive, naive), o_mul(naive, naive))
        assert matches(engine, naive4)


# -- Levi-Civita decompositions --------------------------------------------------------------

def test_twoexp_half_sum_of_conjugates():
    half = Q2.from_fraction(Fraction(1, 2))
    a = sum_maps(scale_map(half, identity_map(Q2)), scale_map(half, CONJ))
    report = levicivita_verify(a, TwoExp(half, half, identity_map(Q2), CONJ),
                               default_probes(Q2))
    assert report.verdict == HOLDS_ON_SAMPLE


def test_logexp_for_plain_derivation():
    report = levicivita_verify(DDT, LogExp(identity_map(QT), DDT, QT.zero()),
                               default_probes(QT))
    assert report.verdict == HOLDS_ON_SAMPLE


def test_logexp_with_unit_constant():
    # a = d + id = id(d(x)) + 1*id(x)
    report = levicivita_verify(A_MAP, LogExp(identity_map(QT), DDT, QT.one()),
                               default_probes(QT))
    assert report.verdict == HOLDS_ON_SAMPLE


def test_twoexp_mismatch_witness():
    report = levicivita_verify(identity_map(Q2),
                               TwoExp(Q2.one(), Q2.one(), identity_map(Q2), CONJ),
                               default_probes(Q2))
    assert report.verdict == REFUTED
    assert report.witnesses
