from fractions import Fraction

import pytest
from hypothesis import given

from conftest import words
from gentorsion.alexander import (
    KNOWN_POLYNOMIALS,
    ContradictionError,
    GroupRingElement,
    LaurentPolynomial,
    abelianize,
    alexander_polynomial,
    fox_derivative,
    orderability_report,
    parse_polynomial,
    positive_real_roots,
)
from gentorsion.presentations import (
    CATALOG_NAMES,
    PresentationError,
    abelianization,
    catalog,
    load_presentation,
    parse_presentation,
    torus_group,
)
from gentorsion.words import IDENTITY, Word, concat

KNOTS = [n for n in CATALOG_NAMES if n != "klein"]


def poly(text):
    return parse_polynomial(text)


def test_parse_and_render():
    p = poly("2 - 5t + 2t^2")
    assert p == poly("2 - 5*t + 2*t^2") == poly("[2, -5, 2]") == poly("2t^2 - 5t + 2")
    assert p.to_text() == "2 - 5*t + 2*t^2"
    assert p.pretty() == "2t^2 - 5t + 2"
    assert parse_polynomial(p.to_text()) == p
    with pytest.raises(ValueError):
        poly("2 - 5x")


def test_normalization():
    p = LaurentPolynomial({-3: -1, -2: 3, -1: -1})
    n = p.normalize()
    assert n == poly("1 - 3t + t^2")
    assert n.normalize() == n


def test_fox_examples():
    x, y = Word.gen(0), Word.gen(1)
    assert fox_derivative(concat(x, y), 0) == GroupRingElement({IDENTITY: 1})
    assert fox_derivative(~x, 0) == GroupRingElement({~x: -1})
    d = fox_derivative(x ** 4, 0)
    assert d == GroupRingElement({x ** k: 1 for k in range(4)})
    assert fox_derivative(y, 0) == GroupRingElement()


@given(words(2, 8), words(2, 8))
def test_fox_product_rule(u, v):
    for g in range(2):
        lhs = fox_derivative(concat(u, v), g)
        rhs = fox_derivative(u, g) + fox_derivative(v, g).left_multiply(u)
        assert lhs == rhs


@pytest.mark.parametrize(
    "source,expected",
    [
        ("4_1", "t^2 - 3t + 1"),
        ("5_2", "2t^2 - 3t + 2"),
        ("3_1", "t^2 - t + 1"),
        ("5_1", "t^4 - t^3 + t^2 - t + 1"),
        ("T(3,4)", "t^6 - t^5 + t^3 - t + 1"),
        ("3_1#5_2", "2t^4 - 5t^3 + 7t^2 - 5t + 2"),
    ],
)
def test_alexander_values(source, expected):
    assert alexander_polynomial(load_presentation(source)) == poly(expected)


@pytest.mark.parametrize("p,q", [(2, 3), (2, 5), (3, 4), (3, 5), (2, 7)])
def test_torus_closed_form(p, q):
    num = (poly(f"t^{p * q}") - poly("1")) * (poly("t") - poly("1"))
    den = (poly(f"t^{p}") - poly("1")) * (poly(f"t^{q}") - poly("1"))
    assert alexander_polynomial(torus_group(p, q)) == num.exact_div(den).normalize()


def test_alexander_errors():
    with pytest.raises(PresentationError):
        alexander_polynomial(catalog("klein"))
    with pytest.raises(PresentationError):
        alexander_polynomial(parse_presentation("<a,b,c | aBAb>"))


@pytest.mark.parametrize("name", KNOTS)
def test_knot_sanity(name):
    d = alexander_polynomial(catalog(name))
    assert abs(d(1)) == 1
    assert d.is_palindromic_up_to_sign()


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_fundamental_identity(name):
    P = catalog(name)
    ab = abelianization(P)
    weights = ab.weights
    for r in P.relators:
        total = LaurentPolynomial()
        for j in range(P.rank):
            x_minus_one = LaurentPolynomial({weights[j]: 1}) - LaurentPolynomial({0: 1})
            total = total + abelianize(fox_derivative(r, j), weights) * x_minus_one
        assert not total


def test_roots_sixone_exact():
    rep = positive_real_roots(poly("2 - 5t + 2t^2"))
    assert rep.positive_real_roots == 2
    assert rep.exact_roots == [Fraction(1, 2), Fraction(2)]
    assert rep.intervals == [(Fraction(1, 2), Fraction(1, 2)), (Fraction(2), Fraction(2))]


def test_roots_counts():
    assert positive_real_roots(poly("2t^2 - 3t + 2")).real_roots == 0
    assert positive_real_roots(poly(KNOWN_POLYNOMIALS["6_3"][0])).real_roots == 0
    rep = positive_real_roots(poly(KNOWN_POLYNOMIALS["6_2"][0]))
    assert rep.positive_real_roots == 2 and rep.real_roots == 2
    for a, b in rep.intervals:
        assert b - a <= Fraction(1, 1024)
    assert any(a <= Fraction("2.15372") <= b for a, b in rep.intervals)
    # the smaller root is 0.4643..., the reciprocal of 2.1537...
    assert any(a <= Fraction("0.4643126") <= b for a, b in rep.intervals)


def test_roots_with_multiplicity_and_negatives():
    rep = positive_real_roots(poly("t - 1") * poly("t - 1") * poly("t + 2"))
    assert rep.positive_real_roots == 1 and rep.real_roots == 2
    with pytest.raises(ValueError):
        positive_real_roots(LaurentPolynomial())


def test_orderability_verdicts():
    r = orderability_report(catalog("4_1"))
    assert r.verdict == "bi-orderable" and "fibred-real-positive" in r.criterion
    r = orderability_report(catalog("5_2"))
    assert r.verdict == "not bi-orderable"
    text, fibred = KNOWN_POLYNOMIALS["6_2"]
    assert orderability_report(polynomial=poly(text), fibred=fibred).verdict == "inconclusive"
    r = orderability_report(catalog("3_1"))
    assert r.verdict == "not bi-orderable" and "fibred-no-positive" in r.criterion
    assert r.inputs["positive_real_roots"] == 0


def test_orderability_needs_fibredness():
    with pytest.raises(ValueError):
        orderability_report(polynomial=poly("2 - 5t + 2t^2"))
    r = orderability_report(polynomial=poly("2 - 5t + 2t^2"), strict=False)
    assert r.verdict == "inconclusive"


def test_orderability_contradiction_hook():
    with pytest.raises(ContradictionError):
        orderability_report(catalog("4_1"), torsion_verified=True)


def test_trivial_polynomial_fixture():
    # untwisted double of the trefoil: trivial polynomial, no criterion applies
    text, fibred = KNOWN_POLYNOMIALS["wh_3_1"]
    r = orderability_report(polynomial=poly(text), fibred=fibred)
    assert r.polynomial == poly("1") and r.verdict == "inconclusive"
