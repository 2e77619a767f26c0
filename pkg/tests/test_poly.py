from fractions import Fraction

from hypothesis import given, strategies as st

from lightlike.poly import RationalPolynomial

from strategies import rationals


@st.composite
def polys(draw, nvars=2):
    n = draw(st.integers(0, 4))
    items = [(draw(st.tuples(*[st.integers(0, 3)] * nvars)), draw(rationals)) for _ in range(n)]
    return RationalPolynomial.from_terms(nvars, items)


points = st.tuples(rationals, rationals)


def test_hessian_entries_by_hand():
    x = RationalPolynomial.variable(1, 0)
    f, h = x * x, x * x * x
    assert f.derivative(0).derivative(0)((1,)) == 2
    assert h.derivative(0).derivative(0)((1,)) == 6


def test_zero_terms_are_dropped():
    p = RationalPolynomial.from_terms(2, [((1, 0), Fraction(1)), ((1, 0), Fraction(-1))])
    assert p.is_zero() and p.degree == 0


@given(polys(), polys(), points)
def test_ring_homomorphism(p, q, pt):
    assert (p + q)(pt) == p(pt) + q(pt)
    assert (p * q)(pt) == p(pt) * q(pt)
    assert (p - q)(pt) == p(pt) - q(pt)


@given(polys(), polys())
def test_leibniz(p, q):
    for i in range(2):
        assert (p * q).derivative(i) == p.derivative(i) * q + p * q.derivative(i)


@given(polys())
def test_mixed_partials_commute(p):
    assert p.derivative(0).derivative(1) == p.derivative(1).derivative(0)


@given(polys())
def test_json_round_trip(p):
    items = [(t["exponents"], Fraction(t["num"], t["den"])) for t in p.to_json()]
    assert RationalPolynomial.from_terms(2, items) == p
