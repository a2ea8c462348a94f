from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from freestates import algebra as A
from freestates import words as W
from freestates.errors import RankMismatch

from conftest import reduced_words, w

coeffs = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)


@st.composite
def elements(draw, n=2, max_terms=4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        terms[draw(reduced_words(n, 3))] = draw(coeffs)
    return A.AlgebraElement(n, terms)


def test_delta_product_cancels():
    assert A.convolve(A.delta(w("1")), A.delta(w("-1"))).close_to(A.scalar(2, 1.0))


def test_square_of_positive_sum():
    X = A.generator_sum(2)
    sq = X * X
    assert set(sq.terms) == {w("1 1"), w("1 2"), w("2 1"), w("2 2")}
    assert all(c == 1 for c in sq.terms.values())


def test_x_star_x():
    X = A.generator_sum(2)
    got = A.adjoint(X) * X
    expect = A.AlgebraElement(2, {W.identity(2): 2, w("-1 2"): 1, w("-2 1"): 1})
    assert got.close_to(expect, 0.0)


def test_adjoint_examples():
    assert A.adjoint(A.delta(w("1"))).close_to(A.delta(w("-1")))
    assert A.adjoint(A.scalar(2, 2 + 3j)).coefficient(W.identity(2)) == 2 - 3j
    assert A.adjoint(A.generator_sum(2)).close_to(A.delta(w("-1")) + A.delta(w("-2")))


@given(elements(), elements(), elements())
def test_convolution_associative(x, y, z):
    assert ((x * y) * z).close_to(x * (y * z), 1e-9)


@given(elements(), elements())
def test_adjoint_antimultiplicative(x, y):
    assert A.adjoint(x * y).close_to(A.adjoint(y) * A.adjoint(x), 1e-9)


@given(elements())
def test_adjoint_involution(x):
    assert A.adjoint(A.adjoint(x)).close_to(x, 0.0)


def test_normalized_sum_scale_is_exact():
    T = A.normalized_sum(3)
    TT = T * A.adjoint(T)
    assert TT.scale_sq == Fraction(1, 9)
    assert TT.scale == Fraction(1, 3)
    assert TT.coefficient(W.identity(3)) == 1.0


def test_rank_mismatch():
    with pytest.raises(RankMismatch):
        A.delta(w("1", 2)) * A.delta(w("1", 3))


def test_act_examples():
    e = A.basis_vector(W.identity(2))
    assert A.act(A.delta(w("1")), e).entries == {w("1"): 1}
    assert A.act(A.generator_sum(2), e).entries == {w("1"): 1, w("2"): 1}


@pytest.mark.parametrize("k", range(0, 7))
def test_power_of_x_norm(k):
    v = A.act(A.generator_sum(2) ** k, A.basis_vector(W.identity(2)))
    assert v.norm_sq() == 2**k
    assert set(v.entries) == set(W.enumerate_sphere(2, k, "positive_only"))


@given(elements(), st.data())
def test_act_is_representation(x, data):
    y = data.draw(elements())
    v = A.basis_vector(data.draw(reduced_words(2, 3)))
    lhs = A.act(x * y, v)
    rhs = A.act(x, A.act(y, v))
    assert (lhs - rhs).max_abs() <= 1e-9


def test_projections():
    e = A.basis_vector(W.identity(2))
    assert A.project(A.HalfSpace.Splus, e).entries == {}
    v = A.basis_vector(w("-1 2"))
    assert A.project(A.HalfSpace.Sminus, v).entries == v.entries
    mixed = A.basis_vector(w("1")) + A.basis_vector(w("-2"))
    assert A.project(A.HalfSpace.Splus, mixed).entries == {w("1"): 1}


def test_tt_star_on_identity():
    T = A.normalized_sum(2)
    e = A.basis_vector(W.identity(2))
    out = A.act(T * A.adjoint(T), e)
    assert out.entries[W.identity(2)] == pytest.approx(1.0)
    assert out.entries[w("1 -2")] == pytest.approx(0.5)
    assert A.project(A.HalfSpace.Sminus, out).entries == {W.identity(2): pytest.approx(1.0)}


@pytest.mark.parametrize("n,depth", [(2, 3), (3, 2)])
def test_obs_identities(n, depth):
    rep = A.verify_obs_identities(n, depth)
    assert rep.ok and rep.checked > 0


def test_chi_limit_average():
    assert A.chi_limit_average(2, W.identity(2), 5) == 1
    assert A.chi_limit_average(2, w("1"), 5) == pytest.approx(0.8)
    assert A.chi_limit_average(2, w("2"), 100) == 0


@given(elements())
def test_text_round_trip(x):
    assert A.parse_element(A.format_element(x), 2).close_to(x, 0.0)
    assert A.element_from_json(A.element_to_json(x)).close_to(x, 0.0)
