"""Tests for exact q/a/t arithmetic: ring laws, canonical forms,
unit-monomial comparison, and series round trips."""

import pytest
from hypothesis import given, settings, strategies as st

from linkhom.algebra import (
    A,
    DotEqResult,
    InvalidOperandError,
    LaurentPoly,
    ONE,
    ONE_MINUS_Q2,
    Q,
    RatFunc,
    T,
    TriSeries,
    UnsupportedExpansionError,
    dot_eq,
    ratfunc_reconstruct,
    rf_arith,
    series_expand,
)


def _unknot():
    return RatFunc(ONE + A * Q**2, ONE_MINUS_Q2)


exponents = st.integers(min_value=-4, max_value=4)
coeffs = st.integers(min_value=-9, max_value=9)
polys = st.dictionaries(
    st.tuples(exponents, exponents, exponents), coeffs, max_size=6
).map(LaurentPoly)


# -- LaurentPoly --------------------------------------------------------


def test_zero_terms_dropped():
    p = LaurentPoly({(1, 0, 0): 0, (0, 1, 0): 2})
    assert list(p.terms) == [(0, 1, 0)]


def test_operator_coercion_builds_paper_values():
    p = 1 + A * Q**2
    assert p.coeff(0, 0, 0) == 1 and p.coeff(2, 1, 0) == 1
    assert str(p) == "1 + q^2*a"


@given(polys, polys, polys)
@settings(max_examples=150)
def test_ring_laws(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@given(polys)
def test_additive_inverse(x):
    assert (x + (-x)).is_zero()


@given(polys, polys)
@settings(max_examples=100)
def test_divexact_inverts_multiplication(x, y):
    if x.is_zero() or y.is_zero():
        return
    prod = x * y
    q = prod.divexact(y)
    assert q is not None and q == x


def test_divexact_rejects_nondivisor():
    assert (ONE + A * Q**2).divexact(ONE_MINUS_Q2) is None
    assert (ONE + Q).divexact(LaurentPoly.const(2)) is None


def test_subst_t():
    p = T**2 * Q**2 + T * A - 3
    assert p.subst_t(-1) == Q**2 - A - 3
    p2 = LaurentPoly.mono(t=-3, coeff=5)
    assert p2.subst_t(-1) == LaurentPoly.const(-5)


def test_json_round_trip():
    p = Q**-2 + 3 * A * T - LaurentPoly.mono(1, 1, 1)
    assert LaurentPoly.from_json(p.to_json()) == p


# -- RatFunc ------------------------------------------------------------


def test_rf_examples_from_contract():
    P = _unknot()
    assert rf_arith("add", P, RatFunc.zero()) == P
    assert rf_arith("mul", RatFunc(ONE, ONE_MINUS_Q2), RatFunc(ONE_MINUS_Q2)) == RatFunc.one()
    trefoil = rf_arith("mul", P, RatFunc(Q**2 + A * Q**2 + A * Q**6))
    assert trefoil == RatFunc((ONE + A * Q**2) * (Q**2 + A * Q**2 + A * Q**6), ONE_MINUS_Q2)


def test_rf_div_by_zero():
    with pytest.raises(InvalidOperandError):
        rf_arith("div", RatFunc.one(), RatFunc.zero())


def test_rf_reduction_cancels_shared_factor():
    x = RatFunc((ONE + Q) * ONE_MINUS_Q2, ONE_MINUS_Q2**2)
    assert x.den == ONE_MINUS_Q2
    assert x.num == ONE + Q


def test_rf_normalization_shifts_out_monomials():
    x = RatFunc((Q**-2) * (ONE + A), (Q**2) * ONE_MINUS_Q2)
    # joint monomial content removed, denominator trail positive
    assert x == RatFunc(ONE + A, Q**4 * ONE_MINUS_Q2)
    assert x.num.content_monomial() == (0, 0, 0)
    assert x.den.trail()[1] > 0


def test_rf_cross_multiplication_equality():
    x = RatFunc(ONE + Q, ONE - Q)
    y = RatFunc((ONE + Q) ** 2, (ONE - Q) * (ONE + Q))
    assert x == y


@given(polys, polys)
@settings(max_examples=60)
def test_rf_sub_self_is_zero(n, d):
    if d.is_zero():
        return
    x = RatFunc(n, d)
    assert (x - x).is_zero()


# -- dot_eq -------------------------------------------------------------


def test_dot_eq_kink_witnesses():
    P = _unknot()
    pos = P.shift(q=-2) * RatFunc(LaurentPoly.const(-1))
    res = dot_eq(P, pos)
    assert res.kind == "equal_up_to_unit"
    assert (res.sign, res.q, res.a, res.t) == (-1, -2, 0, 0)
    assert res.witness() == "-q^-2"
    neg = P.shift(q=2, a=1)
    res = dot_eq(P, neg)
    assert res.kind == "equal_up_to_unit"
    assert (res.sign, res.q, res.a, res.t) == (1, 2, 1, 0)
    assert res.witness() == "q^2*a"


def test_dot_eq_unequal_and_zero_cases():
    assert dot_eq(RatFunc.one(), RatFunc(ONE + Q**2)).kind == "unequal"
    assert dot_eq(RatFunc.zero(), RatFunc.zero()).kind == "equal"
    assert dot_eq(RatFunc.zero(), RatFunc.one()).kind == "unequal"


@given(polys, st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.sampled_from([1, -1]))
@settings(max_examples=80)
def test_dot_eq_detects_every_unit(p, i, j, k, sign):
    if p.is_zero():
        return
    x = RatFunc(p, ONE_MINUS_Q2)
    y = x.shift(i, j, k) * RatFunc(LaurentPoly.const(sign))
    res = dot_eq(x, y)
    assert res
    if (sign, i, j, k) == (1, 0, 0, 0):
        assert res.kind == "equal"
    else:
        assert (res.sign, res.q, res.a, res.t) == (sign, i, j, k)


@given(polys, polys)
@settings(max_examples=60)
def test_dot_eq_symmetric_status(p, r):
    if p.is_zero() or r.is_zero():
        return
    x, y = RatFunc(p), RatFunc(r)
    assert (dot_eq(x, y).kind == "unequal") == (dot_eq(y, x).kind == "unequal")


# -- series -------------------------------------------------------------


def test_series_geometric():
    s = series_expand(RatFunc(ONE, ONE_MINUS_Q2), 6)
    assert s.dims == {(0, 0, 0): 1, (2, 0, 0): 1, (4, 0, 0): 1, (6, 0, 0): 1}


def test_series_unknot_head():
    s = series_expand(_unknot(), 4)
    assert s.dims == {
        (0, 0, 0): 1,
        (2, 0, 0): 1,
        (4, 0, 0): 1,
        (2, 1, 0): 1,
        (4, 1, 0): 1,
    }


def test_series_vertex_loop_value_head():
    s = series_expand(RatFunc(ONE + A * Q**4, ONE_MINUS_Q2), 6)
    assert s.dims[(4, 1, 0)] == 1 and s.dims[(6, 1, 0)] == 1
    assert (2, 1, 0) not in s.dims


def test_series_rejects_bad_denominator():
    with pytest.raises(UnsupportedExpansionError):
        series_expand(RatFunc(ONE, ONE + A), 5)
    with pytest.raises(UnsupportedExpansionError):
        series_expand(RatFunc(ONE, LaurentPoly.const(2) - Q), 5)


def test_series_negative_exponents():
    x = _unknot().shift(q=-4)
    s = series_expand(x, 4)
    assert s.dims[(-4, 0, 0)] == 1 and s.dims[(-2, 0, 0)] == 1


def test_reconstruct_round_trip():
    P = _unknot()
    assert ratfunc_reconstruct(series_expand(P, 20), 2) == P
    assert ratfunc_reconstruct(TriSeries({}, 10), 3) == RatFunc.zero()


def test_reconstruct_polynomial_needs_margin():
    val = RatFunc(A * Q**2 + T**2 * Q**2 + T**2 * A * Q**4) * _unknot()
    got = ratfunc_reconstruct(series_expand(val, 30), 2)
    assert got == val


def test_reconstruct_refuses_unstable_series():
    # 1/(1-q^3) is not of the (1-q^2)^c shape: every window stays occupied
    s = series_expand(RatFunc(ONE, ONE - Q**3), 20)
    assert ratfunc_reconstruct(s, 3) is None


@given(st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 2), st.integers(0, 2)), st.integers(-5, 5), max_size=5), st.integers(0, 2))
@settings(max_examples=60)
def test_reconstruct_inverts_expand(numd, c):
    num = LaurentPoly({(2 * q, a, t): v for (q, a, t), v in numd.items()})
    if num.is_zero():
        return
    val = RatFunc(num, ONE_MINUS_Q2**c)
    s = series_expand(val, 24)
    got = ratfunc_reconstruct(s, 3)
    assert got is not None and got == val


# -- TriSeries ----------------------------------------------------------


def test_triseries_shift_and_subst():
    s = TriSeries({(0, 0, 0): 1, (2, 0, 1): 2}, 10)
    sh = s.shift(q=2, a=1, t=-1)
    assert sh.dims == {(2, 1, -1): 1, (4, 1, 0): 2} and sh.cutoff == 12
    assert s.subst_t(-1).dims == {(0, 0, 0): 1, (2, 0, 0): -2}


def test_triseries_mul_poly_cutoff():
    s = series_expand(RatFunc(ONE, ONE_MINUS_Q2), 10)
    t = s.mul_poly(ONE_MINUS_Q2)
    assert t.dims == {(0, 0, 0): 1}
    t2 = s.mul_poly(Q**-2)
    assert t2.cutoff == 8


def test_triseries_agreement_window():
    s1 = series_expand(RatFunc(ONE, ONE_MINUS_Q2), 10)
    s2 = series_expand(RatFunc(ONE, ONE_MINUS_Q2), 6)
    assert s1.agrees_with(s2)
    s3 = s2.add(TriSeries({(4, 0, 0): 1}, 6))
    assert not s1.agrees_with(s3)


def test_triseries_json_round_trip():
    s = series_expand(_unknot(), 8)
    back = TriSeries.from_json(s.to_json())
    assert back.dims == s.dims and back.cutoff == s.cutoff
    assert back.closed_form == s.closed_form


def test_dot_eq_result_json():
    r = DotEqResult("equal_up_to_unit", -1, 2, 0, 1)
    assert r.to_json() == {"kind": "equal_up_to_unit", "sign": -1, "q": 2, "a": 0, "t": 1}
