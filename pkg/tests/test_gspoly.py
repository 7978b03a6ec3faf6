import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gstower.errors import InadmissibleCutError, InconclusiveError, ParameterError
from gstower.gspoly import (
    GsPolynomial,
    certified_negativity,
    critical_point,
    cut,
    evaluate,
    format_polynomial,
    is_golod_shafarevich,
    m_lower_bound,
    negativity_sides,
    negativity_witness,
    q_at_tn,
    q_certificate,
    q_polynomial,
    rho_lower_bound,
)

from .oracles import quadratic_negative_on_unit_interval

TOL = F(1, 2**20)


def poly(*coeffs):
    return GsPolynomial.from_coefficients(coeffs)


def check_witness(P, w, tol=TOL):
    assert 0 < w.t0 < 1 and evaluate(P, w.t0) < 0
    assert evaluate(P, w.lo) >= 0
    assert 0 <= w.hi - w.lo <= tol
    # nothing negative on a fine grid left of lo
    for i in range(1, 200):
        t = w.lo * i / 200
        assert evaluate(P, t) >= 0


def test_constant_must_be_one():
    with pytest.raises(ParameterError):
        poly(2, -1)
    with pytest.raises(ParameterError):
        GsPolynomial({0: 1, -1: 3})


def test_eval_examples():
    P = poly(1, -3, 2)
    assert evaluate(P, F(1, 2)) == 0
    assert evaluate(P, F(3, 4)) == F(-1, 8)
    assert evaluate(poly(1, 5, -7, 2), 0) == 1


def test_format():
    assert format_polynomial(poly(1, -3, 2)) == "1 - 3*t + 2*t^2"
    assert format_polynomial(GsPolynomial({0: 1, 1: -1, 3: 1})) == "1 - t + t^3"


def test_witness_examples():
    P = poly(1, -3, 2)
    w = negativity_witness(P, TOL)
    check_witness(P, w)
    assert w.lo <= F(1, 2) <= w.hi
    assert negativity_witness(poly(1, -2, 1), TOL) is None
    for d in (2, 3, 7):
        P = poly(1, -d)
        w = negativity_witness(P, TOL)
        check_witness(P, w)
        assert w.lo <= F(1, d) <= w.hi


def test_tangential_zero_is_not_a_sign_change():
    assert negativity_witness(poly(1, -4, 4), TOL) is None
    # (1-2t)^2 (1-3t): the sign changes only at the simple root 1/3
    P = GsPolynomial.from_coefficients([1, -7, 16, -12])
    w = negativity_witness(P, TOL)
    check_witness(P, w)
    assert w.lo <= F(1, 3) <= w.hi


def test_bad_tolerance():
    with pytest.raises(ParameterError):
        negativity_witness(poly(1, -2), 0)


def test_close_roots_hit_the_floor():
    # two simple roots 2^-45 apart near 1/3, with no coarse dyadic point between
    a = F(1, 3)
    b = a + F(1, 2**45)
    P = GsPolynomial.from_coefficients([1, -(1 / a + 1 / b), 1 / (a * b)])
    assert evaluate(P, (a + b) / 2) < 0
    with pytest.raises(InconclusiveError):
        negativity_witness(P, TOL)


def test_close_roots_split_by_a_dyadic_point():
    # the same gap centred on 1/2 is separated exactly by a bisection midpoint
    a = F(1, 2) - F(1, 2**43)
    b = F(1, 2) + F(1, 2**43)
    P = GsPolynomial.from_coefficients([1, -(1 / a + 1 / b), 1 / (a * b)])
    w = negativity_witness(P, TOL)
    assert evaluate(P, w.t0) < 0
    assert w.lo <= a <= w.hi and evaluate(P, w.lo) >= 0


def test_rho_lower_bound_examples():
    r = rho_lower_bound(poly(1, -3, 2), TOL)
    assert r <= 2 and 2 - r < F(1, 10**5)
    assert rho_lower_bound(poly(1, -2), TOL) <= 2
    assert rho_lower_bound(poly(1, -2, 1), TOL) is None


def test_cut_examples():
    assert cut(poly(1, -5, 1), [2, 2]) == poly(1, -5, 3)
    P = poly(1, -4, 1)
    assert cut(P, []) == P
    for k in range(3):
        assert is_golod_shafarevich(cut(P, [2] * k))
    lost = cut(P, [2, 2, 2])
    assert lost == poly(1, -4, 4)
    assert not is_golod_shafarevich(lost)
    with pytest.raises(InadmissibleCutError):
        cut(P, [1])


def test_q_polynomial_examples():
    assert q_polynomial(50, 339, 100, 3) == GsPolynomial({0: 1, 1: -50, 2: 339, 3: 100})
    assert q_polynomial(5, 7, 0, 3) == poly(1, -5, 7)
    assert negativity_witness(q_polynomial(0, 3, 2, 3), TOL) is None
    assert q_polynomial(1, 2, 3, 3, k=2, exact_k=True).coefficient(9) == 3
    with pytest.raises(ParameterError):
        q_polynomial(-1, 2, 3, 3)


def test_q_at_tn_examples():
    v = q_at_tn(50, 339, 100, 3)
    assert v == 1 - F(2500, 1356) + F(100 * 125000, 8 * 339**3)
    assert v == evaluate(q_polynomial(50, 339, 100, 3), F(50, 678))
    assert v < 0
    assert q_at_tn(4, 4, 0, 3) == 0
    assert q_at_tn(24, 83, 48, 3) < 0
    assert critical_point(50, 339) == F(25, 339)
    with pytest.raises(ParameterError):
        q_at_tn(1, 0, 1, 3)


def test_certified_negativity_examples():
    assert negativity_sides(50, 339, 100, 3) == (574_605_000, 324_165_752)
    assert negativity_sides(24, 83, 48, 3) == (7_936_128, 5_237_848)
    assert certified_negativity(50, 339, 100, 3)
    assert certified_negativity(24, 83, 48, 3)
    assert not certified_negativity(2, 10, 0, 3)
    c = q_certificate(50, 339, 100, 3)
    assert c.certified and c.t_in_unit_interval and c.q_value < 0


def test_m_lower_bound_example():
    m = m_lower_bound(50, 339, 100, 3)
    assert m == 625 - 339 - F(12_500_000, 919_368) - 1
    assert m == F(31189985, 114921)


@settings(max_examples=200, deadline=None)
@given(
    st.integers(1, 400),
    st.integers(1, 5000),
    st.integers(0, 500),
    st.sampled_from([3, 5, 7]),
)
def test_certification_equivalence(D, R, Rp, p):
    if not 0 < F(D, 2 * R) < 1:
        return
    assert certified_negativity(D, R, Rp, p) == (q_at_tn(D, R, Rp, p) < 0)


def test_random_quadratics_against_ground_truth():
    rng = random.Random(20240611)
    for _ in range(300):
        b = F(rng.randint(-60, 60), rng.randint(1, 12))
        c = F(rng.randint(-40, 80), rng.randint(1, 12))
        P = GsPolynomial({0: 1, 1: b, 2: c})
        w = negativity_witness(P, TOL)
        assert (w is not None) == quadratic_negative_on_unit_interval(b, c), (b, c)
        if w is not None:
            check_witness(P, w)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=1, max_size=6))
def test_witness_is_sound(tail):
    P = GsPolynomial.from_coefficients([1] + tail)
    try:
        w = negativity_witness(P, F(1, 2**16))
    except InconclusiveError:
        return
    if w is None:
        for i in range(1, 400):
            assert evaluate(P, F(i, 400)) >= 0
    else:
        check_witness(P, w, F(1, 2**16))
