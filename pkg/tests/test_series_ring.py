from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from bkforms.errors import (
    FrequencyCapExceeded,
    InvalidPolynomial,
    NonInvertibleLeadingCoefficient,
    NotDivisible,
    UnrepresentableResult,
)
from bkforms.series_ring import (
    CircleFunction,
    CollarSeries,
    LaurentSeries,
    RealPolynomial,
    expand_dP_over_Pk,
    integrate_over_circle,
    residue,
    series_add,
    series_derivative,
    series_mul,
    series_reciprocal,
)

THETAS = np.arange(64) / 64


def cos(m, a=1.0):
    return CircleFunction(0.0, [(m, a)])


def sin(m, a=1.0):
    return CircleFunction(0.0, [], [(m, a)])


small = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
terms = st.lists(st.tuples(st.integers(1, 6), small), max_size=3, unique_by=lambda t: t[0])


@st.composite
def circle_functions(draw):
    return CircleFunction(draw(small), draw(terms), draw(terms))


# -- CircleFunction ---------------------------------------------------------


def test_circle_function_normalizes_terms():
    f = CircleFunction(1.0, [(3, 2.0), (1, 0.0)], [(2, -1.0)])
    assert f.cosines == [(3, 2.0)]
    assert f.sines == [(2, -1.0)]
    assert f.max_frequency == 3
    assert integrate_over_circle(f) == 1.0


def test_circle_function_rejects_bad_frequencies():
    with pytest.raises(ValueError):
        CircleFunction(0.0, [(0, 1.0)])
    with pytest.raises(ValueError):
        CircleFunction(0.0, [(2, 1.0), (2, 3.0)])
    with pytest.raises(FrequencyCapExceeded):
        CircleFunction(0.0, [(65, 1.0)])


def test_cos_squared_matches_sampling():
    f = cos(1) * cos(1)
    assert f.allclose(CircleFunction(0.5, [(2, 0.5)]))
    assert np.allclose(f(THETAS), np.cos(2 * np.pi * THETAS) ** 2)


@given(circle_functions(), circle_functions())
@settings(max_examples=60, deadline=None)
def test_circle_product_matches_pointwise(f, g):
    assert np.allclose((f * g)(THETAS), f(THETAS) * g(THETAS), atol=1e-9)
    assert np.allclose((f + g)(THETAS), f(THETAS) + g(THETAS), atol=1e-12)


@given(circle_functions())
@settings(max_examples=40, deadline=None)
def test_circle_derivative_matches_finite_difference(f):
    h = 1e-6
    fd = (f(THETAS + h) - f(THETAS - h)) / (2 * h)
    assert np.allclose(f.derivative()(THETAS), fd, atol=1e-4)


def test_circle_sign():
    assert CircleFunction(2.0, [(1, 1.0)]).sign() == 1
    assert CircleFunction(-2.0, [(3, 1.5)]).sign() == -1
    assert CircleFunction(0.5, [(1, 1.0)]).sign() == 0
    assert CircleFunction(0.0).sign() == 0


def test_circle_dict_round_trip():
    f = CircleFunction(1.5, [(2, 0.25)], [(1, -3.0)])
    assert CircleFunction.from_dict(f.to_dict()) == f


# -- CollarSeries ------------------------------------------------------------


def test_ring_identity():
    a = CollarSeries([1.0, 1.0], 2)
    b = CollarSeries([1.0, -1.0], 2)
    assert series_mul(a, b) == CollarSeries([1.0, 0.0, -1.0], 2)


def test_cos_y_squared():
    s = CollarSeries([0.0, cos(1)], 4)
    sq = s * s
    assert sq.coeff(2).allclose(CircleFunction(0.5, [(2, 0.5)]))
    for j in (0, 1, 3, 4):
        assert sq.coeff(j).is_zero()


def test_derivative_of_cube():
    s = CollarSeries.monomial(3, 5)
    d = series_derivative(s)
    assert d == CollarSeries.monomial(2, 4, 3.0)


@st.composite
def collar_series(draw, order=4):
    return CollarSeries([draw(circle_functions()) for _ in range(order + 1)], order)


@given(collar_series(), collar_series())
@settings(max_examples=40, deadline=None)
def test_collar_product_matches_polynomial_product(a, b):
    # both factors are exact polynomials of degree 4; the product is exact to order 8
    p = a.with_order(8) * b.with_order(8)
    ys = np.linspace(-0.7, 0.7, 5)
    for y in ys:
        assert np.allclose(p(y, THETAS), a(y, THETAS) * b(y, THETAS), atol=1e-8)


@given(collar_series(), collar_series(), collar_series())
@settings(max_examples=25, deadline=None)
def test_collar_ring_axioms(a, b, c):
    assert ((a * b) * c).allclose(a * (b * c), atol=1e-8)
    assert (a * (b + c)).allclose(a * b + a * c, atol=1e-8)
    assert series_add(a, b).allclose(b + a, atol=0.0)


def test_reciprocal_scalar_lead():
    u = CollarSeries([1.0, cos(1)], 6)
    inv = series_reciprocal(u)
    assert (u * inv).allclose(CollarSeries.constant(1.0, 6), atol=1e-12)
    # 1 / (1 + y cos) = sum (-y cos)^j
    for y in (0.1, -0.2):
        assert np.allclose(inv(y, THETAS), 1 / (1 + y * np.cos(2 * np.pi * THETAS)), atol=1e-5)


def test_reciprocal_errors():
    with pytest.raises(NonInvertibleLeadingCoefficient):
        series_reciprocal(CollarSeries([0.0, 1.0], 3))
    with pytest.raises(UnrepresentableResult):
        series_reciprocal(CollarSeries([CircleFunction(2.0, [(1, 1.0)])], 3))


def test_divide_by_y():
    s = CollarSeries([0.0, 0.0, 1.0, 2.0], 3)
    assert s.divide_by_y(2) == CollarSeries([1.0, 2.0], 1)
    with pytest.raises(NotDivisible):
        s.divide_by_y(3)


def test_compose_with_polynomial():
    a = CollarSeries([1.0, 2.0, 3.0], 6)
    inner = CollarSeries([0.0, 1.0, 1.0], 6)
    out = a.compose(inner)
    y = sp.symbols("y")
    ref = sp.Poly(sp.expand(1 + 2 * (y + y**2) + 3 * (y + y**2) ** 2), y).all_coeffs()[::-1]
    assert np.allclose(out.theta_means()[: len(ref)].real, [float(c) for c in ref])


def test_power_fractional():
    u = CollarSeries([4.0, 1.0], 5)
    r = u.power(0.5)
    assert (r * r).allclose(u, atol=1e-12)


# -- LaurentSeries -----------------------------------------------------------


def test_laurent_residue_and_principal_part():
    s = LaurentSeries([1.0, 2.0, 3.0, 4.0], valuation=-2)
    assert residue(s) == 2.0
    assert s.principal_part().coeffs == [1.0, 2.0]
    assert not s.has_zero_principal_part()


def test_laurent_product_valuation():
    a = LaurentSeries([1.0, 1.0], valuation=-2, order=3)
    b = LaurentSeries([2.0, 0.0], valuation=-1, order=3)
    assert (a * b).valuation == -3


def test_laurent_reciprocal():
    s = LaurentSeries([1.0, 1.0, 0.0, 0.0, 0.0], valuation=1)
    inv = s.reciprocal()
    assert inv.valuation == -1
    assert np.allclose([inv.coefficient(d) for d in range(-1, 2)], [1.0, -1.0, 1.0])


# -- RealPolynomial and dP/P^i ------------------------------------------------


def test_real_polynomial_basics():
    P = RealPolynomial([0.0, 1.0, 2.0])
    assert P(2.0) == 10.0
    assert P.derivative() == RealPolynomial([1.0, 4.0])
    assert P.compose(RealPolynomial([0.0, 2.0])) == RealPolynomial([0.0, 2.0, 8.0])


def test_expand_matches_sympy():
    y = sp.symbols("y")
    P = y + y**2
    for i in (1, 2, 3):
        ref = sp.series(sp.diff(P, y) / P**i, y, 0, 4).removeO()
        got = expand_dP_over_Pk(RealPolynomial([0, 1, 1]), i, order=3, exact=True)
        for d in range(-i, 4):
            assert got.coefficient(d) == Fraction(str(ref.coeff(y, d)))


def test_expand_example_values():
    got = expand_dP_over_Pk(RealPolynomial([0.0, 1.0, 1.0]), 3, order=1)
    assert np.allclose(got.coeffs, [1.0, -1.0, 0.0, 2.0, -5.0])


def test_expand_rejects_invalid():
    with pytest.raises(InvalidPolynomial):
        expand_dP_over_Pk(RealPolynomial([1.0, 1.0]), 1)
    with pytest.raises(InvalidPolynomial):
        expand_dP_over_Pk(RealPolynomial([0.0, -1.0]), 1)


def _contour_coefficients(func, radius, n=256):
    """Laurent coefficients of ``func`` about 0 by the trapezoid rule on |z| = radius."""
    z = radius * np.exp(2j * np.pi * np.arange(n) / n)
    c = np.fft.fft(func(z)) / n
    return lambda d: (c[d % n] / radius**d).real


@pytest.mark.parametrize("seed", range(20))
def test_residues_against_contour_integral(seed):
    rng = np.random.default_rng(seed)
    coeffs = [0.0, rng.uniform(0.5, 2.0), *rng.normal(scale=0.5, size=int(rng.integers(0, 5)))]
    P = RealPolynomial(coeffs)
    roots = np.roots(coeffs[1:][::-1]) if len(coeffs) > 2 else np.array([])
    radius = 0.3 * (np.min(np.abs(roots)) if roots.size else 1.0)
    dP = P.derivative()
    for i in range(1, 7):
        oracle = _contour_coefficients(lambda z: dP(z) / P(z) ** i, radius)
        got = expand_dP_over_Pk(P, i, order=2)
        for d in range(-i, 1):
            assert got.coefficient(d) == pytest.approx(oracle(d), abs=1e-7 * max(1.0, abs(oracle(d))))
