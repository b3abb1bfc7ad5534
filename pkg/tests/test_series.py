import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ffw.combinatorics import GaussianRational, double_factorial_odd
from ffw.cylinder import Polynomial, poly_eval_exact
from ffw.montecarlo import WienerMCConfig
from ffw.oracle import hermite_rule, quad_tensor
from ffw.series import (
    SmoothFunctionalSpec,
    compositions,
    l_r_diagnostic,
    maclaurin_evaluator,
    series_fft_full,
    series_fft_paper,
    truncated_maclaurin,
    wiener_integral_truncation,
)

I = GaussianRational(0, 1)
EXP = SmoothFunctionalSpec(1, 1, 1)


def u(n, j, e=1):
    return Polynomial.var(n, j, e)


def test_compositions():
    got = sorted(compositions(3, 2))
    assert got == [(0, 3), (1, 2), (2, 1), (3, 0)]
    assert len(list(compositions(4, 3))) == math.comb(6, 2)


def test_truncated_maclaurin_examples():
    assert truncated_maclaurin(EXP, 2) == 1 + u(1, 0) + Fraction(1, 2) * u(1, 0, 2)
    assert truncated_maclaurin(SmoothFunctionalSpec(2, 0, 1), 1) == u(2, 0) + u(2, 1)
    s = u(2, 0) + u(2, 1)
    assert truncated_maclaurin(SmoothFunctionalSpec(2, 1, 1), 2) == 1 + s + Fraction(1, 2) * (
        u(2, 0, 2) + 2 * u(2, 0) * u(2, 1) + u(2, 1, 2)
    )


@pytest.mark.parametrize("n, r", [(1, 5), (2, 4), (3, 3)])
def test_truncated_maclaurin_term_count_and_expansion(n, r):
    spec = SmoothFunctionalSpec(n, 2, Fraction(-3, 2))
    poly = truncated_maclaurin(spec, r)
    assert len(poly) == 1 + sum(math.comb(n + k - 1, k) for k in range(1, r + 1))
    s = sum((u(n, j) for j in range(n)), Polynomial.zero(n))
    brute = Polynomial.constant(n, 2)
    for k in range(1, r + 1):
        brute = brute + Fraction(-3, 2) * Fraction(1, math.factorial(k)) * s**k
    assert poly == brute


def test_wiener_integral_truncation_examples():
    assert wiener_integral_truncation(EXP, 2) == Fraction(3, 2)
    assert wiener_integral_truncation(SmoothFunctionalSpec(3, Fraction(5, 7), 2), 1) == Fraction(5, 7)
    value = wiener_integral_truncation(EXP, 12)
    assert value == sum(Fraction(1, 2**l * math.factorial(l)) for l in range(7))


def test_wiener_integral_monotone_and_convergent():
    values = [wiener_integral_truncation(EXP, r) for r in range(1, 31)]
    assert all(a <= b for a, b in zip(values, values[1:]))
    assert abs(float(values[-1]) - math.exp(0.5)) < 1e-15


@pytest.mark.parametrize("n, r", [(1, 6), (2, 5), (3, 4)])
def test_wiener_integral_matches_quadrature(n, r):
    spec = SmoothFunctionalSpec(n, Fraction(1, 3), Fraction(2, 5))
    quad = quad_tensor(maclaurin_evaluator(spec, r), n, hermite_rule(12))
    assert float(wiener_integral_truncation(spec, r)) == pytest.approx(quad, rel=1e-12)


def test_series_fft_paper_examples():
    spec = SmoothFunctionalSpec(2, Fraction(3, 4), Fraction(5))
    assert series_fft_paper(spec, 1, 2).substituted == Fraction(3, 4)
    v = u(1, 0)
    assert series_fft_paper(EXP, 2, 1).substituted == 1 + Fraction(1, 2) * (v**2 + I)
    zero = SmoothFunctionalSpec(1, 0, 0)
    for r in (1, 2, 7):
        assert series_fft_paper(zero, r, 3).substituted.is_zero()
    with pytest.raises(ValueError):
        series_fft_paper(EXP, 2, 0)


def test_series_fft_full_examples():
    v = u(1, 0)
    assert series_fft_full(EXP, 1, 5).substituted == 1 + v
    assert series_fft_full(EXP, 2, 1).substituted == 1 + v + Fraction(1, 2) * (v**2 + I)
    assert series_fft_full(SmoothFunctionalSpec(2, Fraction(2, 3), 0), 6, 1).substituted == Fraction(2, 3)
    with pytest.raises(ValueError):
        series_fft_full(EXP, 2, 0)


def test_series_fft_paper_hand_expansion_r4():
    # h0 + T(u^2)/2! + T(u^4)/4! with tau = i/q
    v, tau = u(1, 0), Polynomial.tau(1)
    expected = 1 + Fraction(1, 2) * (v**2 + tau) + Fraction(1, 24) * (v**4 + 6 * tau * v**2 + 3 * tau**2)
    assert series_fft_paper(EXP, 4, None).poly == expected


def test_odd_r_branch():
    for r in (1, 3, 5, 7):
        assert series_fft_paper(EXP, r, 1).poly == (
            series_fft_paper(EXP, r - 1, 1).poly if r > 1 else Polynomial.constant(1, 1)
        )
        assert series_fft_paper(EXP, r, 1, printed_odd_branch=True).poly == Polynomial.constant(1, 1)
    assert series_fft_paper(EXP, 4, 1, printed_odd_branch=True).poly == series_fft_paper(EXP, 4, 1).poly


specs = st.builds(
    SmoothFunctionalSpec,
    st.integers(1, 3),
    st.fractions(min_value=-3, max_value=3, max_denominator=5),
    st.fractions(min_value=-3, max_value=3, max_denominator=5),
)


def _all_even_part(p):
    return Polynomial(p.dimension, {k: c for k, c in p.items() if all(e % 2 == 0 for e in k[0])})


@given(specs, st.integers(1, 8), st.fractions(min_value=-4, max_value=4, max_denominator=3).filter(bool))
def test_paper_and_full_agree_on_even_monomials(spec, r, q):
    # the transform keeps the parity of every exponent, so the even-monomial
    # part of the full series must be exactly the even-only series
    paper = series_fft_paper(spec, r, q).substituted
    full = series_fft_full(spec, r, q).substituted
    assert paper == _all_even_part(full)


@given(specs, st.integers(1, 8))
def test_full_series_constant_term_is_wiener_integral(spec, r):
    # lambda = 1 and y = 0: the transform is the plain Wiener integral
    poly = series_fft_full(spec, r, None).poly
    assert poly_eval_exact(poly, [0] * spec.dimension, 1) == wiener_integral_truncation(spec, r)


def test_full_series_is_termwise_transform():
    spec = SmoothFunctionalSpec(2, 1, 1)
    expected = Polynomial.zero(2)
    for (a, _), c in truncated_maclaurin(spec, 3).items():
        factor = Polynomial.constant(2, c)
        for j, e in enumerate(a):
            # E[(sqrt(tau) Z + v)^e] expanded by hand through binomials
            tau = Polynomial.tau(2)
            part = Polynomial.zero(2)
            for s in range(0, e + 1, 2):
                weight = math.comb(e, s) * double_factorial_odd(s // 2)
                part = part + weight * tau ** (s // 2) * Polynomial.var(2, j, e - s)
            factor = factor * part
        expected = expected + factor
    assert series_fft_full(spec, 3, None).poly == expected


def test_l_r_zero_when_h_is_h_r():
    spec = SmoothFunctionalSpec(2, 1, 1)
    est = l_r_diagnostic(spec, maclaurin_evaluator(spec, 4), 4, 1.3, WienerMCConfig(1000, seed=2))
    assert est.mean == 0.0 and est.std_error == 0.0


def test_l_r_exp_small_at_r12():
    est = l_r_diagnostic(EXP, np.exp, 12, 1.0, WienerMCConfig(100_000, seed=17))
    # tail bound: sum_{k > 12} E|Z|^k / k!
    tail = sum(2 ** (k / 2) * math.gamma((k + 1) / 2) / math.sqrt(math.pi) / math.factorial(k) for k in range(13, 60))
    assert est.mean <= 1e-3
    assert est.mean <= tail


def test_l_r_decreases_with_r():
    cfg = WienerMCConfig(100_000, seed=23)
    low = l_r_diagnostic(EXP, np.exp, 2, 1.0, cfg)
    high = l_r_diagnostic(EXP, np.exp, 6, 1.0, cfg)
    assert low.mean - high.mean > 3 * math.hypot(low.std_error, high.std_error)


def test_exponential_model_derivatives():
    spec = SmoothFunctionalSpec(2, Fraction(1, 2), 3)
    h = spec.exponential_model()
    assert h(np.array(0.0), np.array(0.0)) == pytest.approx(0.5)
    eps = 1e-6
    assert (h(eps, 0.0) - h(-eps, 0.0)) / (2 * eps) == pytest.approx(3.0, rel=1e-6)


def test_bad_order():
    with pytest.raises(ValueError):
        truncated_maclaurin(EXP, 0)
    with pytest.raises(ValueError):
        l_r_diagnostic(EXP, np.exp, 2, 0.0, WienerMCConfig(100))
