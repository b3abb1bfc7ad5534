import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ffw.combinatorics import GaussianRational
from ffw.cylinder import (
    DimensionError,
    MonomialFunctional,
    Polynomial,
    dumps,
    from_json_obj,
    loads,
    poly_add,
    poly_eval,
    poly_eval_exact,
    poly_mul,
    pretty_print,
    substitute_tau_iq,
    to_json_obj,
)

v1, tau = Polynomial.var(1, 0), Polynomial.tau(1)
V1, V2, T2 = Polynomial.var(2, 0), Polynomial.var(2, 1), Polynomial.tau(2)


def test_add_examples():
    assert poly_add(v1**2, -(v1**2)).is_zero()
    assert tau + tau == 2 * tau
    assert poly_add(V1**2 + T2, V2**2) == Polynomial(2, {((2, 0), 0): 1, ((0, 2), 0): 1, ((0, 0), 1): 1})


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        poly_add(v1, V1)
    with pytest.raises(DimensionError):
        poly_mul(v1, V1)


def test_mul_examples():
    p = v1**2 + tau
    assert poly_mul(p, Polynomial.constant(1, 1)) == p
    hand = Polynomial(
        2,
        {((2, 2), 0): 1, ((2, 0), 1): 1, ((0, 2), 1): 1, ((0, 0), 2): 1},
    )
    assert poly_mul(V1**2 + T2, V2**2 + T2) == hand
    assert poly_mul(v1**2 + tau, v1**2 - tau) == v1**4 - tau**2


def test_zero_coefficients_are_dropped():
    p = Polynomial(1, {((2,), 0): 0, ((1,), 0): GaussianRational()})
    assert p.is_zero() and len(p) == 0


def test_eval_examples():
    assert poly_eval(v1**2 + tau, [2], 0) == 4
    assert poly_eval(v1**2 + tau, [0], 1j) == 1j
    # E[(Z + 1)^4] = 1 + 6 + 3 = 10
    assert poly_eval(v1**4 + 6 * tau * v1**2 + 3 * tau**2, [1], 1) == 10


def test_substitute_examples():
    assert substitute_tau_iq(v1**2 + tau, 1) == v1**2 + GaussianRational(0, 1)
    assert substitute_tau_iq(v1**4 + 6 * tau * v1**2 + 3 * tau**2, 1) == (
        v1**4 + GaussianRational(0, 6) * v1**2 - 3
    )
    assert substitute_tau_iq(Polynomial.constant(1, 1), Fraction(7, 3)) == 1
    with pytest.raises(ValueError):
        substitute_tau_iq(tau, 0)


def test_pretty_print_examples():
    assert pretty_print(v1**2 + tau) == "v1^2 + tau"
    f3 = v1**6 + 15 * tau * v1**4 + 45 * tau**2 * v1**2 + 15 * tau**3
    assert pretty_print(f3, "iq") == "v1^6 + 15*(i/q)*v1^4 + 45*(i/q)^2*v1^2 + 15*(i/q)^3"
    assert pretty_print(Polynomial.zero(3)) == "0"
    assert pretty_print(substitute_tau_iq(v1**2 + tau, 1)) == "v1^2 + i"
    assert pretty_print(substitute_tau_iq(f3, 1)) == "v1^6 + 15i*v1^4 - 45*v1^2 - 15i"


# ---------------------------------------------------------------- properties


def polys(n):
    coef = st.builds(
        GaussianRational,
        st.fractions(min_value=-20, max_value=20, max_denominator=6),
        st.fractions(min_value=-20, max_value=20, max_denominator=6),
    )
    key = st.tuples(st.tuples(*[st.integers(0, 3)] * n), st.integers(0, 2))
    return st.dictionaries(key, coef, max_size=5).map(lambda d: Polynomial(n, d))


dims = st.integers(1, 3)


@given(dims.flatmap(lambda n: st.tuples(polys(n), polys(n), polys(n))))
def test_ring_axioms(abc):
    a, b, c = abc
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Polynomial.zero(a.dimension)


def _close(x, y, rel=1e-12):
    return abs(x - y) <= rel * max(1.0, abs(x), abs(y))


@given(
    dims.flatmap(
        lambda n: st.tuples(
            polys(n),
            polys(n),
            st.lists(st.floats(-2, 2), min_size=n, max_size=n),
            st.complex_numbers(max_magnitude=2),
        )
    )
)
def test_eval_is_ring_homomorphism(case):
    a, b, v, t = case

    def abs_sum(p):
        # sum of |term| values bounds the rounding error of any summation order
        total = 0.0
        for (ev, s), c in p.items():
            term = abs(complex(c)) * abs(t) ** s
            for x, e in zip(v, ev):
                term *= abs(x) ** e
            total += term
        return total

    sa, sb = abs_sum(a), abs_sum(b)
    assert abs(poly_eval(a * b, v, t) - poly_eval(a, v, t) * poly_eval(b, v, t)) <= 1e-12 * (sa * sb + 1e-300)
    assert abs(poly_eval(a + b, v, t) - (poly_eval(a, v, t) + poly_eval(b, v, t))) <= 1e-12 * (sa + sb + 1e-300)


@given(
    dims.flatmap(
        lambda n: st.tuples(
            polys(n),
            st.lists(st.fractions(-3, 3, max_denominator=4), min_size=n, max_size=n),
            st.fractions(max_denominator=5).filter(lambda q: q != 0),
        )
    )
)
def test_substitution_commutes_with_evaluation(case):
    p, v, q = case
    iq = GaussianRational(0, 1 / q)
    assert poly_eval_exact(substitute_tau_iq(p, q), v, 0) == poly_eval_exact(p, v, iq)


@given(dims.flatmap(polys))
def test_json_round_trip(p):
    assert loads(dumps(p)) == p
    obj = to_json_obj(p)
    assert from_json_obj(json.loads(json.dumps(obj))) == p
    for term in obj["terms"]:
        assert "/" in term["re"] and "/" in term["im"]


def test_json_terms_sorted_canonically():
    p = tau + v1**2 + 3 * tau**2
    obj = to_json_obj(p)
    assert [(t["v"], t["tau"]) for t in obj["terms"]] == [([2], 0), ([0], 1), ([0], 2)]


def test_eval_order_independent():
    a = Polynomial(2, {((1, 0), 0): Fraction(1, 3), ((0, 1), 1): Fraction(1, 7), ((0, 0), 2): 5})
    b = Polynomial(2, dict(reversed(list(a.terms.items()))))
    assert poly_eval(a, [0.1, 0.3], 0.7) == poly_eval(b, [0.1, 0.3], 0.7)


def test_monomial_functional():
    F = MonomialFunctional.from_p([1, 2], 3)
    assert F.exponents == (2, 4) and F.is_even and F.half_exponents == (1, 2)
    assert F(2.0, 1.0) == 12.0
    with pytest.raises(ValueError):
        MonomialFunctional((1,), 0)
    with pytest.raises(ValueError):
        MonomialFunctional((3,)).half_exponents
