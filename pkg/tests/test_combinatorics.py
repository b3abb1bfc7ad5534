import itertools
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ffw.combinatorics import (
    GaussianRational,
    binomial,
    double_factorial_odd,
    factorial,
    gamma_half_integer,
    gaussian_moment,
    multinomial,
)
from ffw.oracle import hermite_rule


def product_loop(values):
    out = 1
    for v in values:
        out *= v
    return out


def pascal_row(n):
    row = [1]
    for _ in range(n):
        row = [a + b for a, b in zip([0] + row, row + [0])]
    return row


@pytest.mark.parametrize("n, expected", [(0, 1), (5, 120), (10, product_loop(range(1, 11)))])
def test_factorial(n, expected):
    assert factorial(n) == expected


def test_factorial_large_exact():
    assert factorial(40) == product_loop(range(1, 41))
    with pytest.raises(ValueError):
        factorial(-1)


@pytest.mark.parametrize("s, expected", [(0, 1), (2, 3), (4, product_loop([7, 5, 3, 1])), (1, 1)])
def test_double_factorial_odd(s, expected):
    assert double_factorial_odd(s) == expected


@pytest.mark.parametrize("n, k, expected", [(8, 6, pascal_row(8)[6]), (7, 0, 1), (4, 2, 6)])
def test_binomial(n, k, expected):
    assert binomial(n, k) == expected


def test_binomial_domain_error():
    with pytest.raises(ValueError):
        binomial(3, 4)


@pytest.mark.parametrize("n", range(31))
def test_binomial_symmetry_and_pascal(n):
    row = pascal_row(n)
    for k in range(n + 1):
        assert binomial(n, k) == binomial(n, n - k) == row[k]


def expansion_count(k, parts):
    """Number of words of length k over len(parts) letters with the given letter counts."""
    target = tuple(parts)
    count = 0
    for word in itertools.product(range(len(parts)), repeat=k):
        c = Counter(word)
        if tuple(c.get(j, 0) for j in range(len(parts))) == target:
            count += 1
    return count


@pytest.mark.parametrize("k, parts", [(2, (2, 0)), (4, (2, 2)), (3, (1, 1, 1)), (5, (2, 1, 2))])
def test_multinomial(k, parts):
    assert multinomial(k, parts) == expansion_count(k, parts)


def test_multinomial_sum_mismatch():
    with pytest.raises(ValueError):
        multinomial(3, (1, 1))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("k", range(9))
def test_multinomial_row_sums(n, k):
    total = sum(multinomial(k, p) for p in itertools.product(range(k + 1), repeat=n) if sum(p) == k)
    assert total == n**k


def test_gaussian_moment_examples():
    assert gaussian_moment(1) == 0
    assert gaussian_moment(4) == 3
    assert gaussian_moment(8) == 105


@given(st.integers(min_value=0, max_value=60))
def test_gaussian_moment_parity(s):
    if s % 2:
        assert gaussian_moment(s) == 0
    else:
        assert gaussian_moment(s) == double_factorial_odd(s // 2)


@pytest.mark.parametrize("s", range(21))
def test_gaussian_moment_quadrature(s):
    rule = hermite_rule(32)
    quad = rule.moment(s)
    exact = gaussian_moment(s)
    if exact == 0:
        assert abs(quad) <= 1e-12 * double_factorial_odd((s + 1) // 2)
    else:
        assert abs(quad - exact) <= 1e-12 * exact


@pytest.mark.parametrize("n, expected", [(1, Fraction(1, 2)), (2, Fraction(3, 4)), (3, Fraction(15, 8))])
def test_gamma_half_integer(n, expected):
    assert gamma_half_integer(n) == expected


@pytest.mark.parametrize("n", range(1, 12))
def test_gamma_half_integer_recurrence(n):
    # Gamma(s + 1) = s Gamma(s) with s = n + 1/2, starting from Gamma(1/2) = sqrt(pi)
    value = Fraction(1)
    for m in range(n):
        value *= Fraction(2 * m + 1, 2)
    assert gamma_half_integer(n) == value


def test_gaussian_rational_arithmetic():
    i = GaussianRational(0, 1)
    assert i * i == -1
    assert i**4 == 1
    assert (1 / i) == -i
    assert GaussianRational(Fraction(1, 2), 3) + Fraction(1, 2) == GaussianRational(1, 3)
    assert complex(GaussianRational(Fraction(1, 4), -2)) == complex(0.25, -2)
    assert GaussianRational.i_power(-3) == i
    assert str(GaussianRational(0, Fraction(-1, 3))) == "-i/3"


@given(
    st.fractions(max_denominator=50), st.fractions(max_denominator=50),
    st.fractions(max_denominator=50), st.fractions(max_denominator=50),
)
def test_gaussian_rational_matches_complex(a, b, c, d):
    x, y = GaussianRational(a, b), GaussianRational(c, d)
    assert complex(x * y) == pytest.approx(complex(x) * complex(y), rel=1e-12, abs=1e-12)
    assert complex(x + y) == pytest.approx(complex(x) + complex(y), rel=1e-12, abs=1e-12)
