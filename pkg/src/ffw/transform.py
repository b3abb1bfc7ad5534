"""Closed-form Wiener and Fourier-Feynman transforms of polynomial cylinder functionals.

For F(x) = c * prod_j <alpha_j, x>^{2 p_j} the scaled shifted Wiener integral
factorizes over j, and each factor is a finite sum of Gaussian moments.  The
symbolic layer carries lambda^{-1} as ``tau``; the Fourier-Feynman transform
is the same polynomial with tau replaced by i/q.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .combinatorics import GaussianRational, Rational, binomial, double_factorial_odd, gaussian_moment
from .cylinder import (
    MonomialFunctional,
    Polynomial,
    iq_value,
    multi_index,
    poly_eval_exact,
    poly_mul,
    substitute_tau_iq,
)


class OddExponentError(ValueError):
    """Raised when an even-only operation receives an odd exponent."""


@dataclass(frozen=True)
class ShiftParameters:
    gamma: float
    beta: float = 1.0

    def __post_init__(self):
        if self.gamma == 0 or self.beta == 0:
            raise ValueError("gamma and beta must both be nonzero")


@dataclass(frozen=True)
class FFTResult:
    """tau-form polynomial and, when q is known, its i/q substitution."""

    poly: Polynomial
    q: Optional[Fraction] = None
    substituted: Optional[Polynomial] = None

    def __post_init__(self):
        if self.q is not None:
            q = Fraction(self.q)
            if q == 0:
                raise ValueError("q must be nonzero")
            object.__setattr__(self, "q", q)
            if self.substituted is None:
                object.__setattr__(self, "substituted", substitute_tau_iq(self.poly, q))

    def evaluate(self, v: Sequence[complex]) -> complex:
        """Numeric value of the transform at coordinates v."""
        if self.substituted is None:
            raise ValueError("no q attached; evaluate poly with an explicit tau instead")
        from .cylinder import poly_eval

        return poly_eval(self.substituted, v, 0)


def _embed(p1: Polynomial, n: int, j: int) -> Polynomial:
    """Move a univariate polynomial onto variable j of an n-variate ring."""

    def move(key, c):
        (e,), t = key
        v = [0] * n
        v[j] = e
        return (tuple(v), t), c

    if p1.is_zero():
        return Polynomial(n)
    return p1.map_terms(move)


def shifted_moment_poly(p: int) -> Polynomial:
    """sum_s C(2p, 2s) (2s-1)!! tau^s v^{2p-2s}, the expectation of (sqrt(tau) Z + v)^{2p}."""
    if p < 0:
        raise ValueError(f"p must be >= 0, got {p}")
    terms = {
        ((2 * p - 2 * s,), s): binomial(2 * p, 2 * s) * double_factorial_odd(s)
        for s in range(p + 1)
    }
    return Polynomial(1, terms)


def shifted_moment_numeric(p: int, shift: ShiftParameters, v: float) -> float:
    """E[(gamma Z + beta v)^{2p}] in double precision."""
    if p < 0:
        raise ValueError(f"p must be >= 0, got {p}")
    g, b = float(shift.gamma), float(shift.beta)
    return float(
        sum(
            binomial(2 * p, 2 * s) * double_factorial_odd(s) * g ** (2 * s) * (b * v) ** (2 * p - 2 * s)
            for s in range(p + 1)
        )
    )


def _require_even(F: MonomialFunctional) -> tuple:
    if not F.is_even:
        raise OddExponentError(
            f"exponents {F.exponents} include odd entries; use general_monomial_transform"
        )
    return F.half_exponents


def t_lambda_poly(F: MonomialFunctional) -> Polynomial:
    """Analytic Wiener transform T_lambda(F) as a polynomial in v and tau = 1/lambda."""
    ps = _require_even(F)
    n = len(ps)
    out = Polynomial.constant(n, F.coefficient)
    for j, p in enumerate(ps):
        if p:
            out = poly_mul(out, _embed(shifted_moment_poly(p), n, j))
    return out


def wiener_shift_integral(F: MonomialFunctional, shift: Optional[ShiftParameters] = None) -> Polynomial:
    """Integral of F(gamma x + y) over Wiener space.

    Without ``shift`` the result is the tau-form (tau = gamma^2).  With a
    shift, beta must be 1 and gamma^2 is substituted exactly; general beta is
    only available through :func:`wiener_shift_numeric`.
    """
    poly = t_lambda_poly(F)
    if shift is None:
        return poly
    if shift.beta != 1:
        raise ValueError("symbolic path requires beta = 1; use wiener_shift_numeric")
    return poly.substitute_tau(Fraction(shift.gamma) ** 2)


def wiener_shift_numeric(F: MonomialFunctional, shift: ShiftParameters, v: Sequence[float]) -> float:
    """Integral of F(gamma x + beta y) with <alpha_j, y> = v_j, numerically."""
    ps = _require_even(F)
    if len(v) != len(ps):
        raise ValueError(f"expected {len(ps)} coordinates, got {len(v)}")
    out = float(F.coefficient)
    for p, x in zip(ps, v):
        out *= shifted_moment_numeric(p, shift, x)
    return out


def analytic_fft(F: MonomialFunctional, q: Optional[Rational]) -> FFTResult:
    """Analytic Fourier-Feynman transform T_q^(1)(F).

    ``q=None`` keeps q symbolic: only the tau-form is returned and
    ``pretty_print(style="iq")`` renders tau as i/q.
    """
    poly = t_lambda_poly(F)
    if q is None:
        return FFTResult(poly)
    q = Fraction(q)
    if q == 0:
        raise ValueError("q must be nonzero")
    return FFTResult(poly, q)


def general_monomial_transform(k: Sequence[int], coefficient: Rational = 1) -> Polynomial:
    """T_lambda of prod_j <alpha_j, x>^{k_j} for arbitrary nonnegative k_j.

    Binomial expansion of (sqrt(tau) Z_j + v_j)^{k_j}; odd powers of Z_j
    vanish, even powers contribute E[Z^s] tau^{s/2}.
    """
    k = multi_index(k)
    n = len(k)
    out = Polynomial.constant(n, Fraction(coefficient))
    for j, kj in enumerate(k):
        if kj == 0:
            continue
        factor = Polynomial(
            1,
            {
                ((kj - s,), s // 2): binomial(kj, s) * gaussian_moment(s)
                for s in range(0, kj + 1, 2)
            },
        )
        out = poly_mul(out, _embed(factor, n, j))
    return out


def transform_functional(F: MonomialFunctional) -> Polynomial:
    """T_lambda of any monomial functional, even or not."""
    return general_monomial_transform(F.exponents, F.coefficient)


def feynman_integral(F: MonomialFunctional, q: Rational) -> GaussianRational:
    """Analytic Feynman integral: the transform evaluated at y = 0.

    Returns the exact value; ``complex()`` gives the numeric one.
    """
    result = analytic_fft(F, q)
    return poly_eval_exact(result.substituted, [0] * F.dimension)


def feynman_closed_form(F: MonomialFunctional, q: Rational) -> GaussianRational:
    """c * prod_j (2p_j - 1)!! (i/q)^{p_j}, computed without polynomial algebra."""
    ps = _require_even(F)
    iq = iq_value(q)
    out = GaussianRational(F.coefficient)
    for p in ps:
        out = out * double_factorial_odd(p) * iq**p
    return out
