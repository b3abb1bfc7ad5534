"""Series approximation of transforms of smooth cylinder functionals.

h is assumed to have every partial derivative at the origin equal to one
constant c, so its Maclaurin truncation of order r is

    h_r(u) = h(0) + c * sum_{k=1}^{r} (u_1 + ... + u_n)^k / k!

Two transforms of h_r are provided.  :func:`series_fft_paper` transforms only
the even-degree monomials, the form the closed-form product formula covers.
:func:`series_fft_full` transforms every monomial, odd ones included.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Tuple

import numpy as np

from .combinatorics import Rational, double_factorial_odd, factorial
from .cylinder import MonomialFunctional, Polynomial
from .montecarlo import MCEstimate, WienerMCConfig, estimate_wiener_integral
from .transform import FFTResult, analytic_fft, general_monomial_transform


@dataclass(frozen=True)
class SmoothFunctionalSpec:
    dimension: int
    h0: Fraction = Fraction(1)
    derivative_constant: Fraction = Fraction(1)

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        object.__setattr__(self, "h0", Fraction(self.h0))
        object.__setattr__(self, "derivative_constant", Fraction(self.derivative_constant))

    def exponential_model(self) -> Callable[..., np.ndarray]:
        """h(u) = h0 + c (exp(u_1 + ... + u_n) - 1), whose derivatives at 0 all equal c."""
        h0, c = float(self.h0), float(self.derivative_constant)

        def h(*u):
            return h0 + c * np.expm1(sum(u))

        return h


def _order(r: int) -> int:
    if int(r) != r or r < 1:
        raise ValueError(f"truncation order must be a positive integer, got {r}")
    return int(r)


def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """All tuples of ``parts`` nonnegative ints summing to ``total``."""
    for cut in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for c in cut + (total + parts - 1,):
            out.append(c - prev - 1)
            prev = c
        yield tuple(out)


def _inv_factorial_product(a: Tuple[int, ...]) -> Fraction:
    den = 1
    for x in a:
        den *= factorial(x)
    return Fraction(1, den)


def maclaurin_terms(spec: SmoothFunctionalSpec, r: int) -> Iterator[Tuple[Tuple[int, ...], Fraction]]:
    """(exponents, coefficient) of h_r, degree by degree; zero coefficients skipped."""
    r = _order(r)
    n = spec.dimension
    if spec.h0:
        yield (0,) * n, spec.h0
    if not spec.derivative_constant:
        return
    for k in range(1, r + 1):
        for a in compositions(k, n):
            # (u_1+...+u_n)^k / k! has coefficient 1/prod(a_j!) on u^a
            yield a, spec.derivative_constant * _inv_factorial_product(a)


def truncated_maclaurin(spec: SmoothFunctionalSpec, r: int) -> Polynomial:
    """h_r as a tau-free polynomial in u_1..u_n (variables named v internally)."""
    return Polynomial(spec.dimension, {(a, 0): c for a, c in maclaurin_terms(spec, r)})


def wiener_integral_truncation(spec: SmoothFunctionalSpec, r: int) -> Fraction:
    """Exact Wiener integral of H_r: odd monomials vanish, u^{2p} gives prod (2p_j - 1)!!."""
    r = _order(r)
    n = spec.dimension
    total = spec.h0
    if not spec.derivative_constant:
        return total
    acc = Fraction(0)
    for l in range(1, r // 2 + 1):
        for p in compositions(l, n):
            moment = 1
            for pj in p:
                moment *= double_factorial_odd(pj)
            acc += _inv_factorial_product(tuple(2 * x for x in p)) * moment
    return total + spec.derivative_constant * acc


def _check_q(q: Optional[Rational]) -> Optional[Fraction]:
    if q is None:
        return None
    q = Fraction(q)
    if q == 0:
        raise ValueError("q must be nonzero")
    return q


def series_fft_paper(
    spec: SmoothFunctionalSpec, r: int, q: Optional[Rational], printed_odd_branch: bool = False
) -> FFTResult:
    """Transform of h_r using only its even-degree monomials.

    h(0) + c * sum_{l=1}^{r/2} sum_{|p| = l} prod_j T(u_j^{2p_j}) / prod_j (2p_j)!

    For odd r the top-degree terms are odd and drop out, so the result equals
    the one for r - 1 (just h(0) when r = 1).  ``printed_odd_branch=True``
    instead returns the constant h(0) for every odd r.
    """
    r = _order(r)
    q = _check_q(q)
    n = spec.dimension
    poly = Polynomial.constant(n, spec.h0)
    if spec.derivative_constant and not (printed_odd_branch and r % 2):
        for l in range(1, r // 2 + 1):
            for p in compositions(l, n):
                weight = spec.derivative_constant * _inv_factorial_product(tuple(2 * x for x in p))
                F = MonomialFunctional.from_p(p, weight)
                poly = poly + analytic_fft(F, None).poly
    return FFTResult(poly, q)


def series_fft_full(spec: SmoothFunctionalSpec, r: int, q: Optional[Rational]) -> FFTResult:
    """Termwise transform of every monomial of h_r, odd degrees included."""
    r = _order(r)
    q = _check_q(q)
    poly = Polynomial.zero(spec.dimension)
    for a, c in maclaurin_terms(spec, r):
        poly = poly + general_monomial_transform(a, c)
    return FFTResult(poly, q)


def maclaurin_evaluator(spec: SmoothFunctionalSpec, r: int) -> Callable[..., np.ndarray]:
    """Numeric h_r taking n arrays."""
    r = _order(r)
    h0 = float(spec.h0)
    c = float(spec.derivative_constant)
    inv_fact = [1.0 / math.factorial(k) for k in range(r + 1)]

    def h_r(*u):
        s = sum(u)
        out = np.zeros_like(s, dtype=float) + h0
        power = np.ones_like(s, dtype=float)
        for k in range(1, r + 1):
            power = power * s
            out = out + c * inv_fact[k] * power
        return out

    return h_r


def l_r_diagnostic(
    spec: SmoothFunctionalSpec,
    h: Callable[..., np.ndarray],
    r: int,
    rho: float,
    cfg: WienerMCConfig,
) -> MCEstimate:
    """Monte Carlo estimate of L_r = E|h(rho Z) - h_r(rho Z)|.

    ``h`` takes n arrays.  Integrability of h against every Gaussian is the
    caller's responsibility; only non-finite samples are caught.
    """
    r = _order(r)
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    h_r = maclaurin_evaluator(spec, r)

    def integrand(*z):
        u = [rho * zj for zj in z]
        return np.abs(h(*u) - h_r(*u))

    return estimate_wiener_integral(integrand, spec.dimension, cfg)
