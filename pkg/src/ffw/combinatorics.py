"""Exact integer and rational kernels.

Python integers are arbitrary precision and :class:`fractions.Fraction` is
always reduced with a positive denominator, so both serve directly as the
exact integer and exact rational types.  :class:`GaussianRational` adds the
imaginary unit on top of ``Fraction``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

Rational = Union[int, Fraction]


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial of negative integer {n}")
    return math.factorial(n)


def double_factorial_odd(s: int) -> int:
    """Return (2s-1)!!, with (-1)!! = 1."""
    if s < 0:
        raise ValueError(f"double_factorial_odd needs s >= 0, got {s}")
    out = 1
    for m in range(2 * s - 1, 0, -2):
        out *= m
    return out


def binomial(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        raise ValueError(f"binomial({n}, {k}) outside 0 <= k <= n")
    return math.comb(n, k)


def multinomial(k: int, parts: Sequence[int]) -> int:
    """k! / prod(parts_j!) for parts summing to k."""
    if any(p < 0 for p in parts):
        raise ValueError(f"negative part in {tuple(parts)}")
    if sum(parts) != k:
        raise ValueError(f"parts {tuple(parts)} do not sum to {k}")
    out = math.factorial(k)
    for p in parts:
        out //= math.factorial(p)
    return out


def gaussian_moment(s: int) -> int:
    """Standard normal moment E[Z^s]: 0 for odd s, (s-1)!! for even s.

    This is the Lebesgue integral of u^s exp(-u^2/2) already divided by
    sqrt(2*pi), so the result stays an integer.
    """
    if s < 0:
        raise ValueError(f"gaussian_moment needs s >= 0, got {s}")
    if s % 2:
        return 0
    return double_factorial_odd(s // 2)


def gamma_half_integer(n: int) -> Fraction:
    """Rational factor of Gamma(n + 1/2) = (2n-1)!!/2^n * sqrt(pi).

    The sqrt(pi) factor is left implicit.
    """
    if n < 1:
        raise ValueError(f"gamma_half_integer needs n >= 1, got {n}")
    return Fraction(double_factorial_odd(n), 2**n)


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or a decimal string into an exact Fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    return Fraction(str(text).strip())


def format_rational(x: Fraction) -> str:
    """Always ``"p/q"`` with q > 0, as used by the JSON polynomial format."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number re + i*im with rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(Fraction(x))
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, float):
            return cls(Fraction(x))
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussianRational")

    @classmethod
    def i_power(cls, s: int) -> "GaussianRational":
        return [ONE, I, -ONE, -I][s % 4]

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __add__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __truediv__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        num = self * other.conjugate()
        return GaussianRational(num.re / norm, num.im / norm)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return ONE / (self ** (-k))
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return _imag_str(self.im)
        sign = "-" if self.im < 0 else "+"
        return f"({self.re} {sign} {_imag_str(abs(self.im))})"


def _imag_str(x: Fraction) -> str:
    if x == 1:
        return "i"
    if x == -1:
        return "-i"
    if x.denominator == 1:
        return f"{x.numerator}i"
    if x.numerator in (1, -1):
        return f"{'-' if x < 0 else ''}i/{x.denominator}"
    return f"{x.numerator}i/{x.denominator}"


ONE = GaussianRational(Fraction(1))
ZERO = GaussianRational()
I = GaussianRational(Fraction(0), Fraction(1))
