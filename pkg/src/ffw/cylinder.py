"""Sparse exact polynomials in v1..vn and the continuation symbol tau.

tau stands for 1/lambda.  Substituting tau = i/q turns a scaled Wiener
transform into the Fourier-Feynman boundary value, since (-iq)^-1 = i/q.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .combinatorics import ONE, GaussianRational, Rational, _imag_str, format_rational, parse_rational

Key = Tuple[Tuple[int, ...], int]  # (v exponents, tau power)
Number = Union[int, float, complex, Fraction]


class DimensionError(ValueError):
    pass


def multi_index(exponents: Iterable[int]) -> Tuple[int, ...]:
    """Validate a MultiIndex: nonempty tuple of nonnegative ints."""
    out = tuple(int(e) for e in exponents)
    if not out:
        raise ValueError("multi-index must have length >= 1")
    if any(e < 0 for e in out):
        raise ValueError(f"multi-index entries must be >= 0, got {out}")
    return out


def _sort_key(key: Key):
    v, t = key
    return (-sum(v), tuple(-e for e in v), t)


class Polynomial:
    """Immutable polynomial with GaussianRational coefficients.

    Terms are keyed by ``(v_exponents, tau_power)``.  Zero coefficients are
    never stored, so equality of term maps is structural equality.
    """

    __slots__ = ("_n", "_terms", "_hash")

    def __init__(self, n: int, terms: Optional[Mapping[Key, object]] = None):
        if n < 1:
            raise ValueError(f"dimension must be positive, got {n}")
        clean: Dict[Key, GaussianRational] = {}
        for (v, t), c in (terms or {}).items():
            v = tuple(v)
            if len(v) != n:
                raise DimensionError(f"exponent {v} does not have length {n}")
            if t < 0 or any(e < 0 for e in v):
                raise ValueError(f"negative exponent in term {(v, t)}")
            c = GaussianRational.coerce(c)
            if c:
                clean[(v, int(t))] = clean.get((v, int(t)), GaussianRational()) + c
        self._n = n
        self._terms = {k: c for k, c in clean.items() if c}
        self._hash = None

    # construction helpers

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls(n)

    @classmethod
    def constant(cls, n: int, c) -> "Polynomial":
        return cls(n, {((0,) * n, 0): c})

    @classmethod
    def var(cls, n: int, j: int, power: int = 1) -> "Polynomial":
        """v_{j+1}**power, with j zero-based."""
        v = [0] * n
        v[j] = power
        return cls(n, {(tuple(v), 0): 1})

    @classmethod
    def tau(cls, n: int, power: int = 1) -> "Polynomial":
        return cls(n, {((0,) * n, power): 1})

    @classmethod
    def monomial(cls, exponents: Sequence[int], coefficient=1, tau_power: int = 0) -> "Polynomial":
        exponents = multi_index(exponents)
        return cls(len(exponents), {(exponents, tau_power): coefficient})

    # accessors

    @property
    def dimension(self) -> int:
        return self._n

    @property
    def terms(self) -> Mapping[Key, GaussianRational]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Key, GaussianRational]]:
        """Terms in canonical order: descending v-degree, graded lex, then ascending tau."""
        for key in sorted(self._terms, key=_sort_key):
            yield key, self._terms[key]

    def coefficient(self, v: Sequence[int], tau_power: int = 0) -> GaussianRational:
        return self._terms.get((tuple(v), tau_power), GaussianRational())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def tau_degree(self) -> int:
        return max((t for _, t in self._terms), default=0)

    def is_tau_free(self) -> bool:
        return all(t == 0 for _, t in self._terms)

    # ring operations

    def _check(self, other: "Polynomial"):
        if self._n != other._n:
            raise DimensionError(f"dimension mismatch: {self._n} vs {other._n}")

    def _promote(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(self._n, GaussianRational.coerce(other))

    def __add__(self, other):
        try:
            other = self._promote(other)
        except TypeError:
            return NotImplemented
        return poly_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self._n, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._promote(other)
        except TypeError:
            return NotImplemented
        return poly_add(self, -other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        try:
            other = self._promote(other)
        except TypeError:
            return NotImplemented
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = Polynomial.constant(self._n, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._n == other._n and self._terms == other._terms
        try:
            return self == self._promote(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._n, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial(n={self._n}, {pretty_print(self)!r})"

    def __str__(self):
        return pretty_print(self)

    # structural helpers

    def map_terms(self, fn) -> "Polynomial":
        """Rebuild from ``fn(key, coeff) -> (key, coeff)`` pairs, merging collisions."""
        out: Dict[Key, GaussianRational] = {}
        n = self._n
        for key, c in self._terms.items():
            (v, t), c2 = fn(key, c)
            n = len(v)
            out[(v, t)] = out.get((v, t), GaussianRational()) + c2
        return Polynomial(n, out)

    def drop_tau(self) -> "Polynomial":
        """Keep only the tau^0 terms."""
        return Polynomial(self._n, {k: c for k, c in self._terms.items() if k[1] == 0})

    def project_v_parity(self, even: bool = True) -> "Polynomial":
        """Keep terms whose total v-degree is even (or odd)."""
        want = 0 if even else 1
        return Polynomial(
            self._n, {k: c for k, c in self._terms.items() if sum(k[0]) % 2 == want}
        )

    def substitute_tau(self, value) -> "Polynomial":
        """Replace tau by an exact GaussianRational value."""
        value = GaussianRational.coerce(value)
        powers: Dict[int, GaussianRational] = {}

        def sub(key, c):
            v, t = key
            if t not in powers:
                powers[t] = value**t
            return (v, 0), c * powers[t]

        return self.map_terms(sub) if self._terms else Polynomial(self._n)


def poly_add(a: Polynomial, b: Polynomial) -> Polynomial:
    a._check(b)
    out = dict(a._terms)
    for k, c in b._terms.items():
        out[k] = out.get(k, GaussianRational()) + c
    return Polynomial(a._n, out)


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    a._check(b)
    out: Dict[Key, GaussianRational] = {}
    for (va, ta), ca in a._terms.items():
        for (vb, tb), cb in b._terms.items():
            key = (tuple(x + y for x, y in zip(va, vb)), ta + tb)
            out[key] = out.get(key, GaussianRational()) + ca * cb
    return Polynomial(a._n, out)


def _pow_complex(z: complex, k: int) -> complex:
    out = 1 + 0j
    for _ in range(k):
        out *= z
    return out


def poly_eval(p: Polynomial, v: Sequence[Number], tau: Number = 0) -> complex:
    """Evaluate at numeric v and tau.

    Exact coefficients are rounded once; per-variable powers are computed by
    repeated multiplication and the term sum uses ``math.fsum`` on real and
    imaginary parts, so the result does not depend on dict order.
    """
    v = [complex(x) for x in v]
    if len(v) != p.dimension:
        raise DimensionError(f"expected {p.dimension} coordinates, got {len(v)}")
    tau = complex(tau)
    re, im = [], []
    for (ev, t), c in p.items():
        term = complex(c) * _pow_complex(tau, t)
        for x, e in zip(v, ev):
            if e:
                term *= _pow_complex(x, e)
        re.append(term.real)
        im.append(term.imag)
    out = complex(math.fsum(re), math.fsum(im))
    if not (math.isfinite(out.real) and math.isfinite(out.imag)):
        raise OverflowError("polynomial evaluation is not finite")
    return out


def poly_eval_exact(p: Polynomial, v: Sequence[Rational], tau=0) -> GaussianRational:
    """Exact evaluation at rational (or GaussianRational) points."""
    if len(v) != p.dimension:
        raise DimensionError(f"expected {p.dimension} coordinates, got {len(v)}")
    bases = [GaussianRational.coerce(x) for x in v] + [GaussianRational.coerce(tau)]
    powers: List[Dict[int, GaussianRational]] = [{0: ONE, 1: b} for b in bases]

    def power(j: int, e: int) -> GaussianRational:
        cache = powers[j]
        if e not in cache:
            cache[e] = power(j, e - 1) * bases[j]
        return cache[e]

    total = GaussianRational()
    for (ev, t), c in p.items():
        term = c
        for j, e in enumerate(ev + (t,)):
            if e:
                term = term * power(j, e)
        total = total + term
    return total


def iq_value(q: Rational) -> GaussianRational:
    """Exact i/q for rational nonzero q."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("q must be nonzero")
    return GaussianRational(Fraction(0), 1 / q)


def substitute_tau_iq(p: Polynomial, q: Rational) -> Polynomial:
    """Replace tau^s by the exact (i/q)^s; the result is tau-free."""
    if isinstance(q, float):
        if not math.isfinite(q):
            raise ValueError(f"q must be finite, got {q}")
        q = Fraction(q)
    return p.substitute_tau(iq_value(q))


# ---------------------------------------------------------------- rendering


def _var_str(v: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, v):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _coef_parts(c: GaussianRational) -> Tuple[str, str]:
    """Split a coefficient into (sign, magnitude text) for infix rendering."""
    if not c.im:
        return ("-" if c.re < 0 else "+"), str(abs(c.re))
    if not c.re:
        return ("-" if c.im < 0 else "+"), _imag_str(abs(c.im))
    return "+", str(c)


def pretty_print(
    p: Polynomial,
    style: str = "tau",
    var: str = "v",
    names: Optional[Sequence[str]] = None,
) -> str:
    """Render in canonical order.

    ``style="tau"`` prints the continuation symbol as ``tau``;
    ``style="iq"`` prints it as ``(i/q)``.  A tau-free polynomial renders the
    same in both styles.
    """
    if style not in ("tau", "iq"):
        raise ValueError(f"unknown style {style!r}")
    if p.is_zero():
        return "0"
    names = list(names) if names else [f"{var}{j + 1}" for j in range(p.dimension)]
    sym = "tau" if style == "tau" else "(i/q)"
    pieces = []
    for (v, t), c in p.items():
        sign, mag = _coef_parts(c)
        factors = []
        if mag != "1":
            factors.append(mag)
        if t == 1:
            factors.append(sym)
        elif t > 1:
            factors.append(f"{sym}^{t}")
        vs = _var_str(v, names)
        if vs:
            factors.append(vs)
        body = "*".join(factors) if factors else "1"
        if body == "(i/q)":
            body = "i/q"
        pieces.append((sign, body))
    first_sign, first_body = pieces[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------- JSON


def to_json_obj(p: Polynomial) -> dict:
    return {
        "n": p.dimension,
        "terms": [
            {"v": list(v), "tau": t, "re": format_rational(c.re), "im": format_rational(c.im)}
            for (v, t), c in p.items()
        ],
    }


def from_json_obj(obj: Mapping) -> Polynomial:
    n = int(obj["n"])
    terms: Dict[Key, GaussianRational] = {}
    for term in obj["terms"]:
        key = (tuple(int(e) for e in term["v"]), int(term.get("tau", 0)))
        c = GaussianRational(parse_rational(term.get("re", "0")), parse_rational(term.get("im", "0")))
        terms[key] = terms.get(key, GaussianRational()) + c
    return Polynomial(n, terms)


def dumps(p: Polynomial, **kwargs) -> str:
    return json.dumps(to_json_obj(p), **kwargs)


def loads(text: str) -> Polynomial:
    return from_json_obj(json.loads(text))


@dataclass(frozen=True)
class MonomialFunctional:
    """coefficient * prod_j <alpha_j, x>^{exponents_j}."""

    exponents: Tuple[int, ...]
    coefficient: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "exponents", multi_index(self.exponents))
        object.__setattr__(self, "coefficient", Fraction(self.coefficient))
        if self.coefficient == 0:
            raise ValueError("MonomialFunctional coefficient must be nonzero")

    @classmethod
    def from_p(cls, p: Sequence[int], coefficient: Rational = 1) -> "MonomialFunctional":
        """Build prod_j <alpha_j, x>^{2 p_j}."""
        return cls(tuple(2 * int(x) for x in p), Fraction(coefficient))

    @property
    def dimension(self) -> int:
        return len(self.exponents)

    @property
    def is_even(self) -> bool:
        return all(e % 2 == 0 for e in self.exponents)

    @property
    def half_exponents(self) -> Tuple[int, ...]:
        if not self.is_even:
            raise ValueError(f"exponents {self.exponents} are not all even")
        return tuple(e // 2 for e in self.exponents)

    def __call__(self, *coords):
        """Evaluate at coordinates; works elementwise on numpy arrays."""
        if len(coords) != self.dimension:
            raise DimensionError(f"expected {self.dimension} coordinates, got {len(coords)}")
        out = float(self.coefficient)
        for x, e in zip(coords, self.exponents):
            out = out * x**e
        return out

    def as_polynomial(self) -> Polynomial:
        return Polynomial.monomial(self.exponents, self.coefficient)
