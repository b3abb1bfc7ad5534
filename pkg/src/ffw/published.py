"""Published transform formulas, transcribed term by term.

The printed rows use c / q^s coefficients.  Since (i/q)^s = i^s / q^s, the
term c / q^s equals (c * i^-s) (i/q)^s, which puts it in tau-form with
tau^s.  Converting this way keeps the transcription independent of the
engine.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import List, Optional, Tuple

from .combinatorics import GaussianRational
from .cylinder import Polynomial


@dataclass(frozen=True)
class PublishedRow:
    label: str
    printed_functional: str
    stated_exponents: Tuple[int, ...]
    p: Tuple[int, ...]
    printed: str
    factors: tuple
    stated_p: Optional[Tuple[int, ...]] = None
    index_corrections: tuple = ()
    lambda_expansion: Optional[dict] = field(default=None, compare=False)

    @property
    def dimension(self) -> int:
        return len(self.p)

    def polynomial(self, corrected: bool = False) -> Polynomial:
        """The printed product as a tau-form polynomial.

        ``corrected=True`` applies the recorded variable-index corrections.
        """
        n = self.dimension
        fixes = {}
        if corrected:
            fixes = {(c["factor"], c["term"]): c["expected_var"] for c in self.index_corrections}
        out = Polynomial.constant(n, 1)
        for fi, factor in enumerate(self.factors):
            acc = {}
            for ti, (var, exp, qpow, re, im) in enumerate(factor):
                var = fixes.get((fi, ti), var)
                v = [0] * n
                if var:
                    v[var - 1] = exp
                c = GaussianRational(Fraction(re), Fraction(im)) * GaussianRational.i_power(-qpow)
                key = (tuple(v), qpow)
                acc[key] = acc.get(key, GaussianRational()) + c
            out = out * Polynomial(n, acc)
        return out

    def lambda_polynomial(self) -> Optional[Polynomial]:
        """The printed lambda^-s expansion, if any, with tau = 1/lambda."""
        if not self.lambda_expansion:
            return None
        terms = {(tuple(v), t): Fraction(c) for v, t, c in self.lambda_expansion["terms"]}
        return Polynomial(self.dimension, terms)


def _row(obj: dict) -> PublishedRow:
    return PublishedRow(
        label=obj["label"],
        printed_functional=obj["printed_functional"],
        stated_exponents=tuple(obj["stated_exponents"]),
        p=tuple(obj["p"]),
        printed=obj["printed"],
        factors=tuple(tuple(tuple(t) for t in f) for f in obj["factors"]),
        stated_p=tuple(obj["stated_p"]) if "stated_p" in obj else None,
        index_corrections=tuple(obj.get("index_corrections", ())),
        lambda_expansion=obj.get("lambda_expansion"),
    )


@lru_cache(maxsize=None)
def _load() -> dict:
    text = resources.files("ffw").joinpath("data/published_formulas.json").read_text("utf-8")
    return json.loads(text)


def table_rows() -> List[PublishedRow]:
    return [_row(r) for r in _load()["table1"]]


def example_rows() -> List[PublishedRow]:
    return [_row(r) for r in _load()["examples"]]


def row(label: str) -> PublishedRow:
    for r in table_rows() + example_rows():
        if r.label == label:
            return r
    raise KeyError(label)
