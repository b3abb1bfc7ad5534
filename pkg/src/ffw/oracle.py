"""Gauss-Hermite quadrature for the standard normal weight.

Used as an independent ground truth for Gaussian integrals of polynomials
and smooth functions.  Nothing here imports the symbolic transform code.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

MAX_ORDER = 128
MAX_TENSOR_DIM = 3


class PrecisionError(ValueError):
    """The rule is too low-order for the requested integrand."""


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for E[f(Z)], Z ~ N(0, 1).

    ``weights`` sum to 1; multiply by sqrt(2*pi) for the plain
    exp(-u^2/2) weight.
    """

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def expect(self, f: Callable) -> float:
        return float(np.dot(self.weights, f(self.nodes)))

    def moment(self, s: int) -> float:
        return float(np.dot(self.weights, self.nodes**s))


def _normalized_hermite(x: np.ndarray, n: int):
    """Values of He_n/sqrt(n!) and He_{n-1}/sqrt((n-1)!) by the three-term recurrence."""
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    for k in range(1, n + 1):
        prev, cur = cur, (x * cur - math.sqrt(k - 1) * prev) / math.sqrt(k)
    return cur, prev


@lru_cache(maxsize=None)
def _rule(order: int):
    # Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the
    # probabilists' Hermite recurrence (zero diagonal, off-diagonal sqrt(k)).
    off = np.sqrt(np.arange(1, order, dtype=float))
    jacobi = np.diag(off, 1) + np.diag(off, -1)
    nodes = np.linalg.eigvalsh(jacobi)
    # Newton polish on the normalized recurrence; He_n' = sqrt(n) * h_{n-1} in normalized form.
    for _ in range(3):
        h_n, h_nm1 = _normalized_hermite(nodes, order)
        nodes = nodes - h_n / (math.sqrt(order) * h_nm1)
    # symmetrize to remove rounding asymmetry
    nodes = 0.5 * (nodes - nodes[::-1])
    # Christoffel weights: w_i = 1 / sum_k h_k(x_i)^2, equivalently 1/(n h_{n-1}(x_i)^2).
    _, h_nm1 = _normalized_hermite(nodes, order)
    weights = 1.0 / (order * h_nm1**2)
    weights = weights / weights.sum() if order > 0 else weights
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def hermite_rule(order: int) -> QuadratureRule:
    """Gauss-Hermite rule normalized to the standard normal density."""
    if not isinstance(order, (int, np.integer)) or not 1 <= order <= MAX_ORDER:
        raise ValueError(f"order must be in [1, {MAX_ORDER}], got {order}")
    nodes, weights = _rule(int(order))
    return QuadratureRule(nodes, weights, int(order))


def quad_shifted_integral(k: int, gamma: float, beta: float, v: float, rule: QuadratureRule) -> float:
    """E[(gamma Z + beta v)^k] by quadrature."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if rule.order < k + 1:
        raise PrecisionError(f"rule of order {rule.order} is too coarse for degree {k}")
    return rule.expect(lambda u: (gamma * u + beta * v) ** k)


def quad_tensor(h: Callable, n: int, rule: QuadratureRule) -> float:
    """E[h(Z_1, ..., Z_n)] by tensor-product quadrature, n <= 3.

    ``h`` receives n broadcastable arrays.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > MAX_TENSOR_DIM:
        raise ValueError(f"tensor quadrature limited to n <= {MAX_TENSOR_DIM}, got {n}")
    grids = np.meshgrid(*([rule.nodes] * n), indexing="ij")
    wgrids = np.meshgrid(*([rule.weights] * n), indexing="ij")
    w = np.ones_like(grids[0])
    for wg in wgrids:
        w = w * wg
    vals = np.broadcast_to(np.asarray(h(*grids), dtype=float), w.shape)
    return float(np.sum(w * vals))
