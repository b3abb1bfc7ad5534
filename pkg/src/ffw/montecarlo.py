"""Wiener-measure sampling and Monte Carlo estimators.

Two ways to draw the coordinates (<alpha_1, x>, ..., <alpha_n, x>):

* ``direct-gaussian``: independent standard normals, which is their exact
  joint law for an orthonormal system.
* ``path-pwz``: simulate a Brownian path on a uniform grid and take
  left-endpoint Riemann-Stieltjes sums against the cosine basis.

Randomness is counter based.  Samples are grouped in fixed-size blocks and
block ``b`` draws from a Philox stream keyed by ``(seed, domain, b)``, so the
seed and the sample index alone determine every draw.  Blocks are reduced in
index order, which makes results bit-identical for any worker count.
"""
from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .cylinder import MonomialFunctional

MODES = ("direct-gaussian", "path-pwz")
SEED_ENV = "FFW_SEED"

_DOMAIN_PATH = 1
_DOMAIN_DIRECT = 2
_DOMAIN_ESTIMATE = 3

DIRECT_BLOCK = 16384
PATH_BLOCK_DOUBLES = 1 << 20  # bound on block memory for path mode


class SamplingError(RuntimeError):
    """An evaluator returned a non-finite value."""

    def __init__(self, message: str, sample_index: int, coordinates: Sequence[float]):
        super().__init__(f"{message} at sample {sample_index}, coordinates {list(coordinates)}")
        self.sample_index = sample_index
        self.coordinates = list(coordinates)


def default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


@dataclass(frozen=True)
class WienerMCConfig:
    samples: int = 100_000
    grid: int = 1024
    seed: int = 0
    workers: int = 1
    mode: str = "direct-gaussian"
    horizon: float = 1.0

    def __post_init__(self):
        if self.samples < 100:
            raise ValueError(f"samples must be >= 100, got {self.samples}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "path-pwz" and self.grid < 2:
            raise ValueError("path-pwz mode needs grid >= 2")
        if self.grid < 1:
            raise ValueError(f"grid must be >= 1, got {self.grid}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not self.horizon > 0:
            raise ValueError("horizon must be positive")

    @classmethod
    def from_dict(cls, obj: Mapping) -> "WienerMCConfig":
        known = {"samples", "grid", "seed", "workers", "mode", "horizon"}
        extra = set(obj) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        return cls(**dict(obj))

    @classmethod
    def from_json(cls, text: str) -> "WienerMCConfig":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        out = asdict(self)
        if out["horizon"] == 1.0:
            del out["horizon"]
        return out

    def replace(self, **changes) -> "WienerMCConfig":
        return WienerMCConfig(**{**asdict(self), **changes})


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int
    mode: str = "direct-gaussian"

    def within(self, target: float, k: float = 3.0) -> bool:
        return abs(self.mean - target) <= k * self.std_error

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class OrthonormalSystem:
    """alpha_j(t) = sqrt(2/T) cos((j - 1/2) pi t / T), j = 1..count."""

    count: int
    horizon: float = 1.0
    kind: str = "cosine"

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be positive")
        if self.kind != "cosine":
            raise ValueError(f"unsupported basis kind {self.kind!r}")
        if not self.horizon > 0:
            raise ValueError("horizon must be positive")

    def alpha(self, j: int) -> Callable[[np.ndarray], np.ndarray]:
        """The j-th basis function, j starting at 1."""
        if not 1 <= j <= self.count:
            raise ValueError(f"basis index {j} outside 1..{self.count}")
        T = self.horizon
        scale = math.sqrt(2.0 / T)
        freq = (j - 0.5) * math.pi / T
        return lambda t: scale * np.cos(freq * np.asarray(t, dtype=float))

    def matrix(self, t: np.ndarray) -> np.ndarray:
        """Values alpha_j(t_i) as an array of shape (count, len(t))."""
        return np.stack([self.alpha(j)(t) for j in range(1, self.count + 1)])


@dataclass(frozen=True)
class BrownianPath:
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != self.times.shape:
            raise ValueError("times and values must have equal shape")
        if self.values[0] != 0.0:
            raise ValueError("Brownian path must start at 0")


def _generator(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


def _grid(cfg: WienerMCConfig) -> np.ndarray:
    return np.linspace(0.0, cfg.horizon, cfg.grid + 1)


def sample_path(cfg: WienerMCConfig, stream_index: int, grid: Optional[int] = None) -> BrownianPath:
    """One Brownian path with ``grid`` (default cfg.grid) uniform increments.

    ``grid=1`` gives a single N(0, T) endpoint.
    """
    if cfg.mode != "path-pwz":
        raise ValueError("sample_path requires mode 'path-pwz'")
    grid = cfg.grid if grid is None else grid
    if grid < 1:
        raise ValueError(f"grid must be >= 1, got {grid}")
    return _sample_path(cfg.seed, grid, cfg.horizon, stream_index)


def _sample_path(seed: int, grid: int, horizon: float, stream_index: int) -> BrownianPath:
    gen = _generator(seed, _DOMAIN_PATH, stream_index)
    dw = gen.standard_normal(grid) * math.sqrt(horizon / grid)
    values = np.concatenate([[0.0], np.cumsum(dw)])
    return BrownianPath(np.linspace(0.0, horizon, grid + 1), values)


def pwz_integral(alpha: Callable[[np.ndarray], np.ndarray], path: BrownianPath) -> float:
    """Left-endpoint Riemann-Stieltjes sum of alpha against the path."""
    left = np.asarray(alpha(path.times[:-1]), dtype=float)
    return float(np.dot(left, np.diff(path.values)))


def direct_gaussian_sample(n: int, cfg: WienerMCConfig, stream_index: int) -> np.ndarray:
    """n independent standard normals, determined by (seed, stream_index)."""
    if cfg.mode != "direct-gaussian":
        raise ValueError("direct_gaussian_sample requires mode 'direct-gaussian'")
    if n < 1:
        raise ValueError("n must be positive")
    return _generator(cfg.seed, _DOMAIN_DIRECT, stream_index).standard_normal(n)


def gram_check(system: OrthonormalSystem, M: int) -> float:
    """max |<alpha_j, alpha_k> - delta_jk| with trapezoidal quadrature on M intervals."""
    if M < 2:
        raise ValueError("M must be >= 2")
    t = np.linspace(0.0, system.horizon, M + 1)
    A = system.matrix(t)
    w = np.full(M + 1, system.horizon / M)
    w[0] = w[-1] = system.horizon / (2 * M)
    gram = (A * w) @ A.T
    return float(np.max(np.abs(gram - np.eye(system.count))))


# ---------------------------------------------------------------- estimators


def _block_size(cfg: WienerMCConfig) -> int:
    if cfg.mode == "direct-gaussian":
        return DIRECT_BLOCK
    return max(1, PATH_BLOCK_DOUBLES // cfg.grid)


def coordinate_block(cfg: WienerMCConfig, n: int, block: int, size: int, pwz_matrix=None) -> np.ndarray:
    """Coordinates (<alpha_j, x>)_j for ``size`` samples of block ``block``; shape (size, n)."""
    gen = _generator(cfg.seed, _DOMAIN_ESTIMATE, n, block)
    if cfg.mode == "direct-gaussian":
        return gen.standard_normal((size, n))
    if pwz_matrix is None:
        pwz_matrix = OrthonormalSystem(n, cfg.horizon).matrix(_grid(cfg)[:-1])
    dw = gen.standard_normal((size, cfg.grid))
    dw *= math.sqrt(cfg.horizon / cfg.grid)
    return dw @ pwz_matrix.T


def _merge(stats: List[Tuple[int, float, float]]) -> Tuple[int, float, float]:
    """Combine per-block (count, mean, M2) in order."""
    count, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b in stats:
        if nb == 0:
            continue
        total = count + nb
        delta = mb - mean
        mean += delta * nb / total
        m2 += m2b + delta * delta * count * nb / total
        count = total
    return count, mean, m2


def estimate_wiener_integral(
    evaluator: Callable[..., np.ndarray], n: int, cfg: WienerMCConfig
) -> MCEstimate:
    """Monte Carlo estimate of E[evaluator(<alpha_1, x>, ..., <alpha_n, x>)].

    ``evaluator`` is called with n numpy arrays (one per coordinate) and must
    return an array of the same length, or a scalar.
    """
    if n < 1:
        raise ValueError("n must be positive")
    size = _block_size(cfg)
    nblocks = -(-cfg.samples // size)
    pwz_matrix = None
    if cfg.mode == "path-pwz":
        pwz_matrix = OrthonormalSystem(n, cfg.horizon).matrix(_grid(cfg)[:-1])

    def run(block: int):
        start = block * size
        m = min(size, cfg.samples - start)
        coords = coordinate_block(cfg, n, block, m, pwz_matrix)
        vals = np.broadcast_to(
            np.asarray(evaluator(*coords.T), dtype=float), (m,)
        )
        bad = ~np.isfinite(vals)
        if bad.any():
            i = int(np.argmax(bad))
            raise SamplingError("non-finite evaluator output", start + i, coords[i])
        mb = float(vals.mean())
        return m, mb, float(np.sum((vals - mb) ** 2))

    if cfg.workers == 1 or nblocks == 1:
        stats = [run(b) for b in range(nblocks)]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            stats = list(pool.map(run, range(nblocks)))
    count, mean, m2 = _merge(stats)
    var = m2 / (count - 1) if count > 1 else 0.0
    return MCEstimate(mean, math.sqrt(var / count), count, cfg.seed, cfg.mode)


def estimate_t_lambda(
    F: MonomialFunctional, lam: float, v: Sequence[float], cfg: WienerMCConfig
) -> MCEstimate:
    """Monte Carlo estimate of the integral of F(lam^{-1/2} x + y) over Wiener space."""
    if not lam > 0:
        raise ValueError(f"lambda must be positive for sampling, got {lam}")
    if len(v) != F.dimension:
        raise ValueError(f"expected {F.dimension} shift coordinates, got {len(v)}")
    scale = 1.0 / math.sqrt(lam)
    shift = [float(x) for x in v]

    def evaluator(*z):
        return F(*(scale * zj + sj for zj, sj in zip(z, shift)))

    return estimate_wiener_integral(evaluator, F.dimension, cfg)
