"""Monte Carlo oracle: full per-snapshot channel simulation.

Samples are generated in fixed-size chunks, each chunk owning an
independent random stream derived from (seed, chunk_index), so estimates
are a pure function of the inputs and the seed: worker count and
scheduling never change the result.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .fading import MGDistribution
from .geometry import MisalignmentStats
from .outage import HardwareProfile

__all__ = ["MCConfig", "MCEstimate", "simulate_op", "simulate_cdf"]


@dataclass(frozen=True)
class MCConfig:
    samples: int
    seed: int = 0
    chunk_size: int = 1 << 16
    workers: int | str = "auto"

    def __post_init__(self):
        if self.samples <= 0:
            raise ConfigError(f"samples must be positive, got {self.samples}")
        if self.chunk_size <= 0:
            raise ConfigError(f"chunk_size must be positive, got {self.chunk_size}")

    def resolved_workers(self) -> int:
        env = os.environ.get("RIS_OUTAGE_THREADS")
        if env:
            return max(1, int(env))
        if self.workers == "auto":
            return min(8, os.cpu_count() or 1)
        n = int(self.workers)
        if n < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        return n


@dataclass(frozen=True)
class MCEstimate:
    """Estimated outage probability with binomial standard error.

    tail_flag is set when fewer than ~10 outage events can be resolved at
    this sample count: the estimate cannot certify such tails.
    """

    op_hat: float
    stderr: float
    n: int
    elapsed: float
    tail_flag: bool = False


def _chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    # splittable derivation: stream is a pure function of (seed, index)
    return np.random.Generator(
        np.random.Philox(key=np.uint64(seed & 0xFFFFFFFFFFFFFFFF), counter=[0, 0, 0, chunk_index])
    )


def _chunk_sizes(total: int, chunk: int) -> list[int]:
    full, rem = divmod(total, chunk)
    return [chunk] * full + ([rem] if rem else [])


def _sample_mixture_sq(
    d: MGDistribution, rng: np.random.Generator, shape: tuple[int, ...]
) -> np.ndarray:
    """Squared envelopes drawn from the Gamma mixture (vectorized)."""
    idx = rng.choice(len(d.weights), size=shape, p=d.weights)
    return rng.gamma(shape=d.shapes[idx], scale=1.0 / d.rate)


def _draw_gain(
    d1: MGDistribution,
    d2: MGDistribution,
    n_elements: int,
    mis: MisalignmentStats | None,
    rng: np.random.Generator,
    n: int,
) -> np.ndarray:
    """Per-snapshot end-to-end gains: A (aligned) or h_g * A."""
    h = np.sqrt(_sample_mixture_sq(d1, rng, (n, n_elements)))
    g = np.sqrt(_sample_mixture_sq(d2, rng, (n, n_elements)))
    a = (h * g).sum(axis=1)
    if mis is not None:
        u = 1.0 - rng.random(size=n)
        a = a * (mis.b_o * u ** (1.0 / mis.zeta))
    return a


def simulate_op(
    d1: MGDistribution,
    d2: MGDistribution,
    n_elements: int,
    mis: MisalignmentStats | None,
    hw: HardwareProfile,
    gamma: float,
    gamma_th: float,
    cfg: MCConfig,
) -> MCEstimate:
    """Estimate P(gamma_u <= gamma_th) for the full channel model.

    Per snapshot: draw the N envelope pairs (and h_g if misaligned), form
    the instantaneous SNR/SDNR
        gamma_u = gain^2 / (kappa^2 gain^2 + 1/gamma)
    (conditionally exact in the distortions, so none are drawn), and count
    threshold crossings.  Chunk counts are integers, so aggregation is
    order independent.
    """
    if n_elements < 1:
        raise ConfigError(f"n_elements must be >= 1, got {n_elements}")
    start = time.perf_counter()
    k2 = hw.kappa_sq_sum
    sizes = _chunk_sizes(cfg.samples, cfg.chunk_size)

    def run_chunk(args) -> int:
        index, n = args
        rng = _chunk_rng(cfg.seed, index)
        gain = _draw_gain(d1, d2, n_elements, mis, rng, n)
        g2 = gain * gain
        gamma_u = g2 / (k2 * g2 + 1.0 / gamma)
        return int(np.count_nonzero(gamma_u <= gamma_th))

    workers = cfg.resolved_workers()
    tasks = list(enumerate(sizes))
    if workers == 1 or len(tasks) == 1:
        counts = [run_chunk(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(run_chunk, tasks))
    hits = sum(counts)
    n = cfg.samples
    p_hat = hits / n
    stderr = math.sqrt(p_hat * (1.0 - p_hat) / n)
    return MCEstimate(
        op_hat=p_hat,
        stderr=stderr,
        n=n,
        elapsed=time.perf_counter() - start,
        tail_flag=hits < 10,
    )


def simulate_cdf(
    d1: MGDistribution,
    d2: MGDistribution,
    n_elements: int,
    mis: MisalignmentStats | None,
    grid,
    cfg: MCConfig,
) -> list[tuple[float, float, float]]:
    """Empirical CDF of A (or A_e2e when misaligned) on a grid, from one
    shared sample set.  Returns (x, cdf_hat, stderr) per grid point."""
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ConfigError("grid is empty")
    if np.any(np.diff(grid) <= 0) or np.any(grid < 0):
        raise ConfigError("grid must be strictly increasing and nonnegative")
    if n_elements < 1:
        raise ConfigError(f"n_elements must be >= 1, got {n_elements}")
    sizes = _chunk_sizes(cfg.samples, cfg.chunk_size)

    def run_chunk(args) -> np.ndarray:
        index, n = args
        rng = _chunk_rng(cfg.seed, index)
        gain = _draw_gain(d1, d2, n_elements, mis, rng, n)
        return np.searchsorted(grid, gain, side="left").astype(np.int64)

    workers = cfg.resolved_workers()
    tasks = list(enumerate(sizes))
    # bucket j counts samples with grid[j-1] < gain <= grid[j]
    bucket_counts = np.zeros(grid.size + 1, dtype=np.int64)
    if workers == 1 or len(tasks) == 1:
        results = (run_chunk(t) for t in tasks)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = pool.map(run_chunk, tasks)
    for idx in results:
        bucket_counts += np.bincount(idx, minlength=grid.size + 1)
    n = cfg.samples
    below = np.cumsum(bucket_counts)[:-1]  # below[j] = count(gain <= grid[j])
    out = []
    for j, x in enumerate(grid):
        p_hat = below[j] / n
        out.append((float(x), float(p_hat), math.sqrt(p_hat * (1.0 - p_hat) / n)))
    return out
