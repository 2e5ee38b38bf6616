"""Seedable random-variate primitives shared by the samplers and the generator.

All randomness in the package flows through an :class:`RngHandle`, one per
chain.  A handle is fully determined by ``(seed, stream)``: the same pair
yields the same variate sequence, which is what makes traces replayable.
"""

from __future__ import annotations

import numpy as np


class RngHandle:
    """A PCG64 generator pinned to a (seed, stream) pair.

    Distinct streams derived from the same seed are statistically
    independent (they come from ``SeedSequence.spawn_key``), so one handle
    per chain is safe to use concurrently with other chains.
    """

    def __init__(self, seed: int, stream: int = 0):
        self.seed = int(seed)
        self.stream = int(stream)
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        self.generator = np.random.Generator(np.random.PCG64(ss))

    def __repr__(self):
        return f"RngHandle(seed={self.seed}, stream={self.stream})"


def _check_positive(name, value):
    if not np.all(np.isfinite(value)) or not np.all(np.asarray(value) > 0):
        raise ValueError(f"{name} must be finite and > 0, got {value!r}")


def draw_gamma(shape, rate, rng: RngHandle):
    """Gamma variate with mean shape/rate (rate parameterization)."""
    _check_positive("shape", shape)
    _check_positive("rate", rate)
    return rng.generator.gamma(shape, 1.0 / np.asarray(rate, dtype=float))


def draw_beta(c, d, rng: RngHandle):
    """Beta(c, d) variate; mean c/(c+d)."""
    _check_positive("c", c)
    _check_positive("d", d)
    return rng.generator.beta(c, d)


def draw_categorical(weights, rng: RngHandle) -> int:
    """Index k with probability weights[k] / sum(weights).

    Weights need not be normalized but must be nonnegative with a
    positive sum.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("weights must be a nonempty 1-d vector")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite and nonnegative")
    total = w.sum()
    if total <= 0:
        raise ValueError("weights must have a positive sum")
    cum = np.cumsum(w)
    u = rng.generator.random() * total
    return int(np.searchsorted(cum, u, side="right").clip(0, w.size - 1))


def draw_poisson(lam, rng: RngHandle):
    """Poisson variate; lam must be >= 0 (lam == 0 yields 0)."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < 0) or not np.all(np.isfinite(lam)):
        raise ValueError("lam must be finite and >= 0")
    return rng.generator.poisson(lam)


def draw_bernoulli(p, rng: RngHandle):
    """Bernoulli variate in {0, 1}."""
    p = np.asarray(p, dtype=float)
    if np.any(p < 0) or np.any(p > 1) or not np.all(np.isfinite(p)):
        raise ValueError("p must lie in [0, 1]")
    return (rng.generator.random(p.shape if p.shape else None) < p).astype(np.int64)


def stick_break(gamma: float, count: int, rng: RngHandle):
    """Break `count` sticks with Beta(1, gamma) proportions.

    Returns ``(weights, residual)`` where ``weights[k] = v_k * prod_{l<k}
    (1 - v_l)`` and ``residual = prod_k (1 - v_k)``; the telescoping
    guarantees they sum to one.
    """
    _check_positive("gamma", gamma)
    if count < 0:
        raise ValueError("count must be >= 0")
    if count == 0:
        return np.empty(0, dtype=float), 1.0
    v = rng.generator.beta(1.0, gamma, size=count)
    remaining = np.concatenate([[1.0], np.cumprod(1.0 - v)])
    weights = v * remaining[:-1]
    return weights, float(remaining[-1])
