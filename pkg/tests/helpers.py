"""Shared test utilities: brute-force oracles and random state builders."""

import numpy as np

from tvbiclust.rng import RngHandle
from tvbiclust.types import ClusterState, CountTensor, Hyperparams


def rand_index_oracle(p, q) -> float:
    """O(n^2) pair-counting Rand index, the definition taken literally."""
    p = np.asarray(p).ravel()
    q = np.asarray(q).ravel()
    n = p.size
    agree = 0
    for i in range(n):
        for j in range(i + 1, n):
            same_p = p[i] == p[j]
            same_q = q[i] == q[j]
            agree += same_p == same_q
    return agree / (n * (n - 1) / 2)


def block_stats_oracle(x: CountTensor, cs: ClusterState, r=None):
    """Loop-based per-block statistics, mirroring the vectorized version."""
    T, n1, n2 = x.dims
    k = cs.k_active
    out = {
        "count": np.zeros((k, k), dtype=np.int64),
        "sum_x": np.zeros((k, k), dtype=np.int64),
    }
    if r is not None:
        out["sum_r"] = np.zeros((k, k), dtype=np.int64)
        out["sum_rx"] = np.zeros((k, k), dtype=np.int64)
    for t in range(T):
        for i in range(n1):
            for j in range(n2):
                if not x.include_diagonal and i == j:
                    continue
                bk, bl = cs.z[t, i], cs.z[t, j]
                out["count"][bk, bl] += 1
                out["sum_x"][bk, bl] += x.counts[t, i, j]
                if r is not None:
                    out["sum_r"][bk, bl] += r[t, i, j]
                    out["sum_rx"][bk, bl] += r[t, i, j] * x.counts[t, i, j]
    return out


def random_zip_state(gen: np.random.Generator, t_max=3, n_max=5, k_max=3, lam_max=4.0):
    """Random (x, z, r) triple respecting the count-component constraint."""
    t_dim = int(gen.integers(1, t_max + 1))
    n = int(gen.integers(2, n_max + 1))
    k = int(gen.integers(1, min(k_max, n) + 1))
    z = gen.integers(0, k, size=(t_dim, n))
    # make every label in 0..k-1 appear so k_active is honest
    z[0, :k] = np.arange(k)
    lam = gen.uniform(0.1, lam_max, size=(k, k))
    counts = gen.poisson(lam[z[:, :, None], z[:, None, :]])
    # random structural zeros: clear some cells and mark them r=0
    r = np.ones_like(counts)
    clear = gen.random(counts.shape) < 0.4
    counts[clear] = 0
    r[clear & (gen.random(counts.shape) < 0.6)] = 0
    r[counts > 0] = 1
    x = CountTensor(counts)
    cs = ClusterState(z=z, k_active=k)
    return x, cs, r


def zip_r_enumeration(x: CountTensor, cs: ClusterState, lam, w) -> float:
    """Zero-inflated likelihood with the cell indicators summed out by brute force.

    Enumerates every binary r configuration consistent with the counts
    (cells with x > 0 force r = 1) and accumulates
    p(r) * p(x | r) over all of them in log space.
    """
    import itertools
    import math

    from tvbiclust.densities import poisson_log_pmf

    lam_cells = np.asarray(lam)[cs.z[:, :, None], cs.z[:, None, :]]
    t_dim, n1, n2 = x.dims
    cells = [(t, i, j) for t in range(t_dim) for i in range(n1) for j in range(n2)]
    free = [c for c in cells if x.counts[c] == 0]
    forced_term = sum(
        math.log(w[c]) + poisson_log_pmf(int(x.counts[c]), lam_cells[c])
        for c in cells
        if x.counts[c] > 0
    )
    total = -np.inf
    for bits in itertools.product((0, 1), repeat=len(free)):
        logp = forced_term
        for c, r in zip(free, bits):
            if r:
                logp += math.log(w[c]) - lam_cells[c]  # Pois(0; lam) = exp(-lam)
            else:
                logp += math.log(1 - w[c])
        total = np.logaddexp(total, logp)
    return float(total)


def fresh_rng(seed: int, stream: int = 0) -> RngHandle:
    return RngHandle(seed, stream)


def default_hp() -> Hyperparams:
    return Hyperparams()
