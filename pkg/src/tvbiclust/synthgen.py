"""Synthetic time-varying relational count data for the simulation study.

The generator builds a ground-truth block structure, moves a fixed
fraction of objects between clusters at every step, draws Poisson counts,
and then zeroes cells at random to create zero inflation.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .rng import RngHandle
from .types import ClusterState, CountTensor


@dataclass
class SynthConfig:
    """Settings for one synthetic dataset (defaults mirror the study grid)."""

    k: int = 4
    t: int = 5
    n: int = 16
    lambda_max: int = 9
    movement_ratio: float = 0.1
    zero_ratio: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if not (0.0 <= self.movement_ratio <= 1.0):
            raise ValueError("movement ratio must lie in [0, 1]")
        if not (0.0 <= self.zero_ratio <= 1.0):
            raise ValueError("zero ratio must lie in [0, 1]")
        if self.k > self.n:
            raise ValueError("need at least as many objects as clusters")
        if self.k < 1 or self.t < 1 or self.n < 1:
            raise ValueError("k, t, n must be >= 1")


@dataclass
class SuiteConfig:
    """Cartesian grid of movement and zero ratios, `replicates` datasets each."""

    movement_ratios: tuple = (0.1, 0.2, 0.3)
    zero_ratios: tuple = (0.3, 0.5, 0.7)
    replicates: int = 50
    k: int = 4
    t: int = 5
    n: int = 16
    lambda_max: int = 9
    seed: int = 0


def generate_dataset(cfg: SynthConfig, rng: RngHandle | None = None):
    """Draw one dataset; returns (CountTensor, true ClusterState, true lambda).

    Block rates come from a discrete uniform on {0, .., lambda_max};
    lambda = 0 blocks emit exact zeros, which is accepted, but a fully
    zero rate matrix is redrawn (nothing to learn from it).  The t=1
    assignment is balanced, and at each step ceil(m*N) objects move to a
    uniformly chosen *different* cluster.  Finally every cell is zeroed
    independently with probability s, zeros included.
    """
    if rng is None:
        rng = RngHandle(cfg.seed)
    gen = rng.generator
    k, t_steps, n = cfg.k, cfg.t, cfg.n

    lam = gen.integers(0, cfg.lambda_max + 1, size=(k, k))
    while not lam.any():
        lam = gen.integers(0, cfg.lambda_max + 1, size=(k, k))

    if n % k != 0:
        warnings.warn("K does not divide N; using a balanced-up-to-one assignment")
    base = np.arange(n) % k
    z = np.empty((t_steps, n), dtype=np.int64)
    z[0] = np.sort(base)
    n_move = int(np.ceil(cfg.movement_ratio * n))
    for t in range(1, t_steps):
        z[t] = z[t - 1]
        movers = gen.choice(n, size=n_move, replace=False)
        for i in movers:
            offset = gen.integers(1, k) if k > 1 else 0
            z[t, i] = (z[t, i] + offset) % k
    counts = gen.poisson(lam[z[:, :, None], z[:, None, :]])
    zero_mask = gen.random(counts.shape) < cfg.zero_ratio
    counts[zero_mask] = 0
    truth = ClusterState(z=z, k_active=k)
    return CountTensor(counts), truth, lam


def dataset_seed(base_seed: int, m: float, s: float, replicate: int) -> int:
    """Deterministic, collision-resistant per-dataset seed."""
    key = f"{base_seed}:{m}:{s}:{replicate}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big") >> 1


def generate_suite(cfg: SuiteConfig, out_dir):
    """Write the full m x s grid of datasets plus a manifest.

    Each dataset goes to ``<out>/m{m}_s{s}_rep{r}/`` as data.csv plus a
    truth.json sidecar; the manifest at the suite root lists every entry
    with its seed so any dataset can be regenerated byte-identically.
    """
    from . import dataio  # local import to keep the module graph acyclic

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for m in cfg.movement_ratios:
        for s in cfg.zero_ratios:
            for rep in range(cfg.replicates):
                seed = dataset_seed(cfg.seed, m, s, rep)
                ds_cfg = SynthConfig(
                    k=cfg.k, t=cfg.t, n=cfg.n, lambda_max=cfg.lambda_max,
                    movement_ratio=m, zero_ratio=s, seed=seed,
                )
                x, truth, lam = generate_dataset(ds_cfg)
                name = f"m{m}_s{s}_rep{rep:02d}"
                ds_dir = out_dir / name
                ds_dir.mkdir(exist_ok=True)
                dataio.write_tensor_csv(x, ds_dir / "data.csv")
                with open(ds_dir / "truth.json", "w") as fh:
                    json.dump(
                        {
                            "z": (truth.z + 1).tolist(),
                            "lambda": lam.tolist(),
                            "k": cfg.k,
                            "seed": seed,
                        },
                        fh,
                    )
                entries.append(
                    {
                        "name": name,
                        "movement_ratio": m,
                        "zero_ratio": s,
                        "replicate": rep,
                        "seed": seed,
                        "data": f"{name}/data.csv",
                        "truth": f"{name}/truth.json",
                    }
                )
    manifest = {
        "base_seed": cfg.seed,
        "dims": {"k": cfg.k, "t": cfg.t, "n": cfg.n},
        "lambda_max": cfg.lambda_max,
        "replicates": cfg.replicates,
        "datasets": entries,
    }
    manifest_path = out_dir / "manifest.json"
    with open(manifest_path, "w") as fh:
        json.dump(manifest, fh, indent=1)
    return manifest_path
