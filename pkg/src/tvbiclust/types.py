"""State containers shared by the samplers, generator, and evaluators.

Conventions: cluster labels are 0-based internally (1-based on disk),
arrays are numpy, and every container is a value-like snapshot -- nothing
here mutates shared state, so instances can be passed between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MODEL_KINDS = ("pirm", "dpirm", "dzipirm")

SIMPLEX_TOL = 1e-12


class StateError(ValueError):
    """Raised when a state container violates its invariants."""


@dataclass
class CountTensor:
    """Observed data: a (T, N1, N2) array of nonnegative integer counts.

    Asymmetry is permitted: counts[t, i, j] need not equal counts[t, j, i].
    ``include_diagonal`` controls whether i == j cells participate in
    likelihoods and sampling.
    """

    counts: np.ndarray
    include_diagonal: bool = True

    def __post_init__(self):
        self.counts = np.asarray(self.counts)
        if self.counts.ndim != 3:
            raise StateError(f"counts must be 3-d (T, N1, N2), got shape {self.counts.shape}")
        if not np.issubdtype(self.counts.dtype, np.integer):
            if np.any(self.counts != np.floor(self.counts)):
                raise StateError("counts must be integers")
            self.counts = self.counts.astype(np.int64)
        if any(d < 1 for d in self.counts.shape):
            raise StateError("all dims must be >= 1")
        if np.any(self.counts < 0):
            raise StateError("counts must be nonnegative")

    @property
    def dims(self):
        return self.counts.shape

    @property
    def n_cells(self) -> int:
        """Number of cells entering likelihoods (diagonal excluded if flagged)."""
        t, n1, n2 = self.counts.shape
        cells = t * n1 * n2
        if not self.include_diagonal:
            cells -= t * min(n1, n2)
        return cells

    def cell_mask(self) -> np.ndarray:
        """Boolean mask of cells included in likelihood computations."""
        t, n1, n2 = self.counts.shape
        mask = np.ones((t, n1, n2), dtype=bool)
        if not self.include_diagonal:
            k = min(n1, n2)
            idx = np.arange(k)
            mask[:, idx, idx] = False
        return mask

    def time_slice(self, t: int) -> "CountTensor":
        return CountTensor(self.counts[t : t + 1], include_diagonal=self.include_diagonal)


@dataclass
class Hyperparams:
    """Fixed hyperparameters.

    ``b`` is a Gamma RATE: the lambda prior density is proportional to
    lambda^(a-1) * exp(-b * lambda).  This matches the algebra of the
    conjugate updates even though "scale" is the more common name for the
    second Gamma argument.
    """

    a: float = 1.0
    b: float = 1.0
    c: float = 1.0
    d: float = 1.0
    gamma: float = 1.0
    alpha0: float = 1.0
    kappa: float = 1.0

    def __post_init__(self):
        for name in ("a", "b", "c", "d", "gamma", "alpha0"):
            if not (getattr(self, name) > 0) or not np.isfinite(getattr(self, name)):
                raise StateError(f"hyperparameter {name} must be > 0")
        if not (self.kappa >= 0) or not np.isfinite(self.kappa):
            raise StateError("kappa must be >= 0")


@dataclass
class ClusterState:
    """Cluster labels z[t, i] in 0..k_active-1 plus the active-cluster count."""

    z: np.ndarray
    k_active: int

    def __post_init__(self):
        self.z = np.asarray(self.z, dtype=np.int64)
        if self.z.ndim != 2:
            raise StateError("z must be 2-d (T, N)")
        if self.k_active < 1:
            raise StateError("k_active must be >= 1")
        if np.any(self.z < 0) or np.any(self.z >= self.k_active):
            raise StateError("labels must lie in 0..k_active-1")

    def canonicalize(self) -> "ClusterState":
        """Relabel clusters by order of first appearance (t-major scan).

        Idempotent; drops labels that no longer appear.
        """
        z, remap = canonical_relabel(self.z)
        return ClusterState(z=z, k_active=len(remap))


def canonical_relabel(z: np.ndarray):
    """Relabel a (T, N) label array by first appearance; returns (z', old_order).

    ``old_order[new_label] = old_label`` so downstream arrays indexed by
    cluster can be permuted consistently.
    """
    flat = np.asarray(z).ravel()
    order = []
    seen = {}
    for lab in flat:
        if lab not in seen:
            seen[lab] = len(order)
            order.append(int(lab))
    lut = np.empty(max(seen) + 1, dtype=np.int64)
    for old, new in seen.items():
        lut[old] = new
    return lut[np.asarray(z)], order


@dataclass
class DynamicsState:
    """Global weights and per-time transition rows of the sticky HDP-HMM.

    ``beta`` has length k_active + 1; the last entry is the residual mass
    of unrepresented clusters.  ``pi0`` is the initial-step row (labels at
    t=0 transition out of a virtual state with a sticky-free DP row), and
    ``pi[t-1, k]`` is the row for moving out of cluster k between t-1 and
    t.  Every row carries the same trailing residual column.
    """

    beta: np.ndarray
    pi0: np.ndarray
    pi: np.ndarray  # shape (T-1, K, K+1)

    def __post_init__(self):
        self.beta = np.asarray(self.beta, dtype=float)
        self.pi0 = np.asarray(self.pi0, dtype=float)
        self.pi = np.asarray(self.pi, dtype=float)
        k = self.beta.size - 1
        if self.pi0.size != k + 1:
            raise StateError("pi0 length must match beta")
        if self.pi.ndim != 3 or self.pi.shape[1] != k or self.pi.shape[2] != k + 1:
            raise StateError(f"pi must have shape (T-1, {k}, {k + 1})")
        if abs(self.beta.sum() - 1.0) > SIMPLEX_TOL or np.any(self.beta < 0):
            raise StateError("beta must be a probability vector")
        rows = np.concatenate([self.pi0[None, :], self.pi.reshape(-1, k + 1)], axis=0)
        if np.any(np.abs(rows.sum(axis=1) - 1.0) > SIMPLEX_TOL) or np.any(rows <= 0):
            raise StateError("every pi row must be strictly positive and sum to 1")

    @property
    def k_active(self) -> int:
        return self.beta.size - 1


@dataclass
class EmissionState:
    """Block rates lambda[k, l] plus the ZIP cell arrays (dZIPIRM only)."""

    lam: np.ndarray
    w: np.ndarray | None = None
    r: np.ndarray | None = None

    def __post_init__(self):
        self.lam = np.asarray(self.lam, dtype=float)
        if self.lam.ndim != 2 or self.lam.shape[0] != self.lam.shape[1]:
            raise StateError("lam must be a square matrix")
        if np.any(self.lam <= 0) or not np.all(np.isfinite(self.lam)):
            raise StateError("lam entries must be finite and > 0")
        if self.w is not None:
            self.w = np.asarray(self.w, dtype=float)
            if np.any(self.w <= 0) or np.any(self.w >= 1):
                raise StateError("w entries must lie in (0, 1)")
        if self.r is not None:
            self.r = np.asarray(self.r, dtype=np.int64)
            if not np.isin(self.r, (0, 1)).all():
                raise StateError("r entries must be binary")

    def check_r_constraint(self, x: CountTensor):
        """x > 0 forces r = 1; anything else is an inconsistent state."""
        if self.r is None:
            raise StateError("state has no r array")
        mask = x.cell_mask()
        if np.any((x.counts > 0) & (self.r == 0) & mask):
            raise StateError("r must be 1 wherever x > 0")


@dataclass
class SweepRecord:
    """One per-sweep snapshot kept in a trace."""

    sweep: int
    z: np.ndarray
    lam: np.ndarray
    joint_log_likelihood: float
    k_active: int
    beta: np.ndarray | None = None
    block_stats: dict | None = None  # dZIPIRM: per-block count/sum_x/sum_rx/sum_r
    w_mean: float | None = None
    r_fraction: float | None = None


@dataclass
class McmcTrace:
    """Per-sweep snapshots of a single chain plus RNG provenance."""

    model: str
    seed: int
    stream: int
    config_digest: str
    sweeps: list[SweepRecord] = field(default_factory=list)

    def validate(self):
        idx = [rec.sweep for rec in self.sweeps]
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise StateError("sweep indices must be strictly increasing")

    def best_sweep(self, burn_in: int = 0) -> SweepRecord:
        """The post-burn-in sweep maximizing the joint log-likelihood."""
        tail = [rec for rec in self.sweeps if rec.sweep >= burn_in]
        if not tail:
            raise StateError("no sweeps past burn-in")
        return max(tail, key=lambda rec: rec.joint_log_likelihood)
