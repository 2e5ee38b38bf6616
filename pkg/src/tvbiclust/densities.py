"""Exact log densities: Poisson, zero-inflated Poisson, and joint likelihoods.

All functions are pure and vectorized; scalars in, scalar out.
"""

from __future__ import annotations

import numpy as np
from scipy.special import gammaln

from .types import CountTensor, ClusterState, EmissionState, StateError


def poisson_log_pmf(x, lam):
    """log Poisson(x; lam) = x*log(lam) - lam - log(x!).

    The factorial goes through log-gamma so large counts are safe.
    """
    x = np.asarray(x)
    lam = np.asarray(lam, dtype=float)
    if np.any(x < 0) or np.any(x != np.floor(x)):
        raise ValueError("x must be a nonnegative integer")
    if np.any(lam <= 0) or not np.all(np.isfinite(lam)):
        raise ValueError("lam must be finite and > 0")
    out = x * np.log(lam) - lam - gammaln(x + 1.0)
    return out if out.ndim else float(out)


def zip_log_pmf(x, lam, w):
    """log of the zero-inflated Poisson pmf.

    The mixture is (1-w)*I(x=0) + w*Poisson(x; lam); the x=0 branch is
    evaluated with log-sum-exp so small w or large lam do not underflow.
    """
    x = np.asarray(x)
    w = np.asarray(w, dtype=float)
    if np.any(w <= 0) or np.any(w >= 1) or not np.all(np.isfinite(w)):
        raise ValueError("w must lie strictly in (0, 1)")
    pois = poisson_log_pmf(x, lam)
    zero_branch = np.logaddexp(np.log1p(-w), np.log(w) + pois)
    out = np.where(x == 0, zero_branch, np.log(w) + pois)
    return out if out.ndim else float(out)


def _lambda_cells(x: CountTensor, state: ClusterState, lam: np.ndarray) -> np.ndarray:
    z = state.z
    if z.shape[0] != x.dims[0] or z.shape[1] != x.dims[1] or x.dims[1] != x.dims[2]:
        raise StateError(f"z shape {z.shape} inconsistent with tensor dims {x.dims}")
    if state.k_active > lam.shape[0]:
        raise StateError("cluster label out of range of lambda dims")
    return lam[z[:, :, None], z[:, None, :]]


def joint_log_likelihood(x: CountTensor, state: ClusterState, emission: EmissionState, model: str) -> float:
    """Joint log-likelihood of the observed tensor under the given state.

    PIRM and dPIRM sum Poisson cell terms; dZIPIRM sums ZIP cell terms
    (the per-cell latent indicator marginalized out).  Diagonal cells are
    included iff the tensor says so.
    """
    lam_cells = _lambda_cells(x, state, emission.lam)
    mask = x.cell_mask()
    if model in ("pirm", "dpirm"):
        terms = poisson_log_pmf(x.counts, lam_cells)
    elif model == "dzipirm":
        if emission.w is None:
            raise StateError("dZIPIRM likelihood requires w")
        terms = zip_log_pmf(x.counts, lam_cells, emission.w)
    else:
        raise ValueError(f"unknown model kind {model!r}")
    return float(terms[mask].sum())


def normalized_log_likelihood(x: CountTensor, state: ClusterState, emission: EmissionState, model: str) -> float:
    """Joint log-likelihood divided by the number of included cells."""
    cells = x.n_cells
    if cells <= 0:
        raise ValueError("tensor has no included cells")
    return joint_log_likelihood(x, state, emission, model) / cells
