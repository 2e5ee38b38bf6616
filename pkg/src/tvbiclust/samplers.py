"""MCMC sweeps: conjugate full conditionals, beam-sampled assignments, and
the auxiliary-variable update for the global weights and transition rows.

One chain is strictly sequential; run several chains with distinct RNG
streams if you want parallelism.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .densities import joint_log_likelihood
from .rng import RngHandle
from .types import (
    ClusterState,
    CountTensor,
    DynamicsState,
    EmissionState,
    Hyperparams,
    McmcTrace,
    StateError,
    SweepRecord,
    canonical_relabel,
)

_TINY = 1e-300


class TruncationError(RuntimeError):
    """Raised when slice extension would need more clusters than the cap allows."""


@dataclass
class SweepConfig:
    """Knobs for one chain."""

    model: str = "dpirm"
    sweeps: int = 300
    burn_in: int = 100
    truncation_cap: int = 50
    point_estimate: str = "max-joint-likelihood"  # or "last-sweep"
    init: str = "single"  # or "random"
    init_k: int = 4

    def __post_init__(self):
        if self.model not in ("pirm", "dpirm", "dzipirm"):
            raise ValueError(f"unknown model kind {self.model!r}")
        if self.sweeps < 1:
            raise ValueError("sweeps must be >= 1")
        if not (0 <= self.burn_in < self.sweeps):
            raise ValueError("burn-in must satisfy 0 <= burn_in < sweeps")
        if self.truncation_cap < 1:
            raise ValueError("truncation cap must be >= 1")
        if self.point_estimate not in ("max-joint-likelihood", "last-sweep"):
            raise ValueError("point-estimate rule must be max-joint-likelihood or last-sweep")
        if self.init not in ("single", "random", "warm"):
            raise ValueError("init must be single, random, or warm")
        if self.init_k < 1:
            raise ValueError("init_k must be >= 1")


# ---------------------------------------------------------------------------
# block statistics and conjugate updates


def block_stats(x: CountTensor, cs: ClusterState, r: np.ndarray | None = None):
    """Per-block cell counts and sums over C_kl = {(t,i,j): z_ti=k, z_tj=l}.

    Returns a dict with (K, K) integer arrays: ``count``, ``sum_x`` and,
    when r is given, ``sum_r`` and ``sum_rx``.  Cells excluded by the
    diagonal flag never enter any block.
    """
    X = x.counts
    T, N, _ = X.shape
    k = cs.k_active
    z = cs.z
    count = np.zeros((k, k), dtype=np.int64)
    sum_x = np.zeros((k, k), dtype=np.int64)
    sum_r = np.zeros((k, k), dtype=np.int64) if r is not None else None
    sum_rx = np.zeros((k, k), dtype=np.int64) if r is not None else None
    for t in range(T):
        h = np.zeros((N, k))
        h[np.arange(N), z[t]] = 1.0
        occ = h.sum(axis=0)
        count += np.rint(np.outer(occ, occ)).astype(np.int64)
        sum_x += np.rint(h.T @ X[t] @ h).astype(np.int64)
        if r is not None:
            sum_r += np.rint(h.T @ r[t] @ h).astype(np.int64)
            sum_rx += np.rint(h.T @ (X[t] * r[t]) @ h).astype(np.int64)
        if not x.include_diagonal:
            diag_occ = np.bincount(z[t], minlength=k)
            count[np.arange(k), np.arange(k)] -= diag_occ
            np.add.at(sum_x, (z[t], z[t]), -X[t].diagonal())
            if r is not None:
                np.add.at(sum_r, (z[t], z[t]), -r[t].diagonal())
                np.add.at(sum_rx, (z[t], z[t]), -(X[t] * r[t]).diagonal())
    out = {"count": count, "sum_x": sum_x}
    if r is not None:
        out["sum_r"] = sum_r
        out["sum_rx"] = sum_rx
    return out


def sample_lambda_dpirm(x: CountTensor, cs: ClusterState, hp: Hyperparams, rng: RngHandle) -> np.ndarray:
    """Gamma(a + sum x, b + cell count) draw per block; the prior for empty blocks."""
    stats = block_stats(x, cs)
    return _gamma_matrix(hp.a + stats["sum_x"], hp.b + stats["count"], rng)


def sample_lambda_dzipirm(
    x: CountTensor, cs: ClusterState, r: np.ndarray, hp: Hyperparams, rng: RngHandle
) -> np.ndarray:
    """Gamma(a + sum x, b + sum r) draw per block.

    Only cells currently attributed to the count component (r = 1) enter
    the rate; x > 0 cells must have r = 1 or the state is inconsistent.
    """
    if np.any((x.counts > 0) & (r == 0)):
        raise StateError("r must be 1 wherever x > 0")
    stats = block_stats(x, cs, r=r)
    return _gamma_matrix(hp.a + stats["sum_x"], hp.b + stats["sum_r"], rng)


def _gamma_matrix(shape, rate, rng: RngHandle):
    lam = rng.generator.gamma(shape, 1.0 / np.asarray(rate, dtype=float))
    return np.maximum(lam, _TINY)


def sample_w(r: np.ndarray, hp: Hyperparams, rng: RngHandle) -> np.ndarray:
    """Per-cell Beta(c + r, d + 1 - r) draw."""
    w = rng.generator.beta(hp.c + r, hp.d + 1.0 - r)
    return np.clip(w, 1e-12, 1.0 - 1e-12)


def sample_r(x: CountTensor, cs: ClusterState, lam: np.ndarray, w: np.ndarray, rng: RngHandle) -> np.ndarray:
    """Per-cell indicator of the count component.

    x > 0 forces r = 1.  For x = 0 the odds of the count component versus
    the point mass are w*exp(-lam) : (1-w), evaluated in log space.
    """
    lam_cells = lam[cs.z[:, :, None], cs.z[:, None, :]]
    log_p1 = np.log(w) - lam_cells
    log_den = np.logaddexp(log_p1, np.log1p(-w))
    p1 = np.exp(log_p1 - log_den)
    r = (rng.generator.random(x.counts.shape) < p1).astype(np.int64)
    r[x.counts > 0] = 1
    return r


# ---------------------------------------------------------------------------
# dynamics (global weights + transition rows)


def _crt_tables(n: int, theta: float, rng: RngHandle) -> int:
    """Number of tables spawned by n sequential customers with mass theta."""
    if n == 0:
        return 0
    probs = theta / (theta + np.arange(n))
    return int((rng.generator.random(n) < probs).sum())


def sample_dynamics(
    cs: ClusterState, hp: Hyperparams, rng: RngHandle, beta: np.ndarray | None = None
) -> DynamicsState:
    """Redraw (beta, pi0, pi) given the assignments.

    Table counts follow the Chinese-restaurant-franchise augmentation with
    the sticky correction: tables serving the self-transition dish are
    overridden with probability kappa / (kappa + alpha0*beta_k) and do not
    count toward the global weights.  ``beta`` is the current value used to
    seat customers; when omitted (cold start), a uniform placeholder is
    refreshed through a few internal cycles.
    """
    z = cs.z
    T, N = z.shape
    k = cs.k_active
    n0 = np.bincount(z[0], minlength=k)
    ntrans = np.zeros((max(T - 1, 0), k, k), dtype=np.int64)
    for t in range(1, T):
        np.add.at(ntrans[t - 1], (z[t - 1], z[t]), 1)

    cycles = 1
    if beta is None:
        beta = np.full(k + 1, 1.0 / (k + 1))
        cycles = 5
    for _ in range(cycles):
        mbar_dot = np.zeros(k)
        for dish in range(k):
            mbar_dot[dish] += _crt_tables(int(n0[dish]), hp.alpha0 * beta[dish], rng)
        for t in range(T - 1):
            for src in range(k):
                for dish in range(k):
                    n = int(ntrans[t, src, dish])
                    if n == 0:
                        continue
                    sticky = hp.kappa if src == dish else 0.0
                    m = _crt_tables(n, hp.alpha0 * beta[dish] + sticky, rng)
                    if src == dish and hp.kappa > 0 and m > 0:
                        rho = hp.kappa / (hp.kappa + hp.alpha0 * beta[dish])
                        m -= int(rng.generator.binomial(m, rho))
                    mbar_dot[dish] += m
        beta = _dirichlet(np.concatenate([mbar_dot, [hp.gamma]]), rng)

    pi0 = _dirichlet(hp.alpha0 * beta + np.concatenate([n0, [0.0]]), rng)
    pi = np.empty((max(T - 1, 0), k, k + 1))
    for t in range(T - 1):
        params = hp.alpha0 * beta[None, :] + np.concatenate([ntrans[t], np.zeros((k, 1))], axis=1)
        params[np.arange(k), np.arange(k)] += hp.kappa
        g = np.maximum(rng.generator.gamma(params), _TINY)
        pi[t] = g / g.sum(axis=1, keepdims=True)
    return DynamicsState(beta=beta, pi0=pi0, pi=pi)


def _dirichlet(params, rng: RngHandle):
    g = np.maximum(rng.generator.gamma(np.maximum(params, _TINY)), _TINY)
    return g / g.sum()


# ---------------------------------------------------------------------------
# beam-sampled assignments


def _extend_clusters(beta, pi0, pi, lam, hp: Hyperparams, u_min: float, cap: int, rng: RngHandle):
    """Instantiate unrepresented clusters until no slice can reach past them.

    Extension stops at the truncation cap; the cap acts as a hard safety
    truncation of the state space (so a cap of 1 simply forbids new
    clusters).
    """
    k = beta.size - 1
    tsteps = pi.shape[0]

    def needs_more():
        residuals = [pi0[-1]] if pi.size == 0 else [pi0[-1], pi[:, :, -1].max()]
        return max(residuals) >= u_min

    while k < cap and needs_more():
        v = rng.generator.beta(1.0, hp.gamma)
        b_new = beta[-1] * v
        b_rest = beta[-1] * (1.0 - v)
        beta = np.concatenate([beta[:-1], [b_new, b_rest]])

        def split_row(row, extra_new=0.0):
            frac = rng.generator.beta(
                max(hp.alpha0 * b_new + extra_new, _TINY), max(hp.alpha0 * b_rest, _TINY)
            )
            frac = min(max(frac, _TINY), 1.0 - 1e-16)
            return np.concatenate([row[:-1], [row[-1] * frac, row[-1] * (1.0 - frac)]])

        pi0 = split_row(pi0)
        new_pi = np.empty((tsteps, k + 1, k + 2))
        for t in range(tsteps):
            for src in range(k):
                new_pi[t, src] = split_row(pi[t, src])
            params = hp.alpha0 * beta.copy()
            params[k] += hp.kappa  # the new cluster's own sticky mass
            new_pi[t, k] = _dirichlet(params, rng)
        pi = new_pi

        new_lam = np.empty((k + 1, k + 1))
        new_lam[:k, :k] = lam
        new_lam[k, :] = _gamma_matrix(np.full(k + 1, hp.a), np.full(k + 1, hp.b), rng)
        new_lam[:k, k] = _gamma_matrix(np.full(k, hp.a), np.full(k, hp.b), rng)[:k]
        lam = new_lam
        k += 1
    return beta, pi0, pi, lam


def _emission_logweights(i, X, XR, R, H, colcount, lam, loglam, include_diagonal):
    """Log emission weight of object i being in each cluster, per time step.

    Sums Poisson terms over i's row and column cells grouped by the other
    objects' clusters; the diagonal cell uses lam[k, k].  For the ZIP model
    (XR, R given) only count-component cells contribute.  Additive terms
    that do not depend on the candidate cluster are dropped.
    """
    T, N, _ = X.shape
    k = lam.shape[0]
    idx = np.arange(T)
    zi_col = H[:, i, :]  # one-hot of z[:, i]
    if R is None:
        s_out = np.einsum("tj,tjk->tk", X[:, i, :], H)
        s_in = np.einsum("tj,tjk->tk", X[:, :, i], H)
        c_out = colcount.copy()
        c_in = colcount.copy()
        x_diag = X[idx, i, i].astype(float)
        self_c = np.ones(T)
        diag_weight = np.full(T, 1.0 if include_diagonal else 0.0)
    else:
        s_out = np.einsum("tj,tjk->tk", XR[:, i, :], H)
        s_in = np.einsum("tj,tjk->tk", XR[:, :, i], H)
        c_out = np.einsum("tj,tjk->tk", R[:, i, :], H)
        c_in = np.einsum("tj,tjk->tk", R[:, :, i], H)
        x_diag = XR[idx, i, i].astype(float)
        self_c = R[idx, i, i].astype(float)
        diag_weight = self_c if include_diagonal else np.zeros(T)
    # remove the self cell (t, i, i) from the grouped sums; it re-enters
    # through the diagonal term with lam[k, k]
    s_out = s_out - zi_col * x_diag[:, None]
    s_in = s_in - zi_col * x_diag[:, None]
    c_out = c_out - zi_col * self_c[:, None]
    c_in = c_in - zi_col * self_c[:, None]

    logem = s_out @ loglam.T - c_out @ lam.T + s_in @ loglam - c_in @ lam
    lam_diag = np.diagonal(lam)
    loglam_diag = np.diagonal(loglam)
    logem += diag_weight[:, None] * (x_diag[:, None] * loglam_diag[None, :] - lam_diag[None, :])
    return logem


def _ffbs_object(logem, allowed0, allowed, rng: RngHandle):
    """Forward filter / backward sample one object's label chain.

    ``allowed0`` is the slice indicator for the first step, ``allowed[t-1]``
    the (K, K) indicator for step t; beam sampling replaces transition
    probabilities by these indicators.
    """
    T, k = logem.shape
    log_alpha = np.full((T, k), -np.inf)
    with np.errstate(divide="ignore"):
        log_alpha[0] = np.where(allowed0, logem[0], -np.inf)
        for t in range(1, T):
            prev = log_alpha[t - 1]
            m = prev.max()
            mass = np.exp(prev - m) @ allowed[t - 1]
            log_alpha[t] = np.where(mass > 0, logem[t] + m + np.log(np.maximum(mass, _TINY)), -np.inf)
    path = np.empty(T, dtype=np.int64)
    path[T - 1] = _sample_from_log(log_alpha[T - 1], rng)
    for t in range(T - 2, -1, -1):
        with np.errstate(divide="ignore"):
            logp = log_alpha[t] + np.where(allowed[t][:, path[t + 1]], 0.0, -np.inf)
        path[t] = _sample_from_log(logp, rng)
    return path


def _sample_from_log(logp, rng: RngHandle) -> int:
    m = logp.max()
    if not np.isfinite(m):
        raise StateError("no reachable state in slice-restricted filter")
    p = np.exp(logp - m)
    cum = np.cumsum(p)
    u = rng.generator.random() * cum[-1]
    return int(np.searchsorted(cum, u, side="right").clip(0, p.size - 1))


def beam_sweep_z(
    x: CountTensor,
    cs: ClusterState,
    dyn: DynamicsState,
    em: EmissionState,
    hp: Hyperparams,
    rng: RngHandle,
    model: str,
    cap: int = 50,
):
    """One beam-sampling pass over all objects' label chains.

    Draws slice variables, instantiates new clusters until every residual
    mass falls below the smallest slice (capped), then forward-filters /
    backward-samples each object in turn.  Returns the pruned, canonicalized
    assignments, the matching lambda matrix, and the number of clusters the
    sweep worked with before pruning.
    """
    X = x.counts
    T, N, _ = X.shape
    z = cs.z.copy()
    beta, pi0, pi, lam = dyn.beta, dyn.pi0, dyn.pi, em.lam
    k = cs.k_active
    if cap < k:
        raise TruncationError(f"truncation cap {cap} below current cluster count {k}")

    p_cur = np.empty((T, N))
    p_cur[0] = pi0[z[0]]
    for t in range(1, T):
        p_cur[t] = pi[t - 1, z[t - 1], z[t]]
    u = rng.generator.random((T, N)) * p_cur
    beta, pi0, pi, lam = _extend_clusters(beta, pi0, pi, lam, hp, u.min(), cap, rng)
    k = beta.size - 1
    loglam = np.log(lam)

    if model == "dzipirm":
        R = em.r
        XR = X * R
    else:
        R = XR = None

    H = np.zeros((T, N, k))
    H[np.arange(T)[:, None], np.arange(N)[None, :], z] = 1.0
    colcount = H.sum(axis=1)

    for i in range(N):
        logem = _emission_logweights(i, X, XR, R, H, colcount, lam, loglam, x.include_diagonal)
        allowed0 = pi0[:k] > u[0, i]
        allowed = pi[:, :k, :k] > u[1:, i][:, None, None] if T > 1 else np.empty((0, k, k), bool)
        path = _ffbs_object(logem, allowed0, allowed, rng)
        old = z[:, i]
        ts = np.arange(T)
        H[ts, i, old] = 0.0
        H[ts, i, path] = 1.0
        colcount[ts, old] -= 1.0
        colcount[ts, path] += 1.0
        z[:, i] = path

    z2, order = canonical_relabel(z)
    lam2 = lam[np.ix_(order, order)]
    kept = beta[order]
    beta2 = np.concatenate([kept, [max(1.0 - kept.sum(), _TINY)]])
    return ClusterState(z=z2, k_active=len(order)), lam2, beta2


# ---------------------------------------------------------------------------
# PIRM baseline (single time slice, weights drawn directly from beta)


def pirm_sweep_z(
    x: CountTensor,
    cs: ClusterState,
    beta: np.ndarray,
    em: EmissionState,
    hp: Hyperparams,
    rng: RngHandle,
    cap: int = 50,
):
    """Slice-sampled assignment pass for the static baseline (T must be 1).

    Labels are drawn from the global weights directly, so the slice test
    compares beta entries instead of transition rows.
    """
    X = x.counts
    T, N, _ = X.shape
    if T != 1:
        raise StateError("pirm sweeps operate on a single time slice")
    z = cs.z.copy()
    lam = em.lam
    k = cs.k_active
    if cap < k:
        raise TruncationError(f"truncation cap {cap} below current cluster count {k}")

    u = rng.generator.random(N) * beta[z[0]]
    while k < cap and beta[-1] >= u.min():
        v = rng.generator.beta(1.0, hp.gamma)
        beta = np.concatenate([beta[:-1], [beta[-1] * v, beta[-1] * (1.0 - v)]])
        new_lam = np.empty((k + 1, k + 1))
        new_lam[:k, :k] = lam
        new_lam[k, :] = _gamma_matrix(np.full(k + 1, hp.a), np.full(k + 1, hp.b), rng)
        new_lam[:k, k] = _gamma_matrix(np.full(k, hp.a), np.full(k, hp.b), rng)[:k]
        lam = new_lam
        k += 1
    loglam = np.log(lam)

    H = np.zeros((1, N, k))
    H[0, np.arange(N), z[0]] = 1.0
    colcount = H.sum(axis=1)
    for i in range(N):
        logem = _emission_logweights(i, X, None, None, H, colcount, lam, loglam, x.include_diagonal)[0]
        with np.errstate(divide="ignore"):
            logp = np.where(beta[:k] > u[i], logem, -np.inf)
        new = _sample_from_log(logp, rng)
        old = z[0, i]
        H[0, i, old] = 0.0
        H[0, i, new] = 1.0
        colcount[0, old] -= 1.0
        colcount[0, new] += 1.0
        z[0, i] = new

    z2, order = canonical_relabel(z)
    lam2 = lam[np.ix_(order, order)]
    return ClusterState(z=z2, k_active=len(order)), lam2


def sample_beta_pirm(cs: ClusterState, hp: Hyperparams, rng: RngHandle) -> np.ndarray:
    """Dirichlet(counts, gamma) draw over represented weights plus residual."""
    counts = np.bincount(cs.z[0], minlength=cs.k_active).astype(float)
    return _dirichlet(np.concatenate([counts, [hp.gamma]]), rng)


# ---------------------------------------------------------------------------
# chain orchestration


def _init_state(x: CountTensor, cfg: SweepConfig, hp: Hyperparams, rng: RngHandle) -> ClusterState:
    T, N, _ = x.dims
    if cfg.init == "single":
        return ClusterState(z=np.zeros((T, N), dtype=np.int64), k_active=1)
    if cfg.init == "warm":
        return _warm_init(x, cfg, hp, rng)
    k = min(cfg.init_k, N, cfg.truncation_cap)
    z = rng.generator.integers(0, k, size=(T, N))
    return ClusterState(z=z, k_active=k).canonicalize()


_WARM_SWEEPS = 120


def _warm_init(x: CountTensor, cfg: SweepConfig, hp: Hyperparams, rng: RngHandle) -> ClusterState:
    """Data-driven start: a short static fit of the time-pooled tensor.

    Summing counts over time dilutes sporadic zeros and exposes the
    dominant block structure; the pooled partition is replicated across
    every time step so the dynamic chain starts from a coherent
    trajectory and only has to relocate the objects that actually move.
    """
    T, N, _ = x.dims
    pooled = CountTensor(
        x.counts.sum(axis=0, keepdims=True), include_diagonal=x.include_diagonal
    )
    warm_cfg = SweepConfig(
        model="pirm",
        sweeps=_WARM_SWEEPS,
        burn_in=_WARM_SWEEPS // 2,
        truncation_cap=cfg.truncation_cap,
        init="random",
        init_k=cfg.init_k,
    )
    trace = run_chain(pooled, warm_cfg, hp, rng)
    z_pooled = trace.best_sweep(warm_cfg.burn_in).z[0]
    z = np.tile(z_pooled, (T, 1))
    return ClusterState(z=z, k_active=int(z.max()) + 1).canonicalize()


def run_chain(x: CountTensor, cfg: SweepConfig, hp: Hyperparams, rng: RngHandle, config_digest: str = "") -> McmcTrace:
    """Run one chain and return its trace.

    Sweep order is fixed: dynamics -> assignments -> lambda -> (r -> w for
    the ZIP model).  The trace snapshots every sweep; point estimates are
    picked from it per the configured rule.
    """
    model = cfg.model
    trace = McmcTrace(model=model, seed=rng.seed, stream=rng.stream, config_digest=config_digest)
    cs = _init_state(x, cfg, hp, rng)
    if model == "pirm" and x.dims[0] != 1:
        raise StateError("run_chain with model pirm expects a single time slice; use pirm_fit")

    if model == "dzipirm":
        r = np.ones_like(x.counts)
        w = np.full(x.counts.shape, 0.5)
        lam = sample_lambda_dzipirm(x, cs, r, hp, rng)
    else:
        r = w = None
        lam = sample_lambda_dpirm(x, cs, hp, rng)

    beta = None
    for sweep in range(cfg.sweeps):
        if model == "pirm":
            beta = sample_beta_pirm(cs, hp, rng)
            cs, lam = pirm_sweep_z(x, cs, beta, EmissionState(lam=lam), hp, rng, cap=cfg.truncation_cap)
            beta = sample_beta_pirm(cs, hp, rng)
            lam = sample_lambda_dpirm(x, cs, hp, rng)
            em = EmissionState(lam=lam)
            ll = joint_log_likelihood(x, cs, em, "pirm")
            rec = SweepRecord(sweep, cs.z.copy(), lam.copy(), ll, cs.k_active, beta=beta.copy())
        else:
            dyn = sample_dynamics(cs, hp, rng, beta=beta)
            em = EmissionState(lam=lam, r=r)
            cs, lam, beta = beam_sweep_z(x, cs, dyn, em, hp, rng, model, cap=cfg.truncation_cap)
            if model == "dzipirm":
                lam = sample_lambda_dzipirm(x, cs, r, hp, rng)
                r = sample_r(x, cs, lam, w, rng)
                w = sample_w(r, hp, rng)
                em = EmissionState(lam=lam, w=w, r=r)
                ll = joint_log_likelihood(x, cs, em, model)
                stats = block_stats(x, cs, r=r)
                rec = SweepRecord(
                    sweep,
                    cs.z.copy(),
                    lam.copy(),
                    ll,
                    cs.k_active,
                    beta=beta.copy(),
                    block_stats={key: val.tolist() for key, val in stats.items()},
                    w_mean=float(w.mean()),
                    r_fraction=float(r.mean()),
                )
            else:
                lam = sample_lambda_dpirm(x, cs, hp, rng)
                em = EmissionState(lam=lam)
                ll = joint_log_likelihood(x, cs, em, model)
                rec = SweepRecord(sweep, cs.z.copy(), lam.copy(), ll, cs.k_active, beta=beta.copy())
        trace.sweeps.append(rec)
    return trace


def pirm_fit(x: CountTensor, cfg: SweepConfig, hp: Hyperparams, rng: RngHandle, config_digest: str = ""):
    """Independent static fits, one per time slice.

    Each slice gets the same sweep budget; results come back as a list of
    traces indexed by time step.
    """
    traces = []
    slice_cfg = SweepConfig(
        model="pirm",
        sweeps=cfg.sweeps,
        burn_in=cfg.burn_in,
        truncation_cap=cfg.truncation_cap,
        point_estimate=cfg.point_estimate,
        init=cfg.init,
        init_k=cfg.init_k,
    ) if cfg.model != "pirm" else cfg
    for t in range(x.dims[0]):
        traces.append(run_chain(x.time_slice(t), slice_cfg, hp, rng, config_digest=config_digest))
    return traces


def point_estimate(trace: McmcTrace, cfg: SweepConfig) -> SweepRecord:
    """The sweep the configured rule designates as the chain's estimate."""
    if cfg.point_estimate == "last-sweep":
        return trace.sweeps[-1]
    return trace.best_sweep(cfg.burn_in)
