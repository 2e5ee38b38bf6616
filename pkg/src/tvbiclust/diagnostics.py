"""Runtime consistency checks over persisted traces.

Each sweep is checked for: the count-component identity (per block, the
r-weighted count sum must equal the plain count sum), the moment-scaling
identities with alpha in [0, 1], and simplex invariants on the stored
global weights.
"""

from __future__ import annotations

import numpy as np

from .types import Hyperparams, McmcTrace

SIMPLEX_TOL = 1e-9  # round-trip through JSON costs a few ulps


def check_sweep(rec, hp: Hyperparams) -> list[str]:
    """Return a list of violation messages for one sweep record (empty = pass)."""
    problems = []
    if rec.beta is not None:
        if abs(rec.beta.sum() - 1.0) > SIMPLEX_TOL or np.any(rec.beta < 0):
            problems.append(f"beta is not a probability vector (sum={rec.beta.sum()!r})")
    if np.any(rec.lam <= 0):
        problems.append("nonpositive lambda entry")
    if rec.block_stats is not None:
        count = np.asarray(rec.block_stats["count"], dtype=np.int64)
        sum_x = np.asarray(rec.block_stats["sum_x"], dtype=np.int64)
        sum_rx = np.asarray(rec.block_stats["sum_rx"], dtype=np.int64)
        sum_r = np.asarray(rec.block_stats["sum_r"], dtype=np.int64)
        if np.any(sum_rx != sum_x):
            bad = int(np.sum(sum_rx != sum_x))
            problems.append(f"count-component identity violated in {bad} block(s) (sum r*x != sum x)")
        alpha = (hp.b + sum_r) / (hp.b + count)
        if np.any(alpha < 0) or np.any(alpha > 1):
            problems.append("alpha outside [0, 1]")
        e_dp = (hp.a + sum_x) / (hp.b + count)
        e_dzip = (hp.a + sum_x) / (hp.b + sum_r)
        v_dp = (hp.a + sum_x) / (hp.b + count) ** 2
        v_dzip = (hp.a + sum_x) / (hp.b + sum_r) ** 2
        if not np.allclose(e_dp, alpha * e_dzip, rtol=1e-12, atol=0):
            problems.append("expectation scaling identity violated")
        if not np.allclose(v_dp, alpha**2 * v_dzip, rtol=1e-12, atol=0):
            problems.append("variance scaling identity violated")
    return problems


def diagnose_trace(trace: McmcTrace, hp: Hyperparams | None = None):
    """Check every sweep; returns (passed, per-sweep report rows)."""
    hp = hp or Hyperparams()
    rows = []
    passed = True
    for rec in trace.sweeps:
        problems = check_sweep(rec, hp)
        rows.append({"sweep": rec.sweep, "ok": not problems, "problems": problems})
        passed = passed and not problems
    return passed, rows
