"""Clustering-accuracy metrics, fit comparison, and moment diagnostics."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .types import ClusterState, CountTensor, Hyperparams
from .samplers import block_stats


def rand_index(p, q) -> float:
    """Pairwise-agreement similarity between two partitions of the same items.

    1.0 iff the partitions are identical up to relabeling.  Computed from
    the contingency table, so it is O(n + K^2) rather than O(n^2).
    """
    p = np.asarray(p).ravel()
    q = np.asarray(q).ravel()
    if p.size != q.size:
        raise ValueError(f"partition sizes differ: {p.size} vs {q.size}")
    n = p.size
    if n < 2:
        raise ValueError("need at least two items")
    _, pi = np.unique(p, return_inverse=True)
    _, qi = np.unique(q, return_inverse=True)
    table = np.zeros((pi.max() + 1, qi.max() + 1), dtype=np.int64)
    np.add.at(table, (pi, qi), 1)
    a = table.sum(axis=1)
    b = table.sum(axis=0)
    pairs = n * (n - 1) // 2
    same_both = (table * (table - 1) // 2).sum()
    same_p = (a * (a - 1) // 2).sum()
    same_q = (b * (b - 1) // 2).sum()
    # agreements = together-in-both + apart-in-both
    agreements = pairs + 2 * same_both - same_p - same_q
    return agreements / pairs


def adjusted_rand_index(p, q) -> float:
    """Chance-corrected variant; reported as an extra column only."""
    p = np.asarray(p).ravel()
    q = np.asarray(q).ravel()
    n = p.size
    _, pi = np.unique(p, return_inverse=True)
    _, qi = np.unique(q, return_inverse=True)
    table = np.zeros((pi.max() + 1, qi.max() + 1), dtype=np.int64)
    np.add.at(table, (pi, qi), 1)
    a = table.sum(axis=1)
    b = table.sum(axis=0)
    idx = (table * (table - 1) // 2).sum()
    ai = (a * (a - 1) // 2).sum()
    bi = (b * (b - 1) // 2).sum()
    pairs = n * (n - 1) // 2
    expected = ai * bi / pairs
    maximum = (ai + bi) / 2
    if maximum == expected:
        return 1.0
    return float((idx - expected) / (maximum - expected))


def time_averaged_ri(z_true: np.ndarray, z_est: np.ndarray) -> float:
    """Mean over time steps of the per-step Rand index."""
    z_true = np.asarray(z_true)
    z_est = np.asarray(z_est)
    if z_true.shape != z_est.shape:
        raise ValueError(f"shape mismatch: {z_true.shape} vs {z_est.shape}")
    return float(np.mean([rand_index(z_true[t], z_est[t]) for t in range(z_true.shape[0])]))


def pirm_best_ri(z_true: np.ndarray, per_step_assignments) -> float:
    """Best per-step Rand index over the static baseline's independent fits.

    Each fit is scored only against its own time step's truth; the maximum
    of the T scores is reported.
    """
    z_true = np.asarray(z_true)
    if len(per_step_assignments) != z_true.shape[0]:
        raise ValueError("need one assignment per time step")
    return max(rand_index(z_true[t], np.asarray(zt).ravel()) for t, zt in enumerate(per_step_assignments))


def rate_scaling_check(x: CountTensor, cs: ClusterState, r: np.ndarray, hp: Hyperparams):
    """Per-block moment comparison between the Poisson and ZIP rate updates.

    For each block, alpha = (b + sum r) / (b + cell count); returns a list
    of dicts carrying alpha and both expectation/variance ratios, which the
    scaling identity says must equal 1 exactly.
    """
    stats = block_stats(x, cs, r=r)
    out = []
    k = cs.k_active
    for row in range(k):
        for col in range(k):
            count = int(stats["count"][row, col])
            sx = int(stats["sum_x"][row, col])
            sr = int(stats["sum_r"][row, col])
            alpha = (hp.b + sr) / (hp.b + count)
            e_dp = (hp.a + sx) / (hp.b + count)
            v_dp = (hp.a + sx) / (hp.b + count) ** 2
            e_dzip = (hp.a + sx) / (hp.b + sr)
            v_dzip = (hp.a + sx) / (hp.b + sr) ** 2
            out.append(
                {
                    "block": (row, col),
                    "alpha": alpha,
                    "expectation_ratio": e_dp / (alpha * e_dzip),
                    "variance_ratio": v_dp / (alpha**2 * v_dzip),
                }
            )
    return out


@dataclass
class EvalReport:
    """Per-dataset rows plus per-setting aggregates."""

    rows: list = field(default_factory=list)
    aggregates: list = field(default_factory=list)
    missing: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def aggregate(self):
        """Recompute per-(m, s, model) means and standard deviations."""
        groups = {}
        for row in self.rows:
            key = (row["movement_ratio"], row["zero_ratio"], row["model"])
            groups.setdefault(key, []).append(row)
        self.aggregates = []
        for (m, s, model), rows in sorted(groups.items()):
            ri = np.array([r["ri"] for r in rows], dtype=float)
            ll = np.array([r["normalized_log_likelihood"] for r in rows], dtype=float)
            self.aggregates.append(
                {
                    "movement_ratio": m,
                    "zero_ratio": s,
                    "model": model,
                    "n": len(rows),
                    "ri_mean": float(ri.mean()),
                    "ri_sd": float(ri.std(ddof=1)) if len(rows) > 1 else 0.0,
                    "ll_mean": float(ll.mean()),
                    "ll_sd": float(ll.std(ddof=1)) if len(rows) > 1 else 0.0,
                }
            )
        return self.aggregates

    def write_csv(self, path):
        cols = [
            "dataset", "movement_ratio", "zero_ratio", "replicate", "model",
            "ri", "ari", "normalized_log_likelihood", "k_active",
        ]
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=cols)
            writer.writeheader()
            for row in self.rows:
                writer.writerow({c: row.get(c) for c in cols})

    def write_json(self, path):
        with open(path, "w") as fh:
            json.dump(
                {
                    "metadata": self.metadata,
                    "aggregates": self.aggregates,
                    "missing": self.missing,
                },
                fh,
                indent=1,
            )


def compare_models(manifest: dict, fits_root, models=("pirm", "dpirm", "dzipirm")) -> EvalReport:
    """Score every (dataset, model) fit found under fits_root.

    Fits live at ``<fits_root>/<dataset>/<model>/``; missing fits are
    listed in the report rather than failing the run.
    """
    from . import dataio

    fits_root = Path(fits_root)
    root = Path(manifest.get("_root", "."))
    report = EvalReport(metadata={"replicates": manifest.get("replicates"), "fits_root": str(fits_root)})
    for entry in manifest["datasets"]:
        with open(root / entry["truth"]) as fh:
            truth = json.load(fh)
        z_true = np.asarray(truth["z"], dtype=np.int64) - 1
        for model in models:
            fit_dir = fits_root / entry["name"] / model
            try:
                row = _score_fit(model, fit_dir, z_true, dataio)
            except FileNotFoundError:
                report.missing.append({"dataset": entry["name"], "model": model})
                continue
            row.update(
                {
                    "dataset": entry["name"],
                    "movement_ratio": entry["movement_ratio"],
                    "zero_ratio": entry["zero_ratio"],
                    "replicate": entry["replicate"],
                    "model": model,
                }
            )
            report.rows.append(row)
    report.aggregate()
    return report


def _score_fit(model, fit_dir, z_true, dataio):
    t_steps = z_true.shape[0]
    if model == "pirm":
        ests = [dataio.read_estimate(fit_dir / f"estimate_t{t + 1}.json") for t in range(t_steps)]
        ri = pirm_best_ri(z_true, [est["z"][0] for est in ests])
        ari = max(
            adjusted_rand_index(z_true[t], est["z"][0]) for t, est in enumerate(ests)
        )
        joint = sum(est["joint_log_likelihood"] for est in ests)
        cells = sum(est["n_cells"] for est in ests)
        norm_ll = joint / cells
        k_active = max(est["k_active"] for est in ests)
    else:
        est = dataio.read_estimate(fit_dir / "estimate.json")
        ri = time_averaged_ri(z_true, est["z"])
        ari = float(np.mean([adjusted_rand_index(z_true[t], est["z"][t]) for t in range(t_steps)]))
        norm_ll = est["normalized_log_likelihood"]
        k_active = est["k_active"]
    return {"ri": ri, "ari": ari, "normalized_log_likelihood": norm_ll, "k_active": k_active}


def write_lambda_heatmap_csv(lam: np.ndarray, path):
    """Rate matrix as a CSV grid with 1-based cluster headers."""
    lam = np.asarray(lam)
    k = lam.shape[0]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["cluster"] + [str(c + 1) for c in range(k)])
        for row in range(k):
            writer.writerow([str(row + 1)] + [f"{v:.6g}" for v in lam[row]])


def write_membership_timeline_csv(z: np.ndarray, path, object_names=None):
    """Long-form (object, t, label) rows, 1-based."""
    z = np.asarray(z)
    t_steps, n = z.shape
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["object", "t", "label"])
        for i in range(n):
            name = object_names[i] if object_names else str(i + 1)
            for t in range(t_steps):
                writer.writerow([name, t + 1, int(z[t, i]) + 1])
