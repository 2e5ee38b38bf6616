"""On-disk formats: tensor CSV/JSON, trace JSON-lines, estimates, digests.

All indices are 1-based on disk and converted at the boundary.
"""

from __future__ import annotations

import csv
import hashlib
import json

from pathlib import Path

import numpy as np

from .types import CountTensor, McmcTrace, SweepRecord


class ParseError(ValueError):
    """Malformed on-disk data; message carries the offending location."""


def write_tensor_csv(x: CountTensor, path):
    """Long-form `t,i,j,count` rows (1-based), every cell written."""
    t_dim, n1, n2 = x.dims
    tt, ii, jj = np.meshgrid(
        np.arange(1, t_dim + 1), np.arange(1, n1 + 1), np.arange(1, n2 + 1), indexing="ij"
    )
    table = np.column_stack([tt.ravel(), ii.ravel(), jj.ravel(), x.counts.ravel()])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "i", "j", "count"])
        writer.writerows(table.tolist())


def read_tensor_csv(path, include_diagonal: bool = True) -> CountTensor:
    """Inverse of :func:`write_tensor_csv`.

    Dims come from the largest indices seen; absent cells default to 0, so
    sparse files (zero rows omitted) parse too.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["t", "i", "j", "count"]:
            raise ParseError(f"{path}: expected header 't,i,j,count'")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                t, i, j, c = (int(v) for v in row)
            except (TypeError, ValueError):
                raise ParseError(f"{path}: line {lineno}: expected four integers, got {row!r}")
            if c < 0:
                raise ParseError(f"{path}: line {lineno}: negative count")
            if t < 1 or i < 1 or j < 1:
                raise ParseError(f"{path}: line {lineno}: indices are 1-based")
            rows.append((t, i, j, c))
    if not rows:
        raise ParseError(f"{path}: no data rows")
    arr = np.asarray(rows, dtype=np.int64)
    dims = arr[:, :3].max(axis=0)
    counts = np.zeros(tuple(dims), dtype=np.int64)
    counts[arr[:, 0] - 1, arr[:, 1] - 1, arr[:, 2] - 1] = arr[:, 3]
    return CountTensor(counts, include_diagonal=include_diagonal)


def tensor_to_json(x: CountTensor) -> dict:
    t, i, j = np.nonzero(x.counts)
    entries = [[int(a) + 1, int(b) + 1, int(c) + 1, int(x.counts[a, b, c])] for a, b, c in zip(t, i, j)]
    return {"dims": list(x.dims), "entries": entries}


def tensor_from_json(obj: dict, include_diagonal: bool = True) -> CountTensor:
    try:
        dims = obj["dims"]
        counts = np.zeros(tuple(int(d) for d in dims), dtype=np.int64)
        for t, i, j, c in obj["entries"]:
            counts[t - 1, i - 1, j - 1] = c
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise ParseError(f"bad tensor JSON: {exc}")
    return CountTensor(counts, include_diagonal=include_diagonal)


def config_digest(config: dict) -> str:
    """Stable hash of a run configuration (key order does not matter)."""
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def write_trace_jsonl(trace: McmcTrace, path):
    """One sweep summary per line, preceded by a header line."""
    with open(path, "w") as fh:
        header = {
            "model": trace.model,
            "seed": trace.seed,
            "stream": trace.stream,
            "config_digest": trace.config_digest,
        }
        fh.write(json.dumps(header) + "\n")
        for rec in trace.sweeps:
            line = {
                "sweep": rec.sweep,
                "k_active": rec.k_active,
                "joint_log_likelihood": rec.joint_log_likelihood,
                "z": (rec.z + 1).tolist(),
                "lambda": rec.lam.tolist(),
            }
            if rec.beta is not None:
                line["beta"] = rec.beta.tolist()
            if rec.block_stats is not None:
                line["block_stats"] = rec.block_stats
            if rec.w_mean is not None:
                line["w_mean"] = rec.w_mean
                line["r_fraction"] = rec.r_fraction
            fh.write(json.dumps(line) + "\n")


def read_trace_jsonl(path) -> McmcTrace:
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError(f"{path}: empty trace")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line 1: {exc}")
    trace = McmcTrace(
        model=header.get("model", "dpirm"),
        seed=header.get("seed", 0),
        stream=header.get("stream", 0),
        config_digest=header.get("config_digest", ""),
    )
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            rec = SweepRecord(
                sweep=int(obj["sweep"]),
                z=np.asarray(obj["z"], dtype=np.int64) - 1,
                lam=np.asarray(obj["lambda"], dtype=float),
                joint_log_likelihood=float(obj["joint_log_likelihood"]),
                k_active=int(obj["k_active"]),
                beta=np.asarray(obj["beta"], dtype=float) if "beta" in obj else None,
                block_stats=obj.get("block_stats"),
                w_mean=obj.get("w_mean"),
                r_fraction=obj.get("r_fraction"),
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{path}: line {lineno}: {exc}")
        trace.sweeps.append(rec)
    return trace


def write_estimate(path, model, rec: SweepRecord, normalized_ll, seed, stream, digest, extra=None):
    """Point-estimate JSON: assignments, rates, likelihoods, provenance."""
    payload = {
        "model": model,
        "sweep": rec.sweep,
        "k_active": rec.k_active,
        "z": (rec.z + 1).tolist(),
        "lambda": rec.lam.tolist(),
        "joint_log_likelihood": rec.joint_log_likelihood,
        "normalized_log_likelihood": normalized_ll,
        "seed": seed,
        "stream": stream,
        "config_digest": digest,
    }
    if rec.w_mean is not None:
        payload["w_mean"] = rec.w_mean
        payload["r_fraction"] = rec.r_fraction
    if extra:
        payload.update(extra)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)


def read_estimate(path) -> dict:
    with open(path) as fh:
        obj = json.load(fh)
    obj["z"] = np.asarray(obj["z"], dtype=np.int64) - 1
    obj["lambda"] = np.asarray(obj["lambda"], dtype=float)
    return obj


def read_manifest(path) -> dict:
    path = Path(path)
    with open(path) as fh:
        manifest = json.load(fh)
    manifest["_root"] = str(path.parent)
    return manifest
