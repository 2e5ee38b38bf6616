import json

import numpy as np
import pytest

from tvbiclust import dataio
from tvbiclust.samplers import SweepConfig, run_chain
from tvbiclust.synthgen import SynthConfig, generate_dataset, generate_suite, SuiteConfig
from tvbiclust.types import Hyperparams


def test_tensor_csv_round_trip(tmp_path):
    x, _, _ = generate_dataset(SynthConfig(n=6, t=3, k=3, seed=0))
    dataio.write_tensor_csv(x, tmp_path / "x.csv")
    back = dataio.read_tensor_csv(tmp_path / "x.csv")
    np.testing.assert_array_equal(back.counts, x.counts)


def test_sparse_csv_missing_cells_default_zero(tmp_path):
    (tmp_path / "x.csv").write_text("t,i,j,count\n1,2,2,7\n")
    x = dataio.read_tensor_csv(tmp_path / "x.csv")
    assert x.dims == (1, 2, 2)
    assert x.counts[0, 1, 1] == 7
    assert x.counts.sum() == 7


def test_csv_header_required(tmp_path):
    (tmp_path / "x.csv").write_text("a,b,c,d\n1,1,1,1\n")
    with pytest.raises(dataio.ParseError):
        dataio.read_tensor_csv(tmp_path / "x.csv")


def test_csv_error_reports_line_number(tmp_path):
    (tmp_path / "x.csv").write_text("t,i,j,count\n1,1,1,2\n1,1,oops,3\n")
    with pytest.raises(dataio.ParseError, match="line 3"):
        dataio.read_tensor_csv(tmp_path / "x.csv")


def test_csv_rejects_zero_based_and_negative(tmp_path):
    (tmp_path / "a.csv").write_text("t,i,j,count\n0,1,1,2\n")
    with pytest.raises(dataio.ParseError, match="1-based"):
        dataio.read_tensor_csv(tmp_path / "a.csv")
    (tmp_path / "b.csv").write_text("t,i,j,count\n1,1,1,-2\n")
    with pytest.raises(dataio.ParseError, match="negative"):
        dataio.read_tensor_csv(tmp_path / "b.csv")


def test_tensor_json_round_trip():
    x, _, _ = generate_dataset(SynthConfig(n=6, t=2, k=3, zero_ratio=0.6, seed=1))
    back = dataio.tensor_from_json(dataio.tensor_to_json(x))
    np.testing.assert_array_equal(back.counts, x.counts)


def test_tensor_json_malformed():
    with pytest.raises(dataio.ParseError):
        dataio.tensor_from_json({"dims": [1, 2]})


def test_config_digest_key_order_independent():
    a = dataio.config_digest({"x": 1, "y": [1, 2], "z": {"p": 3, "q": 4}})
    b = dataio.config_digest({"z": {"q": 4, "p": 3}, "y": [1, 2], "x": 1})
    assert a == b
    assert a != dataio.config_digest({"x": 2, "y": [1, 2], "z": {"p": 3, "q": 4}})


def _small_trace(model="dzipirm"):
    x, _, _ = generate_dataset(SynthConfig(n=6, t=2, k=3, zero_ratio=0.5, seed=2))
    cfg = SweepConfig(model=model, sweeps=5, burn_in=1)
    from tvbiclust.rng import RngHandle

    return run_chain(x, cfg, Hyperparams(), RngHandle(9, 1), config_digest="abc123")


def test_trace_jsonl_round_trip(tmp_path):
    trace = _small_trace()
    dataio.write_trace_jsonl(trace, tmp_path / "trace.jsonl")
    back = dataio.read_trace_jsonl(tmp_path / "trace.jsonl")
    assert back.model == trace.model
    assert back.seed == trace.seed and back.stream == trace.stream
    assert back.config_digest == "abc123"
    assert len(back.sweeps) == len(trace.sweeps)
    for a, b in zip(trace.sweeps, back.sweeps):
        np.testing.assert_array_equal(a.z, b.z)
        np.testing.assert_allclose(a.lam, b.lam)
        assert a.joint_log_likelihood == pytest.approx(b.joint_log_likelihood)
        assert a.block_stats == b.block_stats


def test_trace_jsonl_corrupt_line(tmp_path):
    trace = _small_trace()
    dataio.write_trace_jsonl(trace, tmp_path / "trace.jsonl")
    lines = (tmp_path / "trace.jsonl").read_text().splitlines()
    lines[3] = "{not json"
    (tmp_path / "trace.jsonl").write_text("\n".join(lines))
    with pytest.raises(dataio.ParseError, match="line 4"):
        dataio.read_trace_jsonl(tmp_path / "trace.jsonl")


def test_estimate_round_trip(tmp_path):
    trace = _small_trace()
    rec = trace.sweeps[-1]
    dataio.write_estimate(
        tmp_path / "est.json", "dzipirm", rec, -2.0, seed=9, stream=1, digest="abc123",
        extra={"n_cells": 72},
    )
    est = dataio.read_estimate(tmp_path / "est.json")
    np.testing.assert_array_equal(est["z"], rec.z)
    np.testing.assert_allclose(est["lambda"], rec.lam)
    assert est["normalized_log_likelihood"] == -2.0
    assert est["seed"] == 9 and est["stream"] == 1
    assert est["config_digest"] == "abc123"
    assert est["n_cells"] == 72
    # 1-based on disk
    raw = json.loads((tmp_path / "est.json").read_text())
    assert np.asarray(raw["z"]).min() >= 1


def test_read_manifest_sets_root(tmp_path):
    path = generate_suite(SuiteConfig(replicates=1, movement_ratios=(0.1,), zero_ratios=(0.3,)), tmp_path)
    manifest = dataio.read_manifest(path)
    assert manifest["_root"] == str(tmp_path)
    assert len(manifest["datasets"]) == 1
