import csv
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import rand_index_oracle
from tvbiclust.evaluate import (
    EvalReport,
    adjusted_rand_index,
    pirm_best_ri,
    rand_index,
    rate_scaling_check,
    time_averaged_ri,
    write_lambda_heatmap_csv,
    write_membership_timeline_csv,
)
from tvbiclust.types import ClusterState, CountTensor, Hyperparams

partitions = st.integers(min_value=2, max_value=12).flatmap(
    lambda n: st.tuples(
        st.lists(st.integers(0, 4), min_size=n, max_size=n),
        st.lists(st.integers(0, 4), min_size=n, max_size=n),
    )
)


def test_rand_index_matches_pair_counting_oracle():
    gen = np.random.default_rng(20)
    for _ in range(1000):
        n = int(gen.integers(2, 13))
        p = gen.integers(0, 5, size=n)
        q = gen.integers(0, 5, size=n)
        assert rand_index(p, q) == pytest.approx(rand_index_oracle(p, q), abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(partitions)
def test_rand_index_symmetric(pq):
    p, q = pq
    assert rand_index(p, q) == pytest.approx(rand_index(q, p))


@settings(max_examples=200, deadline=None)
@given(partitions)
def test_rand_index_relabel_invariant(pq):
    p, q = pq
    relabeled = [(lab * 7 + 3) % 11 for lab in p]  # injective on 0..4
    assert rand_index(p, q) == pytest.approx(rand_index(relabeled, q))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=2, max_size=12))
def test_rand_index_identity(p):
    assert rand_index(p, p) == 1.0


def test_rand_index_bounds_and_errors():
    assert rand_index([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        rand_index([0, 1], [0, 1, 2])
    with pytest.raises(ValueError):
        rand_index([0], [0])


def test_adjusted_rand_known_values():
    # identical partitions
    assert adjusted_rand_index([0, 0, 1, 1], [1, 1, 0, 0]) == 1.0
    # hand-computed: table [[2,0],[1,1]] gives idx=1, expected=1, max=2.5
    got = adjusted_rand_index([0, 0, 1, 1], [0, 0, 0, 1])
    assert got == pytest.approx(0.0, abs=1e-15)


def test_time_averaged_and_best_ri():
    z_true = np.array([[0, 0, 1, 1], [0, 1, 0, 1]])
    z_est = np.array([[0, 0, 1, 1], [0, 0, 1, 1]])
    per_step = [rand_index(z_true[t], z_est[t]) for t in range(2)]
    assert time_averaged_ri(z_true, z_est) == pytest.approx(np.mean(per_step))
    assert pirm_best_ri(z_true, [z_est[0], z_est[1]]) == pytest.approx(max(per_step))
    with pytest.raises(ValueError):
        pirm_best_ri(z_true, [z_est[0]])


class TestRateScaling:
    def test_hand_example(self):
        # one cluster, T=1, N=2 with diagonal: a block of 4 cells; two cells
        # in the count component and all-zero counts gives alpha = 3/5
        x = CountTensor(np.zeros((1, 2, 2), dtype=np.int64))
        cs = ClusterState(z=np.zeros((1, 2), dtype=np.int64), k_active=1)
        r = np.array([[[1, 0], [0, 1]]])
        out = rate_scaling_check(x, cs, r, Hyperparams())
        assert len(out) == 1
        assert out[0]["alpha"] == pytest.approx(3 / 5)
        assert out[0]["expectation_ratio"] == pytest.approx(1.0, rel=1e-14)
        assert out[0]["variance_ratio"] == pytest.approx(1.0, rel=1e-14)

    def test_all_r_one_boundary(self):
        x = CountTensor(np.ones((1, 2, 2), dtype=np.int64))
        cs = ClusterState(z=np.zeros((1, 2), dtype=np.int64), k_active=1)
        r = np.ones((1, 2, 2), dtype=np.int64)
        out = rate_scaling_check(x, cs, r, Hyperparams())
        assert out[0]["alpha"] == 1.0


def test_report_aggregation_matches_streaming_accumulator():
    gen = np.random.default_rng(21)
    report = EvalReport()
    for rep in range(37):
        report.rows.append(
            {
                "movement_ratio": 0.1,
                "zero_ratio": 0.5,
                "model": "dpirm",
                "ri": float(gen.uniform(0.5, 1.0)),
                "normalized_log_likelihood": float(gen.uniform(-3, -1)),
            }
        )
    agg = report.aggregate()[0]
    # independent single-pass (Welford) accumulator
    for metric, mean_key, sd_key in (
        ("ri", "ri_mean", "ri_sd"),
        ("normalized_log_likelihood", "ll_mean", "ll_sd"),
    ):
        count, mean, m2 = 0, 0.0, 0.0
        for row in report.rows:
            count += 1
            delta = row[metric] - mean
            mean += delta / count
            m2 += delta * (row[metric] - mean)
        sd = math.sqrt(m2 / (count - 1))
        assert agg[mean_key] == pytest.approx(mean, rel=1e-12)
        assert agg[sd_key] == pytest.approx(sd, rel=1e-12)


def test_report_serialization(tmp_path):
    report = EvalReport(metadata={"replicates": 1})
    report.rows.append(
        {
            "dataset": "d0",
            "movement_ratio": 0.1,
            "zero_ratio": 0.3,
            "replicate": 0,
            "model": "pirm",
            "ri": 0.9,
            "ari": 0.8,
            "normalized_log_likelihood": -2.0,
            "k_active": 4,
        }
    )
    report.aggregate()
    report.write_csv(tmp_path / "r.csv")
    report.write_json(tmp_path / "r.json")
    with open(tmp_path / "r.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert rows[0]["ri"] == "0.9"
    payload = json.loads((tmp_path / "r.json").read_text())
    assert payload["aggregates"][0]["n"] == 1


def test_heatmap_and_timeline_exports(tmp_path):
    lam = np.array([[1.0, 2.5], [0.25, 4.0]])
    write_lambda_heatmap_csv(lam, tmp_path / "lam.csv")
    with open(tmp_path / "lam.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["cluster", "1", "2"]
    assert float(rows[1][1]) == 1.0

    z = np.array([[0, 1], [1, 1]])
    write_membership_timeline_csv(z, tmp_path / "tl.csv")
    with open(tmp_path / "tl.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["object", "t", "label"]
    assert rows[1] == ["1", "1", "1"]  # 1-based everywhere
    assert len(rows) == 5
