import numpy as np

from tvbiclust.diagnostics import check_sweep, diagnose_trace
from tvbiclust.rng import RngHandle
from tvbiclust.samplers import SweepConfig, run_chain
from tvbiclust.synthgen import SynthConfig, generate_dataset
from tvbiclust.types import Hyperparams


def _trace(model="dzipirm", sweeps=6):
    x, _, _ = generate_dataset(SynthConfig(n=8, t=3, zero_ratio=0.5, seed=4))
    cfg = SweepConfig(model=model, sweeps=sweeps, burn_in=1)
    return run_chain(x, cfg, Hyperparams(), RngHandle(5))


def test_healthy_trace_passes():
    trace = _trace()
    passed, rows = diagnose_trace(trace)
    assert passed
    assert len(rows) == len(trace.sweeps)
    assert all(row["ok"] for row in rows)


def test_count_component_violation_flagged():
    trace = _trace()
    rec = trace.sweeps[2]
    stats = {k: np.asarray(v) for k, v in rec.block_stats.items()}
    stats["sum_rx"] = stats["sum_rx"].copy()
    stats["sum_rx"].flat[0] += 1  # as if r=0 on a cell with x>0
    rec.block_stats = {k: v.tolist() for k, v in stats.items()}
    problems = check_sweep(rec, Hyperparams())
    assert any("identity" in p for p in problems)
    passed, rows = diagnose_trace(trace)
    assert not passed
    assert sum(not row["ok"] for row in rows) == 1


def test_bad_beta_flagged():
    trace = _trace(model="dpirm")
    rec = trace.sweeps[0]
    rec.beta = rec.beta * 1.5
    problems = check_sweep(rec, Hyperparams())
    assert any("probability vector" in p for p in problems)


def test_alpha_stays_in_unit_interval():
    trace = _trace(sweeps=10)
    hp = Hyperparams()
    for rec in trace.sweeps:
        count = np.asarray(rec.block_stats["count"])
        sum_r = np.asarray(rec.block_stats["sum_r"])
        alpha = (hp.b + sum_r) / (hp.b + count)
        assert np.all(alpha >= 0) and np.all(alpha <= 1)
