import numpy as np
import pytest
from scipy import stats as sps

from tvbiclust.rng import (
    RngHandle,
    draw_bernoulli,
    draw_beta,
    draw_categorical,
    draw_gamma,
    draw_poisson,
    stick_break,
)


def test_same_seed_same_stream_reproduces():
    a = RngHandle(42, 3).generator.random(100)
    b = RngHandle(42, 3).generator.random(100)
    np.testing.assert_array_equal(a, b)


def test_distinct_streams_differ():
    a = RngHandle(42, 0).generator.random(100)
    b = RngHandle(42, 1).generator.random(100)
    assert not np.array_equal(a, b)


def test_gamma_moments_and_distribution():
    rng = RngHandle(7)
    draws = np.array([draw_gamma(3.0, 2.0, rng) for _ in range(20000)])
    # mean shape/rate, variance shape/rate^2
    assert abs(draws.mean() - 1.5) < 4 * np.sqrt(0.75 / draws.size)
    assert abs(draws.var() - 0.75) < 0.05
    ks = sps.kstest(draws, sps.gamma(a=3.0, scale=0.5).cdf)
    assert ks.pvalue > 1e-3


def test_beta_distribution():
    rng = RngHandle(8)
    draws = np.array([draw_beta(2.0, 5.0, rng) for _ in range(20000)])
    ks = sps.kstest(draws, sps.beta(2.0, 5.0).cdf)
    assert ks.pvalue > 1e-3


def test_poisson_mean():
    rng = RngHandle(9)
    draws = draw_poisson(np.full(20000, 4.0), rng)
    assert abs(draws.mean() - 4.0) < 4 * np.sqrt(4.0 / draws.size)
    assert draw_poisson(0.0, rng) == 0


def test_bernoulli_frequency():
    rng = RngHandle(10)
    draws = draw_bernoulli(np.full(20000, 0.3), rng)
    assert set(np.unique(draws)) <= {0, 1}
    assert abs(draws.mean() - 0.3) < 0.02


def test_categorical_frequencies_match_weights():
    rng = RngHandle(11)
    weights = [2.0, 1.0, 1.0]
    draws = np.array([draw_categorical(weights, rng) for _ in range(12000)])
    freq = np.bincount(draws, minlength=3) / draws.size
    np.testing.assert_allclose(freq, [0.5, 0.25, 0.25], atol=0.02)


def test_categorical_rejects_bad_weights():
    rng = RngHandle(12)
    with pytest.raises(ValueError):
        draw_categorical([], rng)
    with pytest.raises(ValueError):
        draw_categorical([0.0, 0.0], rng)
    with pytest.raises(ValueError):
        draw_categorical([1.0, -1.0], rng)


def test_gamma_rejects_bad_params():
    rng = RngHandle(13)
    with pytest.raises(ValueError):
        draw_gamma(0.0, 1.0, rng)
    with pytest.raises(ValueError):
        draw_gamma(1.0, np.inf, rng)


def test_stick_break_sums_to_one():
    rng = RngHandle(14)
    for count in (0, 1, 5, 50):
        weights, residual = stick_break(1.0, count, rng)
        assert weights.size == count
        assert np.all(weights >= 0) and residual >= 0
        assert abs(weights.sum() + residual - 1.0) < 1e-12


def test_stick_break_first_weight_mean():
    rng = RngHandle(15)
    gamma = 3.0
    firsts = np.array([stick_break(gamma, 1, rng)[0][0] for _ in range(20000)])
    # v ~ Beta(1, gamma) has mean 1/(1+gamma)
    assert abs(firsts.mean() - 1.0 / (1.0 + gamma)) < 0.01
