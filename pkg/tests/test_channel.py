"""Markov-correlated depolarizing sampler: frozen draw scheme, marginals,
and burst bookkeeping."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eaqc.channel import (
    ChannelParams,
    max_burst_length,
    sample_error,
    sample_error_batch,
    trial_seed,
)
from eaqc.clifford import PauliVector


def test_params_validated():
    ChannelParams(0.0, 0.0)
    ChannelParams(1.0, 1.0)
    with pytest.raises(ValueError):
        ChannelParams(-0.1, 0.5)
    with pytest.raises(ValueError):
        ChannelParams(0.5, 1.5)


def test_zero_noise_is_identity_for_any_correlation():
    for eta in (0.0, 0.3, 1.0):
        e = sample_error(50, ChannelParams(0.0, eta), seed=7)
        assert not e.x.any() and not e.z.any() and e.phase == 0


def test_full_correlation_gives_constant_runs():
    for seed in range(20):
        e = sample_error(40, ChannelParams(0.9, 1.0), seed=seed)
        assert np.all(e.x == e.x[0]) and np.all(e.z == e.z[0])


def test_determinism_and_seed_sensitivity():
    params = ChannelParams(0.3, 0.4)
    a = sample_error(60, params, seed=11)
    b = sample_error(60, params, seed=11)
    c = sample_error(60, params, seed=12)
    assert a == b
    assert a != c  # 60 qubits at p_d=0.3 collide with negligible probability


def test_frozen_draw_scheme():
    # the documented order: u array first, then v; qubit 0 ignores u
    params = ChannelParams(0.25, 0.6)
    n, seed = 30, 424242
    rng = np.random.default_rng(seed)
    u = rng.random(n)
    v = rng.random(n)
    cats = np.zeros(n, dtype=int)
    for j in range(n):
        if v[j] < 1.0 - params.p_d:
            c = 0
        else:
            c = 1 + min(2, int((v[j] - (1.0 - params.p_d)) / params.p_d * 3))
        if j > 0 and u[j] < params.eta:
            cats[j] = cats[j - 1]
        else:
            cats[j] = c
    e = sample_error(n, params, seed)
    x = ((cats == 1) | (cats == 2)).astype(np.uint8)
    z = ((cats == 2) | (cats == 3)).astype(np.uint8)
    assert np.array_equal(e.x, x) and np.array_equal(e.z, z)


def test_batch_rows_match_per_trial_seeds():
    params = ChannelParams(0.2, 0.5)
    xs, zs = sample_error_batch(25, params, master_seed=99, trials=40)
    assert xs.shape == zs.shape == (40, 25)
    for t in (0, 7, 39):
        e = sample_error(25, params, trial_seed(99, t))
        assert np.array_equal(xs[t], e.x) and np.array_equal(zs[t], e.z)


def test_uncorrelated_frequencies_match_marginal():
    n = 100_000
    e = sample_error(n, ChannelParams(0.3, 0.0), seed=5)
    cats = e.x.astype(int) + 2 * e.z.astype(int)  # I=0 X=1 Y=3 Z=2 relabeling
    counts = np.bincount(cats, minlength=4)
    for count, prob in zip(counts, (0.7, 0.1, 0.1, 0.1)):
        sigma = np.sqrt(n * prob * (1 - prob))
        assert abs(count - n * prob) < 3 * sigma


@pytest.mark.parametrize("eta", [0.0, 0.5, 0.9])
def test_marginal_is_stationary_along_the_chain(eta):
    # fixed positions across many trials: the marginal must not drift
    params = ChannelParams(0.3, eta)
    trials, n = 4000, 9
    xs, zs = sample_error_batch(n, params, master_seed=31, trials=trials)
    ident = ~(xs.astype(bool) | zs.astype(bool))
    for pos in (0, n // 2, n - 1):
        count = int(ident[:, pos].sum())
        sigma = np.sqrt(trials * 0.7 * 0.3)
        assert abs(count - trials * 0.7) < 4 * sigma, (eta, pos)


@pytest.mark.parametrize("eta", [0.0, 0.5])
def test_adjacent_repeat_rate_matches_conditional(eta):
    p_d = 0.3
    n = 100_000
    e = sample_error(n, ChannelParams(p_d, eta), seed=8)
    cats = e.x.astype(int) + 2 * e.z.astype(int)
    repeats = int(np.sum(cats[1:] == cats[:-1]))
    prob = (1 - eta) * ((1 - p_d) ** 2 + 3 * (p_d / 3) ** 2) + eta
    sigma = np.sqrt((n - 1) * prob * (1 - prob))
    assert abs(repeats - (n - 1) * prob) < 4 * sigma


def test_burst_length_hand_cases():
    mk = PauliVector.from_support
    assert max_burst_length(mk(6)) == 0
    assert max_burst_length(mk(6, x_on=[2])) == 1
    assert max_burst_length(mk(6, x_on=[1, 2], z_on=[2, 3])) == 3
    assert max_burst_length(mk(6, x_on=[0, 5], z_on=[1])) == 2
    assert max_burst_length(mk(3, x_on=[0, 1, 2])) == 3


def test_rejects_empty_register():
    with pytest.raises(ValueError):
        sample_error(0, ChannelParams(0.1, 0.0), seed=1)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(1, 40),
    st.floats(0.0, 1.0),
    st.floats(0.0, 1.0),
    st.integers(0, 2**32 - 1),
)
def test_samples_are_reproducible_and_phase_free(n, p_d, eta, seed):
    params = ChannelParams(p_d, eta)
    a = sample_error(n, params, seed)
    b = sample_error(n, params, seed)
    assert a == b
    assert a.phase == 0
    assert a.qubits == n
