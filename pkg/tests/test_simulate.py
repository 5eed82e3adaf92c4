"""Test dualhawkes.simulate."""

import typing as t

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest
from scipy import stats

from dualhawkes.diagnostics import goodness_of_fit
from dualhawkes.exceptions import ContractViolation, InvalidInput
from dualhawkes.model import (
    ItemCatalog, ModelParams, SessionRecord, compensator, marked_events,
)
from dualhawkes.simulate import (
    SimConfig, draw_session_items, draw_session_length, epoch_seed,
    simulate_epoch, simulate_epochs, split_sequence,
)


def catalog(m: int = 20, d: int = 4, seed: int = 3) -> ItemCatalog:
    """Random unit-norm catalog."""
    rng = np.random.default_rng(seed)
    return ItemCatalog.normalized(rng.standard_normal((m, d)))


def params(d: int = 4, mu: float = 0.3) -> ModelParams:
    """Excitable user."""
    u1 = np.zeros(d)
    u2 = np.zeros(d)
    u1[0] = 0.6
    u2[1] = 0.8
    return ModelParams(mu, 4.0, 1.0, u1, u2)


def test_session_length_distribution() -> None:
    """Lengths should follow a geometric law with the tail folded into 6."""
    rng = np.random.default_rng(0)
    draws = [draw_session_length(rng, 0.8, 1, 6) for _ in range(20000)]
    observed = np.bincount(draws, minlength=7)[1:]
    p = 0.8
    pmf = [p * (1 - p) ** (k - 1) for k in range(1, 6)]
    pmf.append((1 - p) ** 5)
    expected = np.array(pmf) * len(draws)
    assert stats.chisquare(observed, expected).pvalue > 0.001


@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(3, 8))
@settings(max_examples=100)
def test_session_length_bounds(seed: int, low: int, high: int) -> None:
    """Lengths should stay in [low, high]."""
    rng = np.random.default_rng(seed)
    length = draw_session_length(rng, 0.5, low, high)
    assert low <= length <= high


def test_session_items_are_in_catalog() -> None:
    """Items are drawn from the catalog with replacement."""
    rng = np.random.default_rng(1)
    items = draw_session_items(50, catalog(m=3), rng)
    assert len(items) == 50
    assert set(items) <= {0, 1, 2}
    with pytest.raises(ContractViolation):
        draw_session_items(0, catalog(m=3), rng)



def test_session_items_are_uniform() -> None:
    """Every item of a 10-item catalog should be equally likely."""
    rng = np.random.default_rng(11)
    items = draw_session_items(20000, catalog(m=10), rng)
    observed = np.bincount(items, minlength=10)
    assert stats.chisquare(observed).pvalue > 0.001

@pytest.mark.parametrize("kwargs", [
    {"sessions_per_epoch": 0},
    {"session_len_p": 0.0},
    {"session_len_p": 1.0},
    {"session_len_min": 0},
    {"session_len_min": 4, "session_len_max": 3},
])
def test_sim_config_validation(kwargs: t.Dict[str, t.Any]) -> None:
    """Invalid settings should be rejected."""
    with pytest.raises(InvalidInput):
        SimConfig(**kwargs)


def test_epoch_seed_matches_spawn() -> None:
    """epoch_seed(seed, i) is SeedSequence(seed).spawn(n)[i]."""
    children = np.random.SeedSequence(7).spawn(4)
    for index, child in enumerate(children):
        derived = epoch_seed(7, index)
        assert np.array_equal(derived.generate_state(4),
                              child.generate_state(4))


def test_simulate_epoch_shape() -> None:
    """Epoch has the requested number of increasing sessions."""
    config = SimConfig(sessions_per_epoch=50)
    epoch = simulate_epoch(params(), catalog(), config, seed=1)
    assert len(epoch) == 50
    assert np.all(np.diff(epoch.times) > 0)
    assert epoch.horizon == epoch.sessions[-1].t
    assert all(1 <= len(s.items) <= 6 for s in epoch.sessions)


def test_simulate_epoch_is_deterministic() -> None:
    """Same seed, same epoch; different seed, different epoch."""
    config = SimConfig(sessions_per_epoch=30)
    first = simulate_epoch(params(), catalog(), config, seed=5)
    second = simulate_epoch(params(), catalog(), config, seed=5)
    third = simulate_epoch(params(), catalog(), config, seed=6)
    assert first == second
    assert first != third


def test_session_content_does_not_depend_on_times() -> None:
    """Items come from their own stream."""
    config = SimConfig(sessions_per_epoch=30)
    slow = simulate_epoch(params(mu=0.1), catalog(), config, seed=5)
    fast = simulate_epoch(params(mu=3.0), catalog(), config, seed=5)
    assert [s.items for s in slow.sessions] == \
        [s.items for s in fast.sessions]
    assert slow.times.tolist() != fast.times.tolist()


def test_simulate_epoch_dimension_mismatch() -> None:
    """Catalog and params must share the dimension."""
    with pytest.raises(ContractViolation):
        simulate_epoch(params(d=3), catalog(d=4))


def test_simulate_epochs_uses_derived_seeds() -> None:
    """Epoch i of simulate_epochs equals simulate_epoch with epoch_seed."""
    config = SimConfig(sessions_per_epoch=20)
    epochs = simulate_epochs(params(), catalog(), config, 3, seed=9)
    assert len(epochs) == 3
    assert epochs[2] == simulate_epoch(params(), catalog(), config,
                                       epoch_seed(9, 2))
    assert simulate_epochs(params(), catalog(), config, 2, seed=9) \
        == epochs[:2]


def test_simulated_events_pass_time_rescaling() -> None:
    """Rescaled intervals of 10^4 events should look like Exp(1)."""
    config = SimConfig(sessions_per_epoch=1000)
    epochs = simulate_epochs(params(), catalog(), config, 10, seed=2024)
    result = goodness_of_fit(epochs, catalog(), params())
    assert result.count == 10000
    assert result.pvalue > 0.01


def test_poisson_interarrival_mean() -> None:
    """Without excitation inter-arrival times have mean 1 / mu."""
    single = ItemCatalog(np.eye(3)[:1])
    mu = 0.7
    user = ModelParams(mu, 3.0, 1.0, -np.eye(3)[0], -np.eye(3)[0])
    epoch = simulate_epoch(user, single, SimConfig(sessions_per_epoch=5000),
                           seed=8)
    gaps = np.diff(epoch.times, prepend=0.0)
    standard_error = (1 / mu) / np.sqrt(gaps.size)
    assert abs(gaps.mean() - 1 / mu) < 3 * standard_error


def test_split_sequence() -> None:
    """Epochs start at the previous epoch's last arrival."""
    sessions = [SessionRecord(t, (0,)) for t in (1.0, 2.0, 4.0, 7.0, 8.0)]
    epochs = split_sequence(sessions, 2)
    assert len(epochs) == 2
    assert epochs[0].times.tolist() == [1.0, 2.0]
    assert epochs[1].times.tolist() == [2.0, 5.0]
    assert epochs[1].horizon == 5.0

    epochs = split_sequence(sessions, 2, keep_partial=True)
    assert len(epochs) == 3
    assert epochs[2].times.tolist() == [1.0]

    with pytest.raises(ContractViolation):
        split_sequence(sessions, 0)


def test_session_count_tracks_compensator() -> None:
    """N(T) should stay close to the compensator at the horizon."""
    config = SimConfig(sessions_per_epoch=1000)
    user = params()
    epochs = simulate_epochs(user, catalog(), config, 100, seed=31)
    gaps = []
    for epoch in epochs:
        events = marked_events(epoch, catalog(), user)
        expected = compensator(epoch.horizon, events, user)
        gaps.append(abs(len(epoch) - expected) / expected)
    assert np.mean(gaps) < 0.05
