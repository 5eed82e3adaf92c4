"""Test dualhawkes.diagnostics."""

from hypothesis import given, settings
import numpy as np
import pytest

from dualhawkes.diagnostics import (
    goodness_of_fit, intensity_path, rescaled_intervals,
)
from dualhawkes.exceptions import ContractViolation
from dualhawkes.model import (
    EpochTrace, ItemCatalog, ModelParams, SessionRecord, compensator,
    intensity, marked_events,
)
from dualhawkes.simulate import SimConfig, simulate_epochs

from . import strategies
from .strategies import Scene


@given(strategies.scenes(max_sessions=15))
@settings(max_examples=100, deadline=None)
def test_intensity_path_matches_intensity(scene: Scene) -> None:
    """Path should equal the direct intensity, excluding events at t."""
    events = marked_events(scene.epoch, scene.catalog, scene.params)
    grid = np.linspace(0.0, scene.epoch.horizon, 7)
    grid = np.concatenate([grid, [e.t for e in events]])
    path = intensity_path(scene.epoch, scene.catalog, scene.params, grid)
    for point, value in zip(grid, path):
        history = [e for e in events if e.t < point]
        assert value == pytest.approx(intensity(point, history, scene.params))


@given(strategies.scenes(max_sessions=30))
@settings(max_examples=100, deadline=None)
def test_rescaled_intervals_sum_to_compensator(scene: Scene) -> None:
    """Intervals should add up to the compensator at the last arrival."""
    events = marked_events(scene.epoch, scene.catalog, scene.params)
    intervals = rescaled_intervals(scene.epoch, scene.catalog, scene.params)
    assert intervals.size == len(events)
    assert np.all(intervals > 0)
    expected = compensator(events[-1].t, events, scene.params)
    assert intervals.sum() == pytest.approx(expected, rel=1e-9)


def test_rescaled_intervals_of_poisson_epoch() -> None:
    """Without excitation the intervals are mu times the gaps."""
    catalog = ItemCatalog(np.eye(2)[:1])
    params = ModelParams(2.0, 3.0, 1.0, [-1.0, 0.0], [-1.0, 0.0])
    epoch = EpochTrace(
        tuple(SessionRecord(t, (0,)) for t in (0.5, 1.0, 3.0)), 3.0,
    )
    intervals = rescaled_intervals(epoch, catalog, params)
    assert intervals == pytest.approx([1.0, 1.0, 4.0])


def test_goodness_of_fit_accepts_true_parameters() -> None:
    """Simulated epochs should pass the KS test under the true params."""
    catalog = ItemCatalog.normalized(
        np.random.default_rng(3).standard_normal((20, 4))
    )
    params = ModelParams(0.3, 4.0, 1.0, [0.6, 0.0, 0.0, 0.0],
                         [0.0, 0.8, 0.0, 0.0])
    epochs = simulate_epochs(params, catalog,
                             SimConfig(sessions_per_epoch=500), 4, seed=11)
    result = goodness_of_fit(epochs, catalog, params)
    assert result.count == 2000
    assert result.pvalue > 0.01


def test_goodness_of_fit_rejects_wrong_parameters() -> None:
    """A tenfold base rate should be rejected."""
    catalog = ItemCatalog.normalized(
        np.random.default_rng(3).standard_normal((20, 4))
    )
    params = ModelParams(0.3, 4.0, 1.0, [0.6, 0.0, 0.0, 0.0],
                         [0.0, 0.8, 0.0, 0.0])
    wrong = ModelParams(3.0, 4.0, 1.0, params.u1, params.u2)
    epochs = simulate_epochs(params, catalog,
                             SimConfig(sessions_per_epoch=500), 2, seed=5)
    assert goodness_of_fit(epochs, catalog, wrong).pvalue < 1e-6


def test_goodness_of_fit_without_sessions() -> None:
    """There must be something to test."""
    catalog = ItemCatalog(np.eye(2))
    params = ModelParams(1.0, 2.0, 1.0, [1.0, 0.0], [0.0, 1.0])
    with pytest.raises(ContractViolation):
        goodness_of_fit([EpochTrace((), 1.0)], catalog, params)
