"""Goodness-of-fit diagnostics based on the time-rescaling theorem."""

import typing as t

import numpy as np
from scipy import stats

from . import kernels
from .exceptions import ContractViolation
from .model import (
    EpochTrace, ItemCatalog, ModelParams, check_dim, epoch_data, link, marks,
)


class GoodnessOfFit(t.NamedTuple):
    """Kolmogorov-Smirnov test of rescaled intervals against Exp(1)."""
    statistic: float
    pvalue: float
    count: int


def intensity_path(epoch: EpochTrace,
                   catalog: ItemCatalog,
                   params: ModelParams,
                   grid: t.Sequence[float],
                   ) -> np.ndarray:
    """Evaluate the intensity on a time grid.

    The intensity is left-continuous: a session at a grid point doesn't
    count toward the rate at that point.
    """
    check_dim("catalog", params.dim, catalog.dim)
    data = epoch_data(epoch, catalog)
    points = np.asarray(grid, dtype=float)
    lags = points[:, None] - data.times[None, :]
    past = lags > 0
    lags = np.where(past, lags, 0.0)
    rates = np.full(points.shape, params.mu)
    for beta, u in ((params.beta1, params.u1), (params.beta2, params.u2)):
        alpha = np.asarray(link(data.vectors @ u))
        kernel = np.where(past, alpha * beta * np.exp(-beta * lags), 0.0)
        rates += kernel.sum(axis=1)
    return rates


def rescaled_intervals(epoch: EpochTrace,
                       catalog: ItemCatalog,
                       params: ModelParams,
                       ) -> np.ndarray:
    """Return compensator increments between consecutive arrivals.

    Under the true parameters these are i.i.d. unit-rate exponentials.
    """
    alpha1, alpha2 = marks(epoch, catalog, params)
    cumulative = kernels.cumulative_compensator(
        epoch.times, alpha1, alpha2, params.mu, params.beta1, params.beta2,
    )
    return np.diff(cumulative, prepend=0.0)


def goodness_of_fit(epochs: t.Iterable[EpochTrace],
                    catalog: ItemCatalog,
                    params: ModelParams,
                    ) -> GoodnessOfFit:
    """Pool rescaled intervals of all epochs and test them against Exp(1)."""
    pooled = [rescaled_intervals(e, catalog, params) for e in epochs]
    intervals = np.concatenate(pooled) if pooled else np.zeros(0)
    if intervals.size == 0:
        raise ContractViolation("no sessions to test")
    result = stats.kstest(intervals, "expon")
    return GoodnessOfFit(float(result.statistic), float(result.pvalue),
                         int(intervals.size))
