"""Utility-based ranking and its evaluation against engagement ranking."""

import dataclasses
import typing as t

import numpy as np

from .exceptions import ContractViolation, InvalidInput
from .model import (
    EpochTrace, ItemCatalog, ModelParams, check_dim, link, session_vector,
)

EVALUATIONS = ("estimated", "true")


@dataclasses.dataclass(frozen=True, eq=False)
class RankResult:
    """Top-k items and their scores."""
    indices: np.ndarray
    scores: np.ndarray

    def __len__(self) -> int:
        return int(self.indices.size)


def _scores(catalog: ItemCatalog, direction: t.Any, k: int) -> np.ndarray:
    direction = np.asarray(direction, dtype=float)
    check_dim("direction", catalog.dim, direction.size)
    if not 1 <= k <= catalog.count:
        raise ContractViolation(
            f"k must be in [1, {catalog.count}], got {k}"
        )
    return t.cast(np.ndarray, catalog.vectors @ direction)


def rank_items(catalog: ItemCatalog, direction: t.Any, k: int) -> RankResult:
    """Return the k items with the largest dot product with direction.

    Ties go to the lower item index.
    """
    scores = _scores(catalog, direction, k)
    order = np.lexsort((np.arange(scores.size), -scores))[:k]
    return RankResult(order, scores[order])


def softmax_rank(catalog: ItemCatalog,
                 direction: t.Any,
                 k: int,
                 temperature: float,
                 rng: np.random.Generator,
                 ) -> RankResult:
    """Sample k distinct items with probability proportional to
    exp(score / temperature), in order of selection (Gumbel top-k)."""
    if not temperature > 0:
        raise ContractViolation(f"temperature must be positive: {temperature}")
    scores = _scores(catalog, direction, k)
    keys = scores / temperature + rng.gumbel(size=scores.size)
    order = np.lexsort((np.arange(scores.size), -keys))[:k]
    return RankResult(order, scores[order])


def set_utility(selected: t.Sequence[int],
                catalog: ItemCatalog,
                u2_true: t.Any,
                ) -> float:
    """Return link(mean(selected vectors) . u2_true)."""
    indices = np.asarray(selected, dtype=int)
    if indices.size == 0:
        raise ContractViolation("can't score an empty selection")
    u2_true = np.asarray(u2_true, dtype=float)
    check_dim("utility embedding", catalog.dim, u2_true.size)
    mean = catalog.vectors[indices].mean(axis=0)
    return t.cast(float, link(float(mean @ u2_true)))


def engagement_direction(u1: t.Any, u2: t.Any) -> np.ndarray:
    """Return u1 + u2, the direction an engagement optimizer ranks by."""
    return np.asarray(u1, dtype=float) + np.asarray(u2, dtype=float)


def long_run_average_utility(traces: t.Iterable[EpochTrace],
                             catalog: ItemCatalog,
                             u2_true: t.Any,
                             ) -> float:
    """Return total session utility per unit of observed time."""
    u2_true = np.asarray(u2_true, dtype=float)
    check_dim("utility embedding", catalog.dim, u2_true.size)
    total = 0.0
    horizon = 0.0
    for trace in traces:
        horizon += trace.horizon
        for session in trace.sessions:
            total += t.cast(float, link(float(
                session_vector(session, catalog) @ u2_true
            )))
    if horizon <= 0:
        raise ContractViolation("total horizon must be positive")
    return total / horizon


def compare_strategies(catalog: ItemCatalog,
                       truth: ModelParams,
                       estimate: ModelParams,
                       k: int = 10,
                       evaluation: str = "estimated",
                       ) -> t.Tuple[float, float]:
    """Return utilities of (engagement ranking, utility ranking).

    Utility ranking uses the estimated u2. Engagement ranking uses u1 + u2,
    estimated or true depending on evaluation. Both selections are scored
    against the true u2.
    """
    if evaluation not in EVALUATIONS:
        raise InvalidInput(
            f"evaluation must be one of {', '.join(EVALUATIONS)}"
        )
    reference = estimate if evaluation == "estimated" else truth
    engagement = rank_items(
        catalog, engagement_direction(reference.u1, reference.u2), k,
    )
    utility = rank_items(catalog, estimate.u2, k)
    return (set_utility(engagement.indices, catalog, truth.u2),
            set_utility(utility.indices, catalog, truth.u2))
