"""Maximum-likelihood disentanglement of moreishness and utility."""

import concurrent.futures
import dataclasses
import logging
import math
import typing as t
import warnings

import numpy as np

from .config import thread_limit
from .exceptions import (
    ContractViolation, IdentifiabilityWarning, InvalidInput, NonFiniteError,
)
from .model import (
    EpochData, EpochTrace, Gradient, ItemCatalog, ModelParams, check_dim,
    epoch_data, evaluate,
)

logger = logging.getLogger(__name__)

# Positions of the scalar parameters in the unconstrained vector. The
# vector is (log mu, log beta1, log beta2, u1..., u2...).
SCALARS = 3
TIE_TOL = 1e-9
MAX_LOG = math.log(np.finfo(float).max)

Executor = concurrent.futures.Executor


@dataclasses.dataclass(frozen=True)
class FitConfig:  # pylint: disable=too-many-instance-attributes
    """Optimizer settings."""
    learning_rate: float = 0.002
    batch_size: int = 16
    max_steps: int = 20000
    init_seed: int = 0
    shuffle_seed: t.Optional[int] = None
    adam_beta_m: float = 0.9
    adam_beta_v: float = 0.999
    adam_eps: float = 1e-8
    convergence_tol: float = 1e-6
    patience: int = 500
    check_every: int = 100
    smoothing_window: int = 32
    burn_in_fraction: float = 0.5
    monotone_tol: float = 1e-3
    workers: int = 1
    log_every: int = 500

    def __post_init__(self) -> None:
        if not self.learning_rate > 0:
            raise InvalidInput("learning_rate must be positive")
        if self.batch_size < 1:
            raise InvalidInput("batch_size must be at least 1")
        if self.max_steps < 1:
            raise InvalidInput("max_steps must be at least 1")
        if not (0 <= self.adam_beta_m < 1 and 0 <= self.adam_beta_v < 1):
            raise InvalidInput("Adam decay rates must be in [0, 1)")
        if self.workers < 1:
            raise InvalidInput("workers must be at least 1")
        if self.check_every < 1:
            raise InvalidInput("check_every must be at least 1")

    @property
    def order_seed(self) -> int:
        """Seed of the minibatch order."""
        if self.shuffle_seed is None:
            return self.init_seed + 1
        return self.shuffle_seed


@dataclasses.dataclass(frozen=True, eq=False)
class FitReport:
    """Result of fit."""
    params: ModelParams
    trajectory: t.Tuple[float, ...]
    steps_taken: int
    final_log_likelihood: float
    flags: t.FrozenSet[str] = frozenset()
    errors: t.Optional[t.Dict[str, float]] = None
    checkpoints: t.Tuple[float, ...] = ()

    def to_dict(self) -> t.Dict[str, t.Any]:
        """Return JSON-ready dict."""
        return {
            "params": self.params.to_dict(),
            "steps_taken": self.steps_taken,
            "final_log_likelihood": self.final_log_likelihood,
            "flags": sorted(self.flags),
            "errors": self.errors,
            "trajectory": list(self.trajectory),
            "checkpoints": list(self.checkpoints),
        }

    @classmethod
    def from_dict(cls, data: t.Mapping[str, t.Any]) -> "FitReport":
        """Inverse of to_dict."""
        return cls(
            params=ModelParams.from_dict(data["params"]),
            trajectory=tuple(data.get("trajectory", ())),
            steps_taken=int(data["steps_taken"]),
            final_log_likelihood=float(data["final_log_likelihood"]),
            flags=frozenset(data.get("flags", ())),
            errors=data.get("errors"),
            checkpoints=tuple(data.get("checkpoints", ())),
        )


@dataclasses.dataclass(frozen=True, eq=False)
class AdamState:
    """First and second moment accumulators."""
    first: np.ndarray
    second: np.ndarray
    step: int = 0

    @classmethod
    def zeros(cls, size: int) -> "AdamState":
        """Return fresh state for a parameter vector of given size."""
        return cls(np.zeros(size), np.zeros(size))


def init_params(d: int, rng: np.random.Generator) -> np.ndarray:
    """Return a random unconstrained parameter vector.

    mu, beta1 and beta2 start at uniform draws in [0.1, 2]; u1 and u2 at
    N(0, 1/d) draws projected into the unit ball.
    """
    if d < 1:
        raise ContractViolation(f"dimension must be positive: {d}")
    scalars = np.log(rng.uniform(0.1, 2.0, size=SCALARS))
    embeddings = rng.normal(0.0, 1.0 / math.sqrt(d), size=2 * d)
    return clip_embeddings(np.concatenate([scalars, embeddings]))


def clip_embeddings(theta: np.ndarray) -> np.ndarray:
    """Rescale the embedding blocks of theta into the unit ball."""
    theta = np.array(theta, dtype=float)
    d = (theta.size - SCALARS) // 2
    for block in (slice(SCALARS, SCALARS + d), slice(SCALARS + d, None)):
        norm = np.linalg.norm(theta[block])
        if norm > 1:
            theta[block] /= norm
    return theta


def project_params(theta: np.ndarray) -> ModelParams:
    """Map an unconstrained vector to (non-canonical) ModelParams."""
    theta = np.asarray(theta, dtype=float)
    if theta.size < SCALARS + 2 or (theta.size - SCALARS) % 2:
        raise ContractViolation(f"bad parameter vector size: {theta.size}")
    if not np.all(np.isfinite(theta)):
        raise NonFiniteError("parameter vector")
    if np.any(theta[:SCALARS] > MAX_LOG):
        raise NonFiniteError("exp of log-parameter (overflow)")
    theta = clip_embeddings(theta)
    d = (theta.size - SCALARS) // 2
    mu, beta1, beta2 = np.exp(theta[:SCALARS])
    return ModelParams(mu, beta1, beta2,
                       theta[SCALARS:SCALARS + d], theta[SCALARS + d:])


def unconstrained(params: ModelParams) -> np.ndarray:
    """Inverse of project_params for params inside the unit ball."""
    return np.concatenate([
        np.log([params.mu, params.beta1, params.beta2]),
        params.u1,
        params.u2,
    ])


def chain_gradient(gradient: Gradient, params: ModelParams) -> np.ndarray:
    """Gradient with respect to the unconstrained vector."""
    return np.concatenate([
        [params.mu * gradient.mu,
         params.beta1 * gradient.beta1,
         params.beta2 * gradient.beta2],
        gradient.u1,
        gradient.u2,
    ])


def adam_step(state: AdamState,
              theta: np.ndarray,
              gradient: np.ndarray,
              config: FitConfig,
              ) -> t.Tuple[AdamState, np.ndarray]:
    """Take one bias-corrected Adam step in the ascent direction."""
    if gradient.shape != theta.shape or gradient.shape != state.first.shape:
        raise ContractViolation("gradient and state shapes differ")
    if not np.all(np.isfinite(gradient)):
        raise NonFiniteError("gradient", state.step + 1)

    step = state.step + 1
    first = config.adam_beta_m * state.first \
        + (1 - config.adam_beta_m) * gradient
    second = config.adam_beta_v * state.second \
        + (1 - config.adam_beta_v) * gradient * gradient
    first_hat = first / (1 - config.adam_beta_m ** step)
    second_hat = second / (1 - config.adam_beta_v ** step)
    update = config.learning_rate * first_hat \
        / (np.sqrt(second_hat) + config.adam_eps)
    return AdamState(first, second, step), theta + update


def at_identifiability_boundary(params: ModelParams) -> bool:
    """Check if the two decay rates coincide."""
    return abs(params.beta1 - params.beta2) < TIE_TOL


def relabel_components(params: ModelParams) -> ModelParams:
    """Return params with the faster-decaying component labeled 1."""
    if at_identifiability_boundary(params):
        warnings.warn(
            f"decay rates coincide (beta1={params.beta1}, "
            f"beta2={params.beta2}); components are not identifiable",
            IdentifiabilityWarning,
        )
    return params.swapped() if params.beta1 < params.beta2 else params


def relative_error(estimate: t.Any, truth: t.Any) -> float:
    """Return ||estimate - truth|| / ||truth||."""
    estimate = np.atleast_1d(np.asarray(estimate, dtype=float))
    truth = np.atleast_1d(np.asarray(truth, dtype=float))
    norm = np.linalg.norm(truth)
    if norm == 0:
        raise ContractViolation("relative error against zero truth")
    return float(np.linalg.norm(estimate - truth) / norm)


def parameter_errors(estimate: ModelParams,
                     truth: ModelParams,
                     ) -> t.Dict[str, float]:
    """Return relative error of every parameter."""
    check_dim("truth", estimate.dim, truth.dim)
    return {
        name: relative_error(getattr(estimate, name), getattr(truth, name))
        for name in ("mu", "beta1", "beta2", "u1", "u2")
    }


def tree_sum(values: t.Sequence[t.Any]) -> t.Any:
    """Sum values by pairwise reduction in index order."""
    if not values:
        raise ContractViolation("nothing to sum")
    values = list(values)
    while len(values) > 1:
        paired = [a + b for a, b in zip(values[::2], values[1::2])]
        if len(values) % 2:
            paired.append(values[-1])
        values = paired
    return values[0]


def batch_objective(batch: t.Sequence[EpochData],
                    params: ModelParams,
                    executor: t.Optional[Executor] = None,
                    ) -> t.Tuple[float, np.ndarray]:
    """Return mean log-likelihood of batch and its gradient in theta."""
    def term(data: EpochData) -> t.Tuple[float, np.ndarray]:
        value, gradient = evaluate(data, params)
        assert gradient is not None
        return value, chain_gradient(gradient, params)

    mapper = executor.map if executor is not None else map
    terms = list(mapper(term, batch))
    value = tree_sum([v for v, _ in terms]) / len(terms)
    gradient = tree_sum([g for _, g in terms]) / len(terms)
    return float(value), gradient


def full_objective(data: t.Sequence[EpochData],
                   params: ModelParams,
                   executor: t.Optional[Executor] = None,
                   ) -> float:
    """Return mean log-likelihood over every epoch, without gradients."""
    def term(item: EpochData) -> float:
        return evaluate(item, params, False)[0]

    mapper = executor.map if executor is not None else map
    return float(tree_sum(list(mapper(term, data))) / len(data))


def mean_log_likelihood(epochs: t.Sequence[EpochTrace],
                        catalog: ItemCatalog,
                        params: ModelParams,
                        ) -> float:
    """Return mean per-epoch log-likelihood."""
    check_dim("catalog", params.dim, catalog.dim)
    return full_objective([epoch_data(e, catalog) for e in epochs], params)


def smoothed(values: t.Sequence[float], window: int) -> np.ndarray:
    """Trailing moving average (shorter windows at the start)."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return values
    sums = np.cumsum(np.insert(values, 0, 0.0))
    index = np.arange(1, values.size + 1)
    start = np.maximum(index - window, 0)
    return t.cast(np.ndarray, (sums[index] - sums[start]) / (index - start))


def checks_per_patience(config: FitConfig) -> int:
    """Number of checkpoints spanning patience steps."""
    return max(1, config.patience // config.check_every)


def is_monotone(checkpoints: t.Sequence[float], config: FitConfig) -> bool:
    """Check that the full-data objective doesn't drop after burn-in.

    checkpoints are full-data objectives taken every check_every steps, so
    minibatch noise doesn't count as a drop.
    """
    curve = np.asarray(checkpoints, dtype=float)
    curve = curve[int(curve.size * config.burn_in_fraction):]
    if curve.size < 2:
        return True
    peak = np.maximum.accumulate(curve)
    drawdown = peak - curve
    return bool(np.all(drawdown <= config.monotone_tol * np.abs(peak)))


def has_plateaued(checkpoints: t.Sequence[float], config: FitConfig) -> bool:
    """Check if the best full-data objective improved by less than
    convergence_tol (relative) over the last patience steps."""
    window = checks_per_patience(config)
    if config.patience < 1 or len(checkpoints) <= window:
        return False
    before = max(checkpoints[:-window])
    recent = max(checkpoints[-window:])
    return recent - before <= config.convergence_tol * abs(before)


def minibatches(count: int,
                batch_size: int,
                rng: np.random.Generator,
                ) -> t.Iterator[np.ndarray]:
    """Yield epoch indices forever, reshuffling on every pass."""
    while True:
        order = rng.permutation(count)
        for start in range(0, count, batch_size):
            yield order[start:start + batch_size]


def fit(epochs: t.Sequence[EpochTrace],
        catalog: ItemCatalog,
        config: FitConfig = FitConfig(),
        truth: t.Optional[ModelParams] = None,
        ) -> FitReport:
    """Fit ModelParams to epochs by minibatch Adam on the mean log-likelihood.

    Returns params in canonical form (beta1 > beta2).
    """
    if not epochs:
        raise ContractViolation("need at least one epoch to fit")
    if truth is not None:
        check_dim("truth", catalog.dim, truth.dim)
    data = [epoch_data(e, catalog) for e in epochs]
    theta = init_params(catalog.dim, np.random.default_rng(config.init_seed))
    state = AdamState.zeros(theta.size)
    batches = minibatches(len(data), config.batch_size,
                          np.random.default_rng(config.order_seed))
    trajectory: t.List[float] = []
    checkpoints: t.List[float] = []
    flags = set()

    executor = None
    workers = min(config.workers, thread_limit())
    if workers > 1:
        executor = concurrent.futures.ThreadPoolExecutor(workers)
    try:
        for step in range(1, config.max_steps + 1):
            params = project_params(theta)
            batch = [data[i] for i in next(batches)]
            value, gradient = batch_objective(batch, params, executor)
            if not math.isfinite(value):
                raise NonFiniteError("objective", step)
            trajectory.append(value)
            state, theta = adam_step(state, theta, gradient, config)
            theta = clip_embeddings(theta)

            if config.log_every and step % config.log_every == 0:
                logger.info(
                    "step %d: objective %.6f mu %.4f beta1 %.4f beta2 %.4f",
                    step, smoothed(trajectory, config.smoothing_window)[-1],
                    params.mu, params.beta1, params.beta2,
                )
            if step % config.check_every:
                continue
            checkpoints.append(
                full_objective(data, project_params(theta), executor)
            )
            if not math.isfinite(checkpoints[-1]):
                raise NonFiniteError("objective", step)
            if has_plateaued(checkpoints, config):
                logger.info("objective plateaued at step %d", step)
                flags.add("early-stop")
                break
    finally:
        if executor is not None:
            executor.shutdown()

    estimate = project_params(theta)
    if at_identifiability_boundary(estimate):
        flags.add("identifiability-boundary")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IdentifiabilityWarning)
        estimate = relabel_components(estimate)
    if not is_monotone(checkpoints, config):
        logger.warning("objective didn't increase monotonically")
        flags.add("non-convergence")

    return FitReport(
        params=estimate,
        trajectory=tuple(trajectory),
        steps_taken=len(trajectory),
        final_log_likelihood=mean_log_likelihood(epochs, catalog, estimate),
        flags=frozenset(flags),
        errors=None if truth is None else parameter_errors(estimate, truth),
        checkpoints=tuple(checkpoints),
    )
