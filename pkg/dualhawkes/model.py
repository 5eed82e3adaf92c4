"""Dual-kernel marked Hawkes model of user return behavior.

Each session a user starts excites future returns through two exponential
kernels: a fast System-1 (moreishness) component and a slow System-2
(utility) component. The infectivity of a session in each component is the
link of the dot product between the session vector and the user's
embedding for that component.
"""

import dataclasses
import logging
import typing as t

import numpy as np

from . import kernels
from .exceptions import ContractViolation, DimensionMismatch

logger = logging.getLogger(__name__)

NORM_TOL = 1e-9
LINK_TOL = 1e-9
LINK_SLOPE = 0.25

Scalar = t.Union[float, np.ndarray]


def frozen_vector(values: t.Any, name: str) -> np.ndarray:
    """Return read-only float copy of a finite 1-d vector."""
    vector = np.array(values, dtype=float)
    if vector.ndim != 1 or vector.size == 0:
        raise ContractViolation(f"{name} must be a non-empty vector")
    if not np.all(np.isfinite(vector)):
        raise ContractViolation(f"{name} has non-finite entries")
    vector.setflags(write=False)
    return vector


def check_dim(what: str, expected: int, actual: int) -> None:
    """Raise DimensionMismatch unless expected == actual."""
    if expected != actual:
        raise DimensionMismatch(what, expected, actual)


@dataclasses.dataclass(frozen=True, eq=False)
class ModelParams:
    """Hawkes parameters of one user.

    mu is the base return rate, beta1 and beta2 the decay rates of the
    moreishness (System-1) and utility (System-2) components, u1 and u2 the
    matching embeddings. In canonical form beta1 > beta2.
    """
    mu: float
    beta1: float
    beta2: float
    u1: np.ndarray
    u2: np.ndarray

    def __post_init__(self) -> None:
        for name in ("mu", "beta1", "beta2"):
            value = float(getattr(self, name))
            if not (np.isfinite(value) and value > 0):
                raise ContractViolation(f"{name} must be positive: {value}")
            object.__setattr__(self, name, value)

        u1 = frozen_vector(self.u1, "u1")
        u2 = frozen_vector(self.u2, "u2")
        check_dim("u2", u1.size, u2.size)
        for name, vector in (("u1", u1), ("u2", u2)):
            norm = float(np.linalg.norm(vector))
            if norm > 1 + NORM_TOL:
                raise ContractViolation(f"{name} outside unit ball: {norm}")
        object.__setattr__(self, "u1", u1)
        object.__setattr__(self, "u2", u2)

    @property
    def dim(self) -> int:
        """Embedding dimension."""
        return int(self.u1.size)

    @property
    def is_canonical(self) -> bool:
        """Check if the fast component is labeled 1."""
        return self.beta1 > self.beta2

    def swapped(self) -> "ModelParams":
        """Return params with the two kernel components relabeled."""
        return ModelParams(self.mu, self.beta2, self.beta1, self.u2, self.u1)

    def to_dict(self) -> t.Dict[str, t.Any]:
        """Return JSON-ready dict."""
        return {
            "mu": self.mu,
            "beta1": self.beta1,
            "beta2": self.beta2,
            "u1": self.u1.tolist(),
            "u2": self.u2.tolist(),
        }

    @classmethod
    def from_dict(cls, data: t.Mapping[str, t.Any]) -> "ModelParams":
        """Inverse of to_dict."""
        try:
            return cls(data["mu"], data["beta1"], data["beta2"],
                       data["u1"], data["u2"])
        except KeyError as exc:
            raise ContractViolation(f"missing parameter: {exc}") from exc


@dataclasses.dataclass(frozen=True, eq=False)
class ItemCatalog:
    """m x d matrix of unit-norm item embeddings."""
    vectors: np.ndarray

    def __post_init__(self) -> None:
        vectors = np.array(self.vectors, dtype=float)
        if vectors.ndim != 2 or 0 in vectors.shape:
            raise ContractViolation("catalog must be a non-empty m x d matrix")
        if not np.all(np.isfinite(vectors)):
            raise ContractViolation("catalog has non-finite entries")
        norms = np.linalg.norm(vectors, axis=1)
        bad = np.flatnonzero(np.abs(norms - 1) > NORM_TOL)
        if bad.size:
            raise ContractViolation(
                f"catalog row {bad[0]} has norm {norms[bad[0]]}, not 1"
            )
        vectors.setflags(write=False)
        object.__setattr__(self, "vectors", vectors)

    @property
    def count(self) -> int:
        """Number of items (m)."""
        return int(self.vectors.shape[0])

    @property
    def dim(self) -> int:
        """Embedding dimension (d)."""
        return int(self.vectors.shape[1])

    @classmethod
    def normalized(cls, rows: t.Any) -> "ItemCatalog":
        """Create catalog from rows scaled to unit norm."""
        rows = np.asarray(rows, dtype=float)
        norms = np.linalg.norm(rows, axis=-1, keepdims=True)
        if np.any(norms == 0):
            raise ContractViolation("can't normalize zero row")
        return cls(rows / norms)


@dataclasses.dataclass(frozen=True)
class SessionRecord:
    """One return of the user: arrival time and the items shown."""
    t: float
    items: t.Tuple[int, ...]

    def __post_init__(self) -> None:
        time = float(self.t)
        if not (np.isfinite(time) and time >= 0):
            raise ContractViolation(f"invalid session time: {self.t}")
        items = tuple(int(i) for i in self.items)
        if not items:
            raise ContractViolation(f"empty session at t={time}")
        if min(items) < 0:
            raise ContractViolation(f"negative item index at t={time}")
        object.__setattr__(self, "t", time)
        object.__setattr__(self, "items", items)


@dataclasses.dataclass(frozen=True)
class EpochTrace:
    """Sessions observed over [0, horizon], one likelihood sample."""
    sessions: t.Tuple[SessionRecord, ...]
    horizon: float

    def __post_init__(self) -> None:
        sessions = tuple(self.sessions)
        horizon = float(self.horizon)
        if not (np.isfinite(horizon) and horizon >= 0):
            raise ContractViolation(f"invalid horizon: {self.horizon}")
        for prev, curr in zip(sessions, sessions[1:]):
            if curr.t <= prev.t:
                raise ContractViolation(
                    f"timestamps not strictly increasing: {prev.t}, {curr.t}"
                )
        if sessions and sessions[-1].t > horizon:
            raise ContractViolation(
                f"session at {sessions[-1].t} after horizon {horizon}"
            )
        object.__setattr__(self, "sessions", sessions)
        object.__setattr__(self, "horizon", horizon)

    def __len__(self) -> int:
        return len(self.sessions)

    @property
    def times(self) -> np.ndarray:
        """Arrival times as an array."""
        return np.array([s.t for s in self.sessions], dtype=float)

    @classmethod
    def ending_at_last(cls,
                       sessions: t.Sequence[SessionRecord],
                       ) -> "EpochTrace":
        """Create trace censored at its last arrival."""
        return cls(tuple(sessions), sessions[-1].t if sessions else 0.0)


@dataclasses.dataclass(frozen=True)
class MarkedEvent:
    """Arrival time with its two infectivities."""
    t: float
    alpha1: float
    alpha2: float

    def __post_init__(self) -> None:
        for name in ("alpha1", "alpha2"):
            value = getattr(self, name)
            if not 0 <= value <= 0.5:
                raise ContractViolation(f"{name} outside [0, 0.5]: {value}")


@dataclasses.dataclass(frozen=True, eq=False)
class Gradient:
    """Gradient of the log-likelihood with respect to ModelParams."""
    mu: float
    beta1: float
    beta2: float
    u1: np.ndarray
    u2: np.ndarray

    def as_array(self) -> np.ndarray:
        """Return flat (mu, beta1, beta2, u1..., u2...) array."""
        return np.concatenate([[self.mu, self.beta1, self.beta2],
                               self.u1, self.u2])


def link(x: Scalar) -> Scalar:
    """Map a dot product in [-1, 1] to an infectivity in [0, 0.5].

    Inputs within LINK_TOL of the interval are clamped.
    """
    values = np.asarray(x, dtype=float)
    if not np.all(np.abs(values) <= 1 + LINK_TOL):
        raise ContractViolation(f"link input outside [-1, 1]: {x}")
    result = (np.clip(values, -1.0, 1.0) + 1.0) * LINK_SLOPE
    return float(result) if result.ndim == 0 else result


def session_vector(session: SessionRecord,
                   catalog: ItemCatalog,
                   ) -> np.ndarray:
    """Return the mean embedding of the session's items."""
    if not session.items:
        raise ContractViolation("empty session")
    indices = np.asarray(session.items)
    if indices.max() >= catalog.count:
        raise ContractViolation(
            f"item {indices.max()} not in catalog of {catalog.count} items"
        )
    return t.cast(np.ndarray, catalog.vectors[indices].mean(axis=0))


def infectivity(v_s: np.ndarray, u: np.ndarray) -> float:
    """Return link(v_s . u)."""
    check_dim("embedding", len(v_s), len(u))
    return t.cast(float, link(float(np.dot(v_s, u))))


def branching_ratio(v_s: np.ndarray, params: ModelParams) -> float:
    """Expected number of returns triggered by a session (<= 1)."""
    return infectivity(v_s, params.u1) + infectivity(v_s, params.u2)


def marks(epoch: EpochTrace,
          catalog: ItemCatalog,
          params: ModelParams,
          ) -> t.Tuple[np.ndarray, np.ndarray]:
    """Return infectivities (alpha1, alpha2) of every session of epoch."""
    check_dim("catalog", params.dim, catalog.dim)
    data = epoch_data(epoch, catalog)
    return (t.cast(np.ndarray, link(data.vectors @ params.u1)),
            t.cast(np.ndarray, link(data.vectors @ params.u2)))


def marked_events(epoch: EpochTrace,
                  catalog: ItemCatalog,
                  params: ModelParams,
                  ) -> t.List[MarkedEvent]:
    """Return epoch as a list of MarkedEvents."""
    alpha1, alpha2 = marks(epoch, catalog, params)
    return [
        MarkedEvent(s.t, float(a1), float(a2))
        for s, a1, a2 in zip(epoch.sessions, alpha1, alpha2)
    ]


def intensity(time: float,
              history: t.Iterable[MarkedEvent],
              params: ModelParams,
              ) -> float:
    """Return the conditional return rate at time given earlier events."""
    rate = params.mu
    for event in history:
        if event.t >= time:
            raise ContractViolation(
                f"history event at {event.t} not before {time}"
            )
        lag = time - event.t
        rate += event.alpha1 * params.beta1 * np.exp(-params.beta1 * lag)
        rate += event.alpha2 * params.beta2 * np.exp(-params.beta2 * lag)
    return float(rate)


def compensator(horizon: float,
                history: t.Iterable[MarkedEvent],
                params: ModelParams,
                ) -> float:
    """Return the integral of the intensity over [0, horizon]."""
    total = params.mu * horizon
    for event in history:
        if event.t > horizon:
            raise ContractViolation(
                f"history event at {event.t} after horizon {horizon}"
            )
        remaining = horizon - event.t
        total -= event.alpha1 * np.expm1(-params.beta1 * remaining)
        total -= event.alpha2 * np.expm1(-params.beta2 * remaining)
    return float(total)


@dataclasses.dataclass(frozen=True, eq=False)
class EpochData:
    """Epoch with session vectors precomputed."""
    times: np.ndarray
    vectors: np.ndarray
    horizon: float

    @property
    def count(self) -> int:
        """Number of sessions."""
        return int(self.times.size)


def epoch_data(epoch: EpochTrace, catalog: ItemCatalog) -> EpochData:
    """Precompute times and session vectors of epoch."""
    if epoch.sessions:
        vectors = np.stack([session_vector(s, catalog)
                            for s in epoch.sessions])
    else:
        vectors = np.zeros((0, catalog.dim))
    return EpochData(epoch.times, vectors, epoch.horizon)


def evaluate(data: EpochData,
             params: ModelParams,
             with_gradient: bool = True,
             ) -> t.Tuple[float, t.Optional[Gradient]]:
    """Return log-likelihood of data (and its gradient).

    Runs in O(k) per kernel component using the exponential-kernel
    recursions in dualhawkes.kernels.
    """
    check_dim("catalog", params.dim, data.vectors.shape[1])
    times = data.times
    if np.any(np.diff(times) <= 0):
        raise ContractViolation("event times must be strictly increasing")
    if data.count and times[-1] > data.horizon:
        raise ContractViolation("event after horizon")

    remaining = data.horizon - times
    rates = np.full(data.count, params.mu)
    value = -params.mu * data.horizon
    components = []
    for beta, u in ((params.beta1, params.u1), (params.beta2, params.u2)):
        alpha = t.cast(np.ndarray, link(data.vectors @ u))
        excitation, lagged = kernels.forward(times, alpha, beta)
        tail = np.exp(-beta * remaining)
        rates += beta * excitation
        value += float(np.sum(alpha * np.expm1(-beta * remaining)))
        components.append((beta, alpha, excitation, lagged, tail))
    value += float(np.sum(np.log(rates)))

    if not with_gradient:
        return value, None

    inverse = 1.0 / rates
    partials = []
    for beta, alpha, excitation, lagged, tail in components:
        d_beta = float(np.sum((excitation - beta * lagged) * inverse)
                       - np.sum(alpha * remaining * tail))
        d_alpha = (beta * kernels.backward(times, inverse, beta)
                   + np.expm1(-beta * remaining))
        d_u = LINK_SLOPE * (data.vectors.T @ d_alpha)
        partials.append((d_beta, d_u))

    gradient = Gradient(
        mu=float(np.sum(inverse) - data.horizon),
        beta1=partials[0][0],
        beta2=partials[1][0],
        u1=partials[0][1],
        u2=partials[1][1],
    )
    return value, gradient


def log_likelihood(epoch: EpochTrace,
                   catalog: ItemCatalog,
                   params: ModelParams,
                   ) -> float:
    """Return the log-likelihood of epoch under params."""
    check_dim("catalog", params.dim, catalog.dim)
    value, _ = evaluate(epoch_data(epoch, catalog), params,
                        with_gradient=False)
    return value


def log_likelihood_gradient(epoch: EpochTrace,
                            catalog: ItemCatalog,
                            params: ModelParams,
                            ) -> Gradient:
    """Return the analytic gradient of log_likelihood."""
    check_dim("catalog", params.dim, catalog.dim)
    _, gradient = evaluate(epoch_data(epoch, catalog), params)
    assert gradient is not None
    return gradient
