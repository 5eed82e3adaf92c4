"""Simulate user return traces by Ogata thinning."""

import dataclasses
import logging
import math
import typing as t

import numpy as np

from .exceptions import ContractViolation, InvalidInput
from .model import (
    EpochTrace, ItemCatalog, ModelParams, SessionRecord, infectivity,
    session_vector,
)

logger = logging.getLogger(__name__)

Seed = t.Union[None, int, np.random.SeedSequence]


@dataclasses.dataclass(frozen=True)
class SimConfig:
    """Session counts and session-length distribution of simulated epochs."""
    sessions_per_epoch: int = 1000
    session_len_p: float = 0.8
    session_len_min: int = 1
    session_len_max: int = 6
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.sessions_per_epoch < 1:
            raise InvalidInput("sessions_per_epoch must be at least 1")
        if not 0 < self.session_len_p < 1:
            raise InvalidInput("session_len_p must be in (0, 1)")
        if not 1 <= self.session_len_min <= self.session_len_max:
            raise InvalidInput(
                "session lengths must satisfy 1 <= min <= max"
            )


def epoch_seed(seed: Seed, index: int) -> np.random.SeedSequence:
    """Derive the seed of epoch `index` from a master seed.

    Equivalent to SeedSequence(seed).spawn(n)[index].
    """
    if isinstance(seed, np.random.SeedSequence):
        return np.random.SeedSequence(
            seed.entropy, spawn_key=seed.spawn_key + (index,),
        )
    return np.random.SeedSequence(seed, spawn_key=(index,))


def draw_session_length(rng: np.random.Generator,
                        p: float = 0.8,
                        low: int = 1,
                        high: int = 6,
                        ) -> int:
    """Draw number of trials up to the first success, clipped to [low, high].

    Mass above high is assigned to high.
    """
    return int(min(max(rng.geometric(p), low), high))


def draw_session_items(length: int,
                       catalog: ItemCatalog,
                       rng: np.random.Generator,
                       ) -> t.Tuple[int, ...]:
    """Draw item indices uniformly with replacement."""
    if length < 1:
        raise ContractViolation(f"session length must be positive: {length}")
    if catalog.count < 1:
        raise ContractViolation("empty catalog")
    return tuple(int(i) for i in rng.integers(0, catalog.count, size=length))


def simulate_epoch(params: ModelParams,
                   catalog: ItemCatalog,
                   config: SimConfig = SimConfig(),
                   seed: Seed = None,
                   ) -> EpochTrace:
    """Simulate one epoch of config.sessions_per_epoch sessions.

    The seed (config.rng_seed if None) is split into one stream for
    arrival times and one for session content, so the items of the n-th
    session don't depend on when it arrives. The epoch is censored at its
    last arrival.
    """
    if params.dim != catalog.dim:
        raise ContractViolation("catalog and params dimensions differ")
    sequence = np.random.SeedSequence(config.rng_seed) if seed is None \
        else seed if isinstance(seed, np.random.SeedSequence) \
        else np.random.SeedSequence(seed)
    arrivals, content = (np.random.default_rng(s) for s in sequence.spawn(2))

    sessions: t.List[SessionRecord] = []
    time = 0.0
    last = 0.0
    excess1 = 0.0  # excess intensities just after the last session
    excess2 = 0.0
    rejected = 0
    while len(sessions) < config.sessions_per_epoch:
        bound = params.mu + excess1 + excess2
        time += arrivals.exponential(1.0 / bound)
        decayed1 = excess1 * math.exp(-params.beta1 * (time - last))
        decayed2 = excess2 * math.exp(-params.beta2 * (time - last))
        rate = params.mu + decayed1 + decayed2
        assert rate <= bound * (1 + 1e-12), "thinning bound violated"
        if arrivals.random() * bound > rate or (sessions and time <= last):
            rejected += 1
            continue

        length = draw_session_length(
            content,
            config.session_len_p,
            config.session_len_min,
            config.session_len_max,
        )
        session = SessionRecord(time, draw_session_items(length, catalog,
                                                         content))
        v_s = session_vector(session, catalog)
        excess1 = decayed1 + infectivity(v_s, params.u1) * params.beta1
        excess2 = decayed2 + infectivity(v_s, params.u2) * params.beta2
        last = time
        sessions.append(session)

    logger.debug("simulated %d sessions (%d candidates rejected)",
                 len(sessions), rejected)
    return EpochTrace.ending_at_last(sessions)


def simulate_epochs(params: ModelParams,
                    catalog: ItemCatalog,
                    config: SimConfig,
                    count: int,
                    seed: Seed = None,
                    ) -> t.List[EpochTrace]:
    """Simulate independent epochs with seeds derived from one master seed."""
    master = config.rng_seed if seed is None else seed
    return [
        simulate_epoch(params, catalog, config, epoch_seed(master, i))
        for i in range(count)
    ]


def split_sequence(sessions: t.Sequence[SessionRecord],
                   sessions_per_epoch: int,
                   keep_partial: bool = False,
                   ) -> t.List[EpochTrace]:
    """Cut one long sequence of sessions into consecutive epochs.

    Times in each epoch are measured from the last arrival of the previous
    epoch (from 0 for the first one).
    """
    if sessions_per_epoch < 1:
        raise ContractViolation("sessions_per_epoch must be at least 1")
    epochs = []
    origin = 0.0
    for start in range(0, len(sessions), sessions_per_epoch):
        chunk = sessions[start:start + sessions_per_epoch]
        if len(chunk) < sessions_per_epoch and not keep_partial:
            break
        epochs.append(EpochTrace.ending_at_last([
            SessionRecord(s.t - origin, s.items) for s in chunk
        ]))
        origin = chunk[-1].t
    return epochs
