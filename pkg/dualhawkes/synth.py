"""Synthetic user and item embedding scenarios."""

import dataclasses
import typing as t

import numpy as np
from scipy import linalg

from .exceptions import ContractViolation, InvalidInput
from .model import ItemCatalog, ModelParams

SCENARIOS = ("orthonormal", "dissimilarity", "inventory")

# Dissimilarity between u1 and u2 baked into the inventory scenario.
INVENTORY_DISSIMILARITY = 0.2

DEGENERATE_NORM = 1e-12


@dataclasses.dataclass(frozen=True)
class ScenarioConfig:
    """Which synthetic scenario to build, and its size."""
    d: int = 10
    m: int = 1000
    noise_var: t.Optional[float] = None
    kind: str = "orthonormal"
    s: float = 0.0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in SCENARIOS:
            raise InvalidInput(
                f"unknown scenario {self.kind!r} "
                f"(choose from {', '.join(SCENARIOS)})"
            )
        if self.d < 2:
            raise InvalidInput("scenarios need d >= 2")
        if self.m < 1:
            raise InvalidInput("scenarios need m >= 1")
        if self.variance <= 0:
            raise InvalidInput("noise_var must be positive")
        low = -1.0 if self.kind == "dissimilarity" else 0.0
        if self.kind != "orthonormal" and not low <= self.s <= 1:
            raise InvalidInput(f"s must be in [{low:g}, 1] for {self.kind}")

    @property
    def variance(self) -> float:
        """Per-dimension noise variance, 1/(10d) unless given."""
        if self.noise_var is None:
            return 1.0 / (10 * self.d)
        return self.noise_var


@dataclasses.dataclass(frozen=True)
class BaseRates:
    """Base rate and decay rates of the ground-truth user."""
    mu: float = 0.3
    beta1: float = 4.0
    beta2: float = 1.0

    def __post_init__(self) -> None:
        for name in ("mu", "beta1", "beta2"):
            if not getattr(self, name) > 0:
                raise InvalidInput(f"{name} must be positive")


@dataclasses.dataclass(frozen=True, eq=False)
class Scenario:
    """Ground-truth user, item catalog and the basis they came from."""
    params: ModelParams
    catalog: ItemCatalog
    basis: np.ndarray


def orthonormal_basis(d: int, rng: np.random.Generator) -> np.ndarray:
    """Return Q from the QR factorization of a standard normal d x d matrix.

    Signs are fixed so that R has a nonnegative diagonal.
    """
    if d < 1:
        raise ContractViolation(f"dimension must be positive: {d}")
    q, r = linalg.qr(rng.standard_normal((d, d)))
    signs = np.where(np.diag(r) < 0, -1.0, 1.0)
    return t.cast(np.ndarray, q * signs)


def _top_rows(q: np.ndarray) -> t.Tuple[np.ndarray, np.ndarray]:
    if q.ndim != 2 or q.shape[0] < 2:
        raise ContractViolation("need at least two orthonormal rows")
    return q[0].copy(), q[1].copy()


def base_user_pair(q: np.ndarray) -> t.Tuple[np.ndarray, np.ndarray]:
    """Return (u1, u2) = (Q_1, Q_2)."""
    return _top_rows(q)


def dissimilar_user_pair(q: np.ndarray,
                         s: float,
                         ) -> t.Tuple[np.ndarray, np.ndarray]:
    """Return u1 = normalize(-s Q_1 + Q_2) and u2 = Q_1.

    Positive s pushes moreishness away from utility; u1 . u2 equals
    -s / sqrt(1 + s^2).
    """
    first, second = _top_rows(q)
    u1 = -s * first + second
    return u1 / np.linalg.norm(u1), first


def _perturbed(anchors: np.ndarray,
               noise_var: float,
               rng: np.random.Generator,
               ) -> ItemCatalog:
    """Add Gaussian noise to anchors and normalize, resampling zero rows."""
    scale = np.sqrt(noise_var)
    rows = anchors + rng.normal(0.0, scale, size=anchors.shape)
    while True:
        degenerate = np.linalg.norm(rows, axis=1) < DEGENERATE_NORM
        if not degenerate.any():
            break
        rows[degenerate] = anchors[degenerate] + rng.normal(
            0.0, scale, size=(int(degenerate.sum()), anchors.shape[1]),
        )
    return ItemCatalog.normalized(rows)


def random_item_catalog(q: np.ndarray,
                        m: int,
                        noise_var: float,
                        rng: np.random.Generator,
                        ) -> ItemCatalog:
    """Anchor m items at uniformly chosen rows of Q, then perturb."""
    rows = rng.integers(0, q.shape[0], size=m)
    return _perturbed(q[rows], noise_var, rng)


def inventory_catalog(u1: np.ndarray,
                      u2: np.ndarray,
                      s: float,
                      m: int,
                      noise_var: float,
                      rng: np.random.Generator,
                      ) -> ItemCatalog:
    """Anchor each item at u2 with probability s, otherwise at u1."""
    if not 0 <= s <= 1:
        raise ContractViolation(f"inventory fraction outside [0, 1]: {s}")
    heads = rng.random(m) < s
    anchors = np.where(heads[:, None], u2[None, :], u1[None, :])
    return _perturbed(anchors, noise_var, rng)


def build_scenario(config: ScenarioConfig,
                   mu: float = 0.3,
                   beta1: float = 4.0,
                   beta2: float = 1.0,
                   ) -> Scenario:
    """Build the ground-truth user and catalog of a scenario."""
    rng = np.random.default_rng(config.rng_seed)
    q = orthonormal_basis(config.d, rng)
    if config.kind == "orthonormal":
        u1, u2 = base_user_pair(q)
        catalog = random_item_catalog(q, config.m, config.variance, rng)
    elif config.kind == "dissimilarity":
        u1, u2 = dissimilar_user_pair(q, config.s)
        catalog = random_item_catalog(q, config.m, config.variance, rng)
    else:
        u1, u2 = dissimilar_user_pair(q, INVENTORY_DISSIMILARITY)
        catalog = inventory_catalog(u1, u2, config.s, config.m,
                                    config.variance, rng)
    return Scenario(ModelParams(mu, beta1, beta2, u1, u2), catalog, q)
