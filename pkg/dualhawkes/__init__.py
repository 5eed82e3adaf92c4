"""Disentangle moreishness and utility from user return times."""

__version__ = "0.1.0"

# pylint: disable=wrong-import-position
from .diagnostics import (
    GoodnessOfFit, goodness_of_fit, intensity_path, rescaled_intervals,
)
from .estimate import (
    FitConfig, FitReport, fit, mean_log_likelihood, parameter_errors,
    relabel_components, relative_error,
)
from .exceptions import (
    ContractViolation, DimensionMismatch, HawkesError, IdentifiabilityWarning,
    InvalidInput, MalformedFile, MissingFile, NonFiniteError,
    UnknownExperiment,
)
from .experiments import EXPERIMENTS, ExperimentSpec, run_experiment
from .model import (
    EpochTrace, ItemCatalog, MarkedEvent, ModelParams, SessionRecord,
    branching_ratio, compensator, infectivity, intensity, link,
    log_likelihood, log_likelihood_gradient, marks, session_vector,
)
from .rank import (
    RankResult, compare_strategies, engagement_direction,
    long_run_average_utility, rank_items, set_utility, softmax_rank,
)
from .simulate import (
    SimConfig, simulate_epoch, simulate_epochs, split_sequence,
)
from .synth import (
    BaseRates, Scenario, ScenarioConfig, base_user_pair, build_scenario,
    dissimilar_user_pair, inventory_catalog, orthonormal_basis,
    random_item_catalog,
)

__all__ = [
    "BaseRates",
    "ContractViolation",
    "DimensionMismatch",
    "EXPERIMENTS",
    "EpochTrace",
    "ExperimentSpec",
    "FitConfig",
    "FitReport",
    "GoodnessOfFit",
    "HawkesError",
    "IdentifiabilityWarning",
    "InvalidInput",
    "ItemCatalog",
    "MalformedFile",
    "MarkedEvent",
    "MissingFile",
    "ModelParams",
    "NonFiniteError",
    "RankResult",
    "Scenario",
    "ScenarioConfig",
    "SessionRecord",
    "SimConfig",
    "UnknownExperiment",
    "base_user_pair",
    "branching_ratio",
    "build_scenario",
    "compare_strategies",
    "compensator",
    "dissimilar_user_pair",
    "engagement_direction",
    "fit",
    "goodness_of_fit",
    "infectivity",
    "intensity",
    "intensity_path",
    "inventory_catalog",
    "link",
    "log_likelihood",
    "log_likelihood_gradient",
    "long_run_average_utility",
    "marks",
    "mean_log_likelihood",
    "orthonormal_basis",
    "parameter_errors",
    "random_item_catalog",
    "rank_items",
    "relabel_components",
    "relative_error",
    "rescaled_intervals",
    "run_experiment",
    "session_vector",
    "set_utility",
    "simulate_epoch",
    "simulate_epochs",
    "softmax_rank",
    "split_sequence",
]
