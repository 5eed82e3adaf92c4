"""Parameter recovery and utility experiments.

Each experiment sweeps one parameter over a grid, runs independent
replicates at every grid point and writes one CSV row per grid point.
Replicate r uses the same seeds at every grid point.
"""

import concurrent.futures
import csv
import dataclasses
import logging
import pathlib
import typing as t

import numpy as np
from tqdm import tqdm

from .config import thread_limit
from .estimate import FitConfig, fit
from .exceptions import InvalidInput, UnknownExperiment
from .rank import EVALUATIONS, compare_strategies
from .simulate import SimConfig, simulate_epochs
from .synth import BaseRates, ScenarioConfig, build_scenario
from .traceio import fmt, write_json

logger = logging.getLogger(__name__)

EXPERIMENTS = (
    "error-vs-samples",
    "error-vs-beta-gap",
    "utility-vs-dissimilarity",
    "utility-vs-inventory",
)

DESK_GRIDS = {
    "error-vs-samples": (4.0, 16.0, 64.0),
    "error-vs-beta-gap": (0.0, 1.0, 2.0, 3.0),
    "utility-vs-dissimilarity": (-0.5, -0.2, 0.0, 0.2, 0.5, 1.0),
    "utility-vs-inventory": (0.1, 0.25, 0.5, 0.75, 1.0),
}

FULL_GRIDS = {
    "error-vs-samples": (4.0, 16.0, 64.0, 256.0, 1024.0),
    "error-vs-beta-gap": (0.0, 1.0, 2.0, 3.0, 4.0),
    "utility-vs-dissimilarity": (-1.0, -0.5, -0.2, 0.0, 0.2, 0.5, 1.0),
    "utility-vs-inventory": (0.0, 0.1, 0.25, 0.5, 0.75, 1.0),
}

DESK_EPOCHS = 64
FULL_EPOCHS = 1024

# Error columns and the parameter_errors keys they come from.
ERROR_COLUMNS = (
    ("beta_1_err", "beta1"),
    ("beta_2_err", "beta2"),
    ("u_1_err", "u1"),
    ("u_2_err", "u2"),
    ("mu_err", "mu"),
)
UTILITY_COLUMNS = (
    "utility_1", "utility_1_std", "utility_2", "utility_2_std",
)

# First header cell. The gap header is quoted in the output.
SWEEP_HEADERS = {
    "error-vs-samples": "samples",
    "error-vs-beta-gap": '"beta_1 - beta_2"',
    "utility-vs-dissimilarity": "dissimilarity",
    "utility-vs-inventory": "inventory",
}

ERROR_BARS = "sample standard deviation (ddof=1) over replicates"

Row = t.Tuple[float, t.Dict[str, float]]


@dataclasses.dataclass(frozen=True)
class ExperimentSpec:  # pylint: disable=too-many-instance-attributes
    """One experiment: what to sweep, how often, and how to fit.

    grid and epochs default to the desk-scale (or, with full_scale, the
    full-scale) values of the experiment.
    """
    name: str = "error-vs-samples"
    grid: t.Optional[t.Tuple[float, ...]] = None
    replicates: int = 5
    epochs: t.Optional[int] = None
    top_k: int = 10
    evaluation: str = "estimated"
    seed: int = 0
    full_scale: bool = False
    output_dir: pathlib.Path = pathlib.Path("results")
    rates: BaseRates = dataclasses.field(default_factory=BaseRates)
    scenario: ScenarioConfig = dataclasses.field(
        default_factory=ScenarioConfig
    )
    simulation: SimConfig = dataclasses.field(default_factory=SimConfig)
    fitting: FitConfig = dataclasses.field(default_factory=FitConfig)

    def __post_init__(self) -> None:
        if self.name not in EXPERIMENTS:
            raise UnknownExperiment(self.name, EXPERIMENTS)
        if self.grid is not None and not self.grid:
            raise InvalidInput("grid must not be empty")
        if self.replicates < 1:
            raise InvalidInput("replicates must be at least 1")
        if self.epochs is not None and self.epochs < 1:
            raise InvalidInput("epochs must be at least 1")
        if self.top_k < 1:
            raise InvalidInput("top_k must be at least 1")
        if self.evaluation not in EVALUATIONS:
            raise InvalidInput(
                f"evaluation must be one of {', '.join(EVALUATIONS)}"
            )
        if self.name == "error-vs-samples" \
                and any(x < 1 or x != int(x) for x in self.sweep):
            raise InvalidInput("sample counts must be positive integers")
        if self.name == "error-vs-beta-gap" \
                and any(x < 0 for x in self.sweep):
            raise InvalidInput("decay rate gaps must be nonnegative")
        for value in self.sweep:
            self.scenario_for(value)

    @property
    def sweep(self) -> t.Tuple[float, ...]:
        """Grid values to run."""
        if self.grid is not None:
            return self.grid
        grids = FULL_GRIDS if self.full_scale else DESK_GRIDS
        return grids[self.name]

    @property
    def epoch_count(self) -> int:
        """Epochs per fit (the swept value in error-vs-samples)."""
        if self.epochs is not None:
            return self.epochs
        return FULL_EPOCHS if self.full_scale else DESK_EPOCHS

    @property
    def csv_name(self) -> str:
        """Output file name."""
        return self.name.replace("-", "_") + ".csv"

    def scenario_for(self, value: float, seed: int = 0) -> ScenarioConfig:
        """Return the scenario of a grid point."""
        kind = {
            "utility-vs-dissimilarity": "dissimilarity",
            "utility-vs-inventory": "inventory",
        }.get(self.name, "orthonormal")
        s = value if self.is_utility() else 0.0
        return dataclasses.replace(self.scenario, kind=kind, s=s,
                                   rng_seed=seed)

    def is_utility(self) -> bool:
        """Check if rows hold utilities instead of errors."""
        return self.name.startswith("utility")


class ReplicateSeeds(t.NamedTuple):
    """Seeds of one replicate."""
    scenario: int
    simulation: int
    fitting: int


def replicate_seeds(seed: int, replicate: int) -> ReplicateSeeds:
    """Derive scenario, simulation and fit seeds of a replicate."""
    sequence = np.random.SeedSequence(seed, spawn_key=(replicate,))
    return ReplicateSeeds(*(int(s.generate_state(1)[0])
                            for s in sequence.spawn(3)))


@dataclasses.dataclass(frozen=True)
class Job:
    """One (grid point, replicate) run."""
    spec: ExperimentSpec
    value: float
    replicate: int


def run_job(job: Job) -> t.Dict[str, float]:
    """Build scenario, simulate, fit and measure one replicate."""
    spec = job.spec
    seeds = replicate_seeds(spec.seed, job.replicate)
    rates = spec.rates
    scenario = spec.scenario_for(job.value, seeds.scenario)
    epochs = spec.epoch_count
    if spec.name == "error-vs-samples":
        epochs = int(job.value)
    elif spec.name == "error-vs-beta-gap":
        rates = dataclasses.replace(rates, beta1=rates.beta2 + job.value)

    truth = build_scenario(scenario, rates.mu, rates.beta1, rates.beta2)
    traces = simulate_epochs(truth.params, truth.catalog, spec.simulation,
                             epochs, seeds.simulation)
    config = dataclasses.replace(spec.fitting, init_seed=seeds.fitting,
                                 shuffle_seed=None)
    report = fit(traces, truth.catalog, config, truth=truth.params)
    logger.info("%s at %g, replicate %d: %d steps, flags %s", spec.name,
                job.value, job.replicate, report.steps_taken,
                sorted(report.flags))

    if spec.is_utility():
        engagement, ours = compare_strategies(
            truth.catalog, truth.params, report.params, spec.top_k,
            spec.evaluation,
        )
        return {"utility_1": engagement, "utility_2": ours}
    assert report.errors is not None
    return dict(report.errors)


def jobs(spec: ExperimentSpec) -> t.List[Job]:
    """Return jobs in (grid point, replicate) order."""
    return [Job(spec, value, r)
            for value in spec.sweep for r in range(spec.replicates)]


def std(values: t.Sequence[float]) -> float:
    """Sample standard deviation (0 for a single value)."""
    return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0


def aggregate(spec: ExperimentSpec,
              results: t.Sequence[t.Dict[str, float]],
              ) -> t.List[Row]:
    """Reduce per-replicate results (in job order) to one row per value.

    Errors are medians over replicates; utilities are means with standard
    deviations.
    """
    rows = []
    for index, value in enumerate(spec.sweep):
        chunk = results[index * spec.replicates:
                        (index + 1) * spec.replicates]
        if spec.is_utility():
            engagement = [r["utility_1"] for r in chunk]
            ours = [r["utility_2"] for r in chunk]
            cells = {
                "utility_1": float(np.mean(engagement)),
                "utility_1_std": std(engagement),
                "utility_2": float(np.mean(ours)),
                "utility_2_std": std(ours),
            }
        else:
            cells = {
                column: float(np.median([r[key] for r in chunk]))
                for column, key in ERROR_COLUMNS
            }
        rows.append((value, cells))
    return rows


def columns(spec: ExperimentSpec) -> t.Tuple[str, ...]:
    """Return value columns of the experiment's CSV."""
    if spec.is_utility():
        return UTILITY_COLUMNS
    return tuple(column for column, _ in ERROR_COLUMNS)


def write_csv(path: pathlib.Path,
              spec: ExperimentSpec,
              rows: t.Sequence[Row],
              ) -> None:
    """Write rows under the experiment's header."""
    names = columns(spec)
    with open(path, "w", newline="", encoding="utf-8") as file:
        file.write(",".join((SWEEP_HEADERS[spec.name],) + names) + "\n")
        writer = csv.writer(file, lineterminator="\n")
        for value, cells in rows:
            first = str(int(value)) if spec.name == "error-vs-samples" \
                else format(value, "g")
            writer.writerow([first] + [fmt(cells[n]) for n in names])


def manifest(spec: ExperimentSpec) -> t.Dict[str, t.Any]:
    """Return provenance record of an experiment."""
    from . import __version__  # pylint: disable=import-outside-toplevel

    settings = dataclasses.asdict(spec)
    settings["output_dir"] = str(spec.output_dir)
    settings["grid"] = list(spec.sweep)
    settings["epochs"] = spec.epoch_count
    return {
        "experiment": spec.name,
        "version": __version__,
        "csv": spec.csv_name,
        "spec": settings,
        "replicate_seeds": [replicate_seeds(spec.seed, r)._asdict()
                            for r in range(spec.replicates)],
        "error_bars": ERROR_BARS,
        "aggregate": "mean" if spec.is_utility() else "median",
    }


def run_experiment(spec: ExperimentSpec,
                   progress: bool = False,
                   ) -> t.List[Row]:
    """Run every job, then write the CSV and manifest.json to output_dir.

    Jobs run in a process pool capped by HAWKES_THREADS. Results are joined
    in job order, so the output doesn't depend on scheduling.
    """
    todo = jobs(spec)
    workers = min(thread_limit(), len(todo))
    logger.info("running %s: %d jobs on %d workers", spec.name, len(todo),
                workers)
    bar = tqdm(total=len(todo), desc=spec.name, disable=not progress)
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(workers) as executor:
            results = []
            for result in executor.map(run_job, todo):
                results.append(result)
                bar.update()
    else:
        results = []
        for job in todo:
            results.append(run_job(job))
            bar.update()
    bar.close()

    rows = aggregate(spec, results)
    spec.output_dir.mkdir(parents=True, exist_ok=True)
    write_csv(spec.output_dir / spec.csv_name, spec, rows)
    write_json(spec.output_dir / "manifest.json", manifest(spec))
    return rows
