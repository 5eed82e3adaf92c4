"""dualhawkes command-line verbs."""

import configparser
import dataclasses
import pathlib
import typing as t

import numpy as np

from . import estimate, parsers
from .cli import EXIT_OK, Command, configure_logging
from .config import build, load
from .diagnostics import goodness_of_fit
from .exceptions import InvalidInput, UnknownExperiment
from .experiments import EXPERIMENTS, ExperimentSpec, run_experiment
from .model import EpochTrace, ItemCatalog, ModelParams
from .options import Option
from .rank import (
    engagement_direction, rank_items, set_utility, softmax_rank,
)
from .simulate import SimConfig, simulate_epochs, split_sequence
from .synth import BaseRates, ScenarioConfig, build_scenario
from .traceio import (
    fmt, read_catalog, read_params, read_report, read_trace, write_catalog,
    write_json, write_params, write_report, write_trace,
)
from .usage import usage

Kind = t.Literal["orthonormal", "dissimilarity", "inventory"]
Evaluation = t.Literal["estimated", "true"]

TRACES = Option(
    "traces", ["traces"],
    parser=parsers.Repeat(parsers.One(pathlib.Path, "path")),
    description="Epoch trace files.",
)


def _config(path: t.Optional[pathlib.Path],
            ) -> t.Optional[configparser.ConfigParser]:
    return load(path) if path is not None else None


def _read_traces(paths: t.Sequence[pathlib.Path],
                 split: t.Optional[int] = None,
                 ) -> t.List[EpochTrace]:
    """Read trace files; with split, cut each file into epochs."""
    if not paths:
        raise InvalidInput("no trace files given")
    traces = [read_trace(p)[0] for p in paths]
    if split is None:
        return traces
    epochs = []
    for trace in traces:
        epochs.extend(split_sequence(trace.sessions, split))
    if not epochs:
        raise InvalidInput(f"traces hold fewer than {split} sessions")
    return epochs


def _matching(params: ModelParams,
              path: pathlib.Path,
              items: ItemCatalog,
              ) -> ModelParams:
    """Reject a parameter file whose dimension differs from the catalog."""
    if params.dim != items.dim:
        raise InvalidInput(f"{path}: {params.dim}-dimensional parameters "
                           f"don't match the {items.dim}-dimensional catalog")
    return params


def _in_catalog(epochs: t.Sequence[EpochTrace],
                items: ItemCatalog,
                ) -> t.Sequence[EpochTrace]:
    """Reject traces that show items missing from the catalog."""
    for epoch in epochs:
        for session in epoch.sessions:
            if max(session.items) >= items.count:
                raise InvalidInput(
                    f"session at t={session.t} shows item "
                    f"{max(session.items)} of a {items.count}-item catalog"
                )
    return epochs


def simulate(*,
             out: pathlib.Path = pathlib.Path("traces"),
             epochs: int = 1,
             sessions: t.Optional[int] = None,
             seed: t.Optional[int] = None,
             scenario: t.Optional[Kind] = None,
             s: t.Optional[float] = None,
             d: t.Optional[int] = None,
             m: t.Optional[int] = None,
             mu: t.Optional[float] = None,
             beta1: t.Optional[float] = None,
             beta2: t.Optional[float] = None,
             config: t.Optional[pathlib.Path] = None,
             verbose: bool = False,
             ) -> int:
    """Simulate epochs of a synthetic user.

    Writes catalog.txt, truth.json, one epoch-NNNN.jsonl per epoch and
    manifest.json to the output directory.
    """
    configure_logging(verbose)
    if epochs < 1:
        raise InvalidInput("epochs must be at least 1")
    parser = _config(config)
    rates = build(BaseRates, parser, "model",
                  {"mu": mu, "beta1": beta1, "beta2": beta2})
    scenario_config = build(ScenarioConfig, parser, "scenario", {
        "kind": scenario, "s": s, "d": d, "m": m, "rng_seed": seed,
    })
    sim_config = build(SimConfig, parser, "simulate", {
        "sessions_per_epoch": sessions, "rng_seed": seed,
    })

    truth = build_scenario(scenario_config, rates.mu, rates.beta1,
                           rates.beta2)
    traces = simulate_epochs(truth.params, truth.catalog, sim_config, epochs)

    out.mkdir(parents=True, exist_ok=True)
    write_catalog(out / "catalog.txt", truth.catalog)
    write_params(out / "truth.json", truth.params)
    names = []
    for index, trace in enumerate(traces):
        name = f"epoch-{index:04d}.jsonl"
        write_trace(out / name, trace, index, sim_config.rng_seed)
        names.append(name)

    from . import __version__  # pylint: disable=import-outside-toplevel
    write_json(out / "manifest.json", {
        "version": __version__,
        "epochs": names,
        "model": dataclasses.asdict(rates),
        "scenario": dataclasses.asdict(scenario_config),
        "simulate": dataclasses.asdict(sim_config),
    })
    print(out)
    return EXIT_OK


def fit(traces: t.List[pathlib.Path],
        catalog: pathlib.Path,
        *,
        out: pathlib.Path = pathlib.Path("report.json"),
        truth: t.Optional[pathlib.Path] = None,
        steps: t.Optional[int] = None,
        seed: t.Optional[int] = None,
        batch_size: t.Optional[int] = None,
        learning_rate: t.Optional[float] = None,
        workers: t.Optional[int] = None,
        split: t.Optional[int] = None,
        config: t.Optional[pathlib.Path] = None,
        verbose: bool = False,
        ) -> int:
    """Fit model parameters to trace files and write a report."""
    configure_logging(verbose)
    fit_config = build(estimate.FitConfig, _config(config), "fit", {
        "max_steps": steps,
        "init_seed": seed,
        "batch_size": batch_size,
        "learning_rate": learning_rate,
        "workers": workers,
    })
    items = read_catalog(catalog)
    epochs = _in_catalog(_read_traces(traces, split), items)
    params = None
    if truth is not None:
        params = _matching(read_params(truth), truth, items)

    report = estimate.fit(epochs, items, fit_config, truth=params)
    write_report(out, report)

    summary = report.params
    print(f"mu={fmt(summary.mu)}")
    print(f"beta1={fmt(summary.beta1)}")
    print(f"beta2={fmt(summary.beta2)}")
    print(f"steps={report.steps_taken}")
    print(f"log_likelihood={fmt(report.final_log_likelihood)}")
    if report.flags:
        print(f"flags={','.join(sorted(report.flags))}")
    for name, error in sorted((report.errors or {}).items()):
        print(f"{name}_err={fmt(error)}")
    return EXIT_OK


def _direction_source(report: t.Optional[pathlib.Path],
                      truth: t.Optional[pathlib.Path],
                      ) -> t.Tuple[ModelParams, pathlib.Path]:
    if report is not None:
        return read_report(report).params, report
    if truth is not None:
        return read_params(truth), truth
    raise InvalidInput("rank needs --report or --truth")


def rank(catalog: pathlib.Path,
         *,
         report: t.Optional[pathlib.Path] = None,
         truth: t.Optional[pathlib.Path] = None,
         k: int = 10,
         engagement: bool = False,
         temperature: t.Optional[float] = None,
         seed: int = 0,
         ) -> int:
    """Print the top-k items for a user as rank,item,score CSV.

    Ranks by u2 of the report (or of the truth file without a report), or
    by u1 + u2 with --engagement. With --truth, also prints the utility of
    the selection.
    """
    items = read_catalog(catalog)
    params = _matching(*_direction_source(report, truth), items)
    if not 1 <= k <= items.count:
        raise InvalidInput(f"k must be in [1, {items.count}]: {k}")
    if temperature is not None and not temperature > 0:
        raise InvalidInput(f"temperature must be positive: {temperature}")
    direction = engagement_direction(params.u1, params.u2) if engagement \
        else params.u2
    if temperature is None:
        result = rank_items(items, direction, k)
    else:
        result = softmax_rank(items, direction, k, temperature,
                              np.random.default_rng(seed))

    print("rank,item,score")
    for position, (index, score) in enumerate(
            zip(result.indices, result.scores), start=1):
        print(f"{position},{index},{fmt(score)}")
    if truth is not None:
        true_u2 = _matching(read_params(truth), truth, items).u2
        utility = set_utility(result.indices, items, true_u2)
        print(f"utility={fmt(utility)}")
    return EXIT_OK


def check(traces: t.List[pathlib.Path],
          catalog: pathlib.Path,
          params: pathlib.Path,
          *,
          split: t.Optional[int] = None,
          ) -> int:
    """Test trace files against parameters by time rescaling.

    Prints the Kolmogorov-Smirnov statistic and p-value of the rescaled
    intervals against Exp(1).
    """
    items: ItemCatalog = read_catalog(catalog)
    epochs = _in_catalog(_read_traces(traces, split), items)
    truth = _matching(read_params(params), params, items)
    result = goodness_of_fit(epochs, items, truth)
    print(f"statistic={fmt(result.statistic)}")
    print(f"pvalue={fmt(result.pvalue)}")
    print(f"count={result.count}")
    return EXIT_OK


def _experiment_source(name: str,
                       config: t.Optional[pathlib.Path],
                       ) -> t.Tuple[t.Optional[str],
                                    t.Optional[configparser.ConfigParser]]:
    """Return (experiment name, config) for a name or an INI spec file."""
    if name in EXPERIMENTS:
        return name, _config(config)
    path = pathlib.Path(name)
    if not path.is_file():
        raise UnknownExperiment(name, EXPERIMENTS)
    parser = load(path)
    if not parser.has_option("experiment", "name"):
        raise InvalidInput(f"{path}: [experiment] has no name")
    return None, parser


def experiment(name: str,
               *,
               out: t.Optional[pathlib.Path] = None,
               grid: t.Optional[t.Tuple[float, ...]] = None,
               replicates: t.Optional[int] = None,
               epochs: t.Optional[int] = None,
               sessions: t.Optional[int] = None,
               steps: t.Optional[int] = None,
               seed: t.Optional[int] = None,
               top_k: t.Optional[int] = None,
               evaluation: t.Optional[Evaluation] = None,
               full_scale: bool = False,
               progress: bool = False,
               config: t.Optional[pathlib.Path] = None,
               verbose: bool = False,
               ) -> int:
    """Run an experiment by name or from an INI spec file.

    Writes <experiment>.csv and manifest.json to the output directory.
    """
    configure_logging(verbose)
    chosen, parser = _experiment_source(name, config)
    spec = build(ExperimentSpec, parser, "experiment", {
        "name": chosen,
        "grid": grid,
        "replicates": replicates,
        "epochs": epochs,
        "seed": seed,
        "top_k": top_k,
        "evaluation": evaluation,
        "full_scale": True if full_scale else None,
        "output_dir": out,
        "rates": build(BaseRates, parser, "model"),
        "scenario": build(ScenarioConfig, parser, "scenario"),
        "simulation": build(SimConfig, parser, "simulate",
                            {"sessions_per_epoch": sessions}),
        "fitting": build(estimate.FitConfig, parser, "fit",
                         {"max_steps": steps}),
    })
    run_experiment(spec, progress=progress)
    print(spec.output_dir / spec.csv_name)
    return EXIT_OK


DESCRIPTIONS = {
    "out": "Output file or directory.",
    "epochs": "Number of epochs.",
    "sessions": "Sessions per epoch.",
    "seed": "Random seed.",
    "scenario": "Synthetic scenario.",
    "s": "Dissimilarity or inventory fraction of the scenario.",
    "d": "Embedding dimension.",
    "m": "Number of items.",
    "mu": "Base return rate.",
    "beta1": "Decay rate of the moreishness component.",
    "beta2": "Decay rate of the utility component.",
    "config": "INI configuration file.",
    "verbose": "Log progress to stderr.",
    "catalog": "Item catalog file.",
    "truth": "True parameter file.",
    "steps": "Maximum number of optimizer steps.",
    "batch_size": "Epochs per minibatch.",
    "learning_rate": "Adam step size.",
    "workers": "Threads for per-epoch gradients.",
    "split": "Cut each trace into epochs of this many sessions.",
    "report": "Fit report file.",
    "k": "Number of items to select.",
    "engagement": "Rank by u1 + u2 instead of u2.",
    "temperature": "Sample by softmax at this temperature.",
    "params": "Parameter file (truth or fit report).",
    "grid": "Comma-separated grid values.",
    "replicates": "Runs per grid point.",
    "top_k": "Items selected for utility evaluation.",
    "evaluation": "Direction for the engagement baseline.",
    "full_scale": "Use the large grids and 1024 epochs per fit.",
    "progress": "Show a progress bar.",
}


def build_cli() -> Command:
    """Return the dualhawkes command tree."""
    def dualhawkes(version: bool = False) -> int:
        """Disentangle moreishness and utility from user return times."""
        from . import __version__  # pylint: disable=import-outside-toplevel
        print(__version__ if version else usage(cli))
        return EXIT_OK

    def command(callback: t.Callable[..., int],
                *params: Option) -> Command:
        return Command(callback, params=["...", *params],
                       descriptions=DESCRIPTIONS)

    cli = Command(
        dualhawkes,
        descriptions={"version": "Print version and exit."},
        subcommands=[
            command(simulate),
            command(fit, TRACES),
            command(rank),
            command(check, TRACES),
            command(
                experiment,
                Option("name", ["name"], description=(
                    "Experiment name or INI spec file: "
                    + ", ".join(EXPERIMENTS)
                )),
                Option("full_scale", ["--paper-scale", "--full-scale"],
                       parser=parsers.flag(), default=False,
                       description=DESCRIPTIONS["full_scale"]),
            ),
        ],
    )
    return cli


def main(argv: t.Optional[t.Sequence[str]] = None) -> int:
    """Run dualhawkes with argv (default: sys.argv[1:])."""
    return t.cast(int, build_cli().run(argv))
