"""
Command line entry point.
Run with: python -m src.cli <command> [options]

Commands:
    simulate  roll one action forward with the true parameters and write a trajectory CSV
    estimate  run the Hidden States pipeline on synthetic data and write a report
    baseline  run one baseline search on the same data and write a report
    eval      score saved reports against true parameters
    sweep     run the full (object, method, seed) experiment

Exit codes: 0 ok, 1 usage or input error, 2 estimation failure, 3 I/O failure.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from src.actions.spec import load_actions
from src.baselines.factory import BASELINE_METHODS, run_baseline
from src.config import Settings, get_settings
from src.errors import InputError, MassDistError
from src.estimation.pipeline import HiddenStatesEstimator
from src.harness.experiment import ALL_METHODS, evaluate_reports, run_experiment
from src.harness.noise import NOISE_PRESETS, noise_preset
from src.harness.reports import write_report_json, write_results_csv, write_trajectory_csv
from src.harness.synthetic import SyntheticSource
from src.models.catalog import catalog_names, object_from_descriptor, resolve_object
from src.physics.dynamics import simulate


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 3


class ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# =============================================================================
# Commands
# =============================================================================

def cmd_simulate(args, settings: Settings) -> int:
    name, descriptor = resolve_object(args.object)
    model, maps, params = object_from_descriptor(descriptor)
    actions = load_actions(args.action)
    if not actions:
        raise InputError(f"no action in {args.action}")
    if len(actions) > 1:
        logger.warning(f"{args.action} holds {len(actions)} actions; simulating the first")
    action = actions[0]
    action.validate_for(model)

    config = settings.sim_config(dt=args.dt)
    source = SyntheticSource(model, maps, params, noise_preset(args.noise, args.seed), config)
    commanded = source.true_trajectory(action)
    # Noisy runs replay the filtered sensor reading instead of the exact wrench
    inputs = commanded.inputs if args.noise == "none" else source.observe(action).trajectory.inputs
    traj = simulate(model, maps, source.hidden_states, commanded.state(0), inputs, config, commanded.reference)
    write_trajectory_csv(traj.rereferenced(model, 0), args.out)
    print(f"✅ {name}: {action.label()} simulated for {traj.n_steps} steps -> {args.out}")
    return EXIT_OK


def _collect(args, settings: Settings):
    name, descriptor = resolve_object(args.object)
    model, maps, params = object_from_descriptor(descriptor)
    sim_config = settings.sim_config()
    source = SyntheticSource(model, maps, params, noise_preset(args.noise, args.seed), sim_config)
    estimator = HiddenStatesEstimator(
        model,
        maps,
        settings.estimator_config(max_iters=args.iters, learning_rate=getattr(args, "alpha", None)),
        settings.action_config(),
        sim_config,
        args.seed,
    )
    print(f"📦 {name}: collecting data ({args.noise} noise, seed {args.seed})...")
    return name, estimator, estimator.collect(source)


def cmd_estimate(args, settings: Settings) -> int:
    name, estimator, dataset = _collect(args, settings)
    report = estimator.estimate(dataset, name)
    write_report_json(report, args.out)
    status = "converged" if report.converged else "not converged"
    print(f"✅ {name}: masses {[round(m, 4) for m in report.masses]} ({status}) -> {args.out}")
    return EXIT_OK


def cmd_baseline(args, settings: Settings) -> int:
    name, estimator, dataset = _collect(args, settings)
    observations = dataset.training_observations()
    report = run_baseline(
        args.method,
        [o.trajectory for o in observations],
        estimator.model,
        estimator.maps,
        settings.search_config(seed=args.seed, iters=args.iters),
        estimator.sim_config,
        name,
        [o.action for o in observations],
    )
    write_report_json(report, args.out)
    print(f"✅ {name}/{args.method}: masses {[round(m, 4) for m in report.masses]} -> {args.out}")
    return EXIT_OK


def cmd_eval(args, settings: Settings) -> int:
    results = evaluate_reports(args.reports, args.truth, settings)
    write_results_csv(results, args.out)
    failed = sum(1 for r in results if r.error)
    print(f"✅ Scored {len(results) - failed}/{len(results)} reports -> {args.out}")
    return EXIT_OK


def _split(value: str, everything: List[str]) -> List[str]:
    if value == "all":
        return list(everything)
    return [v.strip() for v in value.split(",") if v.strip()]


def cmd_sweep(args, settings: Settings) -> int:
    objects = _split(args.catalog, catalog_names())
    methods = _split(args.methods, ALL_METHODS)
    try:
        seeds = [int(s) for s in args.seeds.split(",")]
    except ValueError as e:
        raise InputError(f"invalid --seeds {args.seeds!r}") from e

    print(f"🔄 Sweep: {len(objects)} objects x {len(methods)} methods x {len(seeds)} seeds")
    results = run_experiment(
        objects, methods, args.noise, seeds, settings, Path(args.out), include_runtime=args.runtime
    )
    failed = sum(1 for r in results if r.error)
    print(f"✅ {len(results) - failed}/{len(results)} cells succeeded -> {args.out}")
    return EXIT_OK


# =============================================================================
# Parser
# =============================================================================

def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="python -m src.cli", description="Planar mass distribution estimation")
    parser.add_argument("--config", help="dotenv-format settings file")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    p = commands.add_parser("simulate", help="simulate one action with the true parameters")
    p.add_argument("--object", required=True, help="catalog name or descriptor JSON")
    p.add_argument("--action", required=True, help="action JSON file")
    p.add_argument("--out", required=True)
    p.add_argument("--dt", type=float)
    p.add_argument("--noise", default="none", choices=list(NOISE_PRESETS), help="replay a noisy sensor reading")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_simulate)

    p = commands.add_parser("estimate", help="run the Hidden States pipeline")
    p.add_argument("--object", required=True)
    p.add_argument("--noise", default="none", choices=list(NOISE_PRESETS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--iters", type=int)
    p.add_argument("--alpha", type=float, help="fixed learning rate (default: optimal)")
    p.set_defaults(handler=cmd_estimate)

    p = commands.add_parser("baseline", help="run one baseline search")
    p.add_argument("--method", required=True, choices=BASELINE_METHODS)
    p.add_argument("--object", required=True)
    p.add_argument("--noise", default="none", choices=list(NOISE_PRESETS))
    p.add_argument("--iters", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_baseline)

    p = commands.add_parser("eval", help="score reports against true parameters")
    p.add_argument("--reports", required=True, help="directory of report JSON files")
    p.add_argument("--truth", help="directory of <object>.json descriptors (default: catalog)")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_eval)

    p = commands.add_parser("sweep", help="run the full experiment")
    p.add_argument("--catalog", default="all", help="'all' or comma-separated objects")
    p.add_argument("--methods", default="all", help="'all' or comma-separated methods")
    p.add_argument("--seeds", default="1,2,3")
    p.add_argument("--noise", default="none", choices=list(NOISE_PRESETS))
    p.add_argument("--out", required=True)
    p.add_argument("--runtime", action="store_true", help="include runtimes in result files")
    p.set_defaults(handler=cmd_sweep)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    if args.config and not Path(args.config).is_file():
        print(f"❌ Config file not found: {args.config}", file=sys.stderr)
        return EXIT_IO
    try:
        settings = get_settings(args.config)
    except ValidationError as e:
        print(f"❌ Invalid config file {args.config}: {e}", file=sys.stderr)
        return EXIT_USAGE
    level = logging.DEBUG if args.verbose else getattr(logging, settings.log_level.upper(), logging.INFO)
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        return args.handler(args, settings)
    except MassDistError as e:
        logger.debug("Command failed", exc_info=True)
        print(f"❌ {e}", file=sys.stderr)
        return e.exit_code
    except (ValidationError, ValueError) as e:
        print(f"❌ Invalid input: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"❌ I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
