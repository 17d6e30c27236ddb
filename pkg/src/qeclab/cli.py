"""
Command-line entry point.

    qeclab run --config sweep.json [--seed S] [--threads T] [--out FILE] [--raw]
    qeclab predict --config sweep.json
    qeclab haar --config sweep.json
    qeclab expurgate --config sweep.json [--mode gauge] [--stop-rate R] ...
    qeclab replay --config sweep.json --n N --depth D --point P --seed S

Results go to ``--out`` (or the config's ``output``) as CSV, otherwise to stdout.
"""

import argparse
import csv
import json
import logging
import sys
from typing import List, Optional

from qeclab import __version__
from qeclab.config import ExperimentConfig, load_config
from qeclab.constants import EXIT_CONFIG, EXIT_ERROR, EXIT_NO_CROSSING, EXIT_OK, EXIT_RESOURCE
from qeclab.erasure import ErasureModel
from qeclab.exceptions import (
    ConfigError,
    NoCrossingError,
    QecLabError,
    ResourceLimitError,
    SingularFitError,
)
from qeclab.experiments import build_code, replay_trial, run_experiment
from qeclab.expurgation import MeasurementOrder, StopCriteria, run_expurgation
from qeclab.misc import child_seed, format_float, make_rng
from qeclab.records import save_csv, write_csv

logger = logging.getLogger("qeclab")

TRACE_COLUMNS = ("round", "pattern_seed", "n_erased", "n_expurgated", "k", "code_entropy",
                 "failure", "failure_upper")


def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", required=True, help="JSON experiment file")
    parser.add_argument("--seed", type=int, help="override master_seed")
    parser.add_argument("--threads", type=int, help="worker processes (-1 for all cores)")
    parser.add_argument("--out", help="output CSV path (default: stdout)")
    parser.add_argument("--raw", action="store_true", default=None, help="also emit one row per trial")
    parser.add_argument("--progress", action="store_true", help="show a progress bar")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qeclab", description="Erasure decoding of random Clifford codes")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    sub = parser.add_subparsers(dest="command", required=True)

    _common(sub.add_parser("run", help="run the experiment named in the config"))
    _common(sub.add_parser("predict", help="analytic predictions for the config's grid"))
    _common(sub.add_parser("haar", help="Haar-random encodings on the config's grid"))

    exp = sub.add_parser("expurgate", help="one expurgation run with its per-round trace")
    _common(exp)
    exp.add_argument("--mode", choices=("stabilizer", "gauge"), help="override expurgation_mode")
    exp.add_argument("--erasure-fraction", type=float, help="override expurgation_fraction")
    exp.add_argument("--stop-rate", type=float, help="stop once k/N falls to this rate")
    exp.add_argument("--stop-failure", type=float, help="stop once the failure upper bound falls below this")
    exp.add_argument("--max-rounds", type=int, help="override expurgation_rounds")
    exp.add_argument("--dump-code", help="write the final code's tableau to this file")

    rep = sub.add_parser("replay", help="recompute one trial from its recorded seed")
    rep.add_argument("--config", required=True, help="JSON experiment file")
    rep.add_argument("--n", type=int, required=True, help="number of qubits")
    rep.add_argument("--depth", type=int, help="circuit depth (omit for depth-free experiments)")
    rep.add_argument("--point", type=float, required=True, help="sweep point value")
    rep.add_argument("--seed", type=int, required=True, help="trial seed from the CSV")
    return parser


def _setup_logging(verbosity: int):
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(asctime)s %(name)s %(levelname)s: %(message)s")


def _load(args: argparse.Namespace, experiment: Optional[str] = None) -> ExperimentConfig:
    config = load_config(args.config)
    overrides = dict(master_seed=args.seed, threads=getattr(args, "threads", None),
                     raw=getattr(args, "raw", None), experiment=experiment)
    try:
        return config.with_overrides(**overrides)
    except (TypeError, ValueError) as err:
        raise ConfigError("<cli>", str(err)) from None


def _emit_records(records, config: ExperimentConfig, out: Optional[str]):
    path = out or config.output
    if path:
        save_csv(records, path)
        logger.info("wrote %d records to %s", len(records), path)
    else:
        write_csv(records, sys.stdout)


def cmd_run(args, experiment: Optional[str] = None) -> int:
    config = _load(args, experiment)
    records = run_experiment(config, progress=args.progress)
    _emit_records(records, config, args.out)
    return EXIT_OK


def cmd_expurgate(args) -> int:
    config = _load(args).with_overrides(
        expurgation_mode=args.mode,
        expurgation_fraction=args.erasure_fraction,
        expurgation_stop_rate=args.stop_rate,
        expurgation_stop_failure=args.stop_failure,
        expurgation_rounds=args.max_rounds,
    )
    n = config.sizes[0]
    depth = config.depths_for(n)[0]
    seed = child_seed(config.master_seed, "expurgate", n, depth)
    rng = make_rng(seed)
    code = build_code(config, n, depth, rng)
    model = ErasureModel.fixed(int(round(config.expurgation_fraction * n)))
    stop = StopCriteria.with_budget(
        code.n_logical, n, config.expurgation_budget_offset,
        min_rate=config.expurgation_stop_rate,
        max_failure=config.expurgation_stop_failure,
        max_rounds=config.expurgation_rounds,
    )
    code, trace = run_expurgation(code, model, config.expurgation_mode, stop, rng,
                                  MeasurementOrder(config.measurement_order))
    logger.info("expurgation stopped after %d rounds: %s", len(trace), trace.stop_reason)

    path = args.out or config.output
    stream = open(path, "w", encoding="utf-8", newline="") if path else sys.stdout
    try:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for r in trace.records:
            writer.writerow([r.round, r.pattern_seed, r.n_erased, r.n_expurgated, r.k, r.code_entropy,
                             format_float(r.failure), format_float(r.failure_upper)])
    finally:
        if path:
            stream.close()
    if args.dump_code:
        with open(args.dump_code, "w", encoding="utf-8") as f:
            f.write(code.dump())
    if trace.failed:
        logger.warning("%s", trace.stop_reason)
    return EXIT_OK


def cmd_replay(args) -> int:
    config = load_config(args.config)
    observables = replay_trial(config, args.n, args.depth, args.point, args.seed)
    json.dump(observables, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return EXIT_OK


def dispatch(args: argparse.Namespace) -> int:
    if args.command == "run":
        return cmd_run(args)
    if args.command in ("predict", "haar"):
        return cmd_run(args, experiment=args.command)
    if args.command == "expurgate":
        return cmd_expurgate(args)
    return cmd_replay(args)


def main(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv``, run the command and map errors onto exit codes."""
    args = build_parser().parse_args(argv)
    _setup_logging(args.verbose)
    try:
        return dispatch(args)
    except ConfigError as err:
        logger.error("%s", err)
        return EXIT_CONFIG
    except ResourceLimitError as err:
        logger.error("%s", err)
        return EXIT_RESOURCE
    except (NoCrossingError, SingularFitError) as err:
        logger.error("%s", err)
        return EXIT_NO_CROSSING
    except (QecLabError, OSError) as err:
        logger.error("%s", err)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
