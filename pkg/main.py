import argparse
import logging
import os
import sys
import warnings

from dotenv import load_dotenv

from bounds import (
    ProblemConstants,
    constant_step_plan,
    iteration_complexity,
    rspp_plan,
)
from constraints import estimate_kappa
from core.errors import ConfigError, OptimizationError, ReturnsFormatError
from core.random_source import RandomSource
from harness import gen_config, load_experiment_config, run_experiment
from problems import generate

# Load environment variables from .env file
load_dotenv()

logger = logging.getLogger("spp")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def run(args):
    config = load_experiment_config(args.config, output_dir=args.output_dir)
    traces = run_experiment(config, workers=args.workers, debug_runs=args.debug_runs)
    for trace in traces:
        print(f"{trace.name}: {len(trace)} records, {trace.divergence_count} diverged")
    print(f"artifacts written to {config.output_dir}")


def estimate(args):
    config = load_experiment_config(args.config)
    problem = generate(config.problem)
    samples = args.samples or config.samples
    kappa = estimate_kappa(problem, samples, RandomSource(config.seed + config.runs))
    print(f"kappa_hat = {kappa:.6g} (empirical lower bound from {samples} samples)")


def plan(args):
    """
    Print the constant-step plan, the decaying-stepsize iteration complexity
    and the RSPP epoch plan for whichever constants were given.
    """
    c = ProblemConstants(
        r0=args.r0,
        kappa=args.kappa,
        mean_sq_lipschitz=args.mean_sq_lipschitz,
        eta_sq=None if args.eta is None else args.eta ** 2,
        grad_norm=args.grad_norm,
        sigmas=tuple(args.sigma) if args.sigma else None,
        dist0=args.dist0,
        mu0=args.mu0,
        gamma=args.gamma,
    )
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            mu, k = constant_step_plan(args.eps, c)
            print(f"constant stepsize: mu = {mu:.6g}, K = {k}")
        except OptimizationError as e:
            print(f"constant stepsize: unavailable ({e})")
    for warning in caught:
        print(f"  note: {warning.message}")

    try:
        k = iteration_complexity(args.eps, args.gamma, c, noise_scaled=args.noise_scaled)
        print(f"mu0 / k^{args.gamma:g}: K = {k}")
    except (OptimizationError, ValueError) as e:
        print(f"mu0 / k^{args.gamma:g}: unavailable ({e})")

    try:
        epochs, total = rspp_plan(args.eps, args.gamma, c)
        print(f"RSPP: T = {epochs} epochs, at least {total:.6g} inner iterations")
    except (OptimizationError, ValueError) as e:
        print(f"RSPP: unavailable ({e})")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spp", description="Stochastic proximal point experiments and bounds."
    )
    parser.add_argument("--log-level", default=os.getenv("SPP_LOG_LEVEL", "INFO"))
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment file")
    p.add_argument("config")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: SPP_WORKERS or CPU count)")
    p.add_argument("--output-dir", default=None)
    p.add_argument("--debug-runs", action="store_true", help="also write per-run CSVs")
    p.set_defaults(handler=run)

    p = sub.add_parser("gen-config", help="print a documented experiment template")
    p.add_argument("family")
    p.set_defaults(handler=lambda args: print(gen_config(args.family), end=""))

    p = sub.add_parser("estimate-kappa", help="estimate the linear-regularity constant")
    p.add_argument("config")
    p.add_argument("--samples", type=int, default=None)
    p.set_defaults(handler=estimate)

    p = sub.add_parser("plan", help="evaluate stepsize and iteration plans")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--kappa", type=float)
    p.add_argument("--r0", type=float)
    p.add_argument("--mean-sq-lipschitz", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--grad-norm", type=float)
    p.add_argument("--dist0", type=float)
    p.add_argument("--mu0", type=float)
    p.add_argument("--sigma", type=float, action="append", help="repeat once per component")
    p.add_argument("--noise-scaled", action="store_true")
    p.set_defaults(handler=plan)
    return parser


def main(argv=None) -> int:
    """
    Command-line entry point; returns the process exit code.
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level.upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        args.handler(args)
    except (ConfigError, ReturnsFormatError) as e:
        logger.error("%s", e)
        return EXIT_CONFIG
    except (OptimizationError, OSError) as e:
        logger.error("%s", e)
        return EXIT_RUNTIME
    except ValueError as e:
        logger.error("%s", e)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
