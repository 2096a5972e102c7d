"""Command line front end.

Subcommands: ``gen``, ``norm``, ``bound``, ``partition``, ``experiment`` and
``serve``. Errors map to exit codes: 2 for bad flags or values, 3 when a size
cap is exceeded, 4 for invalid input files and 5 when the solver overflows.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from . import __version__
from .bounds import bennett_bound, theorem1_bound, theorem2_bound, theorem2_vertex_form
from .config import get_settings, setup_logging
from .experiment import run_experiment
from .generators import (
    gen_chain,
    gen_random_tree,
    gen_regular_tree,
    gen_star,
    gen_weight_pair,
    is_level_constant,
    level_weights_of,
    profile_of,
)
from .models.base import HardyError
from .models.profile import LevelProfile
from .models.requests import (
    BoundedBranching,
    ExperimentConfig,
    SolverOptions,
    UniformAttachment,
    parse_weight_law,
)
from .models.tree import Exponents, RootedTree, WeightPair
from .partition import build_partition, reduce, reduced_weights, uw_block_bound_check, verify_partition
from .serialization import (
    dumps_instance,
    load_experiment_config,
    load_instance,
    partition_to_dict,
    records_to_csv,
    result_to_json,
    save_instance,
    to_dot,
)
from .summation import brute_force_norm, mixed_operator_norm, operator_norm


logger = logging.getLogger(__name__)


def _write(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {output}")


def _emit(payload: dict[str, Any], args: argparse.Namespace, title: str) -> None:
    """Print a flat report as JSON, a CSV row or a rich table."""
    scalars = {k: v for k, v in payload.items() if not isinstance(v, (list, dict))}
    if args.format in (None, "json"):
        _write(json.dumps(payload, indent=2) + "\n", args.output)
    elif args.format == "csv":
        header = ",".join(scalars)
        cells = ("" if v is None else repr(v) if isinstance(v, float) else str(v) for v in scalars.values())
        row = ",".join(cells)
        _write(f"{header}\n{row}\n", args.output)
    else:
        console = Console()
        table = Table(title=title, show_header=True, header_style="bold cyan")
        table.add_column("Quantity")
        table.add_column("Value", justify="right")
        for key, value in scalars.items():
            table.add_row(key, f"{value:.12g}" if isinstance(value, float) else str(value))
        console.print(table)
        for key, value in payload.items():
            if isinstance(value, list) and value and isinstance(value[0], dict):
                checks = Table(title=key, show_header=True, header_style="bold cyan")
                for column in value[0]:
                    checks.add_column(column)
                for item in value:
                    checks.add_row(*("" if v is None else str(v) for v in item.values()))
                console.print(checks)


def _fill_defaults(args: argparse.Namespace) -> None:
    """Replace absent shared flags with their defaults; ``args.explicit`` keeps the ones given."""
    settings = get_settings()
    defaults = {
        "p": 2.0,
        "q": 3.0,
        "sigma": settings.sigma,
        "seed": 0,
        "restarts": settings.restarts,
        "tol": settings.tol,
        "max_iter": settings.max_iter,
    }
    args.explicit = {k: getattr(args, k) for k in defaults if getattr(args, k) is not None}
    for key, value in defaults.items():
        if getattr(args, key) is None:
            setattr(args, key, value)


def _exponents(args: argparse.Namespace) -> Exponents:
    return Exponents(p=args.p, q=args.q)


def _solver_options(args: argparse.Namespace) -> SolverOptions:
    return SolverOptions(restarts=args.restarts, tol=args.tol, max_iter=args.max_iter, seed=args.seed)


def _weights_are_regular(t: RootedTree, wt: WeightPair) -> Optional[LevelProfile]:
    profile = profile_of(t)
    if profile is None or not (is_level_constant(t, wt.u) and is_level_constant(t, wt.w)):
        return None
    return profile


def cmd_gen(args: argparse.Namespace) -> int:
    """Generate a tree and weights and write the tree file."""
    if args.chain is not None:
        t = gen_chain(args.chain)
    elif args.star is not None:
        t = gen_star(args.star)
    elif args.regular is not None:
        t = gen_regular_tree(LevelProfile(branching=tuple(int(b) for b in args.regular.split(","))))
    else:
        model = (
            BoundedBranching(max_children=args.max_children)
            if args.model == "bounded-branching"
            else UniformAttachment()
        )
        t = gen_random_tree(args.random, args.seed, model)
    wt = gen_weight_pair(t, args.seed, parse_weight_law(args.u), parse_weight_law(args.w))
    if args.output is None:
        sys.stdout.write(dumps_instance(t, wt))
    else:
        save_instance(t, wt, args.output)
    if args.dot is not None:
        args.dot.write_text(to_dot(t, wt), encoding="utf-8")
    return 0


def cmd_norm(args: argparse.Namespace) -> int:
    """Estimate the operator norm of the instance in ``-i``."""
    t, wt = load_instance(args.input)
    e = _exponents(args)
    opts = _solver_options(args)
    estimate = mixed_operator_norm(t, wt, e, opts) if args.mixed else operator_norm(t, wt, e, opts)
    payload: dict[str, Any] = {
        "norm": "mixed" if args.mixed else "lp",
        "n": t.n,
        "p": e.p,
        "q": e.q,
        "value": estimate.value,
        "iterations": estimate.iterations,
        "restarts_used": estimate.restarts_used,
        "converged": estimate.converged,
        "start": estimate.start_labels.kind,
        "start_index": estimate.start_labels.index,
        "regime": estimate.regime,
        "maximizer": list(estimate.maximizer),
    }
    if args.brute_force:
        payload["brute_force"] = brute_force_norm(t, wt, e, seed=args.seed)
    _emit(payload, args, "Operator norm")
    return 0


def cmd_bound(args: argparse.Namespace) -> int:
    """Evaluate every bound quantity that applies to the instance."""
    t, wt = load_instance(args.input)
    e = _exponents(args)
    M = theorem1_bound(t, wt, e)
    payload: dict[str, Any] = {
        "n": t.n,
        "p": e.p,
        "q": e.q,
        "M": M.value,
        "argmax_vertex": M.argmax_vertex,
        "vertex_form": theorem2_vertex_form(t, wt, e).value,
    }
    if t.height == t.n - 1 and e.regime != "p>q":
        chain_order = [int(level[0]) for level in t.levels]
        payload["bennett"] = bennett_bound(wt.u_array[chain_order], wt.w_array[chain_order], e).value
    profile = _weights_are_regular(t, wt)
    if profile is not None:
        level = theorem2_bound(profile, level_weights_of(t, wt), e)
        payload["level_form"] = level.value
        payload["argmax_level"] = level.argmax_level
    _emit(payload, args, "Bound quantities")
    return 0


def cmd_partition(args: argparse.Namespace) -> int:
    """Build, reduce and verify the sigma-partition of the instance."""
    t, wt = load_instance(args.input)
    e = _exponents(args)
    partition = reduce(t, wt, e, build_partition(t, wt.w_array, e.q, args.sigma))
    report = verify_partition(t, wt, e, partition, args.sigma, _solver_options(args))
    block_report = uw_block_bound_check(t, wt, e, args.sigma)
    payload = partition_to_dict(partition)
    payload["passed"] = report.passed and block_report.passed
    payload["checks"] = [c.model_dump() for c in report.checks + block_report.checks]
    if args.format == "human":
        payload.pop("membership")
        payload.pop("reduced", None)
        payload["blocks"] = [
            {"root": b.root, "round": b.round, "size": len(b.vertices), "degenerate": b.degenerate}
            for b in partition.blocks
        ]
    _emit(payload, args, "Sigma-partition")
    if args.reduced_output is not None and partition.reduced is not None:
        save_instance(partition.reduced, reduced_weights(partition), args.reduced_output)
    if args.dot is not None:
        args.dot.write_text(to_dot(t, wt, partition), encoding="utf-8")
    return 0 if payload["passed"] else 1


def _overlay_flags(config: ExperimentConfig, explicit: dict[str, Any]) -> ExperimentConfig:
    """Apply the shared flags the user passed on top of the config file."""
    if not explicit:
        return config
    document = config.model_dump()
    if "seed" in explicit:
        document["seed"] = explicit["seed"]
    for key in ("restarts", "tol", "max_iter"):
        if key in explicit:
            document["solver"][key] = explicit[key]
    if "sigma" in explicit:
        document["sigmas"] = [explicit["sigma"]]
    if "p" in explicit or "q" in explicit:
        pairs = [(explicit.get("p", p), explicit.get("q", q)) for p, q in document["exponents"]]
        document["exponents"] = list(dict.fromkeys(pairs))
    logger.info(f"Command line overrides: {explicit}")
    return ExperimentConfig.model_validate(document)


def cmd_experiment(args: argparse.Namespace) -> int:
    """Run a ratio study described by a JSON config."""
    config = _overlay_flags(load_experiment_config(args.config), args.explicit)
    updates: dict[str, Any] = {}
    if args.output is not None:
        updates["output"] = args.output
    if args.format in ("csv", "json"):
        updates["format"] = args.format
    config = config.model_copy(update=updates)
    result = run_experiment(config, workers=args.workers)
    text = result_to_json(result) if config.format == "json" else records_to_csv(result.records)
    _write(text, config.output)
    console = Console(stderr=True)
    table = Table(title="Ratio summary", show_header=True, header_style="bold cyan")
    for column in ("p", "q", "count", "min", "median", "max", "failures"):
        table.add_column(column, justify="right")
    for s in result.summary:
        table.add_row(
            f"{s.p:g}",
            f"{s.q:g}",
            str(s.count),
            *(f"{x:.6g}" if x is not None else "-" for x in (s.min_ratio, s.median_ratio, s.max_ratio)),
            str(s.failures),
        )
    console.print(table)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    """Run the tool server on stdio."""
    from .main import mcp

    mcp.run()
    return 0


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    common = argparse.ArgumentParser(add_help=False)
    # None marks an absent flag so experiment configs keep their own values
    common.add_argument("--p", type=float, help="Source exponent p (default: 2)")
    common.add_argument("--q", type=float, help="Target exponent q (default: 3)")
    common.add_argument("--sigma", type=float, help=f"Partition parameter (default: {settings.sigma})")
    common.add_argument("--seed", type=int, help="Master seed (default: 0)")
    common.add_argument("--restarts", type=int, help=f"Random solver starts (default: {settings.restarts})")
    common.add_argument("--tol", type=float, help=f"Relative solver tolerance (default: {settings.tol})")
    common.add_argument("--max-iter", type=int, help=f"Iterations per start (default: {settings.max_iter})")
    common.add_argument("-i", "--input", type=Path, help="Tree+weights file")
    common.add_argument("-o", "--output", type=Path, help="Output path (standard output when absent)")
    common.add_argument("--format", choices=["json", "csv", "human"], help="Report format (default: json)")
    common.add_argument("--dot", type=Path, help="Also write a Graphviz drawing here")
    common.add_argument("--log-level", default=settings.log_level)

    parser = argparse.ArgumentParser(
        prog="tree-hardy",
        description="Weighted summation operators on rooted trees: norms, bounds and partitions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", parents=[common], help="Generate an instance")
    shape = gen.add_mutually_exclusive_group(required=True)
    shape.add_argument("--chain", type=int, metavar="N", help="Chain of N vertices")
    shape.add_argument("--star", type=int, metavar="M", help="Root with M leaves")
    shape.add_argument("--regular", metavar="B0,B1,...", help="Regular tree with this branching")
    shape.add_argument("--random", type=int, metavar="N", help="Random recursive tree of N vertices")
    gen.add_argument(
        "--model", choices=["uniform-attachment", "bounded-branching"], default="uniform-attachment"
    )
    gen.add_argument("--max-children", type=int, default=2, help="Bound for bounded-branching")
    gen.add_argument("--u", default="constant:1", help="Weight law of u")
    gen.add_argument("--w", default="constant:1", help="Weight law of w")
    gen.set_defaults(func=cmd_gen)

    norm = sub.add_parser("norm", parents=[common], help="Estimate the operator norm")
    norm.add_argument("--mixed", action="store_true", help="Use the level-mixed source norm")
    norm.add_argument("--brute-force", action="store_true", help="Also run the brute-force oracle")
    norm.set_defaults(func=cmd_norm)

    bound = sub.add_parser("bound", parents=[common], help="Evaluate the bound quantities")
    bound.set_defaults(func=cmd_bound)

    part = sub.add_parser("partition", parents=[common], help="Build and verify a sigma-partition")
    part.add_argument("--reduced-output", type=Path, help="Write the reduced tree file here")
    part.set_defaults(func=cmd_partition)

    exp = sub.add_parser("experiment", parents=[common], help="Run a ratio study")
    exp.add_argument("-c", "--config", type=Path, required=True, help="Experiment config (JSON)")
    exp.add_argument("--workers", type=int, default=settings.workers)
    exp.set_defaults(func=cmd_experiment)

    serve = sub.add_parser("serve", parents=[common], help="Run the tool server")
    serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)
    _fill_defaults(args)
    if args.command in ("norm", "bound", "partition") and args.input is None:
        parser.error(f"{args.command} needs -i/--input")
    try:
        return int(args.func(args))
    except HardyError as e:
        sys.stderr.write(f"{e}\n")
        return e.exit_code or 1
    except ValidationError as e:
        sys.stderr.write(f"Error 2: {e}\n")
        return 2
