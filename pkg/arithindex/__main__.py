#!/usr/bin/env python3
"""
Arithmetic Index Toolkit - Command Line Interface

Experiments on arithmetic factors of the generalized Thue-Morse word omega_q.

Usage:
    python -m arithindex gen --q Q --len N
    python -m arithindex runs --q Q --n N [--out FILE] [--format csv|json]
    python -m arithindex index --q Q --word WORD [--c-budget N]
    python -m arithindex index-table --q Q --n-max N [--out FILE]
    python -m arithindex embed --q Q --word WORD [--verify]
    python -m arithindex conjecture --q Q --n N [--out FILE]
    python -m arithindex bounds --q Q --n N

Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 verification failure.
"""

import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError
from rich import box
from rich.console import Console
from rich.table import Table

from .cache import CacheError
from .config import CliConfig, ExperimentConfig, ExportFormat, SearchSettings
from .constructive import ConstructionError, upper_bound_index
from .core import InvalidInputError, base_q_expansion, format_word
from .experiments import ExperimentRunner, ExportError
from .search import SearchInconsistencyError, occurs_prefix_oracle

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_VERIFICATION = 3


def _out() -> Console:
    return Console(highlight=False, soft_wrap=True)


def _err() -> Console:
    return Console(stderr=True, highlight=False, soft_wrap=True)


def setup_logging(verbosity: int):
    """WARNING by default, -v for INFO, -vv for DEBUG; always on stderr."""
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
        force=True,
    )


def build_configs(args) -> "tuple[CliConfig, ExperimentConfig]":
    """Merge --config defaults with explicit flags; flags win."""
    base = ExperimentConfig.load(args.config) if args.config else None
    q = args.q if args.q is not None else (base.q if base else None)
    if q is None:
        raise InvalidInputError("--q is required (directly or through --config)")

    c_budget = getattr(args, "c_budget", None)
    if c_budget is None and base is not None and hasattr(args, "c_budget"):
        c_budget = base.search.scan_limit

    fmt = args.format or (base.output_format.value if base else ExportFormat.CSV.value)
    cli = CliConfig(
        q=q,
        n=getattr(args, "n", None),
        n_max=getattr(args, "n_max", None),
        length=getattr(args, "len", None),
        word=getattr(args, "word", None),
        word_csv=getattr(args, "word_csv", None),
        workers=args.workers if args.workers is not None else (base.search.workers if base else 1),
        out=getattr(args, "out", None),
        format=fmt,
        cache=args.cache,
        c_budget=c_budget,
        z_cap=args.z_cap,
    )

    search = base.search if base else SearchSettings()
    updates = {"workers": cli.workers}
    if cli.z_cap is not None:
        updates["z_cap"] = cli.z_cap
    if cli.c_budget is not None:
        updates["scan_limit"] = cli.c_budget
    experiment = ExperimentConfig(
        q=q,
        search=search.model_copy(update=updates),
        cache_path=cli.cache or (base.cache_path if base else None),
        output_format=cli.format,
    )
    return cli, experiment


# =============================================================================
# Commands
# =============================================================================

def cmd_gen(cli: CliConfig, runner: ExperimentRunner) -> int:
    """Handle gen command."""
    if cli.length is None:
        raise InvalidInputError("--len is required")
    _out().print(format_word(runner.seq.prefix_word(cli.length), runner.seq.base), markup=False)
    return EXIT_OK


def cmd_runs(cli: CliConfig, runner: ExperimentRunner) -> int:
    """Handle runs command."""
    if cli.n is None:
        raise InvalidInputError("--n is required")
    report = runner.theorem(cli.n)
    runner.export(report, cli.out)

    console = _out()
    witness = runner.maximal_run_witness(cli.n)
    if witness is not None:
        console.print(f"witness c={witness.c} d={witness.d} L={report.expected}", markup=False)
    console.print(report.summary(), markup=False)
    return EXIT_OK if report.passed else EXIT_VERIFICATION


def cmd_index(cli: CliConfig, runner: ExperimentRunner) -> int:
    """Handle index command."""
    u = cli.parsed_word()
    report = runner.index(u)
    _out().print(
        f"d_min={report.d_min} c={report.occurrence.c} index={report.index}", markup=False
    )

    if cli.c_budget is not None:
        oracle = occurs_prefix_oracle(runner.seq, u, report.d_min, cli.c_budget)
        expected_hit = report.occurrence.c <= cli.c_budget
        if (oracle is not None and oracle.c != report.occurrence.c) or (oracle is None and expected_hit):
            found = "none" if oracle is None else oracle.c
            _err().print(f"❌ prefix oracle disagrees: c={found} within budget {cli.c_budget}", markup=False)
            return EXIT_VERIFICATION
        if not expected_hit:
            logger.warning(f"c={report.occurrence.c} is beyond the oracle budget {cli.c_budget}")
    return EXIT_OK


def _print_index_table(table) -> None:
    rich_table = Table(title=f"Arithmetic index, q={table.q}, C={table.C}", box=box.SIMPLE)
    for column in ("n", "I", "lower", "upper", "extremal", "alternating"):
        rich_table.add_column(column, justify="right")
    for row in table.rows:
        rich_table.add_row(
            str(row.n), str(row.I), str(row.lower), str(row.upper),
            str(row.extremal_count), "yes" if row.alternating_is_extremal else "no",
        )
    _out().print(rich_table)


def cmd_index_table(cli: CliConfig, runner: ExperimentRunner) -> int:
    """Handle index-table command."""
    if cli.n_max is None:
        raise InvalidInputError("--n-max is required")
    table = runner.index_table(cli.n_max)
    runner.export(table, cli.out)
    _print_index_table(table)
    if not table.all_within_bounds:
        bad = [row.n for row in table.rows if not row.within_bounds]
        _err().print(f"❌ index outside its bounds for n={bad}", markup=False)
        return EXIT_VERIFICATION
    return EXIT_OK


def cmd_embed(cli: CliConfig, runner: ExperimentRunner, verify: bool = False) -> int:
    """Handle embed command."""
    u = cli.parsed_word()
    result = runner.embed(u)
    base = runner.seq.base
    bound = upper_bound_index(base, len(u))

    console = _out()
    console.print(f"c_u={result.c_u}", markup=False)
    console.print(f"c_u[q]={base_q_expansion(result.c_u, base)}", markup=False)
    console.print(f"d_u={result.d_u}", markup=False)
    console.print(f"d_u[q]={base_q_expansion(result.d_u, base)}", markup=False)
    within = result.index <= bound
    console.print(
        f"index={result.index} bound={bound} {'OK' if within else 'EXCEEDED'}", markup=False
    )

    if verify:
        observed = runner.seq.arithmetic_slice(result.c_u, result.d_u, len(u))
        if observed != u:
            _err().print(f"❌ slice {format_word(observed, base)} != {format_word(u, base)}", markup=False)
            return EXIT_VERIFICATION
        console.print("✅ verified", markup=False)
    return EXIT_OK


def cmd_conjecture(cli: CliConfig, runner: ExperimentRunner) -> int:
    """Handle conjecture command."""
    if cli.n is None:
        raise InvalidInputError("--n is required")
    report = runner.conjecture(cli.n)
    runner.export(report, cli.out)

    console = _out()
    extremal = set(report.extremal_words)
    for probe in report.probes:
        console.print(
            f"word={format_word(probe.u, runner.seq.base)} d_min={probe.d_min} "
            f"index={probe.index} I={report.I} extremal={str(probe.u in extremal).lower()}",
            markup=False,
        )
    console.print(f"alternating_is_extremal={str(report.alternating_is_extremal).lower()}", markup=False)
    return EXIT_OK


def cmd_bounds(cli: CliConfig, runner: ExperimentRunner) -> int:
    """Handle bounds command."""
    if cli.n is None:
        raise InvalidInputError("--n is required")
    rows = runner.bounds(cli.n)
    table = Table(title=f"Index bounds, q={runner.seq.q}", box=box.SIMPLE)
    columns = ["m", "lower", "upper", "C"] + (["lower_tm"] if runner.seq.q == 2 else [])
    for column in columns:
        table.add_column(column, justify="right")
    for row in rows:
        table.add_row(*(str(row[c]) for c in columns))
    _out().print(table)
    return EXIT_OK


# =============================================================================
# Entry point
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, help="Alphabet size (prime)")
    common.add_argument("--config", help="YAML experiment configuration")
    common.add_argument("--workers", type=int, help="Worker threads for sweeps")
    common.add_argument("--cache", help="Result cache file")
    common.add_argument("--z-cap", dest="z_cap", type=int, help="Cap for witness searches over z")
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="More logging (-v info, -vv debug)")

    parser = argparse.ArgumentParser(
        description="Arithmetic Index Toolkit - arithmetic factors of the generalized Thue-Morse word"
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    def with_output(sub):
        sub.add_argument("--out", help="Write the report to this file")
        sub.add_argument("--format", choices=[f.value for f in ExportFormat], help="Export format")

    def with_word(sub):
        sub.add_argument("--word", help="Word as a digit string, e.g. 0121")
        sub.add_argument("--word-csv", dest="word_csv", help="Word as comma-separated symbols")

    # Gen command
    gen_parser = subparsers.add_parser("gen", parents=[common], help="Print a prefix of omega_q")
    gen_parser.add_argument("--len", type=int, required=True, help="Prefix length")
    gen_parser.set_defaults(format=None)

    # Runs command
    runs_parser = subparsers.add_parser("runs", parents=[common],
                                        help="Verify the longest-progression theorem for d < q^n")
    runs_parser.add_argument("--n", type=int, required=True, help="Exponent n")
    with_output(runs_parser)

    # Index command
    index_parser = subparsers.add_parser("index", parents=[common],
                                         help="Minimal difference and arithmetic index of a word")
    with_word(index_parser)
    index_parser.add_argument("--c-budget", dest="c_budget", type=int,
                              help="Cross-check against a prefix scan up to this start")
    index_parser.set_defaults(format=None)

    # Index table command
    table_parser = subparsers.add_parser("index-table", parents=[common],
                                         help="I(n) with bounds for n = 1..n-max")
    table_parser.add_argument("--n-max", dest="n_max", type=int, required=True, help="Largest n")
    with_output(table_parser)

    # Embed command
    embed_parser = subparsers.add_parser("embed", parents=[common],
                                         help="Explicit (c_u, d_u) for a word")
    with_word(embed_parser)
    embed_parser.add_argument("--verify", action="store_true", help="Re-evaluate the slice")
    embed_parser.set_defaults(format=None)

    # Conjecture command
    conj_parser = subparsers.add_parser("conjecture", parents=[common],
                                        help="Compare the alternating word with I(n)")
    conj_parser.add_argument("--n", type=int, required=True, help="Word length")
    with_output(conj_parser)

    # Bounds command
    bounds_parser = subparsers.add_parser("bounds", parents=[common],
                                          help="Upper and lower index bounds for m = 1..n")
    bounds_parser.add_argument("--n", type=int, required=True, help="Largest word length")
    bounds_parser.set_defaults(format=None)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return 1

    setup_logging(args.verbose)

    commands = {
        "gen": cmd_gen,
        "runs": cmd_runs,
        "index": cmd_index,
        "index-table": cmd_index_table,
        "embed": lambda cli, runner: cmd_embed(cli, runner, verify=args.verify),
        "conjecture": cmd_conjecture,
        "bounds": cmd_bounds,
    }

    try:
        cli, experiment = build_configs(args)
        runner = ExperimentRunner(experiment)
        return commands[args.command](cli, runner)
    except ValidationError as e:
        messages = "; ".join(err["msg"] for err in e.errors())
        _err().print(f"❌ Invalid input: {messages}", markup=False)
        return EXIT_INVALID
    except InvalidInputError as e:
        _err().print(f"❌ Invalid input: {e}", markup=False)
        return EXIT_INVALID
    except (SearchInconsistencyError, ConstructionError, CacheError) as e:
        _err().print(f"❌ Verification failed: {e}", markup=False)
        return EXIT_VERIFICATION
    except (ExportError, OSError) as e:
        _err().print(f"❌ {e}", markup=False)
        return 1


if __name__ == "__main__":
    sys.exit(main())
