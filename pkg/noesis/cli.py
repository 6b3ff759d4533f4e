#!/usr/bin/env python3
import argparse
import logging
import os
import sys
import textwrap
from pathlib import Path

from noesis.pylib import const, log
from noesis.pylib.abstraction import check_refinement, translate
from noesis.pylib.engine import RunSettings, replay, run
from noesis.pylib.errors import NoesisError, ParseError
from noesis.pylib.frontend.bat_parser import read_bat
from noesis.pylib.frontend.mapping_parser import read_mapping
from noesis.pylib.frontend.nature_script import read_script
from noesis.pylib.frontend.printer import print_program
from noesis.pylib.frontend.program_parser import parse_formula, read_program
from noesis.pylib.logic.formula import degree_of_belief, eval_epistemic
from noesis.pylib.oracle import ScriptedOracle, SeededOracle
from noesis.pylib.trace import Status
from noesis.pylib.util import rational_str, to_rational
from noesis.pylib.verifier import ExploreSettings, audit, explore
from noesis.pylib.writers.report_writer import (
    audit_report_json,
    audit_text,
    refinement_json,
    refinement_text,
    write_refinement_csv,
)
from noesis.pylib.writers.stats_writer import stats_json, write_stats_csv
from noesis.pylib.writers.trace_writer import emit_trace

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_FAILED = 2
EXIT_STEP_LIMIT = 3

STATUS_EXIT = {
    Status.COMPLETED: EXIT_OK,
    Status.FAILED: EXIT_FAILED,
    Status.STEP_LIMIT: EXIT_STEP_LIMIT,
}


def main(argv: list[str] | None = None) -> int:
    args = parse_args(argv)
    inputs = {k: getattr(args, k, None) for k in ("bat", "hl", "ll", "map", "prog")}
    log.started(args.log_file, args.command, inputs)

    try:
        code = COMMANDS[args.command](args)
    except ParseError as err:
        show_diagnostics(err)
        code = EXIT_INPUT
    except (NoesisError, OSError) as err:
        sys.stderr.write(f"error: {err}\n")
        code = EXIT_INPUT

    log.finished(args.command, code)
    return code


def use_color() -> bool:
    setting = os.environ.get(const.COLOR_ENV)
    if setting is not None:
        return setting.strip() == "1"
    return sys.stderr.isatty()


def show_diagnostics(err: ParseError) -> None:
    color = use_color()
    sources: dict[str, str | None] = {}
    for diagnostic in err.diagnostics:
        file = diagnostic.span.file
        if file not in sources:
            path = Path(file)
            sources[file] = (
                path.read_text(encoding="utf-8")
                if not file.startswith("<") and path.exists()
                else None
            )
        sys.stderr.write(diagnostic.render(sources[file], color=color) + "\n")


def emit(data: str | bytes, path: Path | None) -> None:
    """Write to the named file, or to standard output."""
    data = data.encode("utf-8") if isinstance(data, str) else data
    if path is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)


def run_settings(args: argparse.Namespace) -> RunSettings:
    return RunSettings(
        max_steps=args.max_steps,
        snapshots=getattr(args, "snapshots", False),
        strict_poss=args.strict_poss,
        strict_guards=args.strict_guards,
    )


# ----------------------------------------------------------------------------
# Subcommands


def do_run(args: argparse.Namespace) -> int:
    bat = read_bat(args.bat)
    program = read_program(args.prog, bat)
    if args.seed is not None:
        oracle = SeededOracle(args.seed)
    else:
        oracle = ScriptedOracle(read_script(args.nature))
    trace, _ = run(bat, program, oracle, run_settings(args))
    emit(emit_trace(trace, args.format), args.trace)
    return STATUS_EXIT[trace.status]


def do_replay(args: argparse.Namespace) -> int:
    bat = read_bat(args.bat)
    program = read_program(args.prog, bat)
    trace = replay(bat, program, read_script(args.nature), run_settings(args))
    emit(emit_trace(trace, args.format), args.trace)
    if trace.completed and trace.unused:
        return EXIT_FAILED
    return STATUS_EXIT[trace.status]


def do_translate(args: argparse.Namespace) -> int:
    hl = read_bat(args.hl)
    ll = read_bat(args.ll)
    mapping = read_mapping(args.map, hl, ll)
    program = read_program(args.prog, hl)
    emit(print_program(translate(mapping, program)), args.output)
    return EXIT_OK


def do_verify(args: argparse.Namespace) -> int:
    bat = read_bat(args.bat)
    program = read_program(args.prog, bat)
    nature = read_bat(args.nature_bat) if args.nature_bat else None
    settings = ExploreSettings(
        max_actions=args.max_actions,
        node_budget=args.node_budget,
        merge=args.merge,
        jobs=args.jobs,
        run=run_settings(args),
    )

    if args.audit:
        report = audit(bat, program, args.max_actions, settings, nature)
        text = audit_text(report) if args.format == "text" else audit_report_json(report)
        emit(text, args.output)
        return EXIT_OK if report.ok else EXIT_FAILED

    goals = [parse_formula(g, bat) for g in args.goal]
    stats = explore(bat, program, args.max_actions, goals, settings, nature)
    emit(stats_json(stats), args.output)
    if args.csv:
        write_stats_csv(stats, args.csv)
    return EXIT_OK


def do_check_refinement(args: argparse.Namespace) -> int:
    hl = read_bat(args.hl)
    ll = read_bat(args.ll)
    mapping = read_mapping(args.map, hl, ll)
    settings = ExploreSettings(node_budget=args.node_budget, merge=args.merge)
    report = check_refinement(
        hl,
        ll,
        mapping,
        depth=args.depth,
        hl_horizon=args.hl_horizon,
        epsilon=args.epsilon,
        settings=settings,
        progress=args.progress,
    )
    text = refinement_text(report) if args.format == "text" else refinement_json(report)
    emit(text, args.output)
    if args.csv:
        write_refinement_csv(report, args.csv)
    return EXIT_OK if report.ok else EXIT_FAILED


def do_query(args: argparse.Namespace) -> int:
    bat = read_bat(args.bat)
    program = read_program(args.prog, bat)
    formula = parse_formula(args.formula, bat)
    oracle = ScriptedOracle(read_script(args.nature))
    trace, config = run(bat, program, oracle, run_settings(args))
    if config is None:
        sys.stderr.write(f"error: {trace.reason}\n")
        return EXIT_FAILED
    if not trace.completed:
        msg = (
            f"query after {len(trace.steps)} action(s); "
            f"the prefix stopped: {trace.reason}"
        )
        logging.warning(msg)

    if formula.is_objective():
        answer = rational_str(degree_of_belief(formula, config.belief))
    else:
        answer = "true" if eval_epistemic(formula, config.belief) else "false"
    emit(answer + "\n", args.output)
    return EXIT_OK


COMMANDS = {
    "run": do_run,
    "replay": do_replay,
    "translate": do_translate,
    "verify": do_verify,
    "check-refinement": do_check_refinement,
    "query": do_query,
}


# ----------------------------------------------------------------------------
# Arguments


def rational(text: str):
    try:
        return to_rational(text)
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from err


def add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--max-steps",
        type=int,
        default=const.MAX_STEPS,
        metavar="N",
        help="""Stop after this many primitive actions. (default: %(default)s)""",
    )

    parser.add_argument(
        "--strict-poss",
        action="store_true",
        help="""Fail unless the agent knows the precondition of every action it
            issues.""",
    )

    parser.add_argument(
        "--strict-guards",
        action="store_true",
        help="""Reject objective if/while guards instead of reading them as
            know(guard).""",
    )


def add_trace_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--trace",
        type=Path,
        metavar="PATH",
        help="""Write the trace to this file instead of standard output.""",
    )

    parser.add_argument(
        "--format",
        choices=["text", "json"],
        default="json",
        help="""Trace style. (default: %(default)s)""",
    )

    parser.add_argument(
        "--snapshots",
        action="store_true",
        help="""Record the belief state after every step.""",
    )


def add_explore_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--merge",
        choices=const.MERGE_MODES,
        default="auto",
        help="""How the verifier shares identical subtrees. (default: %(default)s)""",
    )

    parser.add_argument(
        "--node-budget",
        type=int,
        default=const.NODE_BUDGET,
        metavar="N",
        help="""Give up (and report partial results) after expanding this many
            nodes. (default: %(default)s)""",
    )


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    arg_parser = argparse.ArgumentParser(
        prog="noesis",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description=textwrap.dedent(
            """
            Run, verify, and translate belief-based agent programs over
            stochastic action theories. Probabilities are exact rationals.
            """,
        ),
    )

    arg_parser.add_argument(
        "--log-file",
        type=Path,
        metavar="PATH",
        help="""Append log messages to this file instead of the error stream.""",
    )

    commands = arg_parser.add_subparsers(dest="command", required=True)

    # run
    parser = commands.add_parser("run", help="""Execute a program online.""")
    parser.add_argument("--bat", type=Path, required=True, metavar="PATH")
    parser.add_argument("--prog", type=Path, required=True, metavar="PATH")
    oracle = parser.add_mutually_exclusive_group(required=True)
    oracle.add_argument(
        "--seed",
        type=int,
        metavar="N",
        help="""Sample nature's choices from this seed.""",
    )
    oracle.add_argument(
        "--nature",
        type=Path,
        metavar="PATH",
        help="""Take nature's choices from this script.""",
    )
    add_run_flags(parser)
    add_trace_flags(parser)

    # replay
    parser = commands.add_parser(
        "replay",
        help="""Replay a nature script; succeeds only if the program completes
            and the script is used up.""",
    )
    parser.add_argument("--bat", type=Path, required=True, metavar="PATH")
    parser.add_argument("--prog", type=Path, required=True, metavar="PATH")
    parser.add_argument("--nature", type=Path, required=True, metavar="PATH")
    add_run_flags(parser)
    add_trace_flags(parser)

    # translate
    parser = commands.add_parser(
        "translate", help="""Translate a high-level program through a mapping."""
    )
    parser.add_argument("--hl", type=Path, required=True, metavar="PATH")
    parser.add_argument("--ll", type=Path, required=True, metavar="PATH")
    parser.add_argument("--map", type=Path, required=True, metavar="PATH")
    parser.add_argument("--prog", type=Path, required=True, metavar="PATH")
    parser.add_argument("-o", "--output", type=Path, metavar="PATH")

    # verify
    parser = commands.add_parser(
        "verify", help="""Explore every outcome of a program up to a depth."""
    )
    parser.add_argument("--bat", type=Path, required=True, metavar="PATH")
    parser.add_argument("--prog", type=Path, required=True, metavar="PATH")
    parser.add_argument(
        "--max-actions",
        type=int,
        required=True,
        metavar="N",
        help="""Explore this many primitive actions deep.""",
    )
    parser.add_argument(
        "--goal",
        action="append",
        default=[],
        metavar="FORMULA",
        help="""Measure how likely this formula holds on completion. Objective
            goals are also scored in the actual world. Repeatable.""",
    )
    parser.add_argument(
        "--audit",
        action="store_true",
        help="""Check belief normalization, actual-world support, and guard
            soundness along every branch instead of printing statistics.""",
    )
    parser.add_argument(
        "--nature-bat",
        type=Path,
        metavar="PATH",
        help="""Let nature follow this theory while the agent keeps its own.""",
    )
    parser.add_argument(
        "--jobs",
        type=int,
        default=1,
        metavar="N",
        help="""Worker processes for first-level branches. (default: %(default)s)""",
    )
    parser.add_argument(
        "--csv",
        type=Path,
        metavar="PATH",
        help="""Also write the statistics as a CSV table.""",
    )
    parser.add_argument(
        "--format",
        choices=["text", "json"],
        default="json",
        help="""Audit report style. (default: %(default)s)""",
    )
    parser.add_argument("-o", "--output", type=Path, metavar="PATH")
    add_explore_flags(parser)
    add_run_flags(parser)

    # check-refinement
    parser = commands.add_parser(
        "check-refinement",
        help="""Check that a mapping makes the low-level theory refine the
            high-level one.""",
    )
    parser.add_argument("--hl", type=Path, required=True, metavar="PATH")
    parser.add_argument("--ll", type=Path, required=True, metavar="PATH")
    parser.add_argument("--map", type=Path, required=True, metavar="PATH")
    parser.add_argument(
        "--depth",
        type=int,
        default=const.DEFAULT_DEPTH,
        metavar="N",
        help="""Low-level actions allowed per high-level action.
            (default: %(default)s)""",
    )
    parser.add_argument(
        "--hl-horizon",
        type=int,
        default=const.DEFAULT_HL_HORIZON,
        metavar="N",
        help="""Length of the high-level action sequences to check.
            (default: %(default)s)""",
    )
    parser.add_argument(
        "--epsilon",
        type=rational,
        default=const.DEFAULT_EPSILON,
        metavar="P/Q",
        help="""Allowed non-termination mass per high-level action.
            (default: 1/100)""",
    )
    parser.add_argument(
        "--csv",
        type=Path,
        metavar="PATH",
        help="""Also write the per-action checks as a CSV table.""",
    )
    parser.add_argument(
        "--format",
        choices=["text", "json"],
        default="text",
        help="""Report style. (default: %(default)s)""",
    )
    parser.add_argument(
        "--progress",
        action="store_true",
        help="""Show a progress bar per high-level level.""",
    )
    parser.add_argument("-o", "--output", type=Path, metavar="PATH")
    add_explore_flags(parser)

    # query
    parser = commands.add_parser(
        "query",
        help="""Run a program prefix with a nature script, then evaluate a
            formula against the resulting belief.""",
    )
    parser.add_argument("--bat", type=Path, required=True, metavar="PATH")
    parser.add_argument("--prog", type=Path, required=True, metavar="PATH")
    parser.add_argument("--nature", type=Path, required=True, metavar="PATH")
    parser.add_argument(
        "--formula",
        required=True,
        metavar="FORMULA",
        help="""Epistemic formulas print true or false; objective ones print
            their degree of belief.""",
    )
    parser.add_argument("-o", "--output", type=Path, metavar="PATH")
    add_run_flags(parser)

    args = arg_parser.parse_args(argv)
    return args


if __name__ == "__main__":
    sys.exit(main())
