"""Main entry point for the hermblock command-line tool."""
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from src.core.exceptions import HermblockError
from src.core.models import GeneratorConfig, RunReport, VerifyOptions
from src.core.orchestrator import Orchestrator
from src.ui.console_ui import ConsoleUI, configure_logging
from src.utils.cli_parser import create_parser, parse_function, parse_splits
from src.utils.config import Config

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2


def run_command(args, console_ui: ConsoleUI) -> int:
    """
    Dispatch one parsed command and return its exit code.

    Args:
        args: Parsed CLI arguments
        console_ui: Console UI instance
    """
    orchestrator = Orchestrator(console_ui=console_ui, output_dir=Path(args.output_dir) if args.output_dir else None)

    if args.command == "decompose":
        report = orchestrator.run_decompose(
            kind=args.kind,
            input_path=Path(args.input),
            beta=args.beta,
            n=args.n,
            pad=args.pad,
            structured=args.structured,
            probes=args.probes,
            seed=args.seed,
            out=Path(args.out) if args.out else None,
        )
    elif args.command == "verify":
        options = VerifyOptions(
            force=args.force,
            tol=args.tol,
            function=parse_function(args.function),
            p=args.p,
            k=args.k,
            splits=parse_splits(args.splits),
            mode=args.mode,
        )
        report = orchestrator.run_verify(
            args.check,
            [Path(p) for p in args.inputs],
            options,
            beta=args.beta,
            n=args.n,
            jobs=args.jobs,
        )
    elif args.command == "generate":
        cfg = GeneratorConfig(
            seed=args.seed,
            beta=args.beta,
            n=args.n,
            method=args.method,
            k=args.k,
            normalize=args.normalize,
            max_iter=args.max_iter,
        )
        report = orchestrator.run_generate(cfg, out=Path(args.out) if args.out else None)
    elif args.command == "search":
        cfg = GeneratorConfig(
            seed=args.seed,
            beta=2,
            n=args.n,
            budget=args.budget,
            steps=args.steps,
            hermitian_only=args.hermitian_only,
        )
        report = orchestrator.run_search(cfg, run_self_test=args.self_test, out=Path(args.out) if args.out else None)
    else:
        return EXIT_INPUT

    _emit(report, args, orchestrator, console_ui)
    if args.command == "verify" and not report.passed:
        return EXIT_VIOLATION
    return EXIT_OK


def _emit(report: RunReport, args, orchestrator: Orchestrator, console_ui: ConsoleUI) -> None:
    console_ui.display_run(report)
    path = orchestrator.output_manager.save_report(report, Path(args.report) if args.report else None)
    console_ui.display_success(f"report saved to {path}")


def main(argv=None) -> int:
    """Main entry point."""
    parser = create_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_INPUT

    configure_logging(verbose=args.verbose, quiet=args.quiet)
    Config.load_config(Path(args.config) if args.config else None)
    if args.tol is not None:
        Config.TOL_CERT = args.tol

    console_ui = ConsoleUI(verbose=not args.quiet)
    try:
        return run_command(args, console_ui)
    except HermblockError as e:
        logger.debug("command failed: %s %s", type(e).__name__, e.details)
        console_ui.display_error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except ValidationError as e:
        console_ui.display_error(f"invalid arguments: {e.errors()[0]['msg']}")
        return EXIT_INPUT
    except KeyboardInterrupt:
        console_ui.display_warning("\nInterrupted by user")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
