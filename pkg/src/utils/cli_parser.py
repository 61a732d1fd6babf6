"""CLI argument parser for hermblock."""
import argparse
from typing import List, Optional

from pydantic import ValidationError

from src.core.exceptions import ParameterError
from src.core.models import ConcaveFunctionSpec, GeneratorMethod

DECOMPOSITION_KINDS = ["pinch", "two-block", "clifford"]
CHECK_NAMES = [
    "hiroshima",
    "eigen-step",
    "eigen-avg",
    "rearrange",
    "trace-concave",
    "scalar-sandwich",
    "determinant",
    "nielsen-kempe",
    "norm-bound",
]


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--tol",
        type=float,
        help="Certificate tolerance tol_cert (default: 1e-8 or config.yaml)"
    )
    common.add_argument(
        "--output-dir",
        default=None,
        help="Output directory (default: output)"
    )
    common.add_argument(
        "--report",
        help="Run report path (default: <output-dir>/<command>_report.json)"
    )
    common.add_argument(
        "--config",
        help="Path to config.yaml"
    )
    common.add_argument(
        "--quiet",
        action="store_true",
        help="Quiet mode (summary lines only)"
    )
    common.add_argument(
        "-v", "--verbose",
        action="store_true",
        help="Debug logging"
    )
    return common


def _layout_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--beta", type=int, help="Block count for plain matrix files")
    parser.add_argument("--n", type=int, help="Block side for plain matrix files")


def create_parser() -> argparse.ArgumentParser:
    """Create and configure CLI argument parser."""
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="hermblock",
        description="Isometric decompositions and spectral certificates for PSD block matrices",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Decompose a 2 x 2 Hermitian-block matrix
  hermblock decompose two-block samples/all_ones_scalar.json

  # Clifford decomposition of a three-block input, padded to four blocks
  hermblock decompose clifford samples/three_blocks.json --pad

  # Forced majorization check outside the Hermitian-block class
  hermblock verify hiroshima samples/rank_one_control.json --force

  # Deterministic instance
  hermblock generate --method separable --seed 42 --out instance.json
        """
    )

    subparsers = parser.add_subparsers(dest="command", help="Command to execute")

    # Decompose command
    decompose_parser = subparsers.add_parser("decompose", parents=[common], help="Decompose a PSD block matrix")
    decompose_parser.add_argument("kind", choices=DECOMPOSITION_KINDS, help="Construction to run")
    decompose_parser.add_argument("input", help="Matrix JSON file")
    _layout_options(decompose_parser)
    decompose_parser.add_argument(
        "--pad",
        action="store_true",
        help="Pad the block count to the next power of two (clifford)"
    )
    decompose_parser.add_argument(
        "--structured",
        action="store_true",
        help="Lazy isometries verified on probe vectors (clifford; required for beta = 8)"
    )
    decompose_parser.add_argument(
        "--probes",
        type=int,
        default=20,
        help="Probe vectors for structured verification (default: 20)"
    )
    decompose_parser.add_argument("--seed", type=int, default=0, help="Probe seed (default: 0)")
    decompose_parser.add_argument("--out", help="Decomposition JSON path")

    # Verify command
    verify_parser = subparsers.add_parser("verify", parents=[common], help="Certify an inequality")
    verify_parser.add_argument("check", choices=CHECK_NAMES, help="Inequality to certify")
    verify_parser.add_argument("inputs", nargs="+", help="Input JSON file(s)")
    _layout_options(verify_parser)
    verify_parser.add_argument(
        "--force",
        action="store_true",
        help="Evaluate even when the hypothesis fails; report is labelled accordingly"
    )
    verify_parser.add_argument(
        "--f",
        dest="function",
        help="Concave function name[:params], e.g. sqrt, power:0.5, affine:0,1"
    )
    verify_parser.add_argument("--p", type=float, default=float("inf"), help="Schatten exponent (default: inf)")
    verify_parser.add_argument("--k", type=int, help="Index k for eigen-avg")
    verify_parser.add_argument("--splits", help="Comma-separated k_1..k_beta for eigen-avg")
    verify_parser.add_argument(
        "--mode",
        choices=["norms", "eigensteps"],
        default="norms",
        help="Rearrangement comparison mode (default: norms)"
    )
    verify_parser.add_argument("--jobs", type=int, default=1, help="Parallel workers across input files")

    # Generate command
    generate_parser = subparsers.add_parser("generate", parents=[common], help="Write a seeded instance")
    generate_parser.add_argument(
        "--method",
        choices=[m.value for m in GeneratorMethod],
        default=GeneratorMethod.SEPARABLE.value,
        help="Generator (default: separable)"
    )
    generate_parser.add_argument("--seed", type=int, default=0, help="64-bit seed (default: 0)")
    generate_parser.add_argument("--beta", type=int, default=2, help="Block count, family size or n_H (default: 2)")
    generate_parser.add_argument("--n", type=int, default=2, help="Block side or n_F (default: 2)")
    generate_parser.add_argument("--k", type=int, default=2, help="Tensor terms (default: 2)")
    generate_parser.add_argument("--normalize", action="store_true", help="Trace-one separable state")
    generate_parser.add_argument("--max-iter", type=int, help="Projection iteration cap")
    generate_parser.add_argument("--out", help="Output JSON path")

    # Search command
    search_parser = subparsers.add_parser("search", parents=[common], help="Search normal-block instances with ||H|| > ||A+B||")
    search_parser.add_argument("--budget", type=int, default=100, help="Random restarts (default: 100)")
    search_parser.add_argument("--seed", type=int, default=0, help="64-bit seed (default: 0)")
    search_parser.add_argument("--n", type=int, default=3, help="Block side (default: 3)")
    search_parser.add_argument("--steps", type=int, help="Hill-climb steps per restart")
    search_parser.add_argument(
        "--hermitian-only",
        action="store_true",
        help="Restrict X to Hermitian normal matrices"
    )
    search_parser.add_argument(
        "--self-test",
        action="store_true",
        help="Replay the evaluator on the rank-one control instance"
    )
    search_parser.add_argument("--out", help="Path for the best instance when its gap is positive")

    return parser


def parse_splits(text: Optional[str]) -> Optional[List[int]]:
    """'0,2' -> [0, 2]."""
    if text is None:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ParameterError(f"invalid --splits '{text}': {e}") from e


def parse_function(text: Optional[str]) -> Optional[ConcaveFunctionSpec]:
    """Catalog lookup; names outside the catalog are parameter errors."""
    if text is None:
        return None
    try:
        return ConcaveFunctionSpec.parse(text)
    except (ValidationError, ValueError) as e:
        raise ParameterError(f"invalid concave function '{text}': {e}") from e
