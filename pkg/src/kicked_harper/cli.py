"""
kicked-harper command line.

Every command writes <prefix>.json (config echo, config hash and result)
plus its data files. Exit codes: 0 success or certified, 1 not certified or
verification mismatch, 2 usage error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from kicked_harper import __version__
from kicked_harper.commands import COMMANDS, run_command, verify_report
from kicked_harper.constants import EXIT_OK, EXIT_NOT_CERTIFIED, EXIT_USAGE, THREADS_ENV
from kicked_harper.errors import DegenerateParams, HarperError, NonpositiveAlpha
from kicked_harper.models import ModeLock, ResponseFormat, RunReport

logger = logging.getLogger(__name__)


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = text.split(":")
        return float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")


def _res(text: str) -> tuple[int, int]:
    try:
        nx, ny = text.lower().split("x")
        return int(nx), int(ny)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NXxNY, got {text!r}")


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _pair(text: str) -> tuple[int, int]:
    vals = _ints(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected two integers A,B, got {text!r}")
    return vals[0], vals[1]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        "kicked-harper",
        description="Numerical experiments for the kicked Harper family F = H_alpha o V_beta.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--verify", metavar="FILE", help="Re-run the report in FILE and compare its result.")
    parser.add_argument(
        "--log-level",
        default="warning",
        choices=["debug", "info", "warning", "error"],
        help="Logging level (default: warning).",
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Master seed (default 0).")
    common.add_argument("--prefix", default=None, help="Output path prefix (default 'harper').")
    common.add_argument(
        "--threads",
        type=int,
        default=None,
        help=f"Worker cap; falls back to {THREADS_ENV}, then the CPU count.",
    )
    common.add_argument(
        "--format",
        default=None,
        choices=[f.value for f in ResponseFormat],
        help="Printed summary format (default markdown).",
    )

    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("scan", parents=[common], help="Classify a parameter rectangle pixel by pixel.")
    p.add_argument("--alpha", type=_range, required=True, help="Alpha range LO:HI; write --alpha=-1:1 when LO is negative.")
    p.add_argument("--beta", type=_range, required=True, help="Beta range LO:HI; write --beta=-1:1 when LO is negative.")
    p.add_argument("--res", type=_res, default=None, help="Resolution NXxNY (default 64x64).")
    p.add_argument("--iters", type=int, default=None, help="Iterations per seed.")
    p.add_argument("--seeds", type=int, default=None, help="Seeds per pixel.")

    p = sub.add_parser("pixel", parents=[common], help="Classify a single parameter pair.")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--iters", type=int, default=None)
    p.add_argument("--seeds", type=int, default=None)

    p = sub.add_parser("rotset", parents=[common], help="Approximate the rotation set.")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--orbits", type=int, default=None, help="Seed orbits (default 256).")
    p.add_argument("--iters", type=int, default=None, help="Iterations per orbit (default 100000).")
    p.add_argument("--tol", type=float, default=None, help="Degenerate-axis width (default 1e-3).")

    p = sub.add_parser("certify", parents=[common], help="Half-plane confinement certificates.")
    p.add_argument("--which", choices=[m.value for m in ModeLock], default=None, help="Mode-locking check.")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--v", type=_pair, default=None, help="Line normal A,B.")
    p.add_argument("--u", type=_pair, default=None, help="Integer translation A,B.")
    p.add_argument("--c", type=float, default=None, help="Line offset.")
    p.add_argument("--power", type=int, default=None)
    p.add_argument("--step", type=float, default=None, help="Grid step (default 1e-6).")
    p.add_argument("--target", type=float, default=None, help="Override the bound <u, v>.")
    p.add_argument("--replay", metavar="FILE", default=None, help="Recompute the certificates in FILE.")

    p = sub.add_parser("betaplus", parents=[common], help="Upper estimates of the diffusion threshold in beta.")
    p.add_argument("--alpha", dest="alphas", type=float, nargs="+", required=True)
    p.add_argument("--steps", type=int, default=None, help="Bisection steps.")
    p.add_argument("--seeds", type=int, default=None)
    p.add_argument("--iters", type=int, default=None)
    p.add_argument("--ceiling", type=float, default=None, help="Ceiling as a multiple of (8/pi)/sqrt(alpha).")

    p = sub.add_parser("euler", parents=[common], help="Euler-scheme convergence to the flow of W.")
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--alphas", type=_floats, default=None, help="Comma-separated step sizes.")
    p.add_argument("--sample", type=int, default=None)

    p = sub.add_parser("nontwist", parents=[common], help="Non-twist rescaling experiments.")
    p.add_argument("--action", choices=["convergence", "conjecture"], default=None)
    p.add_argument("--alpha0", type=float, default=None)
    p.add_argument("--n-list", dest="n_list", type=_ints, default=None, help="Comma-separated shifts n.")
    p.add_argument("--n", type=int, default=None, help="Strip index for the conjecture scan.")
    p.add_argument("--res", type=_res, default=None)
    p.add_argument("--iters", type=int, default=None)
    p.add_argument("--seeds", type=int, default=None)

    p = sub.add_parser("fixedpoints", parents=[common], help="Local analysis at the four fixed points.")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)

    p = sub.add_parser("experiment", parents=[common], help="Experiments that report data without a target.")
    p.add_argument(
        "--kind",
        required=True,
        choices=["cusp", "monotonicity", "continuity", "drift", "mean_rotation"],
    )
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--alphas", type=_floats, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument(
        "--one-sided",
        dest="one_sided",
        action="store_true",
        default=None,
        help="Continuity: perturb only toward larger |alpha| and |beta|.",
    )
    p.add_argument("--iters", type=int, default=None)
    p.add_argument("--seeds", type=int, default=None)

    return parser


def _fields(model, args: argparse.Namespace) -> dict:
    return {k: v for k, v in vars(args).items() if k in model.model_fields and v is not None}


def _print(report: RunReport, fmt: ResponseFormat) -> None:
    if fmt is ResponseFormat.JSON:
        print(json.dumps({**report.to_dict(), "exit_code": report.exit_code}, indent=2))
    else:
        print(report.format_output())


def _write(report: RunReport, blobs: dict, prefix: str) -> None:
    for name, data in blobs.items():
        path = Path(name)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
    out = Path(prefix + ".json")
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info("wrote %s", ", ".join(report.files))


def _verify(path: str) -> int:
    try:
        ok, report = verify_report(path)
    except (OSError, KeyError, ValueError) as exc:
        print(f"kicked-harper: cannot verify {path}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"{path}: {'reproduced' if ok else 'MISMATCH'} (config hash {report.config_hash})")
    return EXIT_OK if ok else EXIT_NOT_CERTIFIED


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level.upper()),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    if args.verify:
        return _verify(args.verify)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    model, _ = COMMANDS[args.command]
    try:
        cfg = model.model_validate(_fields(model, args))
        report, blobs = run_command(args.command, cfg)
    except (ValueError, DegenerateParams, NonpositiveAlpha) as exc:
        # pydantic's ValidationError is a ValueError
        print(f"kicked-harper {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HarperError as exc:
        print(f"kicked-harper {args.command}: {exc}", file=sys.stderr)
        return EXIT_NOT_CERTIFIED

    if not getattr(cfg, "replay", None):
        _write(report, blobs, cfg.prefix)
    _print(report, cfg.format)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
