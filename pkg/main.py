# monohier/main.py
import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from rich.console import Console
from rich.logging import RichHandler

# To ensure that the core and modules packages can be found, we add the project root to the Python path.
project_root = Path(__file__).parent.resolve()
sys.path.insert(0, str(project_root))

from config.config_manager import ConfigManager
from core.errors import ConfigError, MonoHierError
from core.hierarchy import parse_depth
from modules.commands import (
    EXIT_ERROR,
    Command,
    CommandRunner,
    OutputFormat,
    RunConfig,
)

console = Console()
logger = logging.getLogger("monohier")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monohier",
        description="Exact and numeric computations for the monotone hierarchy between monotone and free probability.",
    )
    parser.add_argument("command", choices=[c.value for c in Command], help="what to compute")
    parser.add_argument("--m", type=str, default=None, help="hierarchy level: positive integer or 'inf'")
    parser.add_argument("--n", type=int, default=None, help="ground set size for enumerate")
    parser.add_argument("--max-order", type=int, default=None, help="highest moment order (moments, poisson)")
    parser.add_argument("--lambda", dest="lam", type=str, default=None, help="rational Poisson rate, e.g. 1/2")
    parser.add_argument("--profile", type=str, default=None, help="support profile, e.g. '0:1,0:1,1:2,1:2'")
    parser.add_argument("--word", type=str, default=None, help="word such as 'a1 a2 a1' or 'c(a1) u2 a1^2'")
    parser.add_argument("--out", type=Path, default=None, help="output file (default: under [OUTPUT] output_dir)")
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], default=None)
    parser.add_argument("--seed", type=int, default=None, help="seed of the randomised verification corpora")
    parser.add_argument("--suite", action="append", default=None,
                        help="verification suite (repeatable): partitions, moments, spectra, poisson, states, fock, clt, all")
    parser.add_argument("--points", type=int, default=None, help="density grid points")
    parser.add_argument("--margin", type=float, default=None, help="density grid margin beyond the support")
    parser.add_argument("--registry", type=Path, default=None, help="JSON or YAML algebra registry for state-eval")
    parser.add_argument("--max-k", type=int, default=None, help="largest pair count in the fock suite")
    parser.add_argument("--len", dest="word_length", type=int, default=None, help="longest word in the states suite")
    parser.add_argument("--pairs", action="store_true", help="enumerate pair partitions only")
    parser.add_argument("--parallel", action="store_true", help="run verification checks in parallel")
    parser.add_argument("--no-timings", action="store_true", help="leave timings out of the verify report")
    parser.add_argument("--config", type=Path, default=None, help="alternative INI file")
    parser.add_argument("--log-level", type=str, default=None, help="DEBUG, INFO, WARNING or ERROR")
    return parser


def setup_logging(level: str):
    numeric = logging.getLevelName(level.upper())
    if not isinstance(numeric, int):
        raise ConfigError(f"unknown log level {level!r}")
    logging.basicConfig(
        level=numeric,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), rich_tracebacks=True, show_path=False)],
        force=True,
    )


def _pick(value, fallback):
    return fallback if value is None else value


def build_run_config(args: argparse.Namespace, settings: ConfigManager) -> RunConfig:
    """Merge command-line flags over the INI settings."""
    limits = settings.limits()
    command = Command(args.command)
    default_order = limits.poisson_max_order if command is Command.POISSON else limits.max_moment_order
    try:
        lam = Fraction(args.lam) if args.lam is not None else None
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"--lambda must be a rational number, got {args.lam!r}") from None
    return RunConfig(
        command=command,
        m=parse_depth(args.m) if args.m is not None else None,
        n=args.n,
        max_order=_pick(args.max_order, default_order),
        lam=lam,
        profile=args.profile,
        word=args.word,
        out=args.out,
        output_dir=settings.output_dir(),
        format=OutputFormat(_pick(args.format, settings.get("OUTPUT", "default_format", "csv"))),
        seed=_pick(args.seed, settings.get_int("VERIFY", "seed", 20240607)),
        suites=args.suite or ["all"],
        points=_pick(args.points, settings.get_int("DENSITY", "points", 401)),
        margin=_pick(args.margin, settings.get_float("DENSITY", "margin", 0.25)),
        registry=args.registry,
        max_k=_pick(args.max_k, settings.get_int("VERIFY", "max_k", 4)),
        word_length=_pick(args.word_length, settings.get_int("VERIFY", "word_length", 6)),
        profile_count=settings.get_int("VERIFY", "profile_count", 200),
        pairs=args.pairs,
        parallel=args.parallel,
        record_timings=not args.no_timings and settings.get_boolean("VERIFY", "record_timings", True),
        float_digits=settings.get_int("OUTPUT", "float_digits", 17),
        max_enumeration_n=limits.max_enumeration_n,
        max_moment_order=limits.max_moment_order,
        poisson_max_order=limits.poisson_max_order,
        clt_max_order=limits.clt_max_order,
        max_basis=limits.max_basis,
        dense_matrix_limit=limits.dense_matrix_limit,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parses the command line, runs one command and returns its exit code:
    0 on success, 1 when verification fails, 2 on configuration, input or I/O errors.
    """
    args = build_parser().parse_args(argv)
    try:
        settings = ConfigManager(args.config)
        setup_logging(args.log_level or settings.get("SYSTEM", "log_level", "INFO"))
        config = build_run_config(args, settings)
        logger.debug("settings read from %s", settings.config_file)
        return CommandRunner(config, console).run()
    except (MonoHierError, ValueError) as e:
        console.print(f"[bold red]Error: {e}[/bold red]")
        return EXIT_ERROR
    except OSError as e:
        console.print(f"[bold red]I/O error: {e}[/bold red]")
        return EXIT_ERROR


if __name__ == "__main__":
    # This block ensures the code only runs when the script is executed directly
    # (e.g., `python main.py`) and not when imported as a module.
    sys.exit(main())
