# modules/commands.py
"""
Command runner behind main.py: one thin adapter per command, each turning a
RunConfig into a file (and a short rich summary on the console).
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

from rich.console import Console
from rich.panel import Panel

from config.config_manager import HARD_MAX_ENUMERATION_N, HARD_MAX_MOMENT_ORDER
from core.errors import ConfigError, OrderCapError
from core.fock import gaussian_moment, inner_block_moment, partition_sum_moment
from core.hierarchy import INFINITY, Depth, depth_label, format_float, format_fraction
from core.intervals import SupportProfile
from core.partitions import enumerate_onc, onc_census
from core.poisson import poisson_series
from core.representation import DEFAULT_DENSE_LIMIT, DEFAULT_MAX_BASIS
from core.spectra import atoms, density_grid, measure_summary, moment_table
from core.states import DEFAULT_CLT_MAX_ORDER, AlgebraRegistry, SymbolicMarginal, WordExpr, WordEvaluator, expand

from .tables import (
    atom_frame,
    census_frame,
    density_frame,
    moment_frame,
    partition_record,
    poisson_frame,
    poisson_values_frame,
    show,
    value_frame,
    write_csv,
    write_json,
    write_json_lines,
)
from .verification import SUITES, Verifier, VerifySettings

logger = logging.getLogger(__name__)

TABLE_LEVELS: Sequence[Depth] = (1, 2, 3, 4, INFINITY)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_ERROR = 2


class Command(Enum):
    ENUMERATE = "enumerate"
    MOMENTS = "moments"
    DENSITY = "density"
    ATOMS = "atoms"
    POISSON = "poisson"
    FOCK_MOMENT = "fock-moment"
    STATE_EVAL = "state-eval"
    VERIFY = "verify"


class OutputFormat(Enum):
    CSV = "csv"
    JSON = "json"


@dataclass
class RunConfig:
    """Everything one command invocation needs."""
    command: Command
    m: Optional[Depth] = None
    n: Optional[int] = None
    max_order: int = 10
    lam: Optional[Fraction] = None
    profile: Optional[str] = None
    word: Optional[str] = None
    out: Optional[Path] = None
    output_dir: Path = Path("results")
    format: OutputFormat = OutputFormat.CSV
    seed: int = 20240607
    suites: List[str] = field(default_factory=lambda: ["all"])
    points: int = 401
    margin: float = 0.25
    registry: Optional[Path] = None
    max_k: int = 4
    word_length: int = 6
    profile_count: int = 200
    pairs: bool = False
    parallel: bool = False
    record_timings: bool = True
    float_digits: int = 17
    max_enumeration_n: int = HARD_MAX_ENUMERATION_N
    max_moment_order: int = HARD_MAX_MOMENT_ORDER
    poisson_max_order: int = HARD_MAX_MOMENT_ORDER
    clt_max_order: int = DEFAULT_CLT_MAX_ORDER
    max_basis: int = DEFAULT_MAX_BASIS
    dense_matrix_limit: int = DEFAULT_DENSE_LIMIT

    def validate(self):
        """Check caps and command-specific requirements."""
        if self.max_enumeration_n > HARD_MAX_ENUMERATION_N:
            raise ConfigError(f"enumeration cap {self.max_enumeration_n} exceeds the hard limit {HARD_MAX_ENUMERATION_N}")
        if max(self.max_moment_order, self.poisson_max_order) > HARD_MAX_MOMENT_ORDER:
            raise ConfigError(f"moment order cap exceeds the hard limit {HARD_MAX_MOMENT_ORDER}")
        if self.command is Command.ENUMERATE:
            if self.n is None or self.m is None:
                raise ConfigError("enumerate needs --n and --m")
            if not 1 <= self.n <= self.max_enumeration_n:
                raise OrderCapError(f"enumeration size n={self.n} outside [1, {self.max_enumeration_n}]")
        if self.command in (Command.MOMENTS, Command.POISSON):
            cap = self.max_moment_order if self.command is Command.MOMENTS else self.poisson_max_order
            if not 0 <= self.max_order <= cap:
                raise OrderCapError(f"order {self.max_order} outside [0, {cap}]")
        if self.command is Command.POISSON and (self.m is None or self.m is INFINITY):
            raise ConfigError("poisson needs a finite --m")
        if self.command in (Command.DENSITY, Command.ATOMS) and self.m is None:
            raise ConfigError(f"{self.command.value} needs --m")
        if self.command is Command.DENSITY and self.points < 2:
            raise ConfigError("density needs at least 2 grid points")
        if self.command is Command.FOCK_MOMENT and (self.profile is None or self.m is None):
            raise ConfigError("fock-moment needs --profile and --m")
        if self.command is Command.STATE_EVAL and (self.word is None or self.m is None):
            raise ConfigError("state-eval needs --word and --m")
        if self.command is Command.VERIFY:
            unknown = [s for s in self.suites if s != "all" and s not in SUITES]
            if unknown:
                raise ConfigError(f"unknown suite(s) {', '.join(unknown)}")
            if not 1 <= self.max_k <= 4 or not 1 <= self.word_length <= 8:
                raise ConfigError("verify needs 1 <= --max-k <= 4 and 1 <= --len <= 8")


class CommandRunner:
    """Dispatches a RunConfig to its command handler."""

    def __init__(self, config: RunConfig, console: Optional[Console] = None):
        self.config = config
        self.console = console or Console()
        self.handlers = {
            Command.ENUMERATE: self.cmd_enumerate,
            Command.MOMENTS: self.cmd_moments,
            Command.DENSITY: self.cmd_density,
            Command.ATOMS: self.cmd_atoms,
            Command.POISSON: self.cmd_poisson,
            Command.FOCK_MOMENT: self.cmd_fock_moment,
            Command.STATE_EVAL: self.cmd_state_eval,
            Command.VERIFY: self.cmd_verify,
        }

    def run(self) -> int:
        self.config.validate()
        logger.debug("running %s with %s", self.config.command.value, self.config)
        return self.handlers[self.config.command]()

    def _target(self, stem: str, suffix: Optional[str] = None) -> Path:
        if self.config.out is not None:
            return Path(self.config.out)
        suffix = suffix or self.config.format.value
        return self.config.output_dir / f"{stem}.{suffix}"

    def _done(self, path: Path):
        self.console.print(f"[green]✓ wrote {path}[/green]")

    def cmd_enumerate(self) -> int:
        c = self.config
        label = depth_label(c.m)
        if c.format is OutputFormat.JSON:
            records = (partition_record(P, c.m) for P in enumerate_onc(c.n, c.m, pairs_only=c.pairs))
            path = write_json_lines(records, self._target(f"onc_n{c.n}_m{label}", "jsonl"))
        else:
            if c.pairs:
                census = {c.n // 2: sum(1 for _ in enumerate_onc(c.n, c.m, pairs_only=True))} if c.n % 2 == 0 else {}
            else:
                census = onc_census(c.n, c.m)
            frame = census_frame(c.n, c.m, census)
            show(self.console, frame, f"ONC census n={c.n} m={label}")
            path = write_csv(frame, self._target(f"onc_census_n{c.n}_m{label}"))
        self._done(path)
        return EXIT_OK

    def cmd_moments(self) -> int:
        c = self.config
        levels = TABLE_LEVELS if c.m is None else (c.m,)
        orders = range(2, c.max_order + 1, 2)
        frame = moment_frame(moment_table(levels, orders), c.float_digits)
        show(self.console, frame, "Central limit moments", limit=len(frame))
        if c.format is OutputFormat.JSON:
            path = write_json(frame.to_dict(orient="records"), self._target("clt_moments"))
        else:
            path = write_csv(frame, self._target("clt_moments"))
        self._done(path)
        return EXIT_OK

    def cmd_density(self) -> int:
        c = self.config
        label = depth_label(c.m)
        frame = density_frame(c.m, density_grid(c.m, c.points, c.margin), c.float_digits)
        path = write_csv(frame, self._target(f"density_m{label}", "csv"))
        atoms_path = path.with_name(f"{path.stem}_atoms.csv")
        write_csv(atom_frame(c.m, atoms(c.m), c.float_digits), atoms_path)
        self._done(path)
        self._done(atoms_path)
        return EXIT_OK

    def cmd_atoms(self) -> int:
        c = self.config
        summary = measure_summary(c.m)
        frame = atom_frame(c.m, summary.atoms, c.float_digits)
        show(self.console, frame, f"Atoms of the m={depth_label(c.m)} law")
        self.console.print(
            f"continuous mass {format_float(summary.continuous_mass(), c.float_digits)}, "
            f"total mass {format_float(summary.total_mass(), c.float_digits)}"
        )
        if c.format is OutputFormat.JSON:
            path = write_json(frame.to_dict(orient="records"), self._target(f"atoms_m{depth_label(c.m)}"))
        else:
            path = write_csv(frame, self._target(f"atoms_m{depth_label(c.m)}"))
        self._done(path)
        return EXIT_OK

    def cmd_poisson(self) -> int:
        c = self.config
        series = poisson_series(c.m, c.max_order, max_order=c.poisson_max_order)
        if c.lam is not None:
            frame = poisson_values_frame(series, c.lam, c.float_digits)
        else:
            frame = poisson_frame(series)
        show(self.console, frame, f"Poisson moments m={c.m}")
        if c.format is OutputFormat.JSON:
            path = write_json(frame.to_dict(orient="records"), self._target(f"poisson_m{c.m}"))
        else:
            path = write_csv(frame, self._target(f"poisson_m{c.m}"))
        self._done(path)
        return EXIT_OK

    def cmd_fock_moment(self) -> int:
        c = self.config
        profile = SupportProfile.parse(c.profile)
        if len(profile) > c.max_enumeration_n:
            raise OrderCapError(f"profile length {len(profile)} exceeds the enumeration cap {c.max_enumeration_n}")
        value = gaussian_moment(c.m, profile)
        routes = {
            "partition_sum": partition_sum_moment(c.m, profile),
            "inner_block": inner_block_moment(c.m, profile),
        }
        disagreeing = []
        for name, other in routes.items():
            if other != value:
                logger.warning("%s route gives %s, Fock calculus gives %s", name, other, value)
                disagreeing.append(f"{name}={format_fraction(other)}")
        frame = value_frame(
            [{
                "m": depth_label(c.m),
                "profile": str(profile),
                "moment": format_fraction(value),
                "float": format_float(float(value), c.float_digits),
            }],
            ["m", "profile", "moment", "float"],
        )
        self.console.print(Panel(f"{format_fraction(value)}  ({format_float(float(value), c.float_digits)})",
                                 title=f"Fock moment m={depth_label(c.m)}", expand=False))
        if c.format is OutputFormat.JSON:
            path = write_json(frame.to_dict(orient="records"), self._target("fock_moment"))
        else:
            path = write_csv(frame, self._target("fock_moment"))
        self._done(path)
        if disagreeing:
            self.console.print(f"[bold red]routes disagree with {format_fraction(value)}: "
                               f"{', '.join(disagreeing)}[/bold red]")
            return EXIT_VERIFY_FAILED
        return EXIT_OK

    def cmd_state_eval(self) -> int:
        c = self.config
        word = WordExpr.parse(c.word)
        if c.registry is not None:
            marginals = AlgebraRegistry.load(c.registry)
        else:
            marginals = {index: SymbolicMarginal(index) for index in sorted(set(word.indices()))}
        value = WordEvaluator(marginals, c.m).evaluate(word)
        try:
            rendered = format_fraction(value)
        except TypeError:
            rendered = str(expand(value))
        frame = value_frame([{"m": depth_label(c.m), "word": str(word), "value": rendered}], ["m", "word", "value"])
        self.console.print(Panel(rendered, title=f"phi({word}) at m={depth_label(c.m)}", expand=False))
        if c.format is OutputFormat.JSON:
            path = write_json(frame.to_dict(orient="records"), self._target("state_eval"))
        else:
            path = write_csv(frame, self._target("state_eval"))
        self._done(path)
        return EXIT_OK

    def cmd_verify(self) -> int:
        c = self.config
        settings = VerifySettings(
            c.seed, c.profile_count, c.max_k, c.word_length,
            clt_max_order=c.clt_max_order, max_basis=c.max_basis, dense_limit=c.dense_matrix_limit,
        )
        report = Verifier(settings, parallel=c.parallel).run(c.suites)
        path = write_json(report.to_dict(timings=c.record_timings), self._target("verify_report", "json"))
        for result in report.results:
            mark = "[green]PASS[/green]" if result.passed else "[bold red]FAIL[/bold red]"
            self.console.print(f"{mark} {result.suite} / {result.name}: {result.detail}")
        self._done(path)
        if not report.passed:
            self.console.print(f"[bold red]{len(report.failures())} of {len(report.results)} checks failed[/bold red]")
            return EXIT_VERIFY_FAILED
        self.console.print(f"[bold green]all {len(report.results)} checks passed[/bold green]")
        return EXIT_OK
