"""
DenseSub - Experiment Runner
============================

Executes one experiment (a CLI command with its parameters) against the
library, writes its artifacts and appends a record to the log file.
"""

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime
from fractions import Fraction

from .config import config_manager
from .counting import (count_bicliques, count_cherries_and_c4, count_h1t, count_hst,
                       count_spiders, count_stars, count_t_matchings, h1t_bound_check,
                       CountReport)
from .errors import (CapExceededError, CertificateFormatError, DenseSubError, GraphError,
                     GraphFormatError, PreconditionError, RegularizationError,
                     SelectionError, SpecError, SplitExhaustedError)
from .exponent import erdos_renyi_exponent, materialize_family, proposition_exponent
from .extraction import MODES, Certificate, certify, extract
from .file_utils import format_csv, read_text, write_text
from .goodness import build_aux, classify_goodness, goodness_mass_check
from .graph import Graph, bipartite_half, dump_graph, generate, load_graph, side_a_first
from .regularization import regularize, spider_vs_h1t_report
from .splitting import prepare_split, split_with_retries
from ..constants import (BENCH_COLUMNS, CAP_AUX, CAP_HST_VERTICES, CAP_MATCHINGS, COMMANDS,
                         COUNT_COLUMNS, GENERATOR_KINDS, LOG_FILE, OUTCOMES, SPLIT_COLUMNS,
                         STRUCTURES)
from ..i18n import _

# Commands that read a host graph from --in or a generator
GRAPH_COMMANDS = {"count", "goodness", "split", "extract", "regularize", "verify", "bench"}

FAMILY_SEPARATOR = "---"

# Input problems exit with 2; everything else a command can raise exits with 1
INPUT_ERRORS = (SpecError, GraphFormatError, CertificateFormatError, GraphError,
                PreconditionError, OSError, ValueError)
RUN_FAILURES = (CapExceededError, SplitExhaustedError, RegularizationError, SelectionError)


@dataclass
class ExperimentSpec:
    """
    One experiment, as parsed from the command line.

    Args:
        command (str): one of COMMANDS
        graph_source (str): edge-list path; the family file for exponent
        kind (str): generator kind used when graph_source is empty
        params (dict): generator parameters
        output (str): artifact path, stdout when empty
    """

    command: str
    graph_source: str | None = None
    kind: str | None = None
    params: dict = field(default_factory=dict)
    t: int | None = None
    s: int | None = None
    r: int | None = None
    h: int | None = None
    theta: int | None = None
    collision: int | None = None
    seed: int = 0
    max_attempts: int = 20
    cap_aux: int = CAP_AUX
    cap_hst_vertices: int = CAP_HST_VERTICES
    cap_matchings: int = CAP_MATCHINGS
    mode: str = "even"
    structure: str = "all"
    output: str | None = None
    certificate: str | None = None
    seeds: tuple = ()
    constant: Fraction = Fraction(1)
    threads: int = 1

    @property
    def depth(self) -> int:
        return self.h if self.h is not None else self.r

    def validate(self):
        """Raise SpecError for anything the invoked operation would reject."""
        def need(name, minimum=1):
            value = getattr(self, name)
            if value is None:
                raise SpecError(f"{self.command} needs --{name.replace('_', '-')}")
            if value < minimum:
                raise SpecError(f"--{name.replace('_', '-')} must be at least {minimum}")

        if self.command not in COMMANDS:
            raise SpecError(f"unknown command '{self.command}'")
        if self.mode not in MODES:
            raise SpecError(f"unknown mode '{self.mode}'")
        if self.kind is not None and self.kind not in GENERATOR_KINDS:
            raise SpecError(f"unknown generator kind '{self.kind}'")
        if self.max_attempts < 0:
            raise SpecError("--max-attempts must be non-negative")
        if self.cap_aux < 1:
            raise SpecError("--cap-aux must be positive")
        if self.cap_hst_vertices < 1 or self.cap_matchings < 1:
            raise SpecError("--cap-hst-vertices and --cap-matchings must be positive")
        if self.collision is not None and self.collision < 1:
            raise SpecError("--collision must be positive")
        if self.threads < 1:
            raise SpecError("threads must be positive")
        if self.seed < 0 or self.seed >= 2 ** 64 or any(not 0 <= s < 2 ** 64 for s in self.seeds):
            raise SpecError("seeds must be 64-bit non-negative integers")

        if self.command == "gen" and self.kind is None:
            raise SpecError("gen needs --kind")
        if self.command in GRAPH_COMMANDS and not (self.graph_source or self.kind):
            raise SpecError(f"{self.command} needs --in or --kind")

        if self.command == "count":
            if self.structure != "all" and self.structure not in STRUCTURES:
                raise SpecError(f"unknown structure '{self.structure}'")
            need("t")
            if self.structure == "h_st":
                need("s")
        elif self.command in ("goodness", "split"):
            need("t")
            need("h" if self.h is not None else "r")
            if self.command == "split":
                need("theta")
        elif self.command in ("extract", "bench"):
            need("t", 2 if self.mode == "even" else 1)
            need("r")
            need("theta")
        elif self.command == "verify":
            if not self.certificate:
                raise SpecError("verify needs --certificate")
        elif self.command == "regularize":
            if self.t is not None:
                need("t", 2)
        elif self.command == "exponent":
            if not self.graph_source and not {"d", "m"} <= set(self.params):
                raise SpecError("exponent needs --in or --params d=..,m=..")


@dataclass(frozen=True)
class RunResult:
    exit_code: int
    output: str
    error: str = ""


@dataclass(frozen=True)
class BenchRow:
    n: int
    m: int
    t: int
    r: int
    seed: int
    outcome: str
    certificate_order: int | None
    certificate_min_or_avg_degree: object
    certificate_radius: object
    wall_time_ms: int

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise ValueError(f"unknown bench outcome '{self.outcome}'")

    def to_csv_row(self):
        return [self.n, self.m, self.t, self.r, self.seed, self.outcome, self.certificate_order,
                self.certificate_min_or_avg_degree, self.certificate_radius, self.wall_time_ms]


def load_source(spec: ExperimentSpec, seed: int | None = None) -> Graph:
    if spec.graph_source:
        return load_graph(read_text(spec.graph_source))
    return generate(spec.kind, spec.params, spec.seed if seed is None else seed)


def load_family(text: str) -> list:
    """Edge-list graphs separated by '---' lines."""
    blocks, current = [], []
    for line in text.splitlines():
        if line.strip() == FAMILY_SEPARATOR:
            blocks.append(current)
            current = []
        else:
            current.append(line)
    blocks.append(current)
    return [load_graph("\n".join(block)) for block in blocks
            if any(line.strip() and not line.lstrip().startswith("#") for line in block)]


def bench_row(spec: ExperimentSpec) -> BenchRow:
    """One extraction run; failures become outcomes, never exceptions."""
    G = load_source(spec)
    started = time.perf_counter()
    result = extract(G, spec.t, spec.r, spec.theta, spec.mode, spec.seed,
                     spec.max_attempts, spec.collision, spec.cap_aux)
    elapsed = int((time.perf_counter() - started) * 1000)
    order = degree = radius = None
    if result.report is not None and result.report.measured is not None:
        measured = result.report.measured
        order = result.report.order
        degree = measured.min_degree if spec.mode == "even" else measured.avg_degree
        radius = measured.radius
    return BenchRow(G.n, G.e, spec.t, spec.r, spec.seed, result.outcome, order, degree,
                    radius, elapsed)


class ExperimentRunner:
    """Runs experiments and records each one in the log file."""

    def __init__(self, enable_logging=None, log_file=None):
        if enable_logging is None:
            enable_logging = config_manager.get_bool_setting("log")
        self.enable_logging = enable_logging
        self.log_file = log_file or config_manager.get_setting("log_file", LOG_FILE)

    def run(self, spec: ExperimentSpec, display=None) -> RunResult:
        """
        Execute an experiment spec and return (exit code, stdout text, stderr text).

        Args:
            spec (ExperimentSpec): the validated experiment
            display (str): command line shown in the log record
        """
        try:
            spec.validate()
            handler = getattr(self, f"_run_{spec.command}")
            result = handler(spec)
        except INPUT_ERRORS as exc:
            result = RunResult(2, "", _("run.input_error", error=exc))
        except (RUN_FAILURES + (DenseSubError,)) as exc:
            result = RunResult(1, "", _("run.failure", error=exc))
        except Exception as exc:
            result = RunResult(1, "", _("run.unexpected", error=exc))

        if self.enable_logging:
            self._save_to_log(display or spec.command, result.output, result.error)
        return result

    def _emit(self, spec, text, message=""):
        """Artifacts go to --out when given, otherwise to stdout."""
        if spec.output:
            write_text(spec.output, text)
            lines = [message, _("run.written", path=spec.output)]
            return "\n".join(line for line in lines if line) + "\n"
        return text + (f"# {message}\n" if message else "")

    def _run_gen(self, spec):
        G = generate(spec.kind, spec.params, spec.seed)
        if G.bipartition is not None:
            G = side_a_first(G)
        message = _("gen.done", kind=spec.kind, n=G.n, m=G.e)
        return RunResult(0, self._emit(spec, dump_graph(G), message))

    def _count_reports(self, G, spec):
        t = spec.t
        wanted = STRUCTURES if spec.structure == "all" else [spec.structure]
        bipartite_only = {"cherry_A", "cherry_B", "c4", "h_1t"}
        reports = []
        cherries = None
        for structure in wanted:
            if structure in bipartite_only and G.bipartition is None:
                if spec.structure == "all":
                    continue
                G.require_bipartition()
            if structure == "star_t":
                reports.append(CountReport(structure, t, G.n, G.e, count_stars(G, t), None, False))
            elif structure == "biclique_tt":
                reports.append(count_bicliques(G, t, spec.cap_aux))
            elif structure == "t_matching":
                reports.append(count_t_matchings(G, t))
            elif structure in ("cherry_A", "cherry_B", "c4"):
                cherries = cherries or count_cherries_and_c4(G)
                value = {"cherry_A": cherries.w_a, "cherry_B": cherries.w_b,
                         "c4": cherries.c4}[structure]
                reports.append(CountReport(structure, t, G.n, G.e, value, None, False))
            elif structure == "h_1t":
                found = count_h1t(G, t, spec.cap_matchings)
                check = h1t_bound_check(G, t, found.incidence_count)
                reports.append(CountReport(structure, t, G.n, G.e, found.incidence_count,
                                           check.bound, check.hypotheses_met))
            elif structure == "spider_t":
                reports.append(CountReport(structure, t, G.n, G.e, count_spiders(G, t), None, False))
            elif structure == "h_st":
                if spec.s is None:
                    continue
                copies = count_hst(G, spec.s, t, spec.cap_hst_vertices)
                reports.append(CountReport(structure, t, G.n, G.e, copies, None, False))
        return reports

    def _run_count(self, spec):
        G = load_source(spec)
        reports = self._count_reports(G, spec)
        violated = [r.structure for r in reports if not r.holds]
        summary = [f"bound_violations {','.join(violated) or 'none'}"]
        text = format_csv(COUNT_COLUMNS, [r.to_csv_row() for r in reports], summary)
        return RunResult(1 if violated else 0, self._emit(spec, text))

    def _host_for(self, G, spec):
        if spec.mode == "odd" and G.bipartition is None:
            return bipartite_half(G, spec.seed)
        return G

    def _run_goodness(self, spec):
        G = load_source(spec)
        host = self._host_for(G, spec)
        kind = "biclique_aux" if spec.mode == "even" else "htt_aux"
        aux = build_aux(host, spec.t, kind, spec.cap_aux)
        table = classify_goodness(aux, spec.depth)
        mass = goodness_mass_check(aux, spec.depth)
        summary = [f"threshold {table.threshold}",
                   f"bad_degree_sums {' '.join(str(s) for s in table.bad_degree_sums)}",
                   f"nested {int(table.is_nested())} induction {int(table.induction_holds())} "
                   f"mass {int(mass.passes)}"]
        text = format_csv(table.csv_columns(), table.to_csv_rows(aux.structures), summary)
        return RunResult(0, self._emit(spec, text))

    def _run_split(self, spec):
        G = load_source(spec)
        host = self._host_for(G, spec)
        context = prepare_split(host, spec.t, spec.depth, spec.mode, spec.cap_aux)
        try:
            partition, validation = split_with_retries(host, spec.t, spec.depth, spec.theta,
                                                       spec.mode, spec.max_attempts, spec.seed,
                                                       context, spec.cap_aux)
        except SplitExhaustedError as exc:
            rows = [[d.attempt, d.seed, d.failing_records, d.min_family_size, int(d.has_top)]
                    for d in exc.diagnostics]
            text = format_csv(["attempt", "seed", "failing_records", "min_family_size",
                               "has_top"], rows)
            return RunResult(1, text, _("split.exhausted", attempts=exc.attempts))

        table = format_csv(SPLIT_COLUMNS, validation.to_csv_rows(),
                           [f"top_color {validation.top_color}"])
        message = _("split.passed", attempts=partition.attempts_used,
                    size=validation.min_family_size)
        if spec.output:
            write_text(spec.output, partition.to_text())
            return RunResult(0, table + f"# {message}\n# {_('run.written', path=spec.output)}\n")
        return RunResult(0, table + f"# {message}\n")

    def _run_extract(self, spec):
        G = load_source(spec)
        result = extract(G, spec.t, spec.r, spec.theta, spec.mode, spec.seed,
                         spec.max_attempts, spec.collision, spec.cap_aux)
        if result.certificate is None:
            return RunResult(1, "", _("extract.failed", outcome=result.outcome))
        message = _("extract.certified", summary=result.report.summary())
        return RunResult(0, self._emit(spec, result.certificate.to_text(), message))

    def _run_verify(self, spec):
        G = load_source(spec)
        certificate = Certificate.from_text(read_text(spec.certificate))
        report = certify(G, certificate)
        if report.passed:
            return RunResult(0, _("verify.passed", summary=report.summary()) + "\n")
        return RunResult(1, "", _("verify.failed", failures=",".join(report.failures),
                                  summary=report.summary()))

    def _run_regularize(self, spec):
        G = load_source(spec)
        result = regularize(G)
        message = _("regularize.done", i=result.i, j=result.j, a=len(result.a_prime),
                    b=len(result.b_prime), e=result.e_prime)
        text = result.to_text()
        if spec.t is not None:
            report = spider_vs_h1t_report(result, spec.t, spec.constant,
                                          spec.cap_matchings)
            ratio = "undefined" if report.ratio is None else report.ratio
            text += (f"# h1t {report.h1t_incidences} spiders {report.spiders} ratio {ratio} "
                     f"hypothesis_met {int(report.hypothesis_met)}\n")
        return RunResult(0, self._emit(spec, text, message))

    def _run_exponent(self, spec):
        lines = []
        if spec.graph_source:
            family = load_family(read_text(spec.graph_source))
        else:
            family = materialize_family(Fraction(spec.params["d"]), int(spec.params["m"]))
        result = erdos_renyi_exponent(family)
        lines.append(_("exponent.result", gamma=result.gamma))
        lines.append(_("exponent.details", c=result.c_exponent,
                       bound=result.lower_bound_exponent, index=result.member_index))
        if {"d", "m"} <= set(spec.params):
            value = proposition_exponent(Fraction(spec.params["d"]), int(spec.params["m"]))
            lines.append(_("exponent.proposition", value=value))
        return RunResult(0, self._emit(spec, "\n".join(lines) + "\n"))

    def _run_bench(self, spec):
        sweep = [replace(spec, command="extract", seed=seed) for seed in spec.seeds]
        for item in sweep:
            item.validate()
        rows = self.bench(sweep, spec.threads)
        text = format_csv(BENCH_COLUMNS, [row.to_csv_row() for row in rows],
                          bench_summary(rows) if rows else None)
        return RunResult(0, self._emit(spec, text))

    def bench(self, sweep, threads=1) -> list:
        """One BenchRow per spec, in spec order regardless of completion order."""
        if not sweep:
            return []
        workers = max(1, min(threads, len(sweep)))
        if workers == 1:
            return [bench_row(item) for item in sweep]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(bench_row, sweep))

    def _save_to_log(self, display, output, error):
        """Save command execution details to log file."""
        try:
            log_time = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
            directory = os.path.dirname(os.path.abspath(self.log_file))
            os.makedirs(directory, exist_ok=True)
            with open(self.log_file, "a", encoding="utf-8") as f:
                f.write(f"[{log_time}]\n=== Command ===\n{display}\n")
                f.write("=== Output ===\n" + (output or "[No output]") + "\n")
                if error:
                    f.write("=== Error ===\n" + error + "\n")
                f.write("\n")
        except OSError:
            pass  # Silent fail for logging


def bench_summary(rows) -> list:
    counts = {outcome: 0 for outcome in OUTCOMES}
    for row in rows:
        counts[row.outcome] += 1
    lines = [_("bench.summary", runs=len(rows), certified=counts["certified"])]
    lines.append(" ".join(f"{name} {count}" for name, count in counts.items()))
    return lines
