"""
DenseSub - Command-Line Application
===================================

Argument parsing and the glue between the command line, the configuration
file and the experiment runner.
"""

import argparse
import shlex
import sys
from fractions import Fraction

from ..constants import APP_NAME, APP_VERSION, COMMANDS, GENERATOR_KINDS, STRUCTURES
from ..core.config import config_manager
from ..core.errors import SpecError
from ..core.file_utils import parse_seed_range
from ..core.runner import ExperimentRunner, ExperimentSpec
from ..i18n import _ as translate
from ..i18n import language_manager


def parse_params(text):
    """'n=10,p=0.5' -> {'n': '10', 'p': '0.5'}; values stay strings for the generators."""
    params = {}
    for chunk in (text or "").split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        key, sep, value = chunk.partition("=")
        if not sep or not key.strip():
            raise SpecError(f"malformed parameter '{chunk}', expected key=value")
        params[key.strip()] = value.strip()
    return params


def build_parser():
    parser = argparse.ArgumentParser(prog=APP_NAME.lower(),
                                     description=translate("cli.description"),
                                     epilog=translate("cli.epilog"))
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {APP_VERSION}")
    parser.add_argument("command", choices=COMMANDS, help=translate("cli.help_command"))
    parser.add_argument("--in", dest="graph_source", help=translate("cli.help_in"))
    parser.add_argument("--out", dest="output", help=translate("cli.help_out"))
    parser.add_argument("--kind", choices=GENERATOR_KINDS, help=translate("cli.help_kind"))
    parser.add_argument("--params", default="", help=translate("cli.help_params"))
    parser.add_argument("--t", type=int, help=translate("cli.help_t"))
    parser.add_argument("--s", type=int, help=translate("cli.help_s"))
    parser.add_argument("--r", type=int, help=translate("cli.help_r"))
    parser.add_argument("--h", type=int, help=translate("cli.help_h"))
    parser.add_argument("--theta", type=int, help=translate("cli.help_theta"))
    parser.add_argument("--collision", type=int, help=translate("cli.help_collision"))
    parser.add_argument("--seed", type=int, help=translate("cli.help_seed"))
    parser.add_argument("--max-attempts", type=int, help=translate("cli.help_max_attempts"))
    parser.add_argument("--cap-aux", type=int, help=translate("cli.help_cap_aux"))
    parser.add_argument("--cap-hst-vertices", type=int,
                        help=translate("cli.help_cap_hst_vertices"))
    parser.add_argument("--cap-matchings", type=int, help=translate("cli.help_cap_matchings"))
    parser.add_argument("--mode", choices=["even", "odd"], default="even",
                        help=translate("cli.help_mode"))
    parser.add_argument("--structure", choices=["all"] + STRUCTURES, default="all",
                        help=translate("cli.help_structure"))
    parser.add_argument("--certificate", help=translate("cli.help_certificate"))
    parser.add_argument("--seeds", default="", help=translate("cli.help_seeds"))
    parser.add_argument("--constant", type=Fraction, default=Fraction(1),
                        help=translate("cli.help_constant"))
    parser.add_argument("--threads", type=int, help=translate("cli.help_threads"))
    return parser


def _pick(flag, key):
    """Flag > environment > INI file > defaults."""
    return flag if flag is not None else config_manager.get_int_setting(key)


def spec_from_args(args) -> ExperimentSpec:
    try:
        seeds = tuple(parse_seed_range(args.seeds)) if args.seeds else ()
    except ValueError as exc:
        raise SpecError(f"malformed --seeds '{args.seeds}': {exc}") from exc
    return ExperimentSpec(
        command=args.command,
        graph_source=args.graph_source,
        kind=args.kind,
        params=parse_params(args.params),
        t=args.t,
        s=args.s,
        r=args.r,
        h=args.h,
        theta=args.theta,
        collision=args.collision,
        seed=_pick(args.seed, "seed"),
        max_attempts=_pick(args.max_attempts, "max_attempts"),
        cap_aux=_pick(args.cap_aux, "cap_aux"),
        cap_hst_vertices=_pick(args.cap_hst_vertices, "cap_hst_vertices"),
        cap_matchings=_pick(args.cap_matchings, "cap_matchings"),
        mode=args.mode,
        structure=args.structure,
        output=args.output,
        certificate=args.certificate,
        seeds=seeds,
        constant=args.constant,
        threads=_pick(args.threads, "threads"),
    )


class CommandLineApp:
    """Parses one command line and hands it to the experiment runner."""

    def __init__(self, runner=None):
        language_manager.set_language(config_manager.get_language())
        self.parser = build_parser()
        self.runner = runner or ExperimentRunner()

    def run(self, argv=None, stdout=None, stderr=None):
        stdout = stdout or sys.stdout
        stderr = stderr or sys.stderr
        argv = list(sys.argv[1:] if argv is None else argv)
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)

        try:
            spec = spec_from_args(args)
        except SpecError as exc:
            stderr.write(translate("run.input_error", error=exc) + "\n")
            return 2

        result = self.runner.run(spec, display="densesub " + shlex.join(argv))
        if result.output:
            stdout.write(result.output)
        if result.error:
            stderr.write(result.error + "\n")
        return result.exit_code


def main(argv=None):
    """Main application entry point."""
    config_manager.ensure_file()
    return CommandLineApp().run(argv)
