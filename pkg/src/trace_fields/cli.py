"""
Command line interface for Trace Fields.

Every analysis subcommand reads a GroupFile (a path or ``-`` for stdin) and
writes a ReportFile to stdout or ``--out``. Exit codes: 0 success, 1 domain
error (the report carries its tag), 2 usage or parse error.
"""

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from pydantic import ValidationError

from . import __version__
from .config import configure_logging, settings
from .corpus import CORPORA, build_corpus
from .errors import TraceFieldError
from .formats import GroupFile
from .services.analysis_service import AnalysisService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE = 2

ANALYSIS_COMMANDS = {
    "validate": "check every generator against the form and determinant",
    "classify": "classify each generator (loxodromic, elliptic, parabolic)",
    "trace-field": "sample traces over short words and test reality",
    "invariant-field": "sample traces of cubes (invariant trace field)",
    "normalize": "normalize the first two generators (A loxodromic, B)",
    "realize": "conjugate into matrices over the trace field",
    "so21": "conjugate into SO(2,1) when the trace field is real",
    "detect": "R-Fuchsian / C-Fuchsian verdict",
    "find-lox": "search for a loxodromic word",
}


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write_text(text: str, out: str) -> None:
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")
        sys.stdout.flush()


def cmd_analysis(args: argparse.Namespace) -> int:
    try:
        group_file = GroupFile.model_validate_json(_read_text(args.input))
    except OSError as e:
        print(f"error: cannot read {args.input}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as e:
        print(f"error: invalid group file {args.input}:\n{e}", file=sys.stderr)
        return EXIT_USAGE

    overrides = {
        "eps_form": args.eps_form,
        "eps_class": args.eps_class,
        "eps_field": args.eps_field,
        "max_length": args.max_length,
        "assume_discrete": args.assume_discrete,
    }
    report = AnalysisService().run(args.cmd, group_file, seed=args.seed, overrides=overrides)
    _write_text(report.model_dump_json(indent=2), args.out)
    if not report.ok:
        print(f"error: {report.error.tag}: {report.error.message}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR
    return EXIT_OK


def cmd_corpus(args: argparse.Namespace) -> int:
    try:
        corpus = build_corpus(args.name, args.seed)
    except TraceFieldError as e:
        print(f"error: {e.tag}: {e}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR
    group_file = GroupFile.from_matrices(
        corpus.generators,
        assumed_discrete=corpus.assumed_discrete,
        max_length=args.max_length,
    )
    logger.info(f"Corpus {corpus.name}: {corpus.description}")
    _write_text(group_file.model_dump_json(indent=2), args.out)
    return EXIT_OK


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="trace-fields",
        description="Trace fields, normal forms and Fuchsian detection for SU(2,1) groups",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True)

    for name, help_text in ANALYSIS_COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--in", dest="input", required=True, help="GroupFile path, or - for stdin")
        p.add_argument("--out", default="", help="ReportFile path (default: stdout)")
        p.add_argument("--seed", type=int, default=settings.RANDOM_SEED)
        p.add_argument("--max-length", type=int, choices=range(1, 13), metavar="[1-12]")
        p.add_argument("--eps-form", type=_positive_float)
        p.add_argument("--eps-class", type=_positive_float)
        p.add_argument("--eps-field", type=_positive_float)
        p.add_argument(
            "--assume-discrete",
            action="store_true",
            help="assert discreteness (overrides the file flag when set)",
        )
        p.set_defaults(func=cmd_analysis)

    c = sub.add_parser("corpus", help="emit a named test group as a GroupFile")
    c.add_argument("--name", required=True, choices=sorted(CORPORA))
    c.add_argument("--seed", type=int, default=settings.RANDOM_SEED)
    c.add_argument("--max-length", type=int, choices=range(1, 13), metavar="[1-12]")
    c.add_argument("--out", default="")
    c.set_defaults(func=cmd_corpus)
    return ap


def cli_main(argv: Sequence[str] | None = None) -> int:
    configure_logging()
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    return args.func(args)


def main() -> None:
    raise SystemExit(cli_main())


if __name__ == "__main__":
    main()
