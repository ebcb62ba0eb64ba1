"""
Entry point: parse the subcommand, configure logging and map failures to exit codes.
"""
import logging
import sys
from typing import List, Optional, TextIO

from config import settings
from utils.log_setup import configure_logging

from .base import CommandParser
from .commands import COMMAND_MODULES, load_command_class
from .exceptions import EXIT_OK, EXIT_RUNTIME, EXIT_VALIDATION, CommandError

logger = logging.getLogger(__name__)


def build_parser(stdout: Optional[TextIO] = None) -> CommandParser:
    parser = CommandParser(prog="persformer", description="Persformer toolkit")
    parser.add_argument("--log-level", default=settings.log_level)
    parser.add_argument("--plain-logs", action="store_true", help="Human-readable instead of JSON logs")
    subparsers = parser.add_subparsers(dest="command_name", metavar="command", required=True)
    for name in COMMAND_MODULES:
        load_command_class(name)(stdout=stdout).create_parser(name, subparsers)
    return parser


def execute_from_command_line(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """
    Run one command and return the process exit code.

    0 on success, 1 on validation errors (bad flags, invalid config or input),
    2 on any other failure.
    """
    argv = sys.argv[1:] if argv is None else argv
    try:
        options = vars(build_parser(stdout).parse_args(argv))
    except CommandError as exc:
        sys.stderr.write(f"{exc}\n")
        return exc.exit_code
    except SystemExit as exc:
        return int(exc.code or 0)

    plain = options.pop("plain_logs")
    configure_logging(options.pop("log_level"), json_lines=settings.log_json and not plain)
    command = options.pop("command")
    name = options.pop("command_name")
    try:
        command.handle(**options)
    except CommandError as exc:
        logger.error(f"{name}: {exc}")
        return exc.exit_code
    except ValueError as exc:
        logger.error(f"{name}: {exc}")
        return EXIT_VALIDATION
    except Exception as exc:
        logger.exception(f"{name} failed: {exc}")
        return EXIT_RUNTIME
    return EXIT_OK
