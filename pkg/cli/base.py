"""
Base class for commands: argument declaration, dataset loading helpers and
error-to-exit-code mapping.
"""
import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Dict, Optional, TextIO

from config import settings
from diagrams.models import DiagramDataset
from diagrams.serializers import read_dataset

from .exceptions import EXIT_VALIDATION, CommandError

logger = logging.getLogger(__name__)


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting on usage errors."""

    def error(self, message: str):
        raise CommandError(f"{self.prog}: {message}", EXIT_VALIDATION)


def p_value(text: str) -> float:
    """Wasserstein exponent from the command line: a number >= 1 or 'inf'."""
    value = math.inf if text.lower() in ("inf", "infinity") else float(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"p must be >= 1 or inf, got {text}")
    return value


def existing_path(text: str) -> Path:
    path = Path(text)
    if not path.exists():
        raise argparse.ArgumentTypeError(f"{text} does not exist")
    return path


class BaseCommand:
    """
    A subcommand. Subclasses set ``help``, declare flags in ``add_arguments``
    and do their work in ``handle``, which receives the parsed options.
    """

    help = ""

    def __init__(self, stdout: Optional[TextIO] = None):
        self.stdout = stdout or sys.stdout

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        pass

    def add_common_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--seed", type=int, default=None, help="Seed (falls back to PERSFORMER_SEED)")
        parser.add_argument("--jobs", type=int, default=settings.jobs, help="Worker processes")

    def create_parser(self, prog: str, subparsers=None) -> argparse.ArgumentParser:
        if subparsers is not None:
            parser = subparsers.add_parser(prog, help=self.help, description=self.help)
        else:
            parser = CommandParser(prog=prog, description=self.help)
        self.add_common_arguments(parser)
        self.add_arguments(parser)
        parser.set_defaults(command=self)
        return parser

    def handle(self, **options) -> None:
        raise NotImplementedError("subclasses of BaseCommand must provide a handle() method")

    @staticmethod
    def seed(options: Dict[str, Any]) -> int:
        if options.get("seed") is not None:
            return int(options["seed"])
        if settings.seed is not None:
            return int(settings.seed)
        logger.warning("No seed given; using 0")
        return 0

    @staticmethod
    def load_dataset(path: Path) -> DiagramDataset:
        if not Path(path).is_dir():
            raise CommandError(f"Dataset directory {path} does not exist")
        return read_dataset(path)

    def write(self, text: str) -> None:
        self.stdout.write(text + "\n")

    def write_json(self, payload: Dict[str, Any]) -> None:
        self.write(json.dumps(payload, sort_keys=True, default=str))
