"""
Command-line interface of the toolkit.
"""
from .base import BaseCommand, CommandParser
from .exceptions import CommandError
from .models import DatasetParams, ExperimentConfig, ExperimentTask
from .runner import build_parser, execute_from_command_line

__all__ = [
    "BaseCommand",
    "CommandError",
    "CommandParser",
    "DatasetParams",
    "ExperimentConfig",
    "ExperimentTask",
    "build_parser",
    "execute_from_command_line",
]
