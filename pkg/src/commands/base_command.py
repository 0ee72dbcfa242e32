"""
Berlab Base Command Class

Abstract base class for all CLI subcommands.
"""

import argparse
from abc import ABC, abstractmethod

from src.ui.renderer import ReportRenderer


class BaseCommand(ABC):
    """Base class for every berlab subcommand."""

    name = ''
    help = ''

    def __init__(self, config: dict, renderer: ReportRenderer):
        self.config = config
        self.renderer = renderer

    @abstractmethod
    def configure(self, parser: argparse.ArgumentParser):
        """
        Declare the subcommand's arguments.

        Args:
            parser (ArgumentParser): Subparser owned by this command.
        """
        pass

    @abstractmethod
    def run(self, args: argparse.Namespace) -> int:
        """
        Execute the subcommand.

        Args:
            args (Namespace): Parsed command-line arguments.

        Returns:
            int: Process exit code.
        """
        pass
