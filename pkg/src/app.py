"""
Berlab Main Application

Command-table driven CLI for Berezin-type operator functionals and their
inequalities.
"""

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

import argparse
import json
import logging
from typing import List, Optional

from src.commands.check import CheckCommand
from src.commands.eval import EvalCommand
from src.commands.fixtures import FixturesCommand
from src.commands.lemmas import LemmasCommand
from src.commands.shell import ShellCommand
from src.errors import BerlabError
from src.ui.renderer import ReportRenderer

logger = logging.getLogger('berlab')

CONFIG_PATH = os.path.join(os.path.dirname(__file__), '..', 'config', 'app_config.json')

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_INPUT_ERROR = 2


def load_config(path: str = CONFIG_PATH) -> dict:
    """Load app_config.json; a missing or broken file falls back to built-in defaults."""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except Exception as e:
        logger.warning(f"Error loading config {path}: {e}; using defaults")
        return {}


def setup_logging(level: str = 'INFO'):
    """One stderr handler with timestamped records."""
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter('[%(asctime)s] %(name)s: %(message)s',
                                           datefmt='%Y-%m-%d %H:%M:%S'))
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(getattr(logging, str(level).upper(), logging.INFO))


def build_parser(commands: dict) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='berlab', description=__doc__.strip().splitlines()[0])
    parser.add_argument('--config', default=CONFIG_PATH, help='path to app_config.json')
    parser.add_argument('--log-level', help='logging level (overrides the config file)')
    subparsers = parser.add_subparsers(dest='command', required=True)
    for name, command in commands.items():
        command.configure(subparsers.add_parser(name, help=command.help))
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main application entry point."""
    # Config path and log level come first so every command sees the same settings
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument('--config', default=CONFIG_PATH)
    pre.add_argument('--log-level')
    known, _ = pre.parse_known_args(argv)

    setup_logging(known.log_level or 'INFO')
    config = load_config(known.config)
    setup_logging(known.log_level or config.get('logging', {}).get('level', 'INFO'))

    renderer = ReportRenderer()
    commands = {
        command.name: command
        for command in (CheckCommand(config, renderer), ShellCommand(config, renderer),
                        FixturesCommand(config, renderer), EvalCommand(config, renderer),
                        LemmasCommand(config, renderer))
    }

    parser = build_parser(commands)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT_ERROR

    try:
        return commands[args.command].run(args)
    except BerlabError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
