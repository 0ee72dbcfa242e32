"""
Berlab Fixtures Command

Replay the fixtures with known exact values.
"""

import argparse
import logging

from src.commands.base_command import BaseCommand
from src.errors import FixtureMismatch
from src.services.fixtures import fixture_names, replay_fixture
from src.services.schemas import optimizer_config

logger = logging.getLogger(__name__)


class FixturesCommand(BaseCommand):
    name = 'fixtures'
    help = 'replay fixtures and assert their exact values'

    def configure(self, parser: argparse.ArgumentParser):
        parser.add_argument('--name', choices=fixture_names(),
                            help='replay only this fixture (default: all)')

    def run(self, args: argparse.Namespace) -> int:
        config = optimizer_config(self.config)
        names = [args.name] if args.name else fixture_names()
        status = 0
        for name in names:
            print(f"== {name}")
            try:
                evaluations = replay_fixture(name, config)
            except FixtureMismatch as e:
                logger.error(str(e))
                status = 1
                continue
            print(self.renderer.render_evaluations(evaluations))
            if not all(e.satisfied for e in evaluations):
                status = 1
        return status
