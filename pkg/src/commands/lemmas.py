"""
Berlab Lemmas Command

Randomized checks of the auxiliary lemmas.
"""

import argparse

from src.commands.base_command import BaseCommand
from src.errors import ConfigError
from src.services.lemmas import run_lemma_suite
from src.services.storage import write_report


class LemmasCommand(BaseCommand):
    name = 'lemmas'
    help = 'check the auxiliary lemmas on random draws'

    def configure(self, parser: argparse.ArgumentParser):
        parser.add_argument('--seed', type=int, default=None, help='campaign seed')
        parser.add_argument('--trials', type=int, default=1000, help='draws per lemma')
        parser.add_argument('--tol', type=float, default=None, help='relative tolerance')
        parser.add_argument('--out', help='also write the JSON report here')

    def run(self, args: argparse.Namespace) -> int:
        suite = self.config.get('suite', {})
        seed = args.seed if args.seed is not None else suite.get('seed', 0)
        tol = args.tol if args.tol is not None else suite.get('tol', 1e-9)
        if args.trials < 1 or tol <= 0 or not 0 <= seed < 2 ** 64:
            raise ConfigError(f"need trials >= 1, tol > 0 and a 64-bit seed, got "
                              f"trials={args.trials}, tol={tol}, seed={seed}")
        report = run_lemma_suite(seed=seed, trials=args.trials, tol=tol)
        if args.out:
            write_report(args.out, report)
        print(self.renderer.render_lemmas(report))
        return 0 if report.total_violations == 0 else 1
