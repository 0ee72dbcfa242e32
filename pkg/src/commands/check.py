"""
Berlab Check Command

Randomized verification campaign over the bound registry.
"""

import argparse
import logging

from src.commands.base_command import BaseCommand
from src.services.campaign import run_suite
from src.services.schemas import suite_config
from src.services.storage import report_json, write_failure_specs, write_report

logger = logging.getLogger(__name__)


def _int_list(text: str):
    return tuple(int(v) for v in text.split(',') if v.strip())


def _str_list(text: str):
    return tuple(v.strip() for v in text.split(',') if v.strip())


class CheckCommand(BaseCommand):
    """Run a campaign and emit a SuiteReport."""

    name = 'check'
    help = 'verify every selected bound on random instances'

    def configure(self, parser: argparse.ArgumentParser):
        parser.add_argument('--seed', type=int, help='campaign seed (64-bit unsigned)')
        parser.add_argument('--trials', type=int, help='number of random instances')
        parser.add_argument('--dims', type=_int_list, help='comma-separated dimensions')
        parser.add_argument('--omega', type=_int_list, dest='omega_sizes',
                            help='comma-separated point-set sizes')
        parser.add_argument('--kernels', type=_str_list, dest='kernel_kinds',
                            help='comma-separated kernel kinds')
        parser.add_argument('--bounds', type=_str_list, help='comma-separated bound ids')
        parser.add_argument('--tol', type=float, help='relative verdict tolerance')
        parser.add_argument('--workers', type=int, help='worker threads')
        parser.add_argument('--out', help='write the JSON report here instead of stdout')
        parser.add_argument('--failures-dir',
                            help='write space/operator spec files for each failure here')

    def run(self, args: argparse.Namespace) -> int:
        config = suite_config(self.config, seed=args.seed, trials=args.trials, dims=args.dims,
                              omega_sizes=args.omega_sizes, kernel_kinds=args.kernel_kinds,
                              bounds=args.bounds, tol=args.tol, workers=args.workers)
        report = run_suite(config)

        if args.out:
            write_report(args.out, report)
            print(self.renderer.render_suite(report))
        else:
            print(report_json(report), end='')
        if args.failures_dir and report.failures:
            write_failure_specs(args.failures_dir, report)
        return 0 if report.total_failures == 0 else 1
