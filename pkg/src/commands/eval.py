"""
Berlab Eval Command

Evaluate one bound on operators and a kernel space read from spec files.
"""

import argparse

from src.commands.base_command import BaseCommand
from src.services.bounds import evaluate_bound
from src.services.schemas import ALL_BOUND_IDS, optimizer_config
from src.services.storage import load_operator, load_space


class EvalCommand(BaseCommand):
    name = 'eval'
    help = 'evaluate a single bound on given space and operator files'

    def configure(self, parser: argparse.ArgumentParser):
        parser.add_argument('--bound', required=True, help=f"one of {', '.join(ALL_BOUND_IDS)}")
        parser.add_argument('--space', required=True, help='kernel space spec file (JSON)')
        parser.add_argument('--op', required=True, help='operator spec file (JSON)')
        parser.add_argument('--second', help='second operator for B-SUM and B-SUM-ORTH')
        parser.add_argument('--tol', type=float, help='relative verdict tolerance')
        parser.add_argument('--json', action='store_true', help='print the evaluation as JSON')

    def run(self, args: argparse.Namespace) -> int:
        config = optimizer_config(self.config, tol=args.tol)
        second = load_operator(args.second) if args.second else None
        evaluation = evaluate_bound(args.bound, load_operator(args.op), load_space(args.space),
                                    second=second, config=config)
        if args.json:
            print(evaluation.model_dump_json(indent=2))
        else:
            print(self.renderer.render_evaluation(evaluation))
        return 0 if evaluation.satisfied else 1
