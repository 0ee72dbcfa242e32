"""
Berlab Shell Command

Export the Davis-Wielandt-Berezin shell of an operator as CSV.
"""

import argparse

from src.commands.base_command import BaseCommand
from src.core.berezin import dwber_shell
from src.services.storage import load_operator, load_space, write_shell_csv


class ShellCommand(BaseCommand):
    name = 'shell'
    help = 'export the Davis-Wielandt-Berezin shell as CSV'

    def configure(self, parser: argparse.ArgumentParser):
        parser.add_argument('--space', required=True, help='kernel space spec file (JSON)')
        parser.add_argument('--op', required=True, help='operator spec file (JSON)')
        parser.add_argument('--out', required=True, help='CSV output path')

    def run(self, args: argparse.Namespace) -> int:
        shell = dwber_shell(load_operator(args.op), load_space(args.space))
        write_shell_csv(args.out, shell)
        print(self.renderer.render_shell_summary(len(shell), args.out))
        return 0
