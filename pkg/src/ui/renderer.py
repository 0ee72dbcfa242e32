"""
Berlab Report Renderer

Formats evaluations and reports as plain-text tables for the console.
"""

from typing import List, Sequence

from src.services.schemas import BoundEvaluation, LemmaReport, SuiteReport


class ReportRenderer:
    """Handles console formatting and provides consistent column layouts."""

    def __init__(self, precision: int = 6):
        self.precision = precision
        self.markers = {
            True: 'ok',
            False: 'FAIL',
        }

    def number(self, value) -> str:
        if value is None:
            return '-'
        return f"{value:.{self.precision}g}"

    def table(self, headers: Sequence[str], rows: List[Sequence[str]]) -> str:
        """Left-aligned columns separated by two spaces, with a rule under the header."""
        widths = [len(h) for h in headers]
        for row in rows:
            widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
        lines = ['  '.join(h.ljust(w) for h, w in zip(headers, widths)).rstrip(),
                 '  '.join('-' * w for w in widths)]
        lines.extend('  '.join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows)
        return '\n'.join(lines)

    def params(self, evaluation: BoundEvaluation) -> str:
        if not evaluation.params:
            return ''
        return ' '.join(f"{k}={self.number(v)}" for k, v in sorted(evaluation.params.items()))

    def render_evaluations(self, evaluations: Sequence[BoundEvaluation]) -> str:
        rows = [[e.bound_id, self.number(e.lhs), self.number(e.middle), self.number(e.rhs),
                 f"{e.slack:.3e}", self.markers[e.satisfied], self.params(e)]
                for e in evaluations]
        return self.table(('bound', 'lhs', 'middle', 'rhs', 'slack', 'verdict', 'params'), rows)

    def render_evaluation(self, evaluation: BoundEvaluation) -> str:
        text = self.render_evaluations([evaluation])
        if evaluation.details:
            text += '\n' + '\n'.join(f"  {k}: {self.number(v)}"
                                     for k, v in sorted(evaluation.details.items()))
        return text

    def render_suite(self, report: SuiteReport) -> str:
        rows = []
        for bound_id, summary in report.bounds.items():
            min_slack = '-' if summary.min_slack is None else f"{summary.min_slack:.3e}"
            rows.append([bound_id, str(summary.checked), str(summary.violations),
                         str(summary.errors), min_slack,
                         self.markers[summary.violations == 0 and summary.errors == 0]])
        header = (f"seed {report.config.seed}, {report.config.trials} trials, "
                  f"rng {report.rng}")
        table = self.table(('bound', 'checked', 'violations', 'errors', 'min slack', 'verdict'),
                           rows)
        return f"{header}\n{table}\n{report.total_failures} failures"

    def render_lemmas(self, report: LemmaReport) -> str:
        rows = [[name, str(s.checked), str(s.violations), f"{s.worst_violation:.3e}",
                 self.markers[s.violations == 0]]
                for name, s in report.lemmas.items()]
        return self.table(('lemma', 'checked', 'violations', 'worst', 'verdict'), rows)

    def render_shell_summary(self, count: int, path: str) -> str:
        return f"{count} shell points written to {path}"
