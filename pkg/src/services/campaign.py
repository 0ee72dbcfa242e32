"""
Berlab Campaign

Randomized verification campaigns over the bound registry. Each trial draws a
kernel space, an operator A, a random partner B for the sum bound and an
orthogonal partner for the orthogonal-sum bound, then evaluates every
selected bound. Evaluator errors are recorded, never fatal.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from src.core.kernel_space import KernelSpace
from src.core.operator import Operator, is_normal
from src.errors import BerlabError
from src.services.bounds import NORMALITY_TOL, BoundContext
from src.services.sampling import (orthogonal_partner, random_operator, random_space,
                                   trial_rng, trial_seed)
from src.services.schemas import (ALL_BOUND_IDS, BoundEvaluation, BoundId, BoundSummary,
                                  FailureRecord, InstanceProvenance, SlackInstance,
                                  SuiteConfig, SuiteReport)

logger = logging.getLogger(__name__)


@dataclass
class Instance:
    """One drawn trial instance."""

    trial: int
    seed: int
    space_kind: str
    space: Optional[KernelSpace] = None
    operator: Optional[Operator] = None
    second: Optional[Operator] = None
    partner: Optional[Operator] = None


@dataclass
class Outcome:
    """Result of one (bound, trial) pair: an evaluation or an error message."""

    bound_id: str
    instance: Instance
    evaluation: Optional[BoundEvaluation] = None
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None or not self.evaluation.satisfied


def _pairs(matrix: np.ndarray) -> List:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.atleast_2d(matrix)]


def provenance(instance: Instance, bound_id: str) -> InstanceProvenance:
    """Serializable record of the instance, enough to replay it offline."""
    space, operator = instance.space, instance.operator
    second = None
    if bound_id == BoundId.SUM.value:
        second = instance.second
    elif bound_id == BoundId.SUM_ORTH.value:
        second = instance.partner
    return InstanceProvenance(
        trial=instance.trial,
        seed=instance.seed,
        space_kind=instance.space_kind,
        labels=[] if space is None else [(z.real, z.imag) for z in space.points],
        gram=None if space is None or space.gram is None else _pairs(space.gram),
        kernels=[] if space is None else _pairs(space.kernels),
        operator=[] if operator is None else _pairs(operator.entries),
        second_operator=None if second is None else _pairs(second.entries),
    )


def draw_instance(config: SuiteConfig, trial: int) -> Instance:
    """Draw the space and operators of one trial from its own stream."""
    rng = trial_rng(config.seed, trial)
    kind = config.kernel_kinds[int(rng.integers(len(config.kernel_kinds)))]
    instance = Instance(trial, trial_seed(config.seed, trial), kind)
    instance.space = random_space(rng, kind, config.dims, config.omega_sizes)
    dim = instance.space.dim
    instance.operator, op_kind = random_operator(rng, dim)
    instance.second, _ = random_operator(rng, dim)
    instance.partner = orthogonal_partner(instance.operator, rng)
    logger.debug(f"Trial {trial}: {kind} space n={dim} m={instance.space.size}, A {op_kind}")
    return instance


def run_trial(config: SuiteConfig, trial: int) -> List[Outcome]:
    """Evaluate every selected bound on one trial."""
    seed = trial_seed(config.seed, trial)
    try:
        instance = draw_instance(config, trial)
    except BerlabError as e:
        logger.warning(f"Trial {trial}: instance draw failed: {e}")
        instance = Instance(trial, seed, 'unknown')
        return [Outcome(b, instance, error=f"{type(e).__name__}: {e}") for b in config.bounds]

    evaluation_config = config.evaluation_config()
    context = BoundContext(instance.operator, instance.space, evaluation_config,
                           instance.second, seed)
    orth_context = None
    normal = is_normal(instance.operator, NORMALITY_TOL)

    outcomes = []
    for bound_id in config.bounds:
        if bound_id == BoundId.RMK_NORMAL.value and not normal:
            continue
        try:
            if bound_id == BoundId.SUM_ORTH.value:
                if orth_context is None:
                    orth_context = BoundContext(instance.operator, instance.space,
                                                evaluation_config, instance.partner, seed)
                evaluation = orth_context.evaluate(bound_id)
            else:
                evaluation = context.evaluate(bound_id)
        except (BerlabError, ValueError, np.linalg.LinAlgError) as e:
            logger.warning(f"Trial {trial}: {bound_id} raised {type(e).__name__}: {e}")
            outcomes.append(Outcome(bound_id, instance, error=f"{type(e).__name__}: {e}"))
            continue
        if not evaluation.satisfied:
            logger.warning(f"Trial {trial}: {bound_id} violated, slack {evaluation.slack:.3e}")
        outcomes.append(Outcome(bound_id, instance, evaluation))
    return outcomes


def aggregate(config: SuiteConfig, outcomes: List[Outcome]) -> SuiteReport:
    """Fold outcomes into a report; the result does not depend on outcome order."""
    order = {bound_id: idx for idx, bound_id in enumerate(ALL_BOUND_IDS)}
    outcomes = sorted(outcomes, key=lambda o: (order[o.bound_id], o.instance.trial))

    summaries: Dict[str, BoundSummary] = {b: BoundSummary() for b in config.bounds}
    failures = []
    for outcome in outcomes:
        summary = summaries[outcome.bound_id]
        if outcome.error is not None:
            summary.errors += 1
        else:
            evaluation = outcome.evaluation
            summary.checked += 1
            if not evaluation.satisfied:
                summary.violations += 1
                summary.worst_violation = max(summary.worst_violation, -evaluation.slack)
            if summary.min_slack is None or evaluation.slack < summary.min_slack:
                summary.min_slack = evaluation.slack
                summary.min_slack_instance = SlackInstance(
                    trial=outcome.instance.trial, seed=outcome.instance.seed,
                    params=evaluation.params)
        if outcome.failed:
            failures.append(FailureRecord(
                bound_id=outcome.bound_id,
                trial=outcome.instance.trial,
                evaluation=outcome.evaluation,
                error=outcome.error,
                provenance=provenance(outcome.instance, outcome.bound_id),
            ))
    return SuiteReport(config=config, bounds=summaries, failures=failures)


def run_suite(config: SuiteConfig) -> SuiteReport:
    """
    Run a randomized verification campaign.

    Trials run on ``config.workers`` threads; each trial uses its own derived
    random stream, so the report is a deterministic function of the config.

    Args:
        config: Validated suite configuration.

    Returns:
        SuiteReport: Per-bound summaries and full failure records.
    """
    logger.info(f"Starting campaign: seed={config.seed}, trials={config.trials}, "
                f"bounds={len(config.bounds)}, workers={config.workers}")
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        per_trial = list(pool.map(lambda t: run_trial(config, t), range(config.trials)))
    report = aggregate(config, [o for outcomes in per_trial for o in outcomes])

    for bound_id, summary in report.bounds.items():
        logger.info(f"{bound_id}: checked={summary.checked} violations={summary.violations} "
                    f"errors={summary.errors}")
    logger.info(f"Campaign finished with {report.total_failures} failures")
    return report
