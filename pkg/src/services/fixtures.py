"""
Berlab Fixtures

Small instances with known exact values. Replaying a fixture evaluates every
applicable bound and asserts the recorded expectations.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from src.core.kernel_space import KernelSpace, build_szego, orthonormal_space
from src.core.operator import Operator, is_normal
from src.errors import FixtureMismatch, UnknownFixture
from src.services.bounds import NORMALITY_TOL, BoundContext
from src.services.schemas import ALL_BOUND_IDS, BoundEvaluation, BoundId, OptimizerConfig

logger = logging.getLogger(__name__)

FIXTURE_TOL = 1e-9

# (bound id, field, details key or None, expected value)
Expectation = Tuple[str, str, Optional[str], float]


@dataclass(frozen=True)
class Fixture:
    name: str
    description: str
    space: Callable[[], KernelSpace]
    operator: Callable[[KernelSpace], Operator]
    expectations: Tuple[Expectation, ...] = field(default_factory=tuple)


def _szego_pair() -> KernelSpace:
    return build_szego([0, 0.5])


FIXTURES: Dict[str, Fixture] = {
    'minus-identity': Fixture(
        'minus-identity',
        'A = -I on the Szegő pair {0, 0.5}; the rotation bound is attained at theta = 0',
        _szego_pair,
        lambda space: -Operator.identity(space.dim),
        (
            (BoundId.T2.value, 'rhs', None, 2.0),
            (BoundId.T2.value, 'lhs', None, 2.0),
            (BoundId.T2.value, 'params', 'theta_star', 0.0),
            (BoundId.T2_FIXED_PI.value, 'rhs', None, 6.0),
            (BoundId.EQN1.value, 'middle', None, math.sqrt(2)),
        ),
    ),
    'nilpotent-orthonormal': Fixture(
        'nilpotent-orthonormal',
        'A = [[0, 1], [0, 0]] on {e1, e2}; both sides of the eta chain are tight',
        lambda: orthonormal_space(2),
        lambda space: Operator([[0, 1], [0, 0]]),
        (
            (BoundId.EQN1.value, 'lhs', None, 1.0),
            (BoundId.EQN1.value, 'middle', None, 1.0),
            (BoundId.EQN1.value, 'rhs', None, 1.0),
            (BoundId.EQN1.value, 'slack', None, 0.0),
            (BoundId.EQN1.value, 'details', 'ber', 0.0),
            (BoundId.EQN1.value, 'details', 'ata_norm', 1.0),
        ),
    ),
    'identity': Fixture(
        'identity',
        'A = I on the Szegő pair {0, 0.5}',
        _szego_pair,
        lambda space: Operator.identity(space.dim),
        (
            (BoundId.EQN1.value, 'middle', None, math.sqrt(2)),
            (BoundId.EQN1.value, 'details', 'ber', 1.0),
            (BoundId.EQN1.value, 'details', 'least_ber', 1.0),
        ),
    ),
    'diagonal': Fixture(
        'diagonal',
        'A = diag(2, 3i) on {e1, e2}',
        lambda: orthonormal_space(2),
        lambda space: Operator.diagonal([2, 3j]),
        (
            (BoundId.EQN1.value, 'details', 'ber', 3.0),
            (BoundId.EQN1.value, 'details', 'least_ber', 2.0),
            (BoundId.EQN1.value, 'details', 'ata_norm', 9.0),
            (BoundId.EQN1.value, 'middle', None, math.sqrt(90)),
        ),
    ),
}


def fixture_names() -> List[str]:
    return sorted(FIXTURES)


def _actual(evaluation: BoundEvaluation, attribute: str, key: Optional[str]) -> Optional[float]:
    value = getattr(evaluation, attribute)
    if key is not None:
        value = (value or {}).get(key)
    return value


def evaluate_fixture(name: str, config: Optional[OptimizerConfig] = None) -> List[BoundEvaluation]:
    """
    Evaluate every applicable bound on a fixture, without checking expectations.

    The sum bounds use B = 0; the normal-operator remark is skipped for
    non-normal fixtures.

    Raises:
        UnknownFixture: If the name is not registered.
    """
    try:
        fixture = FIXTURES[name]
    except KeyError:
        raise UnknownFixture(f"unknown fixture {name!r}, choose from {fixture_names()}") from None

    space = fixture.space()
    operator = fixture.operator(space)
    context = BoundContext(operator, space, config, second=Operator.zeros(space.dim))
    normal = is_normal(operator, NORMALITY_TOL)
    return [context.evaluate(bound_id) for bound_id in ALL_BOUND_IDS
            if normal or bound_id != BoundId.RMK_NORMAL.value]


def replay_fixture(name: str, config: Optional[OptimizerConfig] = None) -> List[BoundEvaluation]:
    """
    Replay a fixture and assert its recorded exact values.

    Returns:
        list: One BoundEvaluation per applicable bound, in registry order.

    Raises:
        UnknownFixture: If the name is not registered.
        FixtureMismatch: If any expectation is off by more than 1e-9.
    """
    evaluations = evaluate_fixture(name, config)
    by_id = {e.bound_id: e for e in evaluations}
    mismatches = []
    for bound_id, attribute, key, expected in FIXTURES[name].expectations:
        actual = _actual(by_id[bound_id], attribute, key)
        if actual is None or abs(actual - expected) > FIXTURE_TOL:
            label = f"{bound_id}.{attribute}" + (f"[{key}]" if key else '')
            mismatches.append(f"{label} = {actual}, expected {expected}")
    if mismatches:
        raise FixtureMismatch(f"fixture {name}: " + '; '.join(mismatches))
    logger.info(f"Fixture {name}: {len(evaluations)} bounds evaluated, expectations met")
    return evaluations
