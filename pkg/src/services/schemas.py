"""
Berlab Schemas

Pydantic models for configuration and reports. These are the shapes that go
to and come from JSON: config/app_config.json, the suite report and the
per-bound evaluation records.
"""

from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src.errors import ConfigError

RNG_ALGORITHM = 'splitmix64-pcg64/1'

KERNEL_KINDS = ('orthonormal', 'szego', 'bergman', 'fock', 'random_gram')

Pair = Tuple[float, float]


class BoundId(str, Enum):
    """Stable ids of every bound in the registry."""

    EQN0_L = 'B-EQN0-L'
    EQN0_U = 'B-EQN0-U'
    EQN1 = 'B-EQN1'
    T1_I = 'B-T1-i'
    T1_II = 'B-T1-ii'
    T1_III = 'B-T1-iii'
    T2 = 'B-T2'
    T2_FIXED_PI = 'B-T2-FIXED-PI'
    T3_U = 'B-T3-U'
    T3_L = 'B-T3-L'
    T5 = 'B-T5'
    C1 = 'B-C1'
    T6 = 'B-T6'
    C2 = 'B-C2'
    RMK_NORMAL = 'B-RMK-NORMAL'
    T7 = 'B-T7'
    C3 = 'B-C3'
    T8 = 'B-T8'
    T9 = 'B-T9'
    C4_I = 'B-C4-i'
    C4_II = 'B-C4-ii'
    T10 = 'B-T10'
    SUM = 'B-SUM'
    SUM_ORTH = 'B-SUM-ORTH'


ALL_BOUND_IDS = tuple(b.value for b in BoundId)


class OptimizerConfig(BaseModel):
    """Parameter grids, refinement and verdict tolerance for bound evaluation."""

    model_config = ConfigDict(frozen=True)

    theta_grid: int = Field(1024, ge=3)
    alpha_grid: int = Field(257, ge=3)
    refine_tol: float = Field(1e-8, gt=0)
    r_values: Tuple[float, ...] = (1.0, 1.5, 2.0, 3.0)
    dw_restarts: int = Field(4, ge=0)
    tol: float = Field(1e-9, gt=0)

    @field_validator('r_values')
    @classmethod
    def _r_at_least_one(cls, value):
        if not value or any(r < 1 for r in value):
            raise ValueError('r_values must be non-empty with every r >= 1')
        return value


class SuiteConfig(BaseModel):
    """A randomized verification campaign."""

    model_config = ConfigDict(frozen=True)

    seed: int = Field(0, ge=0, lt=2 ** 64)
    trials: int = Field(500, ge=1)
    dims: Tuple[int, ...] = (2, 3, 4, 8)
    omega_sizes: Tuple[int, ...] = (2, 4, 8, 16)
    kernel_kinds: Tuple[str, ...] = KERNEL_KINDS
    bounds: Tuple[str, ...] = ALL_BOUND_IDS
    tol: float = Field(1e-9, gt=0)
    workers: int = Field(1, ge=1)
    optimizer: OptimizerConfig = OptimizerConfig()

    @field_validator('dims', 'omega_sizes')
    @classmethod
    def _positive_sizes(cls, value):
        if not value or any(v < 1 for v in value):
            raise ValueError('sizes must be non-empty and all >= 1')
        return value

    @field_validator('kernel_kinds')
    @classmethod
    def _known_kinds(cls, value):
        unknown = [k for k in value if k not in KERNEL_KINDS]
        if not value or unknown:
            raise ValueError(f'unknown kernel kinds {unknown}, choose from {KERNEL_KINDS}')
        return value

    @field_validator('bounds')
    @classmethod
    def _known_bounds(cls, value):
        unknown = [b for b in value if b not in ALL_BOUND_IDS]
        if not value or unknown:
            raise ValueError(f'unknown bound ids {unknown}')
        # Registry order keeps reports stable regardless of CLI order
        return tuple(b for b in ALL_BOUND_IDS if b in value)

    def evaluation_config(self) -> OptimizerConfig:
        return self.optimizer.model_copy(update={'tol': self.tol})


class BoundEvaluation(BaseModel):
    """One inequality instance: both sides, chosen parameters, slack and verdict."""

    bound_id: str
    lhs: float
    rhs: float
    middle: Optional[float] = None
    params: Optional[Dict[str, float]] = None
    slack: float
    satisfied: bool
    argmax_index: Optional[int] = None
    details: Dict[str, float] = {}


class SlackInstance(BaseModel):
    trial: int
    seed: int
    params: Optional[Dict[str, float]] = None


class BoundSummary(BaseModel):
    checked: int = 0
    violations: int = 0
    errors: int = 0
    worst_violation: float = 0.0
    min_slack: Optional[float] = None
    min_slack_instance: Optional[SlackInstance] = None


class InstanceProvenance(BaseModel):
    """Everything needed to replay a failed instance offline."""

    trial: int
    seed: int
    space_kind: str
    labels: List[Pair]
    gram: Optional[List[List[Pair]]] = None
    kernels: List[List[Pair]]
    operator: List[List[Pair]]
    second_operator: Optional[List[List[Pair]]] = None


class FailureRecord(BaseModel):
    bound_id: str
    trial: int
    evaluation: Optional[BoundEvaluation] = None
    error: Optional[str] = None
    provenance: InstanceProvenance


class SuiteReport(BaseModel):
    rng: str = RNG_ALGORITHM
    config: SuiteConfig
    bounds: Dict[str, BoundSummary]
    failures: List[FailureRecord] = []

    @property
    def total_failures(self) -> int:
        return sum(s.violations + s.errors for s in self.bounds.values())


class LemmaSummary(BaseModel):
    checked: int = 0
    violations: int = 0
    worst_violation: float = 0.0


class LemmaReport(BaseModel):
    rng: str = RNG_ALGORITHM
    seed: int
    trials: int
    tol: float
    lemmas: Dict[str, LemmaSummary]

    @property
    def total_violations(self) -> int:
        return sum(s.violations for s in self.lemmas.values())


def _validated(model: type, values: dict):
    try:
        return model.model_validate(values)
    except ValidationError as e:
        raise ConfigError(f"invalid {model.__name__}: {e}") from e


def optimizer_config(file_config: Optional[dict] = None, **overrides) -> OptimizerConfig:
    """OptimizerConfig from the 'optimizer' section of app_config.json plus overrides."""
    values = dict((file_config or {}).get('optimizer', {}))
    values.update({k: v for k, v in overrides.items() if v is not None})
    return _validated(OptimizerConfig, values)


def suite_config(file_config: Optional[dict] = None, **overrides) -> SuiteConfig:
    """
    SuiteConfig from the 'suite' and 'optimizer' sections of app_config.json.

    Overrides that are None are ignored, so unset CLI flags keep file values.

    Raises:
        ConfigError: If the merged values do not validate.
    """
    values = dict((file_config or {}).get('suite', {}))
    values.update({k: v for k, v in overrides.items() if v is not None})
    values['optimizer'] = optimizer_config(file_config)
    return _validated(SuiteConfig, values)
