"""
Berlab Bound Registry

Evaluators for every Berezin-type inequality the suite verifies. Each bound
is registered under its stable id and turns an (operator, kernel space) pair
into a BoundEvaluation with both sides, the minimizing parameters, the slack
and a verdict.

All bounds are stored in ``lhs <= rhs`` orientation. Lower bounds on eta or
dw therefore carry the bound on the left and eta^2 (or the dw estimate) on
the right.
"""

import logging
import math
from functools import cached_property
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from src.core.berezin import (ber, ber_argmax, berezin_norm, berezin_profile, eta_argmax,
                              least_ber)
from src.core.kernel_space import KernelSpace
from src.core.operator import (HermitianSpectrum, Operator, WitnessedEstimate,
                               dw_lower_estimate, is_normal, numerical_radius,
                               operator_norm)
from src.core.optimizer import ScalarMinimum, minimize_scalar
from src.errors import (DimensionMismatch, MissingSecondOperand, NotNormal,
                        NotOrthogonalPair, UnknownBoundId)
from src.services.schemas import BoundEvaluation, BoundId, OptimizerConfig

logger = logging.getLogger(__name__)

ORTHOGONALITY_TOL = 1e-10
NORMALITY_TOL = 1e-10

PAIR_BOUNDS = frozenset({BoundId.SUM.value, BoundId.SUM_ORTH.value})

_REGISTRY: Dict[str, Callable[['BoundContext'], BoundEvaluation]] = {}


def _bound(bound_id: BoundId):
    """Register an evaluator under its bound id."""
    def decorator(func):
        _REGISTRY[bound_id.value] = func
        return func
    return decorator


def registered_bounds() -> Tuple[str, ...]:
    return tuple(b.value for b in BoundId if b.value in _REGISTRY)


class BoundContext:
    """
    Shared state for evaluating many bounds on one instance.

    Spectral decompositions, the Berezin profile and the witnessed estimates
    are computed once and reused by every evaluator.
    """

    def __init__(self, operator: Operator, space: KernelSpace,
                 config: Optional[OptimizerConfig] = None,
                 second: Optional[Operator] = None, seed: int = 0):
        if operator.dim != space.dim:
            raise DimensionMismatch(f"operator dim {operator.dim} != space dim {space.dim}")
        if second is not None and second.dim != operator.dim:
            raise DimensionMismatch(f"second operator dim {second.dim} != {operator.dim}")
        self.operator = operator
        self.space = space
        self.config = config or OptimizerConfig()
        self.second = second
        self.seed = seed

    # --- Berezin quantities relative to the space ---

    def ber(self, op: Operator) -> float:
        return ber(op, self.space)

    def least(self, op: Operator) -> float:
        return least_ber(op, self.space)

    def norm_ber(self, op: Operator) -> float:
        return berezin_norm(op, self.space)

    def eta_of(self, op: Operator) -> float:
        return eta_argmax(op, self.space)[0]

    @cached_property
    def profile(self):
        return berezin_profile(self.operator, self.space)

    @cached_property
    def _eta_max(self) -> Tuple[float, int]:
        return eta_argmax(self.operator, self.space)

    @cached_property
    def eta_index(self) -> int:
        return self._eta_max[1]

    @cached_property
    def eta(self) -> float:
        return self._eta_max[0]

    @cached_property
    def ber_value(self) -> float:
        return ber_argmax(self.operator, self.space)[0]

    @cached_property
    def least_value(self) -> float:
        return least_ber(self.operator, self.space)

    @cached_property
    def gram_ber(self) -> float:
        """||A*A||_ber, the largest squared image norm."""
        return float(np.max(self.profile.image_norms_sq))

    @cached_property
    def gram_least(self) -> float:
        """c(A*A), the smallest squared image norm."""
        return float(np.min(self.profile.image_norms_sq))

    # --- spectral calculus ---

    @cached_property
    def gram_spectrum(self) -> HermitianSpectrum:
        return HermitianSpectrum.of(self.operator.gram())

    @cached_property
    def cogram_spectrum(self) -> HermitianSpectrum:
        return HermitianSpectrum.of(self.operator.cogram())

    def modulus_power(self, t: float) -> Operator:
        """|A|^t, with |A|^0 the projector onto the range of A*A."""
        return self.gram_spectrum.power(max(t, 0.0) / 2)

    def adjoint_modulus_power(self, t: float) -> Operator:
        """|A*|^t."""
        return self.cogram_spectrum.power(max(t, 0.0) / 2)

    @cached_property
    def abs_sq(self) -> Operator:
        return self.operator.gram()

    @cached_property
    def abs_adj_sq(self) -> Operator:
        return self.operator.cogram()

    @cached_property
    def abs_fourth(self) -> Operator:
        return self.abs_sq @ self.abs_sq

    @cached_property
    def square(self) -> Operator:
        return self.operator @ self.operator

    # --- operator-level estimates ---

    @cached_property
    def radius(self) -> WitnessedEstimate:
        return numerical_radius(self.operator, tol=self.config.refine_tol)

    @cached_property
    def norm(self) -> WitnessedEstimate:
        return operator_norm(self.operator)

    @cached_property
    def dw(self) -> WitnessedEstimate:
        return dw_lower_estimate(self.operator, self.space, restarts=self.config.dw_restarts,
                                 seed=self.seed, radius=self.radius, norm=self.norm)

    # --- parameter searches ---

    def minimize_alpha(self, func: Callable[[float], float]) -> ScalarMinimum:
        return minimize_scalar(func, 0.0, 1.0, grid=self.config.alpha_grid,
                               refine_tol=self.config.refine_tol)

    def minimize_theta(self, func: Callable[[float], float]) -> ScalarMinimum:
        return minimize_scalar(func, 0.0, 2 * math.pi, grid=self.config.theta_grid,
                               refine_tol=self.config.refine_tol, candidates=3,
                               periodic=True)

    # --- evaluation ---

    def verdict(self, bound_id: BoundId, lhs: float, rhs: float, *,
                middle: Optional[float] = None, params: Optional[Dict[str, float]] = None,
                argmax_index: Optional[int] = None,
                details: Optional[Dict[str, float]] = None) -> BoundEvaluation:
        """Assemble a BoundEvaluation with slack and a relative-tolerance verdict."""
        lhs, rhs = float(lhs), float(rhs)
        if middle is None:
            slack = rhs - lhs
            scale = max(abs(lhs), abs(rhs), 1.0)
        else:
            middle = float(middle)
            slack = min(middle - lhs, rhs - middle)
            scale = max(abs(lhs), abs(rhs), abs(middle), 1.0)
        return BoundEvaluation(
            bound_id=bound_id.value,
            lhs=lhs,
            rhs=rhs,
            middle=middle,
            params=params,
            slack=slack,
            satisfied=slack >= -self.config.tol * scale,
            argmax_index=argmax_index,
            details={k: float(v) for k, v in (details or {}).items()},
        )

    def evaluate(self, bound_id: str) -> BoundEvaluation:
        """
        Evaluate one registered bound on this instance.

        Raises:
            UnknownBoundId: If the id is not registered.
            MissingSecondOperand: If a pair bound is requested without B.
        """
        try:
            evaluator = _REGISTRY[str(bound_id)]
        except KeyError:
            raise UnknownBoundId(f"unknown bound id {bound_id!r}") from None
        if bound_id in PAIR_BOUNDS and self.second is None:
            raise MissingSecondOperand(f"{bound_id} needs a second operator")
        result = evaluator(self)
        logger.debug(f"{bound_id}: lhs={result.lhs:.6g} rhs={result.rhs:.6g} "
                     f"slack={result.slack:.3e}")
        return result


def evaluate_bound(bound_id: str, operator: Operator, space: KernelSpace,
                   second: Optional[Operator] = None,
                   config: Optional[OptimizerConfig] = None, seed: int = 0) -> BoundEvaluation:
    """
    Evaluate a single bound on (A, S[, B]).

    Args:
        bound_id: Registry id such as "B-T2".
        operator: Operator A.
        space: Kernel space S.
        second: Operator B, required for B-SUM and B-SUM-ORTH.
        config: Optimizer settings and verdict tolerance.
        seed: Seed for the random starts of the dw estimator.

    Returns:
        BoundEvaluation: Both sides, parameters, slack and verdict.
    """
    if str(bound_id) not in _REGISTRY:
        raise UnknownBoundId(f"unknown bound id {bound_id!r}")
    return BoundContext(operator, space, config, second, seed).evaluate(str(bound_id))


# --- Davis-Wielandt radius, certified witness form ---

@_bound(BoundId.EQN0_L)
def _eqn0_lower(ctx: BoundContext) -> BoundEvaluation:
    w, norm, dw = ctx.radius.value, ctx.norm.value, ctx.dw.value
    return ctx.verdict(BoundId.EQN0_L, max(w, norm ** 2), dw,
                       details={'w': w, 'norm': norm, 'dw': dw})


@_bound(BoundId.EQN0_U)
def _eqn0_upper(ctx: BoundContext) -> BoundEvaluation:
    witness = ctx.dw.witness
    # Any unit vector gives a valid lower estimate of w(A)
    quad = abs(np.vdot(witness, ctx.operator.entries @ witness))
    w, norm, dw = max(ctx.radius.value, float(quad)), ctx.norm.value, ctx.dw.value
    return ctx.verdict(BoundId.EQN0_U, dw, math.sqrt(w ** 2 + norm ** 4),
                       details={'w': w, 'norm': norm, 'dw': dw})


# --- eta chain and lower bounds ---

@_bound(BoundId.EQN1)
def _eqn1(ctx: BoundContext) -> BoundEvaluation:
    b, q = ctx.ber_value, ctx.gram_ber
    return ctx.verdict(BoundId.EQN1, max(b, q), math.sqrt(b ** 2 + q ** 2),
                       middle=ctx.eta, argmax_index=ctx.eta_index,
                       details={'ber': b, 'least_ber': ctx.least_value,
                                'ata_norm': q, 'eta': ctx.eta})


@_bound(BoundId.T1_I)
def _t1_i(ctx: BoundContext) -> BoundEvaluation:
    b, c, q, cq = ctx.ber_value, ctx.least_value, ctx.gram_ber, ctx.gram_least
    lhs = max(c ** 2 + q ** 2, b ** 2 + cq ** 2)
    return ctx.verdict(BoundId.T1_I, lhs, ctx.eta ** 2, argmax_index=ctx.eta_index)


@_bound(BoundId.T1_II)
def _t1_ii(ctx: BoundContext) -> BoundEvaluation:
    b, c, q, cq = ctx.ber_value, ctx.least_value, ctx.gram_ber, ctx.gram_least
    lhs = 2 * max(b * cq, c * q)
    return ctx.verdict(BoundId.T1_II, lhs, ctx.eta ** 2, argmax_index=ctx.eta_index)


@_bound(BoundId.T1_III)
def _t1_iii(ctx: BoundContext) -> BoundEvaluation:
    b, c, q, cq = ctx.ber_value, ctx.least_value, ctx.gram_ber, ctx.gram_least
    lhs = max(c ** 2 * (1 + q), b ** 2 * (1 + cq))
    return ctx.verdict(BoundId.T1_III, lhs, ctx.eta ** 2, argmax_index=ctx.eta_index)


# --- rotation bound ---

def _t2_rhs(ctx: BoundContext, theta: float) -> float:
    rotated = ctx.abs_sq + ctx.operator * complex(math.cos(theta), math.sin(theta))
    return ctx.ber(rotated) ** 2 + 2 * ctx.gram_ber * ctx.ber_value


@_bound(BoundId.T2)
def _t2(ctx: BoundContext) -> BoundEvaluation:
    best = ctx.minimize_theta(lambda theta: _t2_rhs(ctx, theta))
    return ctx.verdict(BoundId.T2, ctx.eta ** 2, best.value,
                       params={'theta_star': best.x}, argmax_index=ctx.eta_index,
                       details={'rhs_fixed_pi': _t2_rhs(ctx, math.pi)})


@_bound(BoundId.T2_FIXED_PI)
def _t2_fixed_pi(ctx: BoundContext) -> BoundEvaluation:
    return ctx.verdict(BoundId.T2_FIXED_PI, ctx.eta ** 2, _t2_rhs(ctx, math.pi),
                       params={'theta_star': math.pi}, argmax_index=ctx.eta_index)


# --- Cartesian-type bounds ---

@_bound(BoundId.T3_U)
def _t3_upper(ctx: BoundContext) -> BoundEvaluation:
    plus, minus = ctx.operator + ctx.abs_sq, ctx.operator - ctx.abs_sq
    rhs = (ctx.ber(plus) ** 2 + ctx.ber(minus) ** 2) / 2
    return ctx.verdict(BoundId.T3_U, ctx.eta ** 2, rhs, argmax_index=ctx.eta_index)


@_bound(BoundId.T3_L)
def _t3_lower(ctx: BoundContext) -> BoundEvaluation:
    plus, minus = ctx.operator + ctx.abs_sq, ctx.operator - ctx.abs_sq
    lhs = max(ctx.ber(plus) ** 2 + ctx.least(minus) ** 2,
              ctx.ber(minus) ** 2 + ctx.least(plus) ** 2) / 2
    return ctx.verdict(BoundId.T3_L, lhs, ctx.eta ** 2, argmax_index=ctx.eta_index)


# --- mixed-Schwarz bounds in alpha ---

def _t5_rhs(ctx: BoundContext, alpha: float) -> float:
    p = ctx.modulus_power(2 * alpha)
    q = ctx.adjoint_modulus_power(2 * (1 - alpha))
    twice = ctx.abs_sq * 2
    return (ctx.norm_ber(p + q) ** 2 / 4
            + ctx.ber(twice + p - q) * ctx.ber(twice - p + q) / 4)


@_bound(BoundId.T5)
def _t5(ctx: BoundContext) -> BoundEvaluation:
    best = ctx.minimize_alpha(lambda a: _t5_rhs(ctx, a))
    return ctx.verdict(BoundId.T5, ctx.eta ** 2, best.value,
                       params={'alpha_star': best.x}, argmax_index=ctx.eta_index)


@_bound(BoundId.C1)
def _c1(ctx: BoundContext) -> BoundEvaluation:
    return ctx.verdict(BoundId.C1, ctx.eta ** 2, _t5_rhs(ctx, 0.5),
                       params={'alpha_star': 0.5}, argmax_index=ctx.eta_index)


def _t6_rhs(ctx: BoundContext, r: float, alpha: float) -> float:
    top = ctx.modulus_power(4 * r)
    first = ctx.norm_ber(ctx.modulus_power(4 * alpha * r) + top)
    second = ctx.norm_ber(ctx.adjoint_modulus_power(4 * (1 - alpha) * r) + top)
    return 2 ** (2 * r - 2) * first * second


@_bound(BoundId.T6)
def _t6(ctx: BoundContext) -> BoundEvaluation:
    chosen, chosen_ratio = None, math.inf
    details = {}
    for r in ctx.config.r_values:
        best = ctx.minimize_alpha(lambda a: _t6_rhs(ctx, r, a))
        result = ctx.verdict(BoundId.T6, ctx.eta ** (4 * r), best.value,
                             params={'r': r, 'alpha_star': best.x},
                             argmax_index=ctx.eta_index)
        details[f'rhs_r{r:g}'] = result.rhs
        details[f'lhs_r{r:g}'] = result.lhs
        ratio = result.slack / max(abs(result.lhs), abs(result.rhs), 1.0)
        if ratio < chosen_ratio:
            chosen, chosen_ratio = result, ratio
    return chosen.model_copy(update={'details': details})


def _c2_rhs(ctx: BoundContext, alpha: float) -> float:
    fourth = ctx.modulus_power(4)
    return (ctx.norm_ber(ctx.modulus_power(4 * alpha) + fourth)
            * ctx.norm_ber(ctx.adjoint_modulus_power(4 * (1 - alpha)) + fourth))


@_bound(BoundId.C2)
def _c2(ctx: BoundContext) -> BoundEvaluation:
    best = ctx.minimize_alpha(lambda a: _c2_rhs(ctx, a))
    return ctx.verdict(BoundId.C2, ctx.eta ** 4, best.value,
                       params={'alpha_star': best.x}, argmax_index=ctx.eta_index,
                       details={'rhs_alpha_half': _c2_rhs(ctx, 0.5)})


@_bound(BoundId.RMK_NORMAL)
def _normal_remark(ctx: BoundContext) -> BoundEvaluation:
    if not is_normal(ctx.operator, NORMALITY_TOL):
        raise NotNormal("B-RMK-NORMAL applies to normal operators only")
    fourth = ctx.modulus_power(4)

    def rhs(alpha: float) -> float:
        first = ctx.norm_ber(ctx.modulus_power(4 * alpha) + fourth)
        second = ctx.norm_ber(ctx.modulus_power(4 * (1 - alpha)) + fourth)
        return math.sqrt(first) * math.sqrt(second)

    best = ctx.minimize_alpha(rhs)
    reference = ctx.norm_ber(ctx.modulus_power(2) + fourth)
    return ctx.verdict(BoundId.RMK_NORMAL, ctx.eta ** 2, best.value,
                       params={'alpha_star': best.x}, argmax_index=ctx.eta_index,
                       details={'reference': reference})


def _t7_rhs(ctx: BoundContext, alpha: float) -> float:
    p = ctx.modulus_power(2 * alpha)
    q = ctx.adjoint_modulus_power(2 * (1 - alpha))
    total = p + q
    return (ctx.norm_ber(total @ total + ctx.abs_fourth * 2) / 2
            - ctx.least(p) * ctx.least(q))


@_bound(BoundId.T7)
def _t7(ctx: BoundContext) -> BoundEvaluation:
    best = ctx.minimize_alpha(lambda a: _t7_rhs(ctx, a))
    return ctx.verdict(BoundId.T7, ctx.eta ** 2, best.value,
                       params={'alpha_star': best.x}, argmax_index=ctx.eta_index,
                       details={'rhs_alpha_half': _t7_rhs(ctx, 0.5)})


@_bound(BoundId.C3)
def _c3(ctx: BoundContext) -> BoundEvaluation:
    # Printed form, without the factor 1/2 on the norm term
    p, q = ctx.modulus_power(1), ctx.adjoint_modulus_power(1)
    total = p + q
    rhs = ctx.norm_ber(total @ total + ctx.abs_fourth * 2) - ctx.least(p) * ctx.least(q)
    return ctx.verdict(BoundId.C3, ctx.eta ** 2, rhs, argmax_index=ctx.eta_index,
                       details={'rhs_with_half': _t7_rhs(ctx, 0.5)})


# --- convex-combination bounds ---

@_bound(BoundId.T8)
def _t8(ctx: BoundContext) -> BoundEvaluation:
    def rhs(alpha: float) -> float:
        return ctx.norm_ber(ctx.abs_sq * alpha + ctx.abs_adj_sq * (1 - alpha) + ctx.abs_fourth)

    best = ctx.minimize_alpha(rhs)
    return ctx.verdict(BoundId.T8, ctx.eta ** 2, best.value,
                       params={'alpha_star': best.x}, argmax_index=ctx.eta_index)


def _beta(ctx: BoundContext, first: Operator, second: Operator) -> ScalarMinimum:
    square_ber = ctx.ber(ctx.square)

    def rhs(alpha: float) -> float:
        mix = first * (alpha / 4) + second * (1 - 3 * alpha / 4) + ctx.abs_fourth
        return alpha / 2 * square_ber + ctx.norm_ber(mix)

    return ctx.minimize_alpha(rhs)


@_bound(BoundId.T9)
def _t9(ctx: BoundContext) -> BoundEvaluation:
    beta1 = _beta(ctx, ctx.abs_sq, ctx.abs_adj_sq)
    beta2 = _beta(ctx, ctx.abs_adj_sq, ctx.abs_sq)
    branch, best = (1, beta1) if beta1.value <= beta2.value else (2, beta2)
    return ctx.verdict(BoundId.T9, ctx.eta ** 2, best.value,
                       params={'alpha_star': best.x, 'branch': branch},
                       argmax_index=ctx.eta_index,
                       details={'beta1': beta1.value, 'beta2': beta2.value})


@_bound(BoundId.C4_I)
def _c4_i(ctx: BoundContext) -> BoundEvaluation:
    first = ctx.norm_ber(ctx.abs_sq + ctx.abs_fourth)
    second = ctx.norm_ber(ctx.abs_adj_sq + ctx.abs_fourth)
    return ctx.verdict(BoundId.C4_I, ctx.eta ** 2, min(first, second),
                       argmax_index=ctx.eta_index)


@_bound(BoundId.C4_II)
def _c4_ii(ctx: BoundContext) -> BoundEvaluation:
    rhs = (ctx.norm_ber(ctx.abs_sq + ctx.abs_adj_sq + ctx.abs_fourth * 4) / 4
           + ctx.ber(ctx.square) / 2)
    return ctx.verdict(BoundId.C4_II, ctx.eta ** 2, rhs, argmax_index=ctx.eta_index)


def _gamma(ctx: BoundContext, tail: Operator) -> ScalarMinimum:
    half = (ctx.modulus_power(1) + ctx.adjoint_modulus_power(1)) * 0.5
    mean_sq = half @ half

    def rhs(alpha: float) -> float:
        return ctx.norm_ber(mean_sq * alpha + tail * (1 - alpha) + ctx.abs_fourth)

    return ctx.minimize_alpha(rhs)


@_bound(BoundId.T10)
def _t10(ctx: BoundContext) -> BoundEvaluation:
    gamma1 = _gamma(ctx, ctx.abs_sq)
    gamma2 = _gamma(ctx, ctx.abs_adj_sq)
    branch, best = (1, gamma1) if gamma1.value <= gamma2.value else (2, gamma2)
    return ctx.verdict(BoundId.T10, ctx.eta ** 2, best.value,
                       params={'alpha_star': best.x, 'branch': branch},
                       argmax_index=ctx.eta_index,
                       details={'gamma1': gamma1.value, 'gamma2': gamma2.value})


# --- sums ---

@_bound(BoundId.SUM)
def _sum(ctx: BoundContext) -> BoundEvaluation:
    a, b = ctx.operator, ctx.second
    cross = a.adjoint() @ b + b.adjoint() @ a
    rhs = ctx.eta + ctx.eta_of(b) + ctx.ber(cross)
    return ctx.verdict(BoundId.SUM, ctx.eta_of(a + b), rhs)


def real_cross_symbols(first: Operator, second: Operator, space: KernelSpace) -> np.ndarray:
    """Re <A k̂_j, B k̂_j> for every kernel point j."""
    kernels = space.kernels
    images_a = first.entries @ kernels
    images_b = second.entries @ kernels
    return np.sum(images_b.conj() * images_a, axis=0).real


@_bound(BoundId.SUM_ORTH)
def _sum_orth(ctx: BoundContext) -> BoundEvaluation:
    a, b = ctx.operator, ctx.second
    cross = float(np.max(np.abs(real_cross_symbols(a, b, ctx.space))))
    limit = ORTHOGONALITY_TOL * max(1.0, ctx.norm.value * operator_norm(b).value)
    if cross > limit:
        raise NotOrthogonalPair(f"max |Re<Ak,Bk>| = {cross:.3e} exceeds {limit:.3e}")
    return ctx.verdict(BoundId.SUM_ORTH, ctx.eta_of(a + b), ctx.eta + ctx.eta_of(b),
                       details={'cross': cross})
