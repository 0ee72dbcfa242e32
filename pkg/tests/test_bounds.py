import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.core.berezin import ber, eta, eta_argmax, least_ber
from src.core.kernel_space import build_from_gram
from src.core.operator import Operator, is_normal
from src.errors import (DimensionMismatch, MissingSecondOperand, NotNormal,
                        NotOrthogonalPair, UnknownBoundId)
from src.services import bounds
from src.services.bounds import (NORMALITY_TOL, PAIR_BOUNDS, BoundContext, evaluate_bound,
                                 real_cross_symbols, registered_bounds)
from src.services.sampling import orthogonal_partner, random_operator, random_space, trial_rng
from src.services.schemas import ALL_BOUND_IDS, BoundId, OptimizerConfig

FAST = OptimizerConfig(theta_grid=256, alpha_grid=33, dw_restarts=2)
SINGLE_BOUNDS = [b for b in ALL_BOUND_IDS if b not in PAIR_BOUNDS]
KINDS = ('orthonormal', 'szego', 'bergman', 'fock', 'random_gram')


def random_gram_space(seed=7, dim=3, size=5):
    rng = np.random.default_rng(seed)
    vectors = rng.standard_normal((dim, size)) + 1j * rng.standard_normal((dim, size))
    gram = vectors.conj().T @ vectors
    return build_from_gram((gram + gram.conj().T) / 2)


def test_every_bound_is_registered():
    assert registered_bounds() == ALL_BOUND_IDS


@pytest.mark.parametrize('bound_id', [b for b in SINGLE_BOUNDS if b != 'B-RMK-NORMAL'])
def test_minus_identity_satisfies_every_bound(bound_id, szego_pair):
    result = evaluate_bound(bound_id, -Operator.identity(2), szego_pair)
    assert result.satisfied
    assert result.bound_id == bound_id


def test_minus_identity_values(szego_pair):
    context = BoundContext(-Operator.identity(2), szego_pair)
    t2 = context.evaluate('B-T2')
    assert t2.lhs == pytest.approx(2.0, abs=1e-12)
    assert t2.rhs == pytest.approx(2.0, abs=1e-12)
    theta = t2.params['theta_star']
    assert min(theta, 2 * math.pi - theta) < 1e-6
    assert t2.details['rhs_fixed_pi'] == pytest.approx(6.0, abs=1e-12)

    fixed = context.evaluate('B-T2-FIXED-PI')
    assert fixed.rhs == pytest.approx(6.0, abs=1e-12)
    assert fixed.params == {'theta_star': math.pi}

    eqn1 = context.evaluate('B-EQN1')
    assert eqn1.middle == pytest.approx(math.sqrt(2), abs=1e-12)
    assert eqn1.details['ber'] == pytest.approx(1.0, abs=1e-12)


def test_minus_identity_on_random_gram_space():
    space = random_gram_space()
    context = BoundContext(-Operator.identity(space.dim), space)
    assert context.eta == pytest.approx(math.sqrt(2), abs=1e-12)
    for bound_id in SINGLE_BOUNDS:
        if bound_id == 'B-RMK-NORMAL':
            continue
        assert context.evaluate(bound_id).satisfied, bound_id

def test_context_quantities_match_berezin_functions(rng):
    space = random_gram_space()
    operator = Operator(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    context = BoundContext(operator, space, FAST)
    assert (context.eta, context.eta_index) == eta_argmax(operator, space)
    assert context.ber_value == ber(operator, space)
    assert context.least_value == least_ber(operator, space)



def test_nilpotent_eta_chain_is_tight(orthonormal_pair, nilpotent):
    result = evaluate_bound('B-EQN1', nilpotent, orthonormal_pair)
    assert (result.lhs, result.middle, result.rhs) == (1.0, 1.0, 1.0)
    assert result.slack == 0.0
    assert result.satisfied
    assert result.argmax_index == 1
    assert result.details['ber'] == 0.0
    assert result.details['ata_norm'] == 1.0


def test_sum_with_zero_partner_is_tight(szego_pair, rng):
    operator, _ = random_operator(rng, 2)
    result = evaluate_bound('B-SUM', operator, szego_pair, second=Operator.zeros(2))
    assert result.slack == 0.0
    assert result.satisfied


def test_lower_bounds_store_eta_on_the_right(orthonormal_pair):
    result = evaluate_bound('B-T1-i', Operator.diagonal([2, 3j]), orthonormal_pair)
    assert result.rhs == pytest.approx(90.0)
    assert result.lhs == pytest.approx(max(4 + 81, 9 + 16))


def test_unknown_bound_id(szego_pair):
    with pytest.raises(UnknownBoundId):
        evaluate_bound('B-T99', Operator.identity(2), szego_pair)
    with pytest.raises(UnknownBoundId):
        BoundContext(Operator.identity(2), szego_pair).evaluate('nope')


@pytest.mark.parametrize('bound_id', sorted(PAIR_BOUNDS))
def test_pair_bounds_need_a_second_operand(bound_id, szego_pair):
    with pytest.raises(MissingSecondOperand):
        evaluate_bound(bound_id, Operator.identity(2), szego_pair)


def test_normal_remark_rejects_non_normal(orthonormal_pair, nilpotent):
    with pytest.raises(NotNormal):
        evaluate_bound('B-RMK-NORMAL', nilpotent, orthonormal_pair)


def test_normal_remark_beats_reference(orthonormal_pair):
    result = evaluate_bound('B-RMK-NORMAL', Operator.diagonal([2, 3j]), orthonormal_pair)
    assert result.satisfied
    assert result.rhs <= result.details['reference'] * (1 + 1e-12)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_normal_remark_never_exceeds_reference(seed):
    rng = trial_rng(seed, 0)
    space = random_space(rng, KINDS[seed % len(KINDS)], (2, 3, 4), (2, 4, 6))
    operator, kind = random_operator(rng, space.dim, kind='normal')
    assert kind == 'normal'
    result = evaluate_bound('B-RMK-NORMAL', operator, space, config=FAST)
    assert result.satisfied
    reference = result.details['reference']
    assert result.rhs <= reference + 1e-12 * max(1.0, reference)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_sum_bound_holds_for_equal_operands(seed):
    rng = trial_rng(seed, 0)
    space = random_space(rng, KINDS[seed % len(KINDS)], (2, 3, 4), (2, 4, 6))
    operator, _ = random_operator(rng, space.dim)
    result = evaluate_bound('B-SUM', operator, space, second=operator, config=FAST)
    assert result.satisfied
    doubled = operator * 2
    assert result.lhs == pytest.approx(eta(doubled, space), rel=1e-12, abs=1e-14)


def test_orthogonal_sum_rejects_non_orthogonal_pair(szego_pair):
    identity = Operator.identity(2)
    with pytest.raises(NotOrthogonalPair):
        evaluate_bound('B-SUM-ORTH', identity, szego_pair, second=identity)


def test_orthogonal_sum_accepts_imaginary_multiple(szego_pair):
    identity = Operator.identity(2)
    result = evaluate_bound('B-SUM-ORTH', identity, szego_pair, second=identity * 1j)
    assert result.satisfied
    assert result.details['cross'] <= 1e-15


def test_dimension_mismatch(szego_pair):
    with pytest.raises(DimensionMismatch):
        BoundContext(Operator.identity(3), szego_pair)
    with pytest.raises(DimensionMismatch):
        BoundContext(Operator.identity(2), szego_pair, second=Operator.identity(3))


def test_rotation_bound_never_exceeds_fixed_pi(rng):
    space = random_gram_space(seed=11, dim=4, size=6)
    for _ in range(5):
        operator, _ = random_operator(rng, space.dim)
        context = BoundContext(operator, space)
        t2 = context.evaluate('B-T2')
        assert t2.rhs <= context.evaluate('B-T2-FIXED-PI').rhs
        assert t2.rhs <= t2.details['rhs_fixed_pi']


def test_alpha_half_forms(rng):
    space = random_gram_space(seed=3, dim=3, size=4)
    operator, _ = random_operator(rng, space.dim, kind='gaussian')
    context = BoundContext(operator, space)
    t5, c1 = context.evaluate('B-T5'), context.evaluate('B-C1')
    assert c1.rhs == pytest.approx(bounds._t5_rhs(context, 0.5), rel=1e-14)
    assert t5.rhs <= c1.rhs
    t7, c3 = context.evaluate('B-T7'), context.evaluate('B-C3')
    assert t7.rhs <= t7.details['rhs_alpha_half']
    assert c3.details['rhs_with_half'] <= c3.rhs
    c2 = context.evaluate('B-C2')
    assert c2.rhs <= c2.details['rhs_alpha_half']


def test_power_family_is_continuous_at_zero(rng):
    space = random_gram_space(seed=5, dim=3, size=5)
    operator, _ = random_operator(rng, space.dim, kind='gaussian')
    context = BoundContext(operator, space)
    for r in (1.0, 2.0):
        assert bounds._t6_rhs(context, r, 1e-7) == pytest.approx(
            bounds._t6_rhs(context, r, 0.0), rel=1e-4)


def test_power_family_reports_every_r(szego_pair, rng):
    operator, _ = random_operator(rng, 2, kind='gaussian')
    result = evaluate_bound('B-T6', operator, szego_pair, config=FAST)
    assert set(result.details) == {'rhs_r1', 'lhs_r1', 'rhs_r1.5', 'lhs_r1.5',
                                   'rhs_r2', 'lhs_r2', 'rhs_r3', 'lhs_r3'}
    assert result.params['r'] in FAST.r_values
    assert 0.0 <= result.params['alpha_star'] <= 1.0


def test_branch_bounds_pick_the_smaller_branch(szego_pair, rng):
    operator, _ = random_operator(rng, 2, kind='gaussian')
    context = BoundContext(operator, szego_pair, FAST)
    t9 = context.evaluate('B-T9')
    assert t9.rhs == min(t9.details['beta1'], t9.details['beta2'])
    assert t9.params['branch'] in (1, 2)
    t10 = context.evaluate('B-T10')
    assert t10.rhs == min(t10.details['gamma1'], t10.details['gamma2'])


def test_real_cross_symbols_of_partner(rng):
    space = random_gram_space(seed=9, dim=4, size=7)
    operator, _ = random_operator(rng, space.dim, kind='gaussian')
    partner = orthogonal_partner(operator, rng)
    assert np.max(np.abs(real_cross_symbols(operator, partner, space))) < 1e-10


def test_verdict_uses_relative_tolerance(szego_pair):
    context = BoundContext(Operator.identity(2), szego_pair, OptimizerConfig(tol=1e-9))
    assert context.verdict(BoundId.T2, 1e6 + 1e-4, 1e6).satisfied
    assert not context.verdict(BoundId.T2, 1e6 + 1e-2, 1e6).satisfied
    within = context.verdict(BoundId.EQN1, 1.0, 3.0, middle=2.5)
    assert within.slack == 0.5


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_random_instances_satisfy_every_bound(seed):
    rng = trial_rng(seed, 0)
    space = random_space(rng, KINDS[seed % len(KINDS)], (2, 3, 4), (2, 4, 6))
    operator, _ = random_operator(rng, space.dim)
    second, _ = random_operator(rng, space.dim)
    partner = orthogonal_partner(operator, rng)

    context = BoundContext(operator, space, FAST, second, seed)
    for bound_id in ALL_BOUND_IDS:
        if bound_id == 'B-SUM-ORTH':
            continue
        if bound_id == 'B-RMK-NORMAL' and not is_normal(operator, NORMALITY_TOL):
            continue
        result = context.evaluate(bound_id)
        assert result.satisfied, (bound_id, result)
    orth = BoundContext(operator, space, FAST, partner, seed).evaluate('B-SUM-ORTH')
    assert orth.satisfied
