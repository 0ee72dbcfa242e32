import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.core.berezin import (ber, ber_argmax, berezin_norm, berezin_profile, berezin_set,
                              dwber_shell, eta, eta_argmax, least_ber)
from src.core.kernel_space import build_szego, orthonormal_space
from src.core.operator import Operator, numerical_radius
from src.errors import DimensionMismatch
from src.services.sampling import random_operator, random_space, trial_rng
from tests.conftest import complex_gaussian

KINDS = ('orthonormal', 'szego', 'bergman', 'fock', 'random_gram')


def random_instance(seed):
    rng = trial_rng(seed, 0)
    space = random_space(rng, KINDS[seed % len(KINDS)], (2, 3, 4), (2, 4, 8))
    operator, _ = random_operator(rng, space.dim)
    return operator, space


def test_ber_examples(szego_pair, orthonormal_pair, nilpotent):
    assert ber(-Operator.identity(2), szego_pair) == pytest.approx(1.0, abs=1e-12)
    assert ber(nilpotent, orthonormal_pair) == 0.0
    assert ber(Operator.diagonal([2, 3j]), orthonormal_pair) == pytest.approx(3.0)
    assert ber_argmax(Operator.diagonal([2, 3j]), orthonormal_pair)[1] == 1


def test_least_ber_examples(szego_pair, orthonormal_pair, nilpotent):
    assert least_ber(Operator.identity(2), szego_pair) == pytest.approx(1.0, abs=1e-12)
    assert least_ber(nilpotent, orthonormal_pair) == 0.0
    assert least_ber(Operator.diagonal([2, 3j]), orthonormal_pair) == pytest.approx(2.0)


def test_berezin_norm_examples(orthonormal_pair, nilpotent):
    assert berezin_norm(Operator.identity(2), orthonormal_pair) == 1.0
    assert berezin_norm(nilpotent, orthonormal_pair) == 1.0


def test_berezin_norm_of_positive_equals_ber(rng):
    space = build_szego([0, 0.4, -0.3 + 0.5j, 0.7j])
    root = complex_gaussian(rng, (space.dim, space.dim))
    positive = Operator(root.conj().T @ root)
    assert berezin_norm(positive, space) == pytest.approx(ber(positive, space), abs=1e-12)


def test_eta_examples(szego_pair, orthonormal_pair, nilpotent):
    assert eta(Operator.identity(2), szego_pair) == pytest.approx(math.sqrt(2), abs=1e-12)
    assert eta(Operator.zeros(2), szego_pair) == 0.0
    assert eta(nilpotent, orthonormal_pair) == 1.0
    assert eta_argmax(nilpotent, orthonormal_pair) == (1.0, 1)


def test_berezin_set_keeps_multiplicity(orthonormal_pair):
    assert berezin_set(Operator.identity(2), orthonormal_pair) == (1, 1)
    assert berezin_set(Operator.diagonal([2, 3j]), orthonormal_pair) == (2, 3j)


def test_shell_examples(szego_pair, orthonormal_pair, nilpotent):
    for point in dwber_shell(Operator.identity(2), szego_pair):
        assert point.symbol == pytest.approx(1.0, abs=1e-12)
        assert point.image_norm_sq == pytest.approx(1.0, abs=1e-12)
    shell = dwber_shell(nilpotent, orthonormal_pair)
    assert [(p.symbol, p.image_norm_sq) for p in shell] == [(0, 0), (0, 1)]
    assert [p.label for p in shell] == [0, 1]
    for point in dwber_shell(-Operator.identity(2), szego_pair):
        assert point.symbol == pytest.approx(-1.0, abs=1e-12)
        assert point.image_norm_sq == pytest.approx(1.0, abs=1e-12)


def test_profile_dw_points(orthonormal_pair):
    profile = berezin_profile(Operator.diagonal([2, 3j]), orthonormal_pair)
    assert profile.dw_points == [(2, 4.0), (3j, 9.0)]
    np.testing.assert_allclose(profile.dw_radii, [math.sqrt(20), math.sqrt(90)])


def test_dimension_mismatch(szego_pair):
    for func in (ber, least_ber, berezin_norm, eta, dwber_shell):
        with pytest.raises(DimensionMismatch):
            func(Operator.identity(3), szego_pair)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_ber_below_numerical_radius(seed):
    operator, space = random_instance(seed)
    assert ber(operator, space) <= numerical_radius(operator).value + 1e-9


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_eta_chain(seed):
    operator, space = random_instance(seed)
    b = ber(operator, space)
    q = ber(operator.gram(), space)
    value = eta(operator, space)
    scale = max(1.0, value)
    assert max(b, q) <= value + 1e-9 * scale
    assert value <= math.sqrt(b ** 2 + q ** 2) + 1e-9 * scale


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_gram_ber_is_largest_image_norm(seed):
    operator, space = random_instance(seed)
    largest = float(np.max(berezin_profile(operator, space).image_norms_sq))
    assert ber(operator.gram(), space) == pytest.approx(largest, rel=1e-12, abs=1e-14)
    assert berezin_norm(operator.gram(), space) == pytest.approx(largest, rel=1e-10, abs=1e-14)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), phase=st.floats(0, 2 * math.pi))
def test_eta_is_phase_invariant(seed, phase):
    operator, space = random_instance(seed)
    rotated = operator * complex(math.cos(phase), math.sin(phase))
    assert eta(rotated, space) == pytest.approx(eta(operator, space), rel=1e-12, abs=1e-14)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_image_norms_dominate_squared_symbols(seed):
    operator, space = random_instance(seed)
    profile = berezin_profile(operator, space)
    squared = np.abs(profile.symbols) ** 2
    assert np.all(profile.image_norms_sq >= squared - 1e-12 * np.maximum(1.0, squared))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_eta_below_radius_and_norm(seed):
    operator, space = random_instance(seed)
    w = numerical_radius(operator).value
    norm = float(np.linalg.norm(operator.entries, 2))
    value = eta(operator, space)
    assert value <= math.sqrt(w ** 2 + norm ** 4) + 1e-9 * max(1.0, value)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_functionals_are_permutation_invariant(seed):
    operator, space = random_instance(seed)
    order = list(np.random.default_rng(seed).permutation(space.size))
    shuffled = space.permuted(order)
    for func in (ber, least_ber, berezin_norm, eta):
        assert func(operator, shuffled) == pytest.approx(func(operator, space), rel=1e-12, abs=1e-15)


def test_orthonormal_random_space_dimension():
    space = random_space(trial_rng(1, 0), 'orthonormal', (3,), (2,))
    assert space.dim == 3
    assert orthonormal_space(3).size == 3
