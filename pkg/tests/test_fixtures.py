import pytest

from src.errors import FixtureMismatch, UnknownFixture
from src.services import fixtures
from src.services.fixtures import FIXTURES, evaluate_fixture, fixture_names, replay_fixture
from src.services.schemas import ALL_BOUND_IDS


def test_fixture_names():
    assert fixture_names() == ['diagonal', 'identity', 'minus-identity', 'nilpotent-orthonormal']


@pytest.mark.parametrize('name', sorted(FIXTURES))
def test_fixture_replays(name):
    evaluations = replay_fixture(name)
    assert all(e.satisfied for e in evaluations)


def test_normal_remark_only_for_normal_fixtures():
    ids = [e.bound_id for e in evaluate_fixture('nilpotent-orthonormal')]
    assert 'B-RMK-NORMAL' not in ids
    assert [e.bound_id for e in evaluate_fixture('diagonal')] == list(ALL_BOUND_IDS)


def test_unknown_fixture():
    with pytest.raises(UnknownFixture):
        replay_fixture('zero')


def test_mismatch_is_reported(monkeypatch):
    broken = fixtures.Fixture(
        'identity', 'wrong expectation', FIXTURES['identity'].space,
        FIXTURES['identity'].operator, (('B-EQN1', 'middle', None, 2.0),))
    monkeypatch.setitem(FIXTURES, 'identity', broken)
    with pytest.raises(FixtureMismatch, match='B-EQN1.middle'):
        replay_fixture('identity')
