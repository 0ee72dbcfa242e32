import json
import logging

import pytest

from src.app import EXIT_INPUT_ERROR, EXIT_OK, EXIT_VIOLATIONS, load_config, main
from src.services import fixtures
from src.services.storage import write_json


@pytest.fixture(autouse=True)
def restore_logging():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def spec_files(tmp_path):
    space = tmp_path / 'space.json'
    op = tmp_path / 'op.json'
    write_json(str(space), {'kind': 'orthonormal', 'dim': 2})
    write_json(str(op), {'entries': [[0, 1], [0, 0]]})
    return str(space), str(op)


def test_missing_config_falls_back_to_defaults(tmp_path):
    assert load_config(str(tmp_path / 'absent.json')) == {}


def test_fixtures_command(capsys):
    assert main(['fixtures', '--name', 'identity']) == EXIT_OK
    assert '== identity' in capsys.readouterr().out


def test_check_rejects_zero_trials():
    assert main(['check', '--trials', '0']) == EXIT_INPUT_ERROR


def test_check_writes_report(tmp_path, capsys):
    out = tmp_path / 'report.json'
    code = main(['check', '--trials', '2', '--bounds', 'B-EQN1,B-T1-i', '--dims', '2',
                 '--kernels', 'orthonormal,szego', '--out', str(out)])
    assert code == EXIT_OK
    report = json.loads(out.read_text(encoding='utf-8'))
    assert report['bounds']['B-EQN1']['checked'] == 2
    assert report['config']['bounds'] == ['B-EQN1', 'B-T1-i']
    assert 'B-T1-i' in capsys.readouterr().out


def test_check_prints_json_without_out(capsys):
    assert main(['check', '--trials', '1', '--bounds', 'B-EQN1', '--dims', '2',
                 '--kernels', 'orthonormal']) == EXIT_OK
    assert json.loads(capsys.readouterr().out)['rng'] == 'splitmix64-pcg64/1'


def test_unwritable_out_path_is_an_input_error(tmp_path):
    blocker = tmp_path / 'blocker'
    blocker.write_text('', encoding='utf-8')
    out = str(blocker / 'report.json')
    assert main(['check', '--trials', '1', '--bounds', 'B-EQN1', '--dims', '2',
                 '--kernels', 'orthonormal', '--out', out]) == EXIT_INPUT_ERROR
    assert main(['lemmas', '--trials', '2', '--out', out]) == EXIT_INPUT_ERROR


def test_eval_command(spec_files, capsys):
    space, op = spec_files
    assert main(['eval', '--bound', 'B-EQN1', '--space', space, '--op', op, '--json']) == EXIT_OK
    evaluation = json.loads(capsys.readouterr().out)
    assert evaluation['slack'] == 0.0
    assert evaluation['middle'] == 1.0


def test_eval_rejects_non_orthogonal_pair(spec_files, tmp_path):
    space, _ = spec_files
    identity = tmp_path / 'identity.json'
    write_json(str(identity), [[1, 0], [0, 1]])
    assert main(['eval', '--bound', 'B-SUM-ORTH', '--space', space, '--op', str(identity),
                 '--second', str(identity)]) == EXIT_INPUT_ERROR


def test_fixture_mismatch_exits_with_failure(monkeypatch, capsys):
    broken = fixtures.Fixture('identity', 'wrong expectation', fixtures.FIXTURES['identity'].space,
                              fixtures.FIXTURES['identity'].operator,
                              (('B-EQN1', 'middle', None, 2.0),))
    monkeypatch.setitem(fixtures.FIXTURES, 'identity', broken)
    assert main(['fixtures', '--name', 'identity']) == EXIT_VIOLATIONS


@pytest.mark.parametrize('argv', [
    ['eval', '--bound', 'B-T99'],
    ['frobnicate'],
    ['check', '--dims', 'x'],
])
def test_bad_arguments(argv, spec_files):
    space, op = spec_files
    if argv[0] == 'eval':
        argv = argv + ['--space', space, '--op', op]
    assert main(argv) == EXIT_INPUT_ERROR


def test_eval_missing_second_operand(spec_files):
    space, op = spec_files
    assert main(['eval', '--bound', 'B-SUM', '--space', space, '--op', op]) == EXIT_INPUT_ERROR


def test_shell_command(spec_files, tmp_path, capsys):
    space, op = spec_files
    out = tmp_path / 'shell.csv'
    assert main(['shell', '--space', space, '--op', op, '--out', str(out)]) == EXIT_OK
    assert len(out.read_text(encoding='utf-8').splitlines()) == 3
    assert '2 shell points' in capsys.readouterr().out


def test_lemmas_command(tmp_path, capsys):
    out = tmp_path / 'lemmas.json'
    assert main(['lemmas', '--trials', '5', '--seed', '1', '--out', str(out)]) == EXIT_OK
    assert json.loads(out.read_text(encoding='utf-8'))['trials'] == 5
    assert main(['lemmas', '--trials', '0']) == EXIT_INPUT_ERROR


def test_help_exits_cleanly(capsys):
    assert main(['--help']) == EXIT_OK
    assert 'berlab' in capsys.readouterr().out
