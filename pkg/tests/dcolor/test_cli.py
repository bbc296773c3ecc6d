import shutil
from pathlib import Path

from pytest_mock import MockFixture

from dcolor.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main
from dcolor.experiments import ExperimentConfig
from dcolor.model.generators import gen_clique
from dcolor.store import read_coloring, read_graph, write_vertex_list

CONFIG_YAML = """api-version: v1Beta
graph:
  generator: clique
  params:
    n: 3
trials: 200
seed: 1
workers: 1
"""


def write_config(text: str = CONFIG_YAML) -> str:
    path = Path('tmp/experiment.yaml')
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return str(path)


def test_gen():
    assert EXIT_OK == main(['gen', 'clique', 'tmp/k4.graph', '--n=4'])
    assert gen_clique(4) == read_graph('tmp/k4.graph')
    assert EXIT_OK == main(['gen', 'bad-bipartite', 'tmp/bb.graph', '--degree=3'])
    assert [1, 1, 1, 1, 2, 3] == read_coloring('tmp/bb.graph.coloring').get_colors()


def test_run_and_trace():
    assert EXIT_OK == main(['run', write_config(), '--trace=tmp/run.trace', '--output=tmp/out'])
    assert Path('tmp/run.trace').exists()
    assert any(Path('tmp/out').glob('run-*-summary.json'))


def test_run_selects_policies_by_name():
    config = write_config()
    overrides = {'algorithm': 'persistent', 'start': 'monochromatic', 'order': 'min-drift'}
    assert EXIT_OK == main(['run', config, '--output=tmp/named'] + [f'--{key}={value}' for key, value in overrides.items()])
    expected_hash = ExperimentConfig.load(config).with_overrides(**overrides).config_hash()
    assert Path(f'tmp/named/run-{expected_hash}-summary.json').exists()
    for order in ('uniform', 'mimic', 'mimic:lowest', 'max-conflicted'):
        assert EXIT_OK == main(['run', config, f'--order={order}', '--trials=20'])
    assert EXIT_OK == main(['run', config, '--start=greedy', '--seed=7', '--trials=20'])


def test_run_order_file_relative_to_working_directory():
    write_vertex_list([2, 0, 1], 'tmp/perm.txt')
    assert EXIT_OK == main(['run', write_config(), '--order=perm:tmp/perm.txt', '--algorithm=persistent'])


def test_unknown_policy_names():
    config = write_config()
    assert EXIT_USAGE == main(['run', config, '--order=zigzag'])
    assert EXIT_USAGE == main(['run', config, '--start=rainbow'])
    assert EXIT_USAGE == main(['run', config, '--algorithm=greedy'])
    assert EXIT_USAGE == main(['oracle', config, '--order=min-drift'])


def test_sweep_and_compare_overrides():
    config = write_config()
    assert EXIT_OK == main(['sweep', config, 'seed', '[1,2]', '--order=max-conflicted'])
    assert EXIT_OK == main(['compare', config, '--start=monochromatic', '--order=mimic'])


def test_oracle(capsys):
    assert EXIT_OK == main(['oracle', write_config()])
    assert 'expected step3_draws: 5/2 (≈ 2.5)' in capsys.readouterr().out


def test_drift_check():
    assert EXIT_OK == main(['drift-check', '--samples=10', '--n_max=6', '--palette_max=4'])


def test_accept():
    assert EXIT_OK == main(['accept', 'fig2'])
    assert EXIT_USAGE == main(['accept', 'bogus'])


def test_accept_failure(mocker: MockFixture):
    mocker.patch('dcolor.experiments.acceptance.monochromatic_component_count', return_value=2)
    assert EXIT_FAILURE == main(['accept', 'fig2'])


def test_config_errors():
    assert EXIT_USAGE == main(['run', 'tmp/missing.yaml'])
    assert EXIT_USAGE == main(['run', write_config(CONFIG_YAML.replace('clique', 'petersen'))])
    assert EXIT_USAGE == main(['gen', 'clique', 'tmp/k0.graph', '--n=0'])


def teardown_function():
    shutil.rmtree('tmp', True)
