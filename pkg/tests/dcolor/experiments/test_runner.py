import math
import shutil
from pathlib import Path

import pytest
from pytest_mock import MockFixture

from dcolor.algo import FixedPermutation, FixedStart, RandomStart, UniformRandom
from dcolor.algo.adversary import MaxConflicted, MimicPersistent, MinPhiDrift, Scripted
from dcolor.experiments import ConfigError, ExperimentConfig
from dcolor.experiments.runner import TrialSetup, compare_algorithms, execute_trials, resolve_graph, resolve_order, \
    resolve_palette, resolve_start, run_trials, sweep
from dcolor.model import Graph
from dcolor.model.coloring import Coloring, is_proper
from dcolor.model.generators import gen_cycle
from dcolor.oracle import harmonic
from dcolor.store import write_coloring, write_graph, write_vertex_list


def config(generator: str, params: dict, **settings) -> ExperimentConfig:
    return ExperimentConfig({'generator': generator, 'params': params}, **settings)


def test_resolve_graphs():
    assert 6 == resolve_graph(config('clique', {'n': 4})).get_edge_count()
    assert 8 == resolve_graph(config('bad-bipartite', {'degree': 4})).get_n()
    assert 5 == resolve_graph(config('fig2', {})).get_n()
    assert 6 == resolve_graph(config('complete-bipartite', {'a': 2, 'b': 3})).get_edge_count()
    write_graph(gen_cycle(7), 'tmp/c7.graph')
    assert gen_cycle(7) == resolve_graph(ExperimentConfig({'file': 'tmp/c7.graph'}))


def test_resolve_starts():
    cfg = config('bad-bipartite', {'degree': 3}, start='bad-bipartite')
    g = resolve_graph(cfg)
    assert 4 == resolve_palette(cfg, g)
    start = resolve_start(cfg, g, 4)
    assert [1, 1, 1, 1, 2, 3] == start.get_coloring().get_colors()
    with pytest.raises(ConfigError):
        resolve_start(cfg, g, 5)
    with pytest.raises(ConfigError):
        bad = config('cycle', {'n': 6}, start='bad-bipartite')
        resolve_start(bad, resolve_graph(bad), 3)

    fig2 = config('fig2', {}, start='fig2')
    assert 4 == resolve_start(fig2, resolve_graph(fig2), 4).get_coloring().get_palette_size()
    assert isinstance(resolve_start(config('cycle', {'n': 5}), gen_cycle(5), 3), RandomStart)
    mono = resolve_start(config('cycle', {'n': 5}, start='monochromatic'), gen_cycle(5), 3)
    assert [1] * 5 == mono.get_coloring().get_colors()


def test_greedy_start():
    cfg = config('cycle', {'n': 5}, start='greedy')
    g = resolve_graph(cfg)
    start = resolve_start(cfg, g, 4)
    assert 4 == start.get_coloring().get_palette_size()
    assert is_proper(g, start.get_coloring())
    with pytest.raises(ConfigError):
        resolve_start(cfg, g, 2)
    report = run_trials(cfg.with_overrides(trials=20, workers=1))
    assert 0.0 == report.get_summary('step3_draws').mean


def test_start_file_sets_palette():
    write_coloring(Coloring([1, 1, 2], 5), 'tmp/start.coloring')
    cfg = config('cycle', {'n': 3}, start='file:tmp/start.coloring')
    g = resolve_graph(cfg)
    assert 5 == resolve_palette(cfg, g)
    assert isinstance(resolve_start(cfg, g, 5), FixedStart)
    with pytest.raises(ConfigError):
        resolve_palette(config('cycle', {'n': 3}, start='file:tmp/start.coloring', palette=4), g)


def test_resolve_orders():
    write_vertex_list([2, 0, 1], 'tmp/perm.txt')
    write_vertex_list([0, 1], 'tmp/short.txt')
    g = gen_cycle(3)
    assert isinstance(resolve_order(config('cycle', {'n': 3}), g), UniformRandom)
    assert [2, 0, 1] == resolve_order(config('cycle', {'n': 3}, order='perm:tmp/perm.txt'), g).get_order()
    assert 'uniform' == resolve_order(config('cycle', {'n': 3}, order='mimic'), g).get_mode()
    assert 'lowest' == resolve_order(config('cycle', {'n': 3}, order='mimic:lowest'), g).get_mode()
    assert isinstance(resolve_order(config('cycle', {'n': 3}, order='min-drift'), g), MinPhiDrift)
    assert isinstance(resolve_order(config('cycle', {'n': 3}, order='max-conflicted'), g), MaxConflicted)
    assert isinstance(resolve_order(config('cycle', {'n': 3}, order='script:tmp/perm.txt'), g), Scripted)
    assert isinstance(resolve_order(config('cycle', {'n': 3}, order='mimic'), g), MimicPersistent)
    with pytest.raises(ConfigError):
        resolve_order(config('cycle', {'n': 3}, order='perm:tmp/short.txt'), g)
    with pytest.raises(ConfigError):
        resolve_order(config('cycle', {'n': 3}, order='random-walk'), g)
    write_vertex_list([1, -1], 'tmp/negative.txt')
    with pytest.raises(ConfigError):
        resolve_order(config('cycle', {'n': 3}, order='script:tmp/negative.txt'), g)
    assert isinstance(resolve_order(config('cycle', {'n': 3}, order='perm:tmp/perm.txt'), g), FixedPermutation)


def test_proper_start_has_zero_mean():
    write_coloring(Coloring([1, 2, 1, 2], 3), 'tmp/proper.coloring')
    report = run_trials(config('cycle', {'n': 4}, start='file:tmp/proper.coloring', trials=200, workers=1))
    summary = report.get_summary('step3_draws')
    assert 0.0 == summary.mean
    assert 0.0 == summary.se
    assert 4.0 == report.get_summary('total_draws').mean


def test_single_edge_monte_carlo():
    write_graph(Graph.from_edge_list(2, [(0, 1)]), 'tmp/edge.graph')
    write_coloring(Coloring([1, 1], 2), 'tmp/edge.coloring')
    cfg = ExperimentConfig({'file': 'tmp/edge.graph'}, start='file:tmp/edge.coloring', trials=5000, seed=3,
                           workers=1)
    summary = run_trials(cfg).get_summary('step3_draws')
    assert summary.within(2.0, 4.0)


def test_clique_total_draws():
    cfg = config('clique', {'n': 5}, trials=5000, seed=1, workers=1)
    summary = run_trials(cfg).get_summary('total_draws')
    assert summary.within(5 * float(harmonic(5)), 4.0)


def test_trials_independent_of_worker_count():
    cfg = config('cycle', {'n': 8}, palette=3, trials=2500, seed=5)
    setup = TrialSetup.from_config(cfg)
    assert execute_trials(setup, cfg.trials, 1) == execute_trials(setup, cfg.trials, 3)


def test_outputs_are_reproducible():
    cfg = config('cycle', {'n': 6}, trials=300, seed=2, workers=1, counters=['step3_draws', 'per_vertex'])
    first = run_trials(cfg.with_overrides(output='tmp/first'), per_trial=True)
    run_trials(cfg.with_overrides(output='tmp/second'), per_trial=True)
    prefix = f'run-{cfg.config_hash()}'
    for suffix in ('summary.csv', 'summary.json', 'trials.csv', 'per-vertex.csv'):
        a = Path('tmp/first').joinpath(f'{prefix}-{suffix}').read_bytes()
        b = Path('tmp/second').joinpath(f'{prefix}-{suffix}').read_bytes()
        assert a == b
    trials = first.get_trials()
    assert 300 == len(trials)
    assert {cfg.config_hash()} == set(trials['config_hash'])
    assert {2} == set(trials['master_seed'])
    assert list(range(300)) == list(trials['trial'])
    per_vertex = first.get_per_vertex()
    assert 6 == len(per_vertex)
    assert math.isclose(first.get_summary('step3_draws').mean, float(per_vertex['mean'].sum()))


def test_step_cap_reported():
    cfg = config('clique', {'n': 4}, start='monochromatic', trials=50, step_cap=0, workers=1)
    report = run_trials(cfg)
    assert 50 == report.get_capped_count()
    assert 50 == report.get_summary('step3_draws').cap_hits


def test_sweep():
    cfg = config('clique', {'n': 4}, trials=400, seed=4, workers=1, output='tmp/sweep')
    table = sweep(cfg, 'n', [3, 4, 6])
    assert [3, 4, 6] == list(table['n'])
    assert [2, 3, 5] == list(table['max_degree'])
    assert math.isnan(table['ratio_to_previous'][0])
    assert table['mean'][2] / table['mean'][1] == table['ratio_to_previous'][2]
    assert math.isclose(table['mean'][0] / (3 * float(harmonic(3))), table['mean_over_n_harmonic'][0])
    assert Path(f'tmp/sweep/sweep-{cfg.config_hash()}-n.csv').exists()
    with pytest.raises(ConfigError):
        sweep(cfg, 'colour', [1])


def test_sweep_points_write_nothing_of_their_own(mocker: MockFixture):
    mocker.patch.dict('os.environ', {'DCOLOR_OUTPUT_DIR': 'tmp/env'})
    cfg = config('clique', {'n': 4}, trials=100, seed=4, workers=1)
    assert 'tmp/env' == cfg.output
    sweep(cfg, 'n', [3, 4])
    assert [f'sweep-{cfg.config_hash()}-n.csv'] == sorted(path.name for path in Path('tmp/env').iterdir())


def test_sweep_per_vertex_columns():
    cfg = config('bad-bipartite', {'degree': 2}, algorithm='persistent', start='bad-bipartite', trials=200,
                 workers=1, counters=['step3_draws', 'per_vertex'])
    table = sweep(cfg, 'seed', [1, 2])
    assert 'per_vertex_max_mean' in table.columns
    assert 1.5 == table['harmonic_delta'][0]


def test_compare_algorithms():
    cfg = config('cycle', {'n': 6}, palette=3, trials=500, seed=8, workers=1, counters=['step3_draws'])
    table = compare_algorithms(cfg)
    assert ['dc', 'persistent', 'persistent-dc'] == list(table['algorithm'])
    assert math.isclose(table['mean'][1] - table['mean'][0], table['mean'][2])


def teardown_function():
    shutil.rmtree('tmp', True)
