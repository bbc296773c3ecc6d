import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor

import pytest
from scipy.stats import chisquare

from dcolor.algo import FixedPermutation, FixedStart, RandomStart, RunResult, SchedulerError, SchedulerPolicy, \
    UniformRandom, scheduler_pick
from dcolor.algo.adversary import bad_bipartite_start
from dcolor.algo.engine import DecentralizedColoring, PersistentColoring, create_process, default_step_cap, \
    run_decentralized, run_persistent
from dcolor.model import Graph
from dcolor.model.coloring import Coloring, greedy_coloring, is_proper
from dcolor.model.generators import gen_clique, gen_cycle, gen_erdos_renyi
from dcolor.oracle.persistent import AllPermutationsAverage, exact_expected_recolorings_persistent
from dcolor.utils import RandomStream, derive_trial_seed


class PickNonConflicted(SchedulerPolicy):
    def pick(self, g, c, conflicted, history, rng):
        return next(v for v in range(g.get_n()) if v not in conflicted)


class PickFirst(SchedulerPolicy):
    def pick(self, g, c, conflicted, history, rng):
        return conflicted[0]


def test_default_step_cap():
    assert 10 * 8 * 64 == default_step_cap(8, 8)


def test_proper_start_needs_no_draws():
    g = gen_erdos_renyi(20, 0.2, 1)
    start = FixedStart(greedy_coloring(g))
    for run in (run_decentralized, run_persistent):
        result = run(g, g.get_max_degree() + 1, start, UniformRandom(), RandomStream(0))
        assert 0 == result.get_step3_draws()
        assert 20 == result.get_total_draws()
        assert 0 == result.get_selections()
        assert result.is_terminated()


def test_fixed_start_is_not_mutated():
    g = Graph.from_edge_list(2, [(0, 1)])
    start = FixedStart(Coloring([1, 1], 2))
    run_decentralized(g, 2, start, UniformRandom(), RandomStream(3))
    assert [1, 1] == start.get_coloring().get_colors()


def test_runs_end_proper_and_count_consistently():
    g = gen_clique(6)
    for seed in range(20):
        for algorithm in ('dc', 'persistent'):
            process = create_process(algorithm, g, 6, RandomStart(), UniformRandom())
            result = process.run(RandomStream(seed))
            assert result.is_terminated()
            assert is_proper(g, result.get_final_coloring())
            assert result.get_step3_draws() == sum(result.get_per_vertex_draws())
            assert 6 + result.get_step3_draws() == result.get_total_draws()


def test_runs_are_reproducible():
    g = gen_erdos_renyi(30, 0.2, 4)
    palette_size = g.get_max_degree() + 1
    for algorithm in ('dc', 'persistent'):
        process = create_process(algorithm, g, palette_size, RandomStart(), UniformRandom(), record_trace=True)
        assert process.run(RandomStream(99)) == process.run(RandomStream(99))


def test_trace_accounts_for_every_draw():
    g = gen_cycle(9)
    for algorithm in ('dc', 'persistent'):
        result = create_process(algorithm, g, 3, RandomStart(), UniformRandom(), record_trace=True).run(RandomStream(5))
        trace = result.get_trace()
        assert result.get_selections() == len(trace)
        assert result.get_step3_draws() == sum(len(draws) for (_, draws) in trace)


def test_persistent_selects_each_vertex_once():
    g = gen_clique(8)
    for seed in range(20):
        result = run_persistent(g, 8, RandomStart(), UniformRandom(), RandomStream(seed), record_trace=True)
        vertices = [v for (v, _) in result.get_trace()]
        assert len(set(vertices)) == len(vertices)
        for (_, draws) in result.get_trace():
            assert len(draws) >= 1


def test_persistent_follows_fixed_order():
    g = gen_clique(4)
    order = FixedPermutation([3, 1, 0, 2])
    result = run_persistent(g, 4, FixedStart(Coloring([1, 1, 1, 1], 4)), order, RandomStream(8), record_trace=True)
    vertices = [v for (v, _) in result.get_trace()]
    assert [3, 1, 0] == vertices


def test_step_cap_stops_run():
    g = Graph.from_edge_list(2, [(0, 1)])
    start = FixedStart(Coloring([1, 1], 2))
    for process in (DecentralizedColoring(g, 2, start, UniformRandom(), step_cap=0),
                    PersistentColoring(g, 2, start, UniformRandom(), step_cap=0)):
        result = process.run(RandomStream(1))
        assert not result.is_terminated()
        assert 0 == result.get_step3_draws()


def test_step_cap_partway_through_persistent_redraws():
    g = gen_clique(4)
    start = FixedStart(Coloring([1] * 4, 4))
    result = run_persistent(g, 4, start, UniformRandom(), RandomStream(2), step_cap=1, record_trace=True)
    assert not result.is_terminated()
    assert 1 == result.get_step3_draws()
    assert 1 == sum(len(draws) for (_, draws) in result.get_trace())


def test_default_step_cap_is_not_hit():
    capped = 0
    for seed in range(50):
        g = gen_erdos_renyi(40, 0.2, seed)
        palette_size = g.get_max_degree() + 1
        for algorithm in ('dc', 'persistent'):
            for start in (RandomStart(), FixedStart(Coloring([1] * 40, palette_size))):
                result = create_process(algorithm, g, palette_size, start, UniformRandom()).run(RandomStream(seed))
                capped += 0 if result.is_terminated() else 1
    (g, c) = bad_bipartite_start(8)
    for seed in range(50):
        capped += 0 if run_persistent(g, 9, FixedStart(c), UniformRandom(), RandomStream(seed)).is_terminated() else 1
    assert 0 == capped


def test_scheduler_must_pick_conflicted_vertex():
    g = Graph.from_edge_list(3, [(0, 1)])
    start = FixedStart(Coloring([1, 1, 1], 2))
    with pytest.raises(SchedulerError):
        run_decentralized(g, 2, start, PickNonConflicted(), RandomStream(0))
    with pytest.raises(SchedulerError):
        run_persistent(g, 2, start, PickNonConflicted(), RandomStream(0))


def test_invalid_permutation():
    with pytest.raises(ValueError):
        FixedPermutation([0, 0, 1])
    with pytest.raises(ValueError):
        create_process('greedy', gen_clique(3), 3, RandomStart(), UniformRandom())


def test_persistent_draws_at_most_palette_per_vertex_on_average():
    # every redraw succeeds with probability at least 1/D
    g = gen_clique(5)
    start = FixedStart(Coloring([1] * 5, 5))
    trials = 2000
    total = sum(run_persistent(g, 5, start, UniformRandom(), RandomStream(seed)).get_step3_draws()
                for seed in range(trials))
    assert total / trials <= 5 * 5


def test_run_result_str():
    result = RunResult(3, 2, [1, 1, 0], 2, True, Coloring([1, 2, 3], 3))
    assert 'total_draws=5; step3_draws=2; selections=2; terminated=True' == str(result)


def test_scheduler_pick_examples():
    g = gen_clique(8)
    c = Coloring([1] * 8, 8)
    rng = RandomStream(0)
    for policy in (UniformRandom(), FixedPermutation(range(8)), PickFirst()):
        assert 7 == scheduler_pick(policy, g, c, [7], [], rng)
    assert 0 == scheduler_pick(FixedPermutation([3, 0, 2, 1]), gen_clique(4), Coloring([1] * 4, 4), [0, 2], [], rng)
    with pytest.raises(SchedulerError):
        scheduler_pick(UniformRandom(), g, c, [], [], rng)


def test_uniform_pick_frequencies():
    g = gen_clique(5)
    c = Coloring([1] * 5, 5)
    rng = RandomStream(11)
    picks = 100000
    counts = Counter(scheduler_pick(UniformRandom(), g, c, [1, 2, 3, 4], [], rng) for _ in range(picks))
    se = math.sqrt(0.25 * 0.75 / picks)
    for v in (1, 2, 3, 4):
        assert abs(counts[v] / picks - 0.25) <= 4 * se


def test_decentralized_selections_equal_draws():
    g = gen_erdos_renyi(25, 0.3, 6)
    for seed in range(10):
        result = run_decentralized(g, g.get_max_degree() + 1, RandomStart(), UniformRandom(), RandomStream(seed))
        assert result.get_selections() == result.get_step3_draws()


def test_persistent_final_color_uniform_over_free_colors():
    # path 0 - 1 - 2 colored (1, 1, 2): vertex 0 goes first and settles on one of {2, 3, 4}
    g = Graph.from_edge_list(3, [(0, 1), (1, 2)])
    start = FixedStart(Coloring([1, 1, 2], 4))
    order = FixedPermutation([0, 1, 2])
    finals = Counter()
    for seed in range(10000):
        result = run_persistent(g, 4, start, order, RandomStream(derive_trial_seed(0, seed)), record_trace=True)
        (vertex, draws) = result.get_trace()[0]
        assert 0 == vertex
        finals[draws[-1]] += 1
    assert {2, 3, 4} == set(finals)
    assert chisquare([finals[2], finals[3], finals[4]]).pvalue > 1e-4


def test_bad_bipartite_matches_persistent_oracle():
    (g, c) = bad_bipartite_start(3)
    exact = exact_expected_recolorings_persistent(g, 4, FixedStart(c), AllPermutationsAverage())
    trials = 10000
    samples = [run_persistent(g, 4, FixedStart(c), UniformRandom(), RandomStream(derive_trial_seed(5, i)))
               .get_step3_draws() for i in range(trials)]
    mean = sum(samples) / trials
    se = math.sqrt(sum((x - mean) ** 2 for x in samples) / (trials - 1) / trials)
    assert abs(mean - float(exact)) <= 4 * se


def test_one_process_runs_trials_concurrently():
    g = gen_erdos_renyi(30, 0.2, 6)
    palette_size = g.get_max_degree() + 1
    for algorithm in ('dc', 'persistent'):
        process = create_process(algorithm, g, palette_size, RandomStart(), UniformRandom(), record_trace=True)
        attributes = set(vars(process))
        expected = [process.run(RandomStream(seed)) for seed in range(16)]
        assert attributes == set(vars(process))
        with ThreadPoolExecutor(4) as executor:
            actual = list(executor.map(lambda seed: process.run(RandomStream(seed)), range(16)))
        assert expected == actual
