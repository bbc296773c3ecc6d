import json
import logging
import math
import os
from multiprocessing import Pool
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from dcolor.algo import FixedPermutation, FixedStart, RandomStart, SchedulerPolicy, StartPolicy, UniformRandom
from dcolor.algo.adversary import MIMIC_LOWEST, MIMIC_UNIFORM, AdversaryStrategy, bad_bipartite_start, \
    create_adversary, monochromatic_start
from dcolor.algo.engine import create_process, default_step_cap
from dcolor.experiments import ConfigError, ExperimentConfig, SummaryStats
from dcolor.model import Graph
from dcolor.model.coloring import Coloring, greedy_coloring
from dcolor.model.generators import gen_clique, gen_complete_bipartite, gen_cycle, gen_erdos_renyi, gen_fig2_like
from dcolor.oracle import harmonic
from dcolor.store import read_coloring, read_graph, read_vertex_list
from dcolor.utils import RandomStream, derive_trial_seed

logger = logging.getLogger(__name__)

# trials per work item handed to the pool
CHUNK_SIZE = 1000


def resolve_graph(cfg: ExperimentConfig) -> Graph:
    if 'file' in cfg.graph:
        return read_graph(cfg.resolve(cfg.graph['file']))
    generator = cfg.graph['generator']
    params = cfg.graph.get('params', {}) or {}
    if generator == 'clique':
        return gen_clique(int(params['n']))
    elif generator == 'complete-bipartite':
        return gen_complete_bipartite(int(params['a']), int(params['b']))
    elif generator == 'cycle':
        return gen_cycle(int(params['n']))
    elif generator == 'erdos-renyi':
        return gen_erdos_renyi(int(params['n']), float(params['p']), int(params['seed']))
    elif generator == 'bad-bipartite':
        return bad_bipartite_start(int(params['degree']))[0]
    elif generator == 'fig2':
        return gen_fig2_like()[0]
    else:
        raise ConfigError(f'Unsupported graph generator: {generator}')


def resolve_palette(cfg: ExperimentConfig, g: Graph) -> int:
    if cfg.start.startswith('file:'):
        file_palette = read_coloring(cfg.resolve(cfg.start[len('file:'):])).get_palette_size()
        if cfg.palette is not None and cfg.palette != file_palette:
            raise ConfigError(f'Palette {cfg.palette} disagrees with start file palette {file_palette}')
        return file_palette
    return cfg.palette if cfg.palette is not None else g.get_max_degree() + 1


def _fixed_construction(g: Graph, construction, name: str) -> FixedStart:
    expected_graph, coloring = construction
    if expected_graph != g:
        raise ConfigError(f'Start {name} needs its own graph, got {g}')
    return FixedStart(coloring)


def resolve_start(cfg: ExperimentConfig, g: Graph, palette_size: int) -> StartPolicy:
    start = cfg.start
    if start == 'random':
        return RandomStart()
    elif start == 'monochromatic':
        return FixedStart(monochromatic_start(g, palette_size))
    elif start == 'greedy':
        colors = greedy_coloring(g).get_colors()
        if max(colors, default=1) > palette_size:
            raise ConfigError(f'Greedy start uses {max(colors)} colors, config asks for D={palette_size}')
        return FixedStart(Coloring(colors, palette_size))
    elif start == 'bad-bipartite':
        if g.get_n() % 2 != 0:
            raise ConfigError(f'Start bad-bipartite needs K_(d,d), got {g}')
        policy = _fixed_construction(g, bad_bipartite_start(g.get_n() // 2), start)
    elif start == 'fig2':
        (fig2_graph, fig2_coloring, _) = gen_fig2_like()
        policy = _fixed_construction(g, (fig2_graph, fig2_coloring), start)
    elif start.startswith('file:'):
        policy = FixedStart(read_coloring(cfg.resolve(start[len('file:'):])))
        policy.get_coloring().check_graph(g)
        return policy
    else:
        raise ConfigError(f'Unsupported start policy: {start}')

    if policy.get_coloring().get_palette_size() != palette_size:
        raise ConfigError(f'Start {start} is built for D={policy.get_coloring().get_palette_size()}, '
                          f'config asks for D={palette_size}')
    return policy


def resolve_order(cfg: ExperimentConfig, g: Graph) -> SchedulerPolicy:
    order = cfg.order
    if order == 'uniform':
        return UniformRandom()
    elif order.startswith('perm:'):
        permutation = read_vertex_list(cfg.resolve(order[len('perm:'):]))
        if len(permutation) != g.get_n():
            raise ConfigError(f'Permutation covers {len(permutation)} vertices but graph has {g.get_n()}')
        try:
            return FixedPermutation(permutation)
        except ValueError as error:
            raise ConfigError(str(error))
    elif order == 'mimic':
        return create_adversary(AdversaryStrategy.MIMIC_PERSISTENT, mode=MIMIC_UNIFORM)
    elif order == 'mimic:lowest':
        return create_adversary(AdversaryStrategy.MIMIC_PERSISTENT, mode=MIMIC_LOWEST)
    elif order == 'min-drift':
        return create_adversary(AdversaryStrategy.MIN_PHI_DRIFT)
    elif order == 'max-conflicted':
        return create_adversary(AdversaryStrategy.MAX_CONFLICTED)
    elif order.startswith('script:'):
        script = read_vertex_list(cfg.resolve(order[len('script:'):]))
        try:
            return create_adversary(AdversaryStrategy.SCRIPTED, script=script)
        except ValueError as error:
            raise ConfigError(str(error))
    else:
        raise ConfigError(f'Unsupported order policy: {order}')


class TrialSetup:
    """
    Everything a worker needs to replay trials: resolved graph, palette, policies and cap.
    """

    def __init__(self, algorithm: str, g: Graph, palette_size: int, start: StartPolicy,
                 scheduler: SchedulerPolicy, step_cap: int, master_seed: int):
        self.algorithm = algorithm
        self.graph = g
        self.palette_size = palette_size
        self.start = start
        self.scheduler = scheduler
        self.step_cap = step_cap
        self.master_seed = master_seed

    @staticmethod
    def from_config(cfg: ExperimentConfig, algorithm: Optional[str] = None) -> 'TrialSetup':
        g = resolve_graph(cfg)
        palette_size = resolve_palette(cfg, g)
        step_cap = cfg.step_cap if cfg.step_cap is not None else default_step_cap(g.get_n(), palette_size)
        return TrialSetup(algorithm or cfg.algorithm, g, palette_size, resolve_start(cfg, g, palette_size),
                          resolve_order(cfg, g), step_cap, cfg.seed)


def _run_chunk(args):
    setup, trial_indices = args
    process = create_process(setup.algorithm, setup.graph, setup.palette_size, setup.start, setup.scheduler,
                             setup.step_cap)
    rows = []
    for trial in trial_indices:
        seed = derive_trial_seed(setup.master_seed, trial)
        result = process.run(RandomStream(seed))
        rows.append((trial, seed, result.get_total_draws(), result.get_step3_draws(), result.get_selections(),
                     result.is_terminated(), tuple(result.get_per_vertex_draws())))
    return rows


def execute_trials(setup: TrialSetup, trials: int, workers: Optional[int] = None) -> List[tuple]:
    """
    Runs trials 0..trials-1 and returns their rows in trial-index order whatever the worker count.
    """
    chunks = [(setup, range(start, min(start + CHUNK_SIZE, trials))) for start in range(0, trials, CHUNK_SIZE)]
    workers = workers if workers is not None else (os.cpu_count() or 1)
    workers = min(workers, len(chunks))
    if workers <= 1:
        results = [_run_chunk(chunk) for chunk in chunks]
    else:
        with Pool(workers) as pool:
            results = list(pool.imap(_run_chunk, chunks))
    return [row for chunk_rows in results for row in chunk_rows]


def _finite(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _clean(document):
    if isinstance(document, dict):
        return {key: _clean(value) for key, value in document.items()}
    elif isinstance(document, (list, tuple)):
        return [_clean(value) for value in document]
    elif isinstance(document, np.generic):
        return _finite(document.item())
    return _finite(document)


def write_json(document: dict, path: Path):
    with open(path, 'w') as out:
        json.dump(_clean(document), out, sort_keys=True, indent=2)
        out.write('\n')


class TrialReport:
    """
    Outcome of run_trials: per-counter summaries, the per-trial table and, when requested, per-vertex
    means of Step-3 draws.
    """

    def __init__(self, cfg: ExperimentConfig, setup: TrialSetup, rows: List[tuple]):
        self.config_hash = cfg.config_hash()
        self.master_seed = cfg.seed
        self.algorithm = setup.algorithm
        self.graph = setup.graph
        self.palette_size = setup.palette_size
        self.trials = pd.DataFrame([row[:6] for row in rows],
                                   columns=['trial', 'seed', 'total_draws', 'step3_draws', 'selections',
                                            'terminated'])
        self.trials['config_hash'] = self.config_hash
        self.trials['master_seed'] = self.master_seed
        capped = ~self.trials['terminated'].to_numpy(dtype=bool)

        self.summaries: Dict[str, SummaryStats] = {}
        for counter in ('total_draws', 'step3_draws'):
            self.summaries[counter] = SummaryStats.from_samples(self.trials[counter].to_numpy(), capped,
                                                                cfg.exclude_capped, counter)
        self.per_vertex = None
        if 'per_vertex' in cfg.counters:
            per_vertex = np.array([row[6] for row in rows], dtype=np.int64)
            if cfg.exclude_capped:
                per_vertex = per_vertex[~capped]
            count = per_vertex.shape[0]
            means = per_vertex.mean(axis=0) if count > 0 else np.full(self.graph.get_n(), np.nan)
            stds = per_vertex.std(axis=0, ddof=1) if count > 1 else np.zeros(self.graph.get_n())
            degrees = [self.graph.get_degree(v) for v in range(self.graph.get_n())]
            self.per_vertex = pd.DataFrame({
                'vertex': range(self.graph.get_n()),
                'degree': degrees,
                'mean': means,
                'se': stds / math.sqrt(max(count, 1)),
                'harmonic_degree': [float(harmonic(d)) for d in degrees],
                'config_hash': self.config_hash,
                'master_seed': self.master_seed
            })
        self.reported = [counter for counter in cfg.counters if counter != 'per_vertex']

    def get_summary(self, counter: str = 'total_draws') -> SummaryStats:
        return self.summaries[counter]

    def get_trials(self) -> pd.DataFrame:
        return self.trials

    def get_per_vertex(self) -> Optional[pd.DataFrame]:
        return self.per_vertex

    def get_capped_count(self) -> int:
        return int((~self.trials['terminated']).sum())

    def summary_frame(self) -> pd.DataFrame:
        rows = []
        for counter in self.reported:
            row = {'counter': counter}
            row.update(self.summaries[counter].to_dict())
            row.update({'algorithm': self.algorithm, 'n': self.graph.get_n(),
                        'max_degree': self.graph.get_max_degree(), 'palette': self.palette_size,
                        'config_hash': self.config_hash, 'master_seed': self.master_seed})
            rows.append(row)
        return pd.DataFrame(rows)

    def to_dict(self) -> dict:
        document = {
            'config_hash': self.config_hash,
            'master_seed': self.master_seed,
            'algorithm': self.algorithm,
            'graph': str(self.graph),
            'palette': self.palette_size,
            'summaries': {counter: self.summaries[counter].to_dict() for counter in self.reported}
        }
        if self.per_vertex is not None:
            document['per_vertex'] = self.per_vertex[['vertex', 'degree', 'mean', 'se']].to_dict(orient='records')
        return document

    def write(self, output_dir: Path, per_trial: bool = False):
        output_dir.mkdir(parents=True, exist_ok=True)
        prefix = f'run-{self.config_hash}'
        self.summary_frame().to_csv(output_dir.joinpath(f'{prefix}-summary.csv'), index=False)
        write_json(self.to_dict(), output_dir.joinpath(f'{prefix}-summary.json'))
        if per_trial:
            self.trials.to_csv(output_dir.joinpath(f'{prefix}-trials.csv'), index=False)
        if self.per_vertex is not None:
            self.per_vertex.to_csv(output_dir.joinpath(f'{prefix}-per-vertex.csv'), index=False)
        logger.info(f'wrote results for {prefix} to {output_dir}')


def run_trials(cfg: ExperimentConfig, per_trial: bool = False, write: bool = True) -> TrialReport:
    """
    Runs cfg.trials trials; with write set, results go to cfg.output when one is configured.
    """
    setup = TrialSetup.from_config(cfg)
    logger.info(f'running {cfg.trials} trials of {setup.algorithm} on {setup.graph} with D={setup.palette_size}, '
                f'start={setup.start}, order={setup.scheduler}, seed={cfg.seed}')
    report = TrialReport(cfg, setup, execute_trials(setup, cfg.trials, cfg.workers))
    for counter in report.reported:
        logger.info(f'{counter}: {report.get_summary(counter)}')
    if write and cfg.output is not None:
        report.write(Path(cfg.output), per_trial)
    return report


SWEEP_SETTINGS = {
    'palette': 'palette',
    'seed': 'seed',
    'trials': 'trials',
    'step-cap': 'step_cap'
}


def _override(cfg: ExperimentConfig, axis: str, value) -> ExperimentConfig:
    params = cfg.graph.get('params', {}) or {}
    if 'file' not in cfg.graph and axis in params:
        graph = dict(cfg.graph)
        graph['params'] = {**params, axis: value}
        return cfg.with_overrides(graph=graph)
    elif axis in SWEEP_SETTINGS:
        return cfg.with_overrides(**{SWEEP_SETTINGS[axis]: value})
    else:
        raise ConfigError(f'Cannot sweep over {axis}: not a generator parameter or run setting')


def primary_counter(cfg: ExperimentConfig) -> str:
    reported = [counter for counter in cfg.counters if counter != 'per_vertex']
    return reported[0] if reported else 'total_draws'


def sweep(cfg: ExperimentConfig, axis: str, values: Sequence) -> pd.DataFrame:
    """
    One run_trials per axis value, one row each, with the normalizations used to read growth rates.
    """
    counter = primary_counter(cfg)
    rows = []
    previous = None
    for value in values:
        report = run_trials(_override(cfg, axis, value), write=False)
        summary = report.get_summary(counter)
        n = report.graph.get_n()
        degree = report.graph.get_max_degree()
        row = {
            axis: value,
            'n': n,
            'max_degree': degree,
            'palette': report.palette_size,
            'counter': counter,
            'mean': summary.mean,
            'se': summary.se,
            'cap_hits': summary.cap_hits,
            'mean_over_n_delta': summary.mean / (n * degree) if degree > 0 else float('nan'),
            'mean_over_n_log_delta': summary.mean / (n * math.log(degree)) if degree > 1 else float('nan'),
            'mean_over_n_harmonic': summary.mean / (n * float(harmonic(n))),
            'ratio_to_previous': summary.mean / previous if previous else float('nan'),
            'config_hash': report.config_hash,
            'master_seed': report.master_seed
        }
        per_vertex = report.get_per_vertex()
        if per_vertex is not None:
            row['per_vertex_max_mean'] = float(per_vertex['mean'].max())
            row['harmonic_delta'] = float(harmonic(degree))
        rows.append(row)
        previous = summary.mean
        logger.info(f'sweep {axis}={value}: mean {counter}={summary.mean:.6g} ± {summary.se:.3g}')

    table = pd.DataFrame(rows)
    if cfg.output is not None:
        output_dir = Path(cfg.output)
        output_dir.mkdir(parents=True, exist_ok=True)
        table.to_csv(output_dir.joinpath(f'sweep-{cfg.config_hash()}-{axis}.csv'), index=False)
    return table


def compare_algorithms(cfg: ExperimentConfig) -> pd.DataFrame:
    """
    Runs both processes on the same graph, start, order and trial seeds and reports their means and
    the paired difference persistent - dc.
    """
    counter = primary_counter(cfg)
    samples = {}
    rows = []
    for algorithm in ('dc', 'persistent'):
        setup = TrialSetup.from_config(cfg, algorithm)
        trial_rows = execute_trials(setup, cfg.trials, cfg.workers)
        column = 2 if counter == 'total_draws' else 3
        values = np.array([row[column] for row in trial_rows], dtype=np.int64)
        capped = np.array([not row[5] for row in trial_rows], dtype=bool)
        samples[algorithm] = (values, capped)
        summary = SummaryStats.from_samples(values, capped, cfg.exclude_capped, f'{algorithm} {counter}')
        rows.append({'algorithm': algorithm, **summary.to_dict()})

    (dc_values, dc_capped) = samples['dc']
    (persistent_values, persistent_capped) = samples['persistent']
    difference = SummaryStats.from_samples(persistent_values - dc_values, dc_capped | persistent_capped,
                                           cfg.exclude_capped, f'{counter} difference')
    rows.append({'algorithm': 'persistent-dc', **difference.to_dict()})
    logger.info(f'persistent - dc {counter}: {difference}')

    table = pd.DataFrame(rows)
    table['counter'] = counter
    table['config_hash'] = cfg.config_hash()
    table['master_seed'] = cfg.seed
    if cfg.output is not None:
        output_dir = Path(cfg.output)
        output_dir.mkdir(parents=True, exist_ok=True)
        table.to_csv(output_dir.joinpath(f'compare-{cfg.config_hash()}.csv'), index=False)
    return table
