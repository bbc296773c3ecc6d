import hashlib
import json
import logging
import math
import os
from pathlib import Path
from typing import List, Optional

import numpy as np
import yaml

API_VERSION = 'v1Beta'
OUTPUT_DIR_ENV = 'DCOLOR_OUTPUT_DIR'

Z_99 = 2.576
COUNTERS = ('total_draws', 'step3_draws', 'per_vertex')
ALGORITHMS = ('dc', 'persistent')
GENERATORS = {
    'clique': {'n'},
    'complete-bipartite': {'a', 'b'},
    'cycle': {'n'},
    'erdos-renyi': {'n', 'p', 'seed'},
    'bad-bipartite': {'degree'},
    'fig2': set()
}


class ConfigError(ValueError):
    pass


class Environment:
    def __init__(self, config_yaml):
        self.values = {}
        for entry in config_yaml or []:
            key = entry['key']
            value = None
            if 'value' in entry:
                value = entry['value']
            elif 'value-source' in entry:
                source = entry['value-source']
                if source == 'SYSTEM_ENV':
                    value = os.getenv(key)
                else:
                    raise ConfigError(f'Unsupported value-source in Environment entry: {entry}')
            else:
                raise ConfigError(f'Unsupported value type in Environment entry: {entry}')

            self.values[key] = value

    def getenv(self, key: str, default_val: str = None) -> str:
        if key in self.values and self.values[key] is not None:
            return self.values[key]
        else:
            return os.getenv(key, default_val)


class ExperimentConfig:
    """
    A validated experiment: which graph, algorithm, palette, start and order, how many trials from
    which master seed, and where results go.
    """

    def __init__(self, graph: dict, algorithm: str = 'dc', palette: Optional[int] = None, start: str = 'random',
                 order: str = 'uniform', trials: int = 1000, seed: int = 0, step_cap: Optional[int] = None,
                 output: Optional[str] = None, counters: Optional[List[str]] = None, workers: Optional[int] = None,
                 exclude_capped: bool = False, environment: Optional[Environment] = None,
                 base_dir: Optional[Path] = None):
        self.graph = dict(graph)
        self.algorithm = algorithm
        self.palette = palette
        self.start = start
        self.order = order
        self.trials = trials
        self.seed = seed
        self.step_cap = step_cap
        self.environment = environment if environment is not None else Environment([])
        self.output = output if output is not None else self.environment.getenv(OUTPUT_DIR_ENV)
        self.counters = list(counters) if counters is not None else ['total_draws', 'step3_draws']
        self.workers = workers
        self.exclude_capped = exclude_capped
        self.base_dir = base_dir if base_dir is not None else Path('.')
        self.validate()

    def validate(self):
        if 'file' in self.graph:
            if not self.resolve(self.graph['file']).exists():
                raise ConfigError(f'Graph file does not exist: {self.graph["file"]}')
        else:
            generator = self.graph.get('generator')
            if generator not in GENERATORS:
                raise ConfigError(f'Unsupported graph generator: {generator}')
            params = set(self.graph.get('params', {}) or {})
            if params != GENERATORS[generator]:
                raise ConfigError(f'Generator {generator} expects parameters {sorted(GENERATORS[generator])}, '
                                  f'got {sorted(params)}')
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f'Unsupported algorithm: {self.algorithm}')
        if self.palette is not None and self.palette < 1:
            raise ConfigError(f'Palette size must be at least 1: {self.palette}')
        if self.trials < 1:
            raise ConfigError(f'Need at least one trial: {self.trials}')
        if self.step_cap is not None and self.step_cap < 0:
            raise ConfigError(f'Step cap must be non-negative: {self.step_cap}')
        if self.workers is not None and self.workers < 1:
            raise ConfigError(f'Need at least one worker: {self.workers}')
        for counter in self.counters:
            if counter not in COUNTERS:
                raise ConfigError(f'Unsupported counter: {counter}')
        for (spec, prefixes) in ((self.start, ('file:',)), (self.order, ('perm:', 'script:'))):
            for prefix in prefixes:
                if spec.startswith(prefix) and not self.resolve(spec[len(prefix):]).exists():
                    raise ConfigError(f'Referenced file does not exist: {spec[len(prefix):]}')

    def resolve(self, path: str) -> Path:
        path = Path(path)
        return path if path.is_absolute() else self.base_dir.joinpath(path)

    def to_dict(self) -> dict:
        return {
            'graph': self.graph,
            'algorithm': self.algorithm,
            'palette': self.palette,
            'start': self.start,
            'order': self.order,
            'trials': self.trials,
            'seed': self.seed,
            'step-cap': self.step_cap,
            'counters': self.counters,
            'exclude-capped': self.exclude_capped
        }

    def config_hash(self) -> str:
        """
        Short digest of everything that determines the results; output location and worker count excluded.
        """
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(canonical.encode()).hexdigest()[:16]

    def with_overrides(self, **overrides) -> 'ExperimentConfig':
        values = {
            'graph': {key: (dict(value) if isinstance(value, dict) else value) for key, value in self.graph.items()},
            'algorithm': self.algorithm,
            'palette': self.palette,
            'start': self.start,
            'order': self.order,
            'trials': self.trials,
            'seed': self.seed,
            'step_cap': self.step_cap,
            'output': self.output,
            'counters': self.counters,
            'workers': self.workers,
            'exclude_capped': self.exclude_capped,
            'environment': self.environment,
            'base_dir': self.base_dir
        }
        values.update(overrides)
        return ExperimentConfig(**values)

    @staticmethod
    def from_dict(config: dict, base_dir: Optional[Path] = None) -> 'ExperimentConfig':
        api_version = config.get('api-version')
        if api_version != API_VERSION:
            raise ConfigError(f'Unsupported API version: {api_version}')
        if 'graph' not in config:
            raise ConfigError('Experiment config needs a graph section')
        known = {'api-version', 'graph', 'algorithm', 'palette', 'start', 'order', 'trials', 'seed', 'step-cap',
                 'output', 'counters', 'workers', 'exclude-capped', 'environment'}
        unknown = set(config) - known
        if unknown:
            raise ConfigError(f'Unknown config keys: {sorted(unknown)}')
        return ExperimentConfig(graph=config['graph'],
                                algorithm=config.get('algorithm', 'dc'),
                                palette=config.get('palette'),
                                start=config.get('start', 'random'),
                                order=config.get('order', 'uniform'),
                                trials=config.get('trials', 1000),
                                seed=config.get('seed', 0),
                                step_cap=config.get('step-cap'),
                                output=config.get('output'),
                                counters=config.get('counters'),
                                workers=config.get('workers'),
                                exclude_capped=config.get('exclude-capped', False),
                                environment=Environment(config.get('environment')),
                                base_dir=base_dir)

    @staticmethod
    def load(config_path: str) -> 'ExperimentConfig':
        path = Path(config_path)
        if not path.exists():
            raise ConfigError(f'Config file does not exist: {config_path}')
        with open(path, 'r') as config_yaml:
            try:
                config = yaml.safe_load(config_yaml)
            except yaml.YAMLError as error:
                raise ConfigError(f'Unable to parse {config_path}: {error}')
        if not isinstance(config, dict):
            raise ConfigError(f'Config {config_path} is not a mapping')
        return ExperimentConfig.from_dict(config, path.parent)


class SummaryStats:
    """
    Monte Carlo summary of one counter: mean, sample standard deviation, standard error and a 99%
    normal-approximation confidence interval.
    """

    logger = logging.getLogger(__name__)

    def __init__(self, trials: int, mean: float, std: float, min_value: float, max_value: float, cap_hits: int):
        self.trials = trials
        self.mean = mean
        self.std = std
        self.se = std / math.sqrt(trials) if trials > 0 else float('nan')
        self.ci_low = mean - Z_99 * self.se
        self.ci_high = mean + Z_99 * self.se
        self.min = min_value
        self.max = max_value
        self.cap_hits = cap_hits

    @staticmethod
    def from_samples(samples, capped=None, exclude_capped: bool = False, name: str = 'counter') -> 'SummaryStats':
        """
        Samples are reduced in the order given; capped marks trials that hit the step cap.
        """
        values = np.asarray(samples, dtype=np.int64)
        flags = np.zeros(len(values), dtype=bool) if capped is None else np.asarray(capped, dtype=bool)
        cap_hits = int(flags.sum())
        if cap_hits > 0:
            if exclude_capped:
                SummaryStats.logger.warning(f'excluding {cap_hits} step-capped trials from {name}')
                values = values[~flags]
            else:
                SummaryStats.logger.warning(f'{name} includes {cap_hits} step-capped trials')
        trials = len(values)
        if trials == 0:
            return SummaryStats(0, float('nan'), float('nan'), float('nan'), float('nan'), cap_hits)
        mean = int(values.sum()) / trials
        std = float(values.std(ddof=1)) if trials > 1 else 0.0
        return SummaryStats(trials, mean, std, int(values.min()), int(values.max()), cap_hits)

    def within(self, target: float, num_se: float = 4.0) -> bool:
        return abs(self.mean - target) <= num_se * self.se

    def to_dict(self) -> dict:
        return {
            'trials': self.trials,
            'mean': self.mean,
            'std': self.std,
            'se': self.se,
            'ci99_low': self.ci_low,
            'ci99_high': self.ci_high,
            'min': self.min,
            'max': self.max,
            'cap_hits': self.cap_hits
        }

    def __str__(self):
        return f'mean={self.mean:.6g} ± {self.se:.3g} (99% CI [{self.ci_low:.6g}, {self.ci_high:.6g}], ' \
               f'n={self.trials}, cap hits={self.cap_hits})'
