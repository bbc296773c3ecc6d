import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import fire

from dcolor.algo import FixedPermutation, FixedStart, UniformRandom
from dcolor.algo.adversary import MimicPersistent, bad_bipartite_start
from dcolor.algo.engine import create_process
from dcolor.experiments import ConfigError, ExperimentConfig
from dcolor.experiments.acceptance import accept
from dcolor.experiments.drift_check import drift_check
from dcolor.experiments.runner import TrialSetup, compare_algorithms, run_trials, sweep, write_json
from dcolor.model import GraphError
from dcolor.model.coloring import ColoringError, PotentialKind
from dcolor.model.generators import gen_clique, gen_complete_bipartite, gen_cycle, gen_erdos_renyi, gen_fig2_like
from dcolor.oracle import StateSpaceGuardError, stopping_bound
from dcolor.oracle.markov import exact_expected_recolorings_dc
from dcolor.oracle.persistent import AllPermutationsAverage, exact_expected_recolorings_persistent, \
    exact_expected_recolorings_persistent_per_vertex
from dcolor.store import NoSuchFileException, TraceWriter, write_coloring, write_graph
from dcolor.utils import RandomStream, derive_trial_seed, init_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class CriterionFailure(Exception):
    pass


class DColorCommands:
    """
    Decentralized (Δ+1)-coloring simulator: graph generation, Monte Carlo runs, sweeps, exact
    oracles, drift checks and the acceptance suites.
    """

    def gen(self, generator: str, output: str, start_output: Optional[str] = None, **params):
        """
        Writes a generated graph; bad-bipartite and fig2 also write their start coloring.
        """
        coloring = None
        if generator == 'clique':
            g = gen_clique(int(params['n']))
        elif generator == 'complete-bipartite':
            g = gen_complete_bipartite(int(params['a']), int(params['b']))
        elif generator == 'cycle':
            g = gen_cycle(int(params['n']))
        elif generator == 'erdos-renyi':
            g = gen_erdos_renyi(int(params['n']), float(params['p']), int(params['seed']))
        elif generator == 'bad-bipartite':
            (g, coloring) = bad_bipartite_start(int(params['degree']))
        elif generator == 'fig2':
            (g, coloring, _) = gen_fig2_like()
        else:
            raise ConfigError(f'Unsupported graph generator: {generator}')

        write_graph(g, output)
        print(f'wrote {g} to {output}')
        if coloring is not None:
            start_output = start_output if start_output is not None else f'{output}.coloring'
            write_coloring(coloring, start_output)
            print(f'wrote start coloring {coloring} to {start_output}')

    def run(self, config: str, start_file: Optional[str] = None, trace: Optional[str] = None,
            per_trial: bool = False, workers: Optional[int] = None, output: Optional[str] = None,
            algorithm: Optional[str] = None, start: Optional[str] = None, order: Optional[str] = None,
            seed: Optional[int] = None, trials: Optional[int] = None):
        """
        Monte Carlo trials of the configured experiment; algorithm, start, order, seed and trials
        override the config file.
        """
        cfg = _load(config, start_file=start_file, workers=workers, output=output, algorithm=algorithm,
                    start=start, order=order, seed=seed, trials=trials)
        if trace is not None:
            setup = TrialSetup.from_config(cfg)
            process = create_process(setup.algorithm, setup.graph, setup.palette_size, setup.start, setup.scheduler,
                                     setup.step_cap, record_trace=True)
            result = process.run(RandomStream(derive_trial_seed(cfg.seed, 0)))
            writer = TraceWriter(trace)
            writer.write_all(result.get_trace())
            writer.close()
            print(f'trial 0: {result}; trace written to {trace}')
        report = run_trials(cfg, per_trial)
        for counter in report.reported:
            print(f'{counter}: {report.get_summary(counter)}')
        if report.get_per_vertex() is not None:
            print(report.get_per_vertex().to_string(index=False))

    def sweep(self, config: str, axis: str, values: Sequence, workers: Optional[int] = None,
              output: Optional[str] = None, algorithm: Optional[str] = None, start: Optional[str] = None,
              order: Optional[str] = None):
        cfg = _load(config, workers=workers, output=output, algorithm=algorithm, start=start, order=order)
        if not isinstance(values, (list, tuple)):
            values = [values]
        print(sweep(cfg, axis, values).to_string(index=False))

    def compare(self, config: str, workers: Optional[int] = None, output: Optional[str] = None,
                start: Optional[str] = None, order: Optional[str] = None):
        cfg = _load(config, workers=workers, output=output, start=start, order=order)
        print(compare_algorithms(cfg).to_string(index=False))

    def oracle(self, config: str, method: str = 'auto', per_vertex: bool = False, start_file: Optional[str] = None,
               algorithm: Optional[str] = None, start: Optional[str] = None, order: Optional[str] = None):
        """
        Exact expected Step-3 draws for the configured instance, printed as p/q (≈ decimal).
        """
        cfg = _load(config, start_file=start_file, algorithm=algorithm, start=start, order=order)
        setup = TrialSetup.from_config(cfg)
        g, palette_size, start, order = setup.graph, setup.palette_size, setup.start, setup.scheduler
        if cfg.algorithm == 'dc':
            if not isinstance(order, (UniformRandom, MimicPersistent)):
                raise ConfigError(f'Exact dc oracle supports uniform and mimic orders, not {order}')
            print(f'expected step3_draws: {exact_expected_recolorings_dc(g, palette_size, start, order, method)}')
        else:
            if isinstance(order, UniformRandom):
                order = AllPermutationsAverage()
            elif not isinstance(order, FixedPermutation):
                raise ConfigError(f'Exact persistent oracle supports uniform and perm orders, not {order}')
            print(f'expected step3_draws: {exact_expected_recolorings_persistent(g, palette_size, start, order)}')
            if per_vertex:
                values = exact_expected_recolorings_persistent_per_vertex(g, palette_size, start, order)
                for v, value in enumerate(values):
                    print(f'  vertex {v} (degree {g.get_degree(v)}): {value}')
        if isinstance(start, FixedStart):
            coloring = start.get_coloring()
            print(f'stopping bound (components): {stopping_bound(g, coloring)}')
            print(f'stopping bound (conflicted edges): {stopping_bound(g, coloring, PotentialKind.CONFLICTED_EDGES)}')

    def drift_check(self, samples: int = 1000, n_max: int = 12, palette_max: int = 6, seed: int = 0,
                    include_fig2: bool = True, output: Optional[str] = None):
        report = drift_check(samples, n_max, palette_max, seed, include_fig2)
        print(report)
        if report.fig2_phi_drift is not None:
            print(f'gadget component drift: {report.fig2_phi_drift}')
        if output is not None:
            path = Path(output)
            path.parent.mkdir(parents=True, exist_ok=True)
            write_json(report.to_dict(), path)
        if not report.passed():
            raise CriterionFailure(f'{len(report.violations)} drift violations')

    def accept(self, suite: str = 'all', scale: float = 1.0, output: Optional[str] = None,
               workers: Optional[int] = None):
        report = accept(suite, scale, output, workers)
        for result in report.results:
            print(f'{result.criterion_id} {"PASS" if result.passed else "FAIL"}: {result.title} '
                  f'(trials={result.trials})')
        print(f'sha256 {report.digest()}')
        if not report.passed():
            raise CriterionFailure(f'acceptance suite {suite} failed')


def _from_cwd(policy: str, prefixes: Sequence[str]) -> str:
    # file-backed policies named on the command line are relative to the working directory
    for prefix in prefixes:
        if policy.startswith(prefix):
            return f'{prefix}{Path(policy[len(prefix):]).absolute()}'
    return policy


def _load(config: str, start_file: Optional[str] = None, workers: Optional[int] = None,
          output: Optional[str] = None, algorithm: Optional[str] = None, start: Optional[str] = None,
          order: Optional[str] = None, seed: Optional[int] = None, trials: Optional[int] = None) -> ExperimentConfig:
    cfg = ExperimentConfig.load(config)
    overrides = {}
    if start is not None:
        overrides['start'] = _from_cwd(str(start), ('file:',))
    if start_file is not None:
        overrides['start'] = f'file:{Path(start_file).absolute()}'
    if order is not None:
        overrides['order'] = _from_cwd(str(order), ('perm:', 'script:'))
    if algorithm is not None:
        overrides['algorithm'] = str(algorithm)
    if seed is not None:
        overrides['seed'] = int(seed)
    if trials is not None:
        overrides['trials'] = int(trials)
    if workers is not None:
        overrides['workers'] = workers
    if output is not None:
        overrides['output'] = output
    return cfg.with_overrides(**overrides) if overrides else cfg


def main(argv=None) -> int:
    init_logging()
    try:
        fire.Fire(DColorCommands, command=argv, name='dcolor')
    except CriterionFailure as error:
        logger.error(str(error))
        return EXIT_FAILURE
    except (ConfigError, GraphError, ColoringError, StateSpaceGuardError, NoSuchFileException) as error:
        logger.error(str(error))
        return EXIT_USAGE
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
