import hashlib
import json
import logging
import math
from abc import ABC, abstractmethod
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

import networkx as nx
import numpy as np

from dcolor.algo import FixedPermutation, FixedStart, RandomStart, SchedulerPolicy, StartPolicy, UniformRandom
from dcolor.algo.adversary import MIMIC_LOWEST, MIMIC_UNIFORM, MimicPersistent, MinPhiDrift, bad_bipartite_start, \
    monochromatic_start
from dcolor.algo.engine import default_step_cap
from dcolor.experiments import ConfigError, SummaryStats
from dcolor.experiments.drift_check import DriftReport, drift_check
from dcolor.experiments.runner import TrialSetup, execute_trials, write_json
from dcolor.model import Graph
from dcolor.model.coloring import monochromatic_component_count
from dcolor.model.generators import gen_clique, gen_cycle, gen_erdos_renyi, gen_fig2_like
from dcolor.oracle import ExactValue, harmonic
from dcolor.oracle.drift import exact_expected_conflict_deltas, verify_fig2_deltas
from dcolor.oracle.markov import exact_expected_recolorings_dc
from dcolor.oracle.persistent import AllPermutationsAverage, exact_expected_recolorings_persistent
from dcolor.utils import RandomStream

logger = logging.getLogger(__name__)

# tolerance for every Monte Carlo comparison
NUM_SE = 4.0
MIN_TRIALS = 100

ACCEPTANCE_SEED = 20200521


class CriterionResult:
    def __init__(self, criterion_id: str, title: str):
        self.criterion_id = criterion_id
        self.title = title
        self.passed = True
        self.trials: Optional[int] = None
        self.checks: List[dict] = []

    def check(self, name: str, ok: bool, **measurements):
        self.checks.append({'check': name, 'passed': bool(ok), **measurements})
        if not ok:
            self.passed = False
            logger.error(f'{self.criterion_id} failed check {name}: {measurements}')

    def to_dict(self) -> dict:
        return {
            'id': self.criterion_id,
            'title': self.title,
            'passed': self.passed,
            'trials': self.trials,
            'checks': self.checks
        }


class AcceptanceRun:
    """
    Shared state of one acceptance invocation: the trial scale, worker count and results reused
    between criteria.
    """

    def __init__(self, scale: float = 1.0, workers: Optional[int] = None, seed: int = ACCEPTANCE_SEED):
        if scale <= 0:
            raise ConfigError(f'Trial scale must be positive: {scale}')
        self.scale = scale
        self.workers = workers
        self.seed = seed
        self.drift_report: Optional[DriftReport] = None

    def trials(self, nominal: int) -> int:
        return max(MIN_TRIALS, int(round(nominal * self.scale)))

    def samples(self, nominal: int) -> int:
        return max(1, int(round(nominal * self.scale)))

    def get_drift_report(self) -> DriftReport:
        if self.drift_report is None:
            self.drift_report = drift_check(self.samples(1000), 12, 6, self.seed)
        return self.drift_report

    def monte_carlo(self, algorithm: str, g: Graph, palette_size: int, start: StartPolicy,
                    scheduler: SchedulerPolicy, trials: int, seed_offset: int = 0) -> List[tuple]:
        setup = TrialSetup(algorithm, g, palette_size, start, scheduler, default_step_cap(g.get_n(), palette_size),
                           self.seed + seed_offset)
        return execute_trials(setup, trials, self.workers)


def _step3(rows: List[tuple], name: str) -> SummaryStats:
    return SummaryStats.from_samples([row[3] for row in rows], [not row[5] for row in rows], name=name)


def _total(rows: List[tuple], name: str) -> SummaryStats:
    return SummaryStats.from_samples([row[2] for row in rows], [not row[5] for row in rows], name=name)


class Criterion(ABC):
    criterion_id = None
    title = None

    def evaluate(self, run: AcceptanceRun) -> CriterionResult:
        result = CriterionResult(self.criterion_id, self.title)
        logger.info(f'evaluating {self.criterion_id}: {self.title}')
        self.run_checks(run, result)
        logger.info(f'{self.criterion_id} {"passed" if result.passed else "FAILED"}')
        return result

    @abstractmethod
    def run_checks(self, run: AcceptanceRun, result: CriterionResult):
        pass


class CliqueExact(Criterion):
    criterion_id = 'clique-exact'
    title = 'exact expected recolorings on cliques with uniform order and random start'

    def run_checks(self, run: AcceptanceRun, result: CriterionResult):
        k3 = exact_expected_recolorings_dc(gen_clique(3), 3, RandomStart(), UniformRandom())
        result.check('K3 step3 draws = 5/2', k3 == Fraction(5, 2), value=str(k3))
        result.check('K3 total draws = 3 H3', k3.get_value() + 3 == 3 * harmonic(3).get_value(),
                     value=str(ExactValue(k3.get_value() + 3)))
        k4 = exact_expected_recolorings_dc(gen_clique(4), 4, RandomStart(), UniformRandom())
        expected = 4 * harmonic(4).get_value() - 4
        result.check('K4 step3 draws = 4 H4 - 4', k4 == expected, value=str(k4), expected=str(ExactValue(expected)))


class CliqueMonteCarlo(Criterion):
    criterion_id = 'clique-monte-carlo'
    title = 'Monte Carlo total draws on K8 match 8 H8'

    def run_checks(self, run: AcceptanceRun, result: CriterionResult):
        result.trials = run.trials(10 ** 5)
        rows = run.monte_carlo('dc', gen_clique(8), 8, RandomStart(), UniformRandom(), result.trials)
        summary = _total(rows, 'K8 total_draws')
        target = float(8 * harmonic(8).get_value())
        result.check('mean within 4 SE of 8 H8', summary.within(target, NUM_SE), mean=summary.mean,
                     se=summary.se, target=target)


class PersistentPerVertex(Criterion):
    criterion_id = 'persistent-per-vertex'
    title = 'persistent per-vertex recolorings bounded by the harmonic number of the degree'

    def run_checks(self, run: AcceptanceRun, result: CriterionResult):
        result.trials = run.trials(10 ** 5)
        er = gen_erdos_renyi(64, 0.15, run.seed)
        instances = [('K32', gen_clique(32), 32), ('G(64, 0.15)', er, er.get_max_degree() + 1)]
        for offset, (name, g, palette_size) in enumerate(instances):
            rows = run.monte_carlo('persistent', g, palette_size, RandomStart(), UniformRandom(), result.trials,
                                   offset)
            per_vertex = np.array([row[6] for row in rows], dtype=np.int64)
            means = per_vertex.mean(axis=0)
            ses = per_vertex.std(axis=0, ddof=1) / math.sqrt(len(rows))
            bounds = np.array([float(harmonic(g.get_degree(v))) for v in range(g.get_n())])
            excess = means - (bounds + NUM_SE * ses)
            worst = int(np.argmax(excess))
            result.check(f'{name} per-vertex mean <= H_deg + 4 SE', bool(np.all(excess <= 0)),
                         worst_vertex=worst, mean=float(means[worst]), bound=float(bounds[worst]),
                         se=float(ses[worst]))


class BadBipartiteGrowth(Criterion):
    criterion_id = 'bad-bipartite-growth'
    title = 'persistent recolorings from the bad bipartite start grow quadratically in the degree'

    DEGREES = (4, 8, 16, 32)

    def run_checks(self, run: AcceptanceRun, result: CriterionResult):
        result.trials = run.trials(10 ** 4)
        means = []
        for offset, degree in enumerate(self.DEGREES):
            (g, coloring) = bad_bipartite_start(degree)
            rows = run.monte_carlo('persistent', g, degree + 1, FixedStart(coloring), UniformRandom(),
                                   result.trials, offset)
            summary = _step3(rows, f'bad bipartite degree {degree}')
            means.append(summary.mean)
            result.check(f'degree {degree} mean >= degree^2 / 8', summary.mean >= degree * degree / 8,
                         mean=summary.mean, se=summary.se, bound=degree * degree / 8)
        for (low, high, low_mean, high_mean) in zip(self.DEGREES, self.DEGREES[1:], means, means[1:]):
            ratio = high_mean / low_mean if low_mean > 0 else float('inf')
            result.check(f'mean({high}) / mean({low}) >= 3', ratio >= 3, ratio=ratio)

        (g, coloring) = bad_bipartite_start(3)
        exact = exact_expected_recolorings_persistent(g, 4, FixedStart(coloring), AllPermutationsAverage())
        rows = run.monte_carlo('persistent', g, 4, FixedStart(coloring), UniformRandom(), result.trials,
                               len(self.DEGREES))
        summary = _step3(rows, 'bad bipartite degree 3')
        result.check('degree 3 mean within 4 SE of exact value', summary.within(float(exact), NUM_SE),
                     mean=summary.mean, se=summary.se, exact=str(exact))


class ComponentDrift(Criterion):
    criterion_id = 'component-drift'
    title = 'expected monochromatic component drift is at least 1/D on random invalid states'

    def run_checks(self, run: AcceptanceRun, result: CriterionResult):
        report = run.get_drift_report()
        result.trials = report.samples
        phi_violations = [v for v in report.violations if v.phi_drift.get_value() < Fraction(1, v.coloring.get_palette_size())]
        result.check('no component drift below 1/D', not phi_violations, vertices=report.vertices_checked,
                     violations=len(phi_violations), min_phi_drift=str(report.min_phi_drift))
        result.check('gadget component drift = 1/4', report.fig2_phi_drift == Fraction(1, 4),
                     value=str(report.fig2_phi_drift))


class AdversarialStoppingBound(Criterion):
    criterion_id = 'adversarial-stopping-bound'
    title = 'adversarial starts and order stay within (n - 1) D expected recolorings'

    def instances(self, run: AcceptanceRun):
        (bipartite, bad_coloring) = bad_bipartite_start(4)
        yield 'bad bipartite degree 4', bipartite, 5, FixedStart(bad_coloring)
        k6 = gen_clique(6)
        yield 'monochromatic K6', k6, 6, FixedStart(monochromatic_start(k6, 6))
        c12 = gen_cycle(12)
        yield 'monochromatic C12', c12, 3, FixedStart(monochromatic_start(c12, 3))
        er = gen_erdos_renyi(16, 0.25, run.seed)
        palette_size = er.get_max_degree() + 1
        yield 'monochromatic G(16, 0.25)', er, palette_size, FixedStart(monochromatic_start(er, palette_size))

    def run_checks(self, run: AcceptanceRun, result: CriterionResult):
        result.trials = run.trials(10 ** 4)
        for offset, (name, g, palette_size, start) in enumerate(self.instances(run)):
            rows = run.monte_carlo('dc', g, palette_size, start, MinPhiDrift(), result.trials, offset)
            summary = _step3(rows, name)
            bound = (g.get_n() - 1) * palette_size
            result.check(f'{name} mean <= (n - 1) D + 4 SE', summary.mean <= bound + NUM_SE * summary.se,
                         mean=summary.mean, se=summary.se, bound=bound, cap_hits=summary.cap_hits)


class EdgeDrift(Criterion):
    criterion_id = 'edge-drift'
    title = 'expected conflicted-edge drift is at most -1/D on random invalid states'

    def run_checks(self, run: AcceptanceRun, result: CriterionResult):
        report = run.get_drift_report()
        result.trials = report.samples
        edge_violations = [v for v in report.violations
                           if v.edge_drift.get_value() > -Fraction(1, v.coloring.get_palette_size())]
        result.check('no edge drift above -1/D', not edge_violations, vertices=report.vertices_checked,
                     violations=len(edge_violations), max_edge_drift=str(report.max_edge_drift))


def small_graph_family(max_vertices: int = 5, max_palette: int = 4):
    """
    Every non-empty graph on 2..max_vertices vertices up to isomorphism, paired with each palette
    from max degree + 1 to max_palette.
    """
    for atlas_graph in nx.graph_atlas_g():
        n = atlas_graph.number_of_nodes()
        if n < 2 or n > max_vertices or atlas_graph.number_of_edges() == 0:
            continue
        g = Graph.from_edge_list(n, atlas_graph.edges())
        for palette_size in range(g.get_max_degree() + 1, max_palette + 1):
            yield g, palette_size


class MimicEquivalence(Criterion):
    criterion_id = 'mimic-equivalence'
    title = 'mimicking adversary reproduces the persistent expectation exactly'

    def run_checks(self, run: AcceptanceRun, result: CriterionResult):
        instances = 0
        mismatches = []
        identity_mismatches = []
        for (g, palette_size) in small_graph_family():
            instances += 1
            mimic = exact_expected_recolorings_dc(g, palette_size, RandomStart(), MimicPersistent(MIMIC_UNIFORM),
                                                   method='exact')
            persistent = exact_expected_recolorings_persistent(g, palette_size, RandomStart(),
                                                               AllPermutationsAverage())
            if mimic != persistent:
                mismatches.append(f'{g} D={palette_size}: {mimic} != {persistent}')
            lowest = exact_expected_recolorings_dc(g, palette_size, RandomStart(), MimicPersistent(MIMIC_LOWEST),
                                                   method='exact')
            identity = exact_expected_recolorings_persistent(g, palette_size, RandomStart(),
                                                             FixedPermutation(range(g.get_n())))
            if lowest != identity:
                identity_mismatches.append(f'{g} D={palette_size}: {lowest} != {identity}')
        result.trials = instances
        result.check('at least 50 instances', instances >= 50, instances=instances)
        result.check('uniform mimic = all-permutations persistent', not mismatches, mismatches=mismatches[:10])
        result.check('lowest-id mimic = identity-order persistent', not identity_mismatches,
                     mismatches=identity_mismatches[:10])


class GadgetDeltas(Criterion):
    criterion_id = 'gadget-deltas'
    title = 'conflicted-vertex gadget'

    def run_checks(self, run: AcceptanceRun, result: CriterionResult):
        (g, c, focus) = gen_fig2_like()
        (_, vertex_delta, _) = exact_expected_conflict_deltas(g, c, focus)
        result.check('conflicted-vertex drift = +1/4', vertex_delta == Fraction(1, 4), value=str(vertex_delta))
        result.check('delta table matches', verify_fig2_deltas(g, c, focus))
        components = monochromatic_component_count(g, c)
        result.check('three monochromatic components', components == 3, value=components)


def coherence_instances(rng: RandomStream, count: int = 20, max_colorings: int = 10 ** 5):
    produced = 0
    while produced < count:
        n = 2 + rng.randbelow(6)
        g = gen_erdos_renyi(n, 0.3 + 0.5 * rng.uniform(), rng.randbelow(2 ** 31))
        palette_size = g.get_max_degree() + 1 + rng.randbelow(2)
        if g.get_edge_count() == 0 or palette_size ** n > max_colorings:
            continue
        produced += 1
        yield g, palette_size


class OracleCoherence(Criterion):
    criterion_id = 'oracle-coherence'
    title = 'Monte Carlo agrees with the exact chain on random small instances'

    def run_checks(self, run: AcceptanceRun, result: CriterionResult):
        result.trials = run.trials(10 ** 5)
        rng = RandomStream(run.seed)
        for offset, (g, palette_size) in enumerate(coherence_instances(rng)):
            exact = exact_expected_recolorings_dc(g, palette_size, RandomStart(), UniformRandom())
            rows = run.monte_carlo('dc', g, palette_size, RandomStart(), UniformRandom(), result.trials, offset)
            summary = _step3(rows, f'{g} D={palette_size}')
            result.check(f'{g} D={palette_size} within 4 SE', summary.within(float(exact), NUM_SE),
                         mean=summary.mean, se=summary.se, exact=str(exact))


CRITERIA = {criterion.criterion_id: criterion for criterion in (
    CliqueExact(), CliqueMonteCarlo(), PersistentPerVertex(), BadBipartiteGrowth(), ComponentDrift(),
    AdversarialStoppingBound(), EdgeDrift(), MimicEquivalence(), GadgetDeltas(), OracleCoherence()
)}

SUITES = {
    'clique': ['clique-exact', 'clique-monte-carlo'],
    'persistent': ['persistent-per-vertex'],
    'bipartite': ['bad-bipartite-growth'],
    'drift': ['component-drift', 'edge-drift'],
    'adversarial': ['adversarial-stopping-bound'],
    'mimic': ['mimic-equivalence'],
    'fig2': ['gadget-deltas'],
    'coherence': ['oracle-coherence'],
    'all': list(CRITERIA)
}


class AcceptanceReport:
    def __init__(self, suite: str, scale: float, seed: int, results: List[CriterionResult]):
        self.suite = suite
        self.scale = scale
        self.seed = seed
        self.results = results

    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    def get_exit_code(self) -> int:
        return 0 if self.passed() else 1

    def content(self) -> dict:
        return {
            'suite': self.suite,
            'scale': self.scale,
            'seed': self.seed,
            'passed': self.passed(),
            'criteria': [result.to_dict() for result in self.results]
        }

    def digest(self) -> str:
        canonical = json.dumps(self.content(), sort_keys=True, separators=(',', ':'), default=str)
        return hashlib.sha256(canonical.encode()).hexdigest()

    def to_dict(self) -> dict:
        return {**self.content(), 'sha256': self.digest()}

    def write(self, path: Path):
        path.parent.mkdir(parents=True, exist_ok=True)
        write_json(self.to_dict(), path)
        logger.info(f'acceptance report for {self.suite} written to {path} (sha256 {self.digest()})')


def accept(suite: str = 'all', scale: float = 1.0, output: Optional[str] = None, workers: Optional[int] = None,
           seed: int = ACCEPTANCE_SEED) -> AcceptanceReport:
    if suite not in SUITES:
        raise ConfigError(f'Unknown acceptance suite: {suite}; expected one of {sorted(SUITES)}')
    run = AcceptanceRun(scale, workers, seed)
    results = [CRITERIA[criterion_id].evaluate(run) for criterion_id in SUITES[suite]]
    report = AcceptanceReport(suite, scale, seed, results)
    failed = [result.criterion_id for result in results if not result.passed]
    if failed:
        logger.error(f'acceptance suite {suite} failed: {", ".join(failed)}')
    else:
        logger.info(f'acceptance suite {suite} passed ({len(results)} criteria)')
    if output is not None:
        report.write(Path(output).joinpath(f'accept-{suite}.json'))
    return report
