"""
Monte Carlo sweeps over ``(n, omega)`` grids and their summaries.

Every trial draws one weight assignment from a seed derived from the base
seed, ``n`` and the trial index, and evaluates the whole omega grid on it.
The graphs (or hypergraphs) of one trial are therefore nested in omega, and
for exact searches the per-trial outcome can only improve as omega grows.
"""
import configparser
import csv
import logging
import math
import os
import os.path
import statistics
import time
from dataclasses import asdict, dataclass, field
from multiprocessing import Pool

from prettytable import PrettyTable

from .balance import f_threshold, loose_hc_threshold_pi
from .cliques import uncovered_vertices
from .errors import ConfigError, FormatError, SummaryError
from .patterns import PatternGraph, resolve_pattern
from .random_models import WeightAssignment, derive_seed, graph_at, \
    hypergraph_at
from .solver import EXHAUSTED, FOUND, NONE, SearchBudget, find_f_cycle, \
    find_loose_hc, find_spanning_kr_cycle
from .utils import clamp_probability, popcount

logger = logging.getLogger(__name__)

KR_CYCLE = 'kr-cycle'
LOOSE_HC = 'loose-hc'
COVERAGE = 'coverage'
F_CYCLE = 'f-cycle'
MODES = (KR_CYCLE, LOOSE_HC, COVERAGE, F_CYCLE)

CSV_HEADER = ('n', 'r', 'omega', 'p', 'trial', 'seed', 'status',
              'uncovered', 'nodes', 'elapsed_ms', 'clamped')
SUMMARY_HEADER = ('n', 'r', 'omega', 'p', 'trials', 'found', 'none',
                  'unknown', 'probability', 'wilson_low', 'wilson_high',
                  'unknown_rate')

DEFAULTS = {
    'node_limit': 1_000_000,
    'time_limit_ms': 60_000,
    'trials': 20,
    'seed': 1,
    'workers': 1,
    'timing': False,
}

#: Two-sided 95% normal quantile
Z95 = statistics.NormalDist().inv_cdf(0.975)


def find_config():
    """
    Search for a ``krcycles`` configuration file.

    We first query the environment variable ``$KRCYCLES_CFG``. If this is
    not present, the directory given by ``$XDG_CONFIG_HOME`` (or
    ``~/.config``) is searched for ``.krcycles.cfg`` and ``krcycles.cfg``.

    Returns
    -------
    path : str or None
        None when no configuration file exists.
    """
    if os.environ.get('KRCYCLES_CFG', False):
        krcycles_cfg = os.environ.get('KRCYCLES_CFG')
        logger.debug("Found $KRCYCLES_CFG at %s", krcycles_cfg)
        return krcycles_cfg
    config_dir = (os.environ.get('XDG_CONFIG_HOME')
                  or os.path.expanduser('~/.config'))
    logger.debug('Searching for krcycles config in %s', config_dir)
    for path in ('.krcycles.cfg', 'krcycles.cfg'):
        full_path = os.path.join(config_dir, path)
        if os.path.exists(full_path):
            logger.debug("Found configuration file at %r", full_path)
            return full_path
    return None


def read_config(path=None):
    """
    Sweep defaults, overlaid with the ``[DEFAULT]`` section of a
    configuration file.

    A configuration file looks like:

    .. code::

        [DEFAULT]
        node_limit=200000
        time_limit_ms=5000
        trials=100
        seed=7
        workers=4
        timing=true

    Parameters
    ----------
    path : str, optional
        Explicit configuration file. Without it :func:`find_config` is used,
        and finding nothing leaves the built-in defaults.

    Raises
    ------
    ConfigError
        If the file named explicitly (or by ``$KRCYCLES_CFG``) is missing,
        or a value does not parse.
    """
    values = dict(DEFAULTS)
    if path is None:
        path = find_config()
        if path is None:
            logger.debug('No configuration file found, using defaults')
            return values
    if not os.path.exists(os.path.expanduser(path)):
        raise ConfigError(f'krcycles configuration file not found: {path!r}')
    cfg_parser = configparser.ConfigParser()
    try:
        cfg_file = cfg_parser.read(os.path.expanduser(path))
    except configparser.Error as exc:
        raise ConfigError(f'Unable to parse {path!r}: {exc}') from exc
    logger.debug("Loading configuration file at %r", cfg_file)
    section = cfg_parser['DEFAULT']
    for key in section:
        if key not in DEFAULTS:
            logger.warning('Ignoring unknown configuration key %r', key)
            continue
        try:
            if key == 'timing':
                values[key] = section.getboolean(key)
            else:
                values[key] = section.getint(key)
        except ValueError as exc:
            raise ConfigError(f'Invalid value for {key!r} in {path!r}: '
                              f'{exc}') from exc
    return values


@dataclass(frozen=True)
class SweepConfig:
    """
    One Monte Carlo experiment.

    Attributes
    ----------
    n_list : tuple of int
    r : int
        Clique size, or uniformity in ``loose-hc`` mode. Ignored in
        ``f-cycle`` mode, where the pattern fixes the block size.
    omega_list : tuple of float
        Multipliers of the threshold formula.
    trials : int
        Trials per ``(n, omega)`` point.
    base_seed : int
    budget : SearchBudget
    mode : {'kr-cycle', 'loose-hc', 'coverage', 'f-cycle'}
    pattern : str, optional
        Pattern name or file, required in ``f-cycle`` mode.
    workers : int
        Processes used to run trials.
    timing : bool
        Record wall-clock elapsed times. Off by default, in which case
        ``elapsed_ms`` is written as zero and repeated runs produce
        identical output.

    Raises
    ------
    ConfigError
        On any invalid combination, before a single trial runs.
    """
    n_list: tuple
    r: int = 3
    omega_list: tuple = (1.0,)
    trials: int = DEFAULTS['trials']
    base_seed: int = DEFAULTS['seed']
    budget: SearchBudget = field(default_factory=SearchBudget)
    mode: str = KR_CYCLE
    pattern: str = None
    workers: int = DEFAULTS['workers']
    timing: bool = DEFAULTS['timing']

    def __post_init__(self):
        object.__setattr__(self, 'n_list', tuple(self.n_list))
        object.__setattr__(self, 'omega_list',
                           tuple(float(omega) for omega in self.omega_list))
        self.validate()

    @classmethod
    def from_config(cls, n_list, path=None, **overrides):
        """
        Build a config from the configuration file defaults, with keyword
        overrides. Overrides set to None are ignored.
        """
        values = read_config(path)
        values.update({key: value for key, value in overrides.items()
                       if value is not None})
        try:
            budget = SearchBudget(node_limit=values.pop('node_limit'),
                                  time_limit_ms=values.pop('time_limit_ms'))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        values['base_seed'] = values.pop('seed')
        return cls(n_list=n_list, budget=budget, **values)

    def load_pattern(self):
        """The pattern of ``f-cycle`` mode, else K_r."""
        if self.mode == F_CYCLE:
            return resolve_pattern(self.pattern)
        return PatternGraph.complete(self.r)

    @property
    def block_size(self):
        if self.mode == F_CYCLE:
            return self.load_pattern().n
        return self.r

    def validate(self):
        if self.mode not in MODES:
            raise ConfigError(f'Unknown mode {self.mode!r}, expected one of '
                              f'{", ".join(MODES)}')
        if not self.n_list:
            raise ConfigError('The list of n is empty')
        if not self.omega_list:
            raise ConfigError('The list of omega is empty')
        if self.trials < 1:
            raise ConfigError(f'trials must be at least 1, got {self.trials}')
        if self.workers < 1:
            raise ConfigError(f'workers must be at least 1, got '
                              f'{self.workers}')
        if self.mode != F_CYCLE and self.r < 3:
            raise ConfigError(f'r must be at least 3, got {self.r}')
        if any(omega < 0 or math.isnan(omega) for omega in self.omega_list):
            raise ConfigError('omega values must be non-negative')
        if any(n < 2 for n in self.n_list):
            raise ConfigError('Every n must be at least 2')
        if self.mode == F_CYCLE:
            if not self.pattern:
                raise ConfigError('f-cycle mode needs a pattern')
            self.load_pattern().validate(min_vertices=3)
        if self.mode != COVERAGE:
            k = self.block_size
            for n in self.n_list:
                if n % (k - 1) or n < 3 * (k - 1):
                    raise ConfigError(f'n={n} is not a multiple of {k - 1} '
                                      f'of at least {3 * (k - 1)}')

    def points(self):
        """The ``(n, omega)`` grid in output order."""
        return [(n, omega) for n in sorted(set(self.n_list))
                for omega in sorted(set(self.omega_list))]


@dataclass(frozen=True)
class SweepRecord:
    """
    The outcome of one trial at one ``(n, omega)`` point.

    ``p`` is the threshold formula times omega before clamping (the
    hyperedge probability in ``loose-hc`` mode); ``clamped`` says whether it
    had to be clamped to ``[0, 1]`` before sampling.
    """
    n: int
    r: int
    omega: float
    p: float
    trial: int
    seed: int
    status: str
    uncovered: int
    nodes: int
    elapsed_ms: float
    clamped: bool
    mode: str = field(default=None, compare=False)

    @property
    def point(self):
        return (self.n, self.omega)

    def to_row(self):
        return [str(self.n), str(self.r), repr(self.omega), repr(self.p),
                str(self.trial), str(self.seed), self.status,
                str(self.uncovered), str(self.nodes),
                f'{self.elapsed_ms:.3f}', 'true' if self.clamped else 'false']

    def to_dict(self):
        doc = asdict(self)
        doc.pop('mode')
        return doc

    @classmethod
    def from_row(cls, row, mode=None):
        """Parse one CSV row as written by :meth:`to_row`."""
        try:
            return cls(n=int(row['n']), r=int(row['r']),
                       omega=float(row['omega']), p=float(row['p']),
                       trial=int(row['trial']), seed=int(row['seed']),
                       status=row['status'], uncovered=int(row['uncovered']),
                       nodes=int(row['nodes']),
                       elapsed_ms=float(row['elapsed_ms']),
                       clamped=row['clamped'] == 'true', mode=mode)
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f'Malformed sweep record {row!r}') from exc


def _trial_seed(cfg, n, trial):
    return derive_seed(cfg.base_seed, (n << 32) | trial)


def _run_trial(task):
    """
    All omega points of one ``(n, trial)`` pair, on one weight assignment.
    """
    cfg, n, trial = task
    seed = _trial_seed(cfg, n, trial)
    pattern = cfg.load_pattern()
    if cfg.mode == LOOSE_HC:
        weights = WeightAssignment.for_hypergraph(n, cfg.r, seed)
    else:
        weights = WeightAssignment.for_graph(n, seed)
    records = []
    for omega in sorted(set(cfg.omega_list)):
        start = time.monotonic()
        nodes = 0
        if cfg.mode == LOOSE_HC:
            raw = loose_hc_threshold_pi(n, cfg.r, omega, clamp=False)
            pi, clamped = clamp_probability(raw, what='pi')
            h = hypergraph_at(weights, pi)
            uncovered = n - popcount(h.covered())
            outcome = find_loose_hc(h, cfg.budget)
            status, nodes = outcome.status, outcome.nodes
        else:
            threshold = f_threshold(n, pattern, omega)
            raw, clamped = threshold.raw, threshold.clamped
            g = graph_at(weights, threshold.p)
            if cfg.mode == COVERAGE:
                uncovered = len(uncovered_vertices(g, cfg.r))
                status = NONE if uncovered else FOUND
            else:
                if cfg.mode == KR_CYCLE:
                    outcome = find_spanning_kr_cycle(g, cfg.r, cfg.budget)
                else:
                    outcome = find_f_cycle(g, pattern, cfg.budget)
                status, nodes = outcome.status, outcome.nodes
                uncovered = outcome.info['uncovered']
        elapsed = (time.monotonic() - start) * 1000.0 if cfg.timing else 0.0
        records.append(SweepRecord(n=n, r=pattern.n, omega=omega, p=raw,
                                   trial=trial, seed=seed, status=status,
                                   uncovered=uncovered, nodes=nodes,
                                   elapsed_ms=elapsed, clamped=clamped,
                                   mode=cfg.mode))
    logger.debug('Trial %d at n=%d: %s', trial, n,
                 ', '.join(record.status for record in records))
    return records


def run_sweep(cfg):
    """
    Run every trial of a sweep.

    Trials run in ``cfg.workers`` processes when more than one is asked
    for; the records come back sorted by point, then trial, whatever the
    execution order.

    Returns
    -------
    list of SweepRecord
    """
    cfg.validate()
    tasks = [(cfg, n, trial) for n in sorted(set(cfg.n_list))
             for trial in range(cfg.trials)]
    logger.info('Running %d trials of %s over %d points', len(tasks),
                cfg.mode, len(cfg.points()))
    if cfg.workers > 1:
        with Pool(cfg.workers) as pool:
            batches = pool.map(_run_trial, tasks)
    else:
        batches = [_run_trial(task) for task in tasks]
    records = sorted((record for batch in batches for record in batch),
                     key=lambda record: (record.n, record.omega,
                                         record.trial))
    exhausted = sum(record.status == EXHAUSTED for record in records)
    if exhausted:
        logger.warning('%d of %d trials ran out of budget', exhausted,
                       len(records))
    logger.info('Sweep finished with %d records', len(records))
    return records


def wilson_interval(successes, total, z=Z95):
    """
    Wilson score interval for a binomial proportion.

    Returns
    -------
    low, high : float
        ``(0.0, 1.0)`` when ``total`` is zero.
    """
    if total == 0:
        return 0.0, 1.0
    phat = successes / total
    denominator = 1 + z ** 2 / total
    center = (phat + z ** 2 / (2 * total)) / denominator
    half = (z / denominator
            * math.sqrt(phat * (1 - phat) / total + z ** 2 / (4 * total ** 2)))
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class PointSummary:
    """
    Counts and estimates at one ``(n, omega)`` point.

    ``probability`` is ``found / (found + none)``; budget-exhausted trials
    are left out of it and reported as ``unknown``. It is None when every
    trial was unknown.
    """
    n: int
    r: int
    omega: float
    p: float
    trials: int
    found: int
    none: int
    unknown: int
    probability: float
    wilson_low: float
    wilson_high: float
    unknown_rate: float

    def to_dict(self):
        return asdict(self)

    def to_row(self):
        probability = '' if self.probability is None else \
            repr(self.probability)
        return [str(self.n), str(self.r), repr(self.omega), repr(self.p),
                str(self.trials), str(self.found), str(self.none),
                str(self.unknown), probability, f'{self.wilson_low:.6f}',
                f'{self.wilson_high:.6f}', repr(self.unknown_rate)]


def summarize(records):
    """
    Per-point summaries of the records of one sweep.

    Raises
    ------
    SummaryError
        For an empty record set, records of different modes or clique
        sizes, or a trial reported twice at the same point.
    """
    records = list(records)
    if not records:
        raise SummaryError('No records to summarize')
    if len({record.r for record in records}) > 1:
        raise SummaryError('Records mix different values of r')
    if len({record.mode for record in records}) > 1:
        raise SummaryError('Records mix different sweep modes')
    points = {}
    for record in records:
        trials = points.setdefault(record.point, {})
        if record.trial in trials:
            raise SummaryError(f'Trial {record.trial} appears twice at '
                               f'n={record.n}, omega={record.omega}')
        trials[record.trial] = record
    summaries = []
    for (n, omega), trials in sorted(points.items()):
        statuses = [record.status for record in trials.values()]
        found = statuses.count(FOUND)
        none = statuses.count(NONE)
        unknown = len(statuses) - found - none
        decided = found + none
        low, high = wilson_interval(found, decided)
        first = trials[min(trials)]
        summaries.append(PointSummary(
            n=n, r=first.r, omega=omega, p=first.p, trials=len(statuses),
            found=found, none=none, unknown=unknown,
            probability=found / decided if decided else None,
            wilson_low=low, wilson_high=high,
            unknown_rate=unknown / len(statuses),
        ))
    return summaries


def show_summary(summaries, handle=None):
    """Show point summaries in a PrettyTable."""
    pt = PrettyTable(list(SUMMARY_HEADER))
    pt.float_format = '.4'
    for summary in summaries:
        row = summary.to_dict()
        pt.add_row(['-' if row[key] is None else row[key]
                    for key in SUMMARY_HEADER])
    print(pt, file=handle)


def write_records_csv(records, handle):
    writer = csv.writer(handle, lineterminator='\n')
    writer.writerow(CSV_HEADER)
    for record in records:
        writer.writerow(record.to_row())


def read_records_csv(handle, mode=None):
    """
    Read sweep records back from CSV.

    Raises
    ------
    FormatError
        If the header is not the sweep record header.
    """
    reader = csv.DictReader(handle)
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise FormatError(f'Not a sweep record file, header is '
                          f'{reader.fieldnames!r}')
    return [SweepRecord.from_row(row, mode=mode) for row in reader]


def write_summary_csv(summaries, handle):
    writer = csv.writer(handle, lineterminator='\n')
    writer.writerow(SUMMARY_HEADER)
    for summary in summaries:
        writer.writerow(summary.to_row())


def sweep_to_json(cfg, records, summaries):
    """JSON-ready document holding a sweep's configuration and results."""
    return {
        'config': {
            'mode': cfg.mode,
            'n': list(cfg.n_list),
            'r': cfg.block_size,
            'omega': list(cfg.omega_list),
            'trials': cfg.trials,
            'seed': cfg.base_seed,
            'pattern': cfg.pattern,
            'node_limit': cfg.budget.node_limit,
            'time_limit_ms': cfg.budget.time_limit_ms,
        },
        'records': [record.to_dict() for record in records],
        'summary': [summary.to_dict() for summary in summaries],
    }
