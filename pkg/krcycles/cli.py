"""
This module defines the ``krcycles`` command line interface.
"""
import argparse
import contextlib
import logging
import os.path
import sys

import coloredlogs

import krcycles

from . import formats
from .balance import balance_report, show_report
from .cliques import coverage_counts
from .core import verify_f_cycle, verify_kr_cycle, verify_loose_hc
from .errors import BalanceError, ConfigError, DivisibilityError, \
    FormatError, PatternError, SummaryError
from .patterns import ConnectorConstraint, PatternGraph, resolve_pattern
from .random_models import ModelParams, WeightAssignment, check_golden, \
    golden_weights, graph_at, hypergraph_at, write_golden
from .solver import BRUTE_FORCE_MAX_N, SearchBudget, brute_force_loose_hc, \
    find_f_cycle, find_loose_hc, find_spanning_kr_cycle
from .sweep import MODES, SweepConfig, read_config, read_records_csv, \
    run_sweep, show_summary, summarize, sweep_to_json, write_records_csv, \
    write_summary_csv
from .utils import parse_list

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2


class UsageError(Exception):
    """Invalid command line."""


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting on bad arguments."""

    def error(self, message):
        raise UsageError(message)


def _int_list(value):
    try:
        return parse_list(value, kind=int)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _float_list(value):
    try:
        return parse_list(value, kind=float)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_budget_args(parser):
    parser.add_argument('--node-limit', type=int,
                        help='Maximum search-tree nodes per search.')
    parser.add_argument('--time-limit-ms', type=int,
                        help='Wall-clock cap per search in milliseconds.')


def get_parser():
    """Defines krcycles shell commands."""
    parser = _Parser(prog='krcycles',
                     description='Spanning K_r-cycles in random graphs')

    # Optional args general to all operations
    parser.add_argument('--path', type=str,
                        help='Provide the path to a krcycles configuration '
                             'file.')
    parser.add_argument('--verbose', '-v', action='store_true',
                        help='Show the debug logging stream.')
    parser.add_argument('--version', '-V', action='store_true',
                        help='Show the current version and location of '
                             'krcycles installation.')
    subparsers = parser.add_subparsers(help='Subcommands used to run sweeps, '
                                       'solve instances and evaluate '
                                       'thresholds', dest='cmd',
                                       parser_class=_Parser)

    parser_sweep = subparsers.add_parser('sweep', help='Run a Monte Carlo '
                                         'sweep over n and omega.')
    parser_sweep.add_argument('--mode', choices=MODES, default='kr-cycle',
                              help='What each trial decides.')
    parser_sweep.add_argument('--n', type=_int_list, required=True,
                              help='Comma separated vertex counts.')
    parser_sweep.add_argument('--r', type=int, default=3,
                              help='Clique size or hypergraph uniformity.')
    parser_sweep.add_argument('--omega', type=_float_list, default=[1.0],
                              help='Comma separated threshold multipliers.')
    parser_sweep.add_argument('--pattern',
                              help='Pattern name or graph file for f-cycle '
                                   'mode.')
    parser_sweep.add_argument('--trials', type=int,
                              help='Trials per point.')
    parser_sweep.add_argument('--seed', type=int, help='Base seed.')
    _add_budget_args(parser_sweep)
    parser_sweep.add_argument('--workers', type=int,
                              help='Number of worker processes.')
    timing = parser_sweep.add_mutually_exclusive_group()
    timing.add_argument('--timing', dest='timing', action='store_true',
                        default=None,
                        help='Record wall-clock elapsed times. The output '
                             'then differs from run to run.')
    timing.add_argument('--no-timing', dest='timing', action='store_false',
                        default=None,
                        help='Write elapsed times as zero, the default.')
    parser_sweep.add_argument('--out', choices=('csv', 'json'),
                              default='csv', help='Output format.')
    parser_sweep.add_argument('--output', '-o',
                              help='Output file, standard output if omitted.')
    parser_sweep.add_argument('--summary',
                              help='Also write the per-point summary CSV '
                                   'here.')
    parser_sweep.add_argument('--table', action='store_true',
                              help='Show the per-point summary as a table.')

    parser_solve = subparsers.add_parser('solve', help='Search one graph for '
                                         'a spanning K_r-cycle or F-cycle.')
    parser_solve.add_argument('--graph', required=True,
                              help='Graph file.')
    parser_solve.add_argument('--r', type=int, default=3,
                              help='Clique size.')
    parser_solve.add_argument('--pattern',
                              help='Search for an F-cycle of this pattern '
                                   'instead.')
    parser_solve.add_argument('--opposite', action='store_true',
                              help='Require non-adjacent connectors inside '
                                   'each copy of the pattern.')
    _add_budget_args(parser_solve)
    parser_solve.add_argument('--output', '-o',
                              help='Write the result here instead of '
                                   'standard output.')

    parser_oracle = subparsers.add_parser('oracle', help='Compare the loose '
                                          'Hamilton cycle search with brute '
                                          'force on one hypergraph.')
    parser_oracle.add_argument('--hypergraph', required=True,
                               help='Hypergraph file.')
    _add_budget_args(parser_oracle)

    parser_verify = subparsers.add_parser('verify', help='Check a '
                                          'certificate.')
    host = parser_verify.add_mutually_exclusive_group(required=True)
    host.add_argument('--graph', help='Graph file.')
    host.add_argument('--hypergraph', help='Hypergraph file.')
    parser_verify.add_argument('--certificate', required=True,
                               help='Certificate JSON file.')
    parser_verify.add_argument('--pattern',
                               help='Pattern of an F-cycle certificate.')

    parser_balance = subparsers.add_parser('balance', help='Densities, '
                                           'balancedness and thresholds of a '
                                           'pattern.')
    which = parser_balance.add_mutually_exclusive_group(required=True)
    which.add_argument('--pattern', help='Pattern name or graph file.')
    which.add_argument('--kr', type=int, help='Use the clique K_r.')
    parser_balance.add_argument('--overlap', type=int,
                                help='Vertices shared by adjacent copies.')
    parser_balance.add_argument('--shared-edges', type=int,
                                help='Edges shared by adjacent copies.')
    parser_balance.add_argument('--n', type=int, default=1000,
                                help='Order at which thresholds are '
                                     'evaluated.')
    parser_balance.add_argument('--omega', type=float, default=1.0,
                                help='Threshold multiplier.')
    parser_balance.add_argument('--table', action='store_true',
                                help='Show a table instead of JSON.')

    parser_golden = subparsers.add_parser('golden', help='Write or check '
                                          'golden splitmix64 weights.')
    parser_golden.add_argument('--seed', type=_int_list, default=[42],
                               help='Comma separated seeds.')
    parser_golden.add_argument('--count', type=int, default=16,
                               help='Weights per seed.')
    action = parser_golden.add_mutually_exclusive_group()
    action.add_argument('--output', '-o', help='Write a golden file.')
    action.add_argument('--check', help='Check an existing golden file.')

    parser_sample = subparsers.add_parser('sample', help='Draw G(n, p) at '
                                          'omega times the K_r-cycle '
                                          'threshold, or H_r(n, pi).')
    parser_sample.add_argument('--n', type=int, required=True,
                               help='Number of vertices.')
    parser_sample.add_argument('--r', type=int, default=3,
                               help='Clique size or hypergraph uniformity.')
    parser_sample.add_argument('--omega', type=float, default=1.0,
                               help='Threshold multiplier.')
    parser_sample.add_argument('--seed', type=int, default=1,
                               help='Weight seed.')
    parser_sample.add_argument('--hypergraph', action='store_true',
                               help='Draw the r-uniform hypergraph instead '
                                    'of the graph.')
    parser_sample.add_argument('--output', '-o',
                               help='Write the graph or hypergraph file '
                                    'here.')

    parser_summarize = subparsers.add_parser('summarize', help='Summarize '
                                             'a sweep record CSV.')
    parser_summarize.add_argument('records', help='Record CSV file.')
    parser_summarize.add_argument('--out', choices=('csv', 'json'),
                                  default='csv', help='Output format.')
    parser_summarize.add_argument('--table', action='store_true',
                                  help='Show a table instead.')
    return parser


@contextlib.contextmanager
def _output(path):
    """Writable text handle on ``path``, or standard output."""
    if not path or path == '-':
        yield sys.stdout
        return
    with open(os.path.expanduser(path), 'w', newline='') as handle:
        yield handle


def _budget(args):
    values = read_config(args.path)
    node_limit = values['node_limit'] if args.node_limit is None \
        else args.node_limit
    time_limit_ms = values['time_limit_ms'] if args.time_limit_ms is None \
        else args.time_limit_ms
    try:
        return SearchBudget(node_limit=node_limit,
                            time_limit_ms=time_limit_ms)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _outcome_doc(outcome):
    doc = {'status': outcome.status}
    doc.update(outcome.stats)
    doc.update(outcome.info)
    if outcome.certificate is not None:
        doc['certificate'] = formats.certificate_to_json(outcome.certificate)
    return doc


def _sweep(args):
    cfg = SweepConfig.from_config(
        args.n, path=args.path, r=args.r, omega_list=args.omega,
        mode=args.mode, pattern=args.pattern, trials=args.trials,
        seed=args.seed, workers=args.workers, node_limit=args.node_limit,
        time_limit_ms=args.time_limit_ms,
        timing=args.timing,
    )
    logger.debug('Sweep configuration: %r', cfg)
    records = run_sweep(cfg)
    summaries = summarize(records)
    with _output(args.output) as handle:
        if args.out == 'json':
            print(formats.dumps(sweep_to_json(cfg, records, summaries)),
                  file=handle)
        else:
            write_records_csv(records, handle)
    if args.summary:
        with _output(args.summary) as handle:
            write_summary_csv(summaries, handle)
    if args.table:
        show_summary(summaries, handle=sys.stderr)


def _solve(args):
    if args.r < 3:
        raise UsageError(f'--r must be at least 3, got {args.r}')
    g = formats.load_graph(args.graph)
    budget = _budget(args)
    if args.pattern:
        f = resolve_pattern(args.pattern)
        constraint = ConnectorConstraint.opposite(f) if args.opposite \
            else None
        outcome = find_f_cycle(g, f, budget, connector_constraint=constraint)
    else:
        if args.opposite:
            raise UsageError('--opposite needs --pattern')
        outcome = find_spanning_kr_cycle(g, args.r, budget)
    logger.info('Search finished: %s after %d nodes', outcome.status,
                outcome.nodes)
    with _output(args.output) as handle:
        print(formats.dumps(_outcome_doc(outcome)), file=handle)


def _oracle(args):
    h = formats.load_hypergraph(args.hypergraph)
    doc = {'search': _outcome_doc(find_loose_hc(h, _budget(args)))}
    if h.n <= BRUTE_FORCE_MAX_N:
        doc['brute_force'] = _outcome_doc(brute_force_loose_hc(h))
        doc['agree'] = (doc['search']['status']
                        == doc['brute_force']['status'])
        if not doc['agree']:
            logger.error('Search and brute force disagree on %s',
                         args.hypergraph)
    else:
        logger.warning('n=%d is too large for brute force', h.n)
    print(formats.dumps(doc))


def _verify(args):
    doc = formats.load_json(args.certificate)
    # Accept the output of ``solve`` as well as a bare certificate
    if isinstance(doc, dict) and 'certificate' in doc:
        doc = doc['certificate']
    if args.hypergraph:
        host = formats.load_hypergraph(args.hypergraph)
        cert = formats.certificate_from_json(doc, 'loose-hc')
        result = verify_loose_hc(host, cert)
    else:
        host = formats.load_graph(args.graph)
        if args.pattern:
            cert = formats.certificate_from_json(doc, 'f-cycle')
            result = verify_f_cycle(host, resolve_pattern(args.pattern),
                                    cert)
        else:
            cert = formats.certificate_from_json(doc, 'kr-cycle')
            result = verify_kr_cycle(host, cert)
    print(formats.dumps({
        'ok': result.ok,
        'violation': result.violation.value if result.violation else None,
        'index': result.index,
        'detail': result.detail,
    }))


def _balance(args):
    if args.kr is not None:
        f = PatternGraph.complete(args.kr)
    else:
        f = resolve_pattern(args.pattern)
    if (args.overlap is None) != (args.shared_edges is None):
        raise UsageError('--overlap and --shared-edges go together')
    report = balance_report(f, n=args.n, omega=args.omega,
                            overlap=args.overlap,
                            shared_edges=args.shared_edges)
    if args.table:
        show_report(report)
    else:
        print(formats.dumps(report))


def _golden(args):
    if args.check:
        mismatches = check_golden(args.check)
        for seed, slot, expected, found in mismatches:
            logger.error('Seed %d slot %d: expected %s, computed %s', seed,
                         slot, expected, found)
        if mismatches:
            return EXIT_IO
        logger.info('Golden weights in %s match', args.check)
    elif args.output:
        write_golden(args.output, args.seed, args.count)
    else:
        print(formats.dumps({str(seed): golden_weights(seed, args.count)
                             for seed in args.seed}))
    return EXIT_OK


def _sample(args):
    if args.r < 3:
        raise UsageError(f'--r must be at least 3, got {args.r}')
    params = ModelParams.at_threshold(args.n, args.r, args.omega)
    doc = {'n': args.n, 'r': args.r, 'omega': args.omega, 'seed': args.seed}
    if args.hypergraph:
        weights = WeightAssignment.for_hypergraph(args.n, args.r, args.seed)
        h = hypergraph_at(weights, params.pi)
        doc.update(pi=params.pi, clamped=params.pi_clamped,
                   num_edges=len(h))
        if args.output:
            formats.store_hypergraph(h, args.output)
    else:
        weights = WeightAssignment.for_graph(args.n, args.seed)
        g = graph_at(weights, params.p)
        counts = coverage_counts(g, args.r)
        doc.update(p=params.p, clamped=params.p_clamped,
                   num_edges=g.num_edges, clique_counts=counts,
                   uncovered=counts.count(0))
        if args.output:
            formats.store_graph(g, args.output)
    print(formats.dumps(doc))


def _summarize(args):
    with open(os.path.expanduser(args.records), 'r', newline='') as handle:
        records = read_records_csv(handle)
    summaries = summarize(records)
    if args.table:
        show_summary(summaries)
    elif args.out == 'json':
        print(formats.dumps([summary.to_dict() for summary in summaries]))
    else:
        write_summary_csv(summaries, sys.stdout)


COMMANDS = {
    'sweep': _sweep,
    'solve': _solve,
    'oracle': _oracle,
    'verify': _verify,
    'balance': _balance,
    'golden': _golden,
    'sample': _sample,
    'summarize': _summarize,
}


def krcycles_cli(args):
    """
    Run the command line with the given arguments.

    Returns
    -------
    status : int
        0 on success, 1 for usage and configuration errors, 2 for I/O and
        file format errors.
    """
    parser = get_parser()
    # print usage if no arguments are provided
    if not args:
        parser.print_usage()
        return EXIT_USAGE
    try:
        args = parser.parse_args(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f'krcycles: error: {exc}', file=sys.stderr)
        return EXIT_USAGE

    # Logging Level handling
    if args.verbose:
        shown_logger = logging.getLogger()
        level = "DEBUG"
    else:
        shown_logger = logging.getLogger('krcycles')
        level = "INFO"
    coloredlogs.install(level=level, logger=shown_logger,
                        fmt='[%(asctime)s] - %(levelname)s -  %(message)s')
    logger.debug("Set logging level of %r to %r", shown_logger.name, level)

    # Version endpoint
    if args.version:
        print(f'krcycles: Version {krcycles.__version__} from '
              f'{krcycles.__file__}')
        return EXIT_OK
    if args.cmd is None:
        parser.print_usage()
        return EXIT_USAGE
    logger.debug('Command line arguments: %r', args)

    try:
        return COMMANDS[args.cmd](args) or EXIT_OK
    except (UsageError, ConfigError, PatternError, DivisibilityError,
            BalanceError, SummaryError) as exc:
        logger.error('%s', exc)
        return EXIT_USAGE
    except (OSError, FormatError) as exc:
        logger.error('%s', exc)
        return EXIT_IO


def main():
    """Execute the ``krcycles_cli`` with command line arguments"""
    sys.exit(krcycles_cli(sys.argv[1:]))
