"""
Exact calculators for 1-densities, balancedness and threshold formulas.

All exponents are held as :class:`fractions.Fraction`; floating point only
appears when a formula is evaluated at a concrete ``n``. ``log`` is the
natural logarithm throughout.
"""
import itertools
import logging
import math
from collections import namedtuple
from dataclasses import dataclass
from fractions import Fraction

from prettytable import PrettyTable

from .errors import BalanceError, PatternError
from .patterns import MAX_PATTERN_VERTICES, PatternGraph
from .utils import binomial, clamp_probability

logger = logging.getLogger(__name__)

BalanceResult = namedtuple('BalanceResult', ['strict', 'witness'])
FirstMoment = namedtuple('FirstMoment', ['p_exponent', 'pi_exponent'])


def fraction_str(value):
    """Render a rational as ``"a/b"`` (``"a"`` when integral)."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f'{value.numerator}/{value.denominator}'


def d1(f):
    """The 1-density ``|E(F)| / (|V(F)| - 1)`` of a pattern, exactly."""
    return f.d1


def is_strictly_one_balanced(f):
    """
    Decide whether ``d1(F) > d1(F')`` for every proper subgraph ``F'`` of F
    with at least two vertices.

    A subgraph on the full vertex set with an edge removed is always
    strictly sparser, and among subgraphs on a fixed vertex set the induced
    one is the densest, so it suffices to check the induced subgraphs on
    proper vertex subsets.

    Returns
    -------
    BalanceResult
        ``strict`` and, when not strict, the first ``witness`` subgraph (by
        size, then lexicographically) with ``d1(F') >= d1(F)``.

    Raises
    ------
    PatternError
        If F has more vertices than the brute force accepts.
    """
    if f.n > MAX_PATTERN_VERTICES:
        raise PatternError(f'{f.name} is too large for the subgraph sweep')
    target = f.d1
    for size in range(2, f.n):
        for vertices in itertools.combinations(range(f.n), size):
            sub = f.induced(vertices)
            if sub.num_edges and sub.d1 >= target:
                logger.debug('%s is not strictly 1-balanced: %s has d1=%s',
                             f.name, sub.name, sub.d1)
                return BalanceResult(False, sub)
    return BalanceResult(True, None)


@dataclass(frozen=True)
class ThresholdReport:
    """
    A threshold ``p = omega n^{p_exponent} (log n)^{log_exponent}``.

    Attributes
    ----------
    pattern : str
    n : int
    omega : float
    p_exponent, log_exponent : Fraction
    raw : float
        The formula evaluated in double precision, before clamping.
    p : float
        ``raw`` clamped to ``[0, 1]``.
    clamped : bool
    pi : float
        The coupled hyperedge probability ``a p^{|E(F)|}`` with ``a = 1``.
    pi_formula : str
    a_guaranteed : bool
        Whether ``a = 1`` is known to be admissible (only for cliques).
    """
    pattern: str
    n: int
    omega: float
    p_exponent: Fraction
    log_exponent: Fraction
    raw: float
    p: float
    clamped: bool
    pi: float
    pi_formula: str
    a_guaranteed: bool

    def to_dict(self):
        return {
            'pattern': self.pattern,
            'n': self.n,
            'omega': self.omega,
            'p_exponent': fraction_str(self.p_exponent),
            'log_exponent': fraction_str(self.log_exponent),
            'p': self.p,
            'raw_p': self.raw,
            'clamped': self.clamped,
            'pi': self.pi,
            'pi_formula': self.pi_formula,
            'a_guaranteed': self.a_guaranteed,
        }


def _evaluate(n, omega, p_exponent, log_exponent):
    return (omega * n ** float(p_exponent)
            * math.log(n) ** float(log_exponent))


def f_threshold(n, f, omega=1.0):
    """
    The threshold ``n^{-1/d1(F)} (log n)^{1/|E(F)|}`` for a spanning F-cycle
    of a strictly 1-balanced pattern, times ``omega``.

    For ``F = K_r`` this is the K_r-cycle threshold.
    """
    if n < 2:
        raise BalanceError(f'n must be at least 2, got {n}')
    if not f.num_edges:
        raise PatternError(f'{f.name} has no edges')
    p_exponent = -1 / f.d1
    log_exponent = Fraction(1, f.num_edges)
    raw = _evaluate(n, omega, p_exponent, log_exponent)
    p, clamped = clamp_probability(raw, what=f'{f.name} threshold')
    return ThresholdReport(
        pattern=f.name, n=n, omega=omega,
        p_exponent=p_exponent, log_exponent=log_exponent,
        raw=raw, p=p, clamped=clamped,
        pi=coupling_pi(p, f),
        pi_formula=f'pi = a * p^{f.num_edges}, a = 1',
        a_guaranteed=f.is_complete,
    )


def kr_threshold(n, r, omega=1.0):
    """
    The K_r-cycle threshold ``p = n^{-2/r} (log n)^{1/C(r,2)}``.

    Parameters
    ----------
    n : int
        At least 2.
    r : int
        At least 3.
    omega : float, optional
        Multiplier applied to the formula before clamping.
    """
    if r < 3:
        raise BalanceError(f'r must be at least 3, got {r}')
    return f_threshold(n, PatternGraph.complete(r), omega=omega)


def coupling_pi(p, f, a=1):
    """The hyperedge probability ``a p^{|E(F)|}`` coupled to ``G(n, p)``."""
    if not 0.0 <= p <= 1.0:
        raise BalanceError(f'p={p} is not a probability')
    return a * p ** f.num_edges


def coupling_exponents(r):
    """
    Exponents of ``n``, ``log n`` and ``omega`` in ``p^{C(r,2)}`` when ``p``
    is the K_r-cycle threshold times ``omega``.

    Evaluates to ``(1 - r, 1, C(r, 2))``: the loose Hamilton cycle threshold
    ``n^{1-r} log n`` with multiplier ``omega^{C(r,2)}``.
    """
    edges = binomial(r, 2)
    return (Fraction(-2, r) * edges, Fraction(1, edges) * edges,
            Fraction(edges))


def loose_hc_threshold_pi(n, r, omega, clamp=True):
    """The loose Hamilton cycle probability ``omega n^{1-r} log n``."""
    if n < 2:
        raise BalanceError(f'n must be at least 2, got {n}')
    value = omega * n ** (1 - r) * math.log(n)
    return clamp_probability(value, what='pi')[0] if clamp else value


def overlap2_hc_threshold_pi(n, omega, clamp=True):
    """The overlap-2 Hamilton cycle probability ``omega n^{-2}``."""
    value = omega * n ** -2
    return clamp_probability(value, what='pi')[0] if clamp else value


def f_cycle_first_moment(f, overlap, shared_edges):
    """
    First-moment exponents for a spanning cycle of copies of F where
    adjacent copies share ``overlap`` vertices and ``shared_edges`` edges.

    With ``m = n / (v_F - o)`` copies and ``m (e_F - s)`` edges in total,
    setting ``n! p^{total}`` to order one (``log n! ~ n log n``) gives
    ``p = n^{-(v_F - o)/(e_F - s)}``; the coupled ``pi = p^{e_F}``.

    Returns
    -------
    FirstMoment
        ``(p_exponent, pi_exponent)`` as exact rationals.

    Raises
    ------
    BalanceError
        For an inadmissible overlap geometry or ``e_F = s``.
    """
    v, e = f.n, f.num_edges
    if not 1 <= overlap < v:
        raise BalanceError(f'overlap must lie in 1..{v - 1}, got {overlap}')
    if not 0 <= shared_edges <= e:
        raise BalanceError(f'shared edges must lie in 0..{e}, got '
                           f'{shared_edges}')
    if e == shared_edges:
        raise BalanceError('Every edge is shared; the first moment is '
                           'degenerate')
    p_exponent = Fraction(-(v - overlap), e - shared_edges)
    return FirstMoment(p_exponent, p_exponent * e)


def overlap2_comparison(f, overlap, shared_edges, n, omega=1.0):
    """
    Compare the first-moment ``pi`` of an overlapping F-cycle with the
    ``omega n^{-2}`` threshold of the matching hypergraph Hamilton cycle.

    ``below_threshold`` is decided on exponents, so it holds for every
    ``n >= 2`` at ``omega >= 1``.
    """
    moment = f_cycle_first_moment(f, overlap, shared_edges)
    pi = n ** float(moment.pi_exponent)
    threshold = overlap2_hc_threshold_pi(n, omega)
    return {
        'pi_exponent': fraction_str(moment.pi_exponent),
        'threshold_exponent': '-2',
        'below_threshold': moment.pi_exponent < -2,
        'n': n,
        'pi': pi,
        'threshold_pi': threshold,
    }


def balance_report(f, n=1000, omega=1.0, overlap=None, shared_edges=None):
    """
    Everything the calculators know about a pattern, ready for JSON.

    Parameters
    ----------
    f : PatternGraph
    n : int, optional
        Order at which the thresholds are evaluated numerically.
    omega : float, optional
    overlap, shared_edges : int, optional
        When both are given, the first-moment exponents for that overlap
        geometry are included, plus the overlap-2 comparison when
        ``overlap == 2``.
    """
    balanced = is_strictly_one_balanced(f)
    report = {
        'pattern': f.name,
        'vertices': f.n,
        'edges': [list(edge) for edge in f.edges],
        'd1': fraction_str(f.d1),
        'strictly_1_balanced': balanced.strict,
        'witness': (None if balanced.witness is None else
                    [[balanced.witness.origin[u], balanced.witness.origin[v]]
                     for u, v in balanced.witness.edges]),
        'thresholds': f_threshold(n, f, omega).to_dict(),
    }
    if f.is_complete:
        report['thresholds']['loose_hc_pi'] = loose_hc_threshold_pi(
            n, f.n, omega ** binomial(f.n, 2))
    if overlap is not None and shared_edges is not None:
        moment = f_cycle_first_moment(f, overlap, shared_edges)
        report['first_moment'] = {
            'overlap': overlap,
            'shared_edges': shared_edges,
            'p_exponent': fraction_str(moment.p_exponent),
            'pi_exponent': fraction_str(moment.pi_exponent),
        }
        if overlap == 2:
            report['overlap2'] = overlap2_comparison(f, overlap,
                                                     shared_edges, n, omega)
    return report


def show_report(report, handle=None):
    """
    Show a balance report in a PrettyTable.

    Parameters
    ----------
    report : dict
        As returned by :func:`balance_report`.
    handle : file-like, optional
    """
    pt = PrettyTable(['Quantity', 'Value'])
    pt.align = 'l'
    pt.float_format = '.6'

    def add_rows(prefix, doc):
        for key in sorted(doc):
            value = doc[key]
            if isinstance(value, dict):
                add_rows(f'{prefix}{key}.', value)
            else:
                pt.add_row([f'{prefix}{key}', value])

    add_rows('', report)
    print(pt, file=handle)
