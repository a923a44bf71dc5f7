"""
Exact searches for loose Hamilton cycles, spanning K_r-cycles and F-cycles.

All searches share one engine: a loose path is extended block by block
(a block being a hyperedge, or a copy of F), each new block meeting the path
only in the current connector, until the last block closes the cycle back
onto the first connector. Candidate blocks are tried in sorted order and
connectors in ascending order, so outcomes and node counts are
deterministic. The only pruning applied is a necessary condition (every
uncovered vertex must still fit in some block), which can change the node
count but never the outcome.
"""
import itertools
import logging
import time
from dataclasses import dataclass, field

from .cliques import clique_hypergraph, enumerate_f_copies, \
    uncovered_vertices
from .core import FCycleCert, LooseHCCert, lift, verify_f_cycle, \
    verify_kr_cycle, verify_loose_hc
from .errors import CertificateError, DivisibilityError
from .utils import iter_bits, popcount, to_mask

logger = logging.getLogger(__name__)

FOUND = 'found'
NONE = 'none'
EXHAUSTED = 'budget_exhausted'

#: Largest order accepted by :func:`brute_force_loose_hc`
BRUTE_FORCE_MAX_N = 10


@dataclass(frozen=True)
class SearchBudget:
    """
    Limits on a single search.

    Attributes
    ----------
    node_limit : int
        Maximum number of search-tree nodes (blocks placed).
    time_limit_ms : int
        Wall-clock cap in milliseconds.
    """
    node_limit: int = 1_000_000
    time_limit_ms: int = 60_000

    def __post_init__(self):
        if self.node_limit <= 0 or self.time_limit_ms <= 0:
            raise ValueError(f'Budget limits must be positive, got '
                             f'{self.node_limit} nodes and '
                             f'{self.time_limit_ms} ms')


@dataclass(frozen=True)
class SearchOutcome:
    """
    Result of a search.

    ``none`` is only reported after the search space was exhausted; running
    out of budget is reported as ``budget_exhausted``.
    """
    status: str
    certificate: object = None
    nodes: int = 0
    elapsed_ms: float = 0.0
    info: dict = field(default_factory=dict, compare=False)

    @property
    def found(self):
        return self.status == FOUND

    @property
    def stats(self):
        return {'nodes': self.nodes, 'elapsed_ms': self.elapsed_ms}


class _BudgetExhausted(Exception):
    pass


class _LooseCycleSearch:
    """
    Search for a cyclic sequence of blocks, consecutive blocks sharing one
    vertex and the rest disjoint, covering ``0..n-1``.

    The path grows one block at a time from its last connector. Blocks are
    tried in order of their lowest uncovered vertex and the next connector
    in ascending order, so the certificate found does not depend on the
    order of ``blocks``.

    Parameters
    ----------
    n : int
    blocks : list of (int, object)
        ``(vertex bitset, payload)`` pairs, in any order.
    block_size : int
    budget : SearchBudget
    admissible : callable, optional
        ``admissible(payload, entry, exit)`` restricting which vertices of a
        block may serve as its two connectors. Must be symmetric in
        ``entry`` and ``exit``.
    """

    def __init__(self, n, blocks, block_size, budget, admissible=None):
        self.n = n
        self.k = block_size
        self.blocks = blocks
        self.budget = budget
        self.admissible = admissible or (lambda payload, a, b: True)
        self.incident = [[] for _ in range(n)]
        self.by_mask = {}
        for index, (mask, _) in enumerate(blocks):
            for v in iter_bits(mask):
                self.incident[v].append(index)
            self.by_mask.setdefault(mask, []).append(index)
        # Continuations through v, lowest uncovered vertex first
        for incident in self.incident:
            incident.sort(key=lambda b: tuple(iter_bits(blocks[b][0])))
        self.nodes = 0
        self._deadline = None
        self._path = []
        self._start = None

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget.node_limit:
            raise _BudgetExhausted()
        if self.nodes % 256 == 0 and time.monotonic() > self._deadline:
            raise _BudgetExhausted()

    def _feasible(self, remaining, c):
        """Every uncovered vertex, and the first connector, still fits in
        some block avoiding the covered vertices."""
        c0 = self._start
        room = remaining | 1 << c | 1 << c0
        for v in itertools.chain(iter_bits(remaining), (c0,)):
            if not any(self.blocks[b][0] & ~room == 0
                       for b in self.incident[v]):
                return False
        return True

    def _extend(self, c, covered):
        self._tick()
        full = (1 << self.n) - 1
        remaining = full & ~covered
        if popcount(remaining) == self.k - 2:
            target = remaining | 1 << c | 1 << self._start
            for b in self.by_mask.get(target, ()):
                payload = self.blocks[b][1]
                if self.admissible(payload, c, self._start):
                    self._path.append((payload, c, self._start))
                    return True
            return False
        if not self._feasible(remaining, c):
            return False
        for b in self.incident[c]:
            mask, payload = self.blocks[b]
            fresh = mask & ~(1 << c)
            if fresh & covered:
                continue
            for x in iter_bits(fresh):
                if not self.admissible(payload, c, x):
                    continue
                self._path.append((payload, c, x))
                if self._extend(x, covered | mask):
                    return True
                self._path.pop()
        return False

    def run(self):
        """
        Returns
        -------
        status, path : str, list of (payload, entry, exit)
        """
        start = time.monotonic()
        self._deadline = start + self.budget.time_limit_ms / 1000.0
        try:
            for b in self.incident[0] if self.n else ():
                mask, payload = self.blocks[b]
                for c0, c1 in itertools.combinations(iter_bits(mask), 2):
                    if not self.admissible(payload, c0, c1):
                        continue
                    self._start = c0
                    self._path = [(payload, c0, c1)]
                    if self._extend(c1, mask):
                        return FOUND, list(self._path)
        except _BudgetExhausted:
            logger.debug('Search budget exhausted after %d nodes',
                         self.nodes)
            return EXHAUSTED, None
        return NONE, None


def _elapsed_ms(start):
    return (time.monotonic() - start) * 1000.0


def _check_order(n, k, what):
    """Raise DivisibilityError unless n = (k-1)m with m >= 3."""
    if n % (k - 1):
        raise DivisibilityError(f'{what}: n={n} is not divisible by '
                                f'{k - 1}')
    if n < 3 * (k - 1):
        raise DivisibilityError(f'{what}: n={n} is below 3*{k - 1}, a cycle '
                                f'needs at least three blocks')


def find_loose_hc(h, budget=None):
    """
    Search the hypergraph ``h`` for a loose Hamilton cycle.

    Parameters
    ----------
    h : Hypergraph
    budget : SearchBudget, optional

    Returns
    -------
    SearchOutcome
        With a :class:`LooseHCCert` when found.

    Raises
    ------
    DivisibilityError
        Unless ``(r-1) | n`` and ``n >= 3(r-1)``.
    """
    _check_order(h.n, h.r, 'loose Hamilton cycle')
    budget = budget or SearchBudget()
    start = time.monotonic()
    full = (1 << h.n) - 1
    if h.covered() != full:
        logger.debug('%r leaves vertices uncovered', h)
        return SearchOutcome(NONE, nodes=0, elapsed_ms=_elapsed_ms(start))
    blocks = list(zip(h.masks, h.edges))
    search = _LooseCycleSearch(h.n, blocks, h.r, budget)
    status, path = search.run()
    certificate = None
    if status == FOUND:
        certificate = LooseHCCert.from_edges([edge for edge, _, _ in path])
        result = verify_loose_hc(h, certificate)
        if not result:
            raise CertificateError(f'Search produced an invalid loose '
                                   f'Hamilton cycle: {result!r}')
    logger.debug('Loose Hamilton cycle search on %r: %s after %d nodes', h,
                 status, search.nodes)
    return SearchOutcome(status, certificate, search.nodes,
                         _elapsed_ms(start))


def brute_force_loose_hc(h):
    """
    Decide loose Hamiltonicity of a small hypergraph by trying every cyclic
    ordering.

    Vertex 0 is fixed in first position and the orientation is fixed by
    requiring the second vertex to be smaller than the last, leaving
    ``(n-1)!/2`` orderings, each tried at every window offset.

    Raises
    ------
    ValueError
        If ``n`` exceeds :data:`BRUTE_FORCE_MAX_N`.
    DivisibilityError
        Unless ``(r-1) | n`` and ``n >= 3(r-1)``.
    """
    if h.n > BRUTE_FORCE_MAX_N:
        raise ValueError(f'Brute force is limited to n <= '
                         f'{BRUTE_FORCE_MAX_N}, got n={h.n}')
    _check_order(h.n, h.r, 'loose Hamilton cycle')
    start = time.monotonic()
    n, r = h.n, h.r
    edges = {frozenset(edge) for edge in h.edges}
    m = n // (r - 1)
    examined = 0
    for rest in itertools.permutations(range(1, n)):
        if rest[0] > rest[-1]:
            continue
        examined += 1
        ordering = (0,) + rest
        for offset in range(r - 1):
            if all(frozenset(ordering[(offset + i * (r - 1) + k) % n]
                             for k in range(r)) in edges
                   for i in range(m)):
                certificate = LooseHCCert.from_ordering(ordering, r, offset)
                return SearchOutcome(FOUND, certificate, examined,
                                     _elapsed_ms(start))
    return SearchOutcome(NONE, None, examined, _elapsed_ms(start))


def find_spanning_kr_cycle(g, r, budget=None):
    """
    Search ``g`` for a spanning K_r-cycle.

    The r-cliques of ``g`` form a hypergraph; a loose Hamilton cycle there
    lifts to a K_r-cycle of ``g``. When some vertex lies in no r-clique the
    answer is ``none`` without searching.

    Returns
    -------
    SearchOutcome
        With a :class:`KrCycleCert` when found; ``info['uncovered']`` holds
        the number of uncovered vertices.

    Raises
    ------
    ValueError
        If ``r < 3``.
    DivisibilityError
        Unless ``(r-1) | n`` and ``n >= 3(r-1)``.
    """
    if r < 3:
        raise ValueError(f'r must be at least 3, got {r}')
    _check_order(g.n, r, 'K_r-cycle')
    budget = budget or SearchBudget()
    start = time.monotonic()
    uncovered = uncovered_vertices(g, r)
    if uncovered:
        logger.debug('%d vertices of %r lie in no K%d', len(uncovered), g, r)
        return SearchOutcome(NONE, nodes=0, elapsed_ms=_elapsed_ms(start),
                             info={'uncovered': len(uncovered)})
    outcome = find_loose_hc(clique_hypergraph(g, r), budget)
    certificate = None
    if outcome.found:
        certificate = lift(outcome.certificate)
        result = verify_kr_cycle(g, certificate)
        if not result:
            raise CertificateError(f'Lifted certificate does not verify: '
                                   f'{result!r}')
    return SearchOutcome(outcome.status, certificate, outcome.nodes,
                         _elapsed_ms(start), info={'uncovered': 0})


def find_f_cycle(g, f, budget=None, connector_constraint=None):
    """
    Search ``g`` for a spanning F-cycle: copies of F, consecutive copies
    sharing exactly one vertex and the others vertex disjoint.

    Without a constraint only the vertex sets of the copies matter, so the
    search runs over distinct vertex sets. With a
    :class:`~krcycles.patterns.ConnectorConstraint` it runs over the copies
    themselves, admitting a copy only when both of its connectors are in
    allowed positions.

    Raises
    ------
    PatternError
        If ``f`` is disconnected, has fewer than three vertices or more than
        eight.
    DivisibilityError
        Unless ``(|V(F)|-1) | n`` and ``n >= 3(|V(F)|-1)``.
    """
    f.validate(min_vertices=3)
    _check_order(g.n, f.n, f'{f.name}-cycle')
    budget = budget or SearchBudget()
    start = time.monotonic()
    copies = enumerate_f_copies(g, f)
    covered = 0
    for copy in copies:
        covered |= to_mask(copy.vertices)
    uncovered = g.n - popcount(covered)
    if uncovered:
        return SearchOutcome(NONE, nodes=0, elapsed_ms=_elapsed_ms(start),
                             info={'uncovered': uncovered})
    if connector_constraint is None:
        admissible = None
        blocks = {}
        for copy in copies:
            blocks.setdefault(to_mask(copy.vertices), copy)
        blocks = sorted(blocks.items(),
                        key=lambda item: item[1].vertices)
    else:
        def admissible(copy, entry, exit_):
            labels = dict(copy.labels)
            return connector_constraint.allows(f, labels[entry],
                                               labels[exit_])
        blocks = [(to_mask(copy.vertices), copy) for copy in copies]
    search = _LooseCycleSearch(g.n, blocks, f.n, budget, admissible)
    status, path = search.run()
    certificate = None
    if status == FOUND:
        certificate = FCycleCert(copy for copy, _, _ in path)
        result = verify_f_cycle(g, f, certificate, connector_constraint)
        if not result:
            raise CertificateError(f'Search produced an invalid '
                                   f'{f.name}-cycle: {result!r}')
    logger.debug('%s-cycle search (%s) on %r: %s after %d nodes', f.name,
                 connector_constraint.describe() if connector_constraint
                 else 'unconstrained', g, status, search.nodes)
    return SearchOutcome(status, certificate, search.nodes,
                         _elapsed_ms(start), info={'uncovered': 0})
