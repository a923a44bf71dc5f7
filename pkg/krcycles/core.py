"""
Graphs, hypergraphs and the spanning-cycle certificates built on them.

All of the containers here are immutable once constructed. Vertices are the
integers ``0..n-1`` and adjacency is held as one integer bitset per vertex.
The verifiers never raise on a malformed certificate; instead they return a
:class:`VerifyResult` naming the first violated condition.
"""
import enum
import itertools
import logging
from dataclasses import dataclass, field

import networkx as nx

from .errors import CertificateError, GraphError
from .utils import from_mask, popcount, to_mask

logger = logging.getLogger(__name__)


class Graph:
    """
    A simple undirected graph on the vertices ``0..n-1``.

    Parameters
    ----------
    n : int
        Number of vertices, at least one.
    edges : iterable of pairs, optional
        Unordered vertex pairs. Repeated pairs collapse into a single edge.

    Raises
    ------
    GraphError
        If ``n`` is not positive, or an edge is a self-loop or leaves the
        vertex range.
    """

    __slots__ = ('_n', '_adj', '_edges')

    def __init__(self, n, edges=()):
        if n < 1:
            raise GraphError(f'A graph needs at least one vertex, got n={n}')
        adj = [0] * n
        for edge in edges:
            i, j = edge
            if i == j:
                raise GraphError(f'Self-loop at vertex {i}')
            if not (0 <= i < n and 0 <= j < n):
                raise GraphError(f'Edge {edge!r} out of range for n={n}')
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        self._n = n
        self._adj = tuple(adj)
        self._edges = None

    @classmethod
    def from_adjacency(cls, adj):
        """
        Build a graph directly from a sequence of neighbourhood bitsets.

        The bitsets must already be symmetric and loop-free; this is the fast
        path used by the random samplers.
        """
        graph = cls.__new__(cls)
        graph._n = len(adj)
        graph._adj = tuple(adj)
        graph._edges = None
        return graph

    @classmethod
    def complete(cls, n):
        """The complete graph on ``n`` vertices."""
        full = (1 << n) - 1
        return cls.from_adjacency([full & ~(1 << v) for v in range(n)])

    @classmethod
    def from_cliques(cls, n, cliques):
        """The graph whose edges are exactly those of the given cliques."""
        return cls(n, [pair for clique in cliques
                       for pair in itertools.combinations(clique, 2)])

    @property
    def n(self):
        return self._n

    @property
    def adj(self):
        """Tuple of neighbourhood bitsets, one per vertex."""
        return self._adj

    @property
    def edges(self):
        """Sorted tuple of the edges as ``(i, j)`` pairs with ``i < j``."""
        if self._edges is None:
            self._edges = tuple(
                (i, j) for i in range(self._n)
                for j in from_mask(self._adj[i] >> (i + 1) << (i + 1))
            )
        return self._edges

    @property
    def num_edges(self):
        return sum(popcount(mask) for mask in self._adj) // 2

    def has_edge(self, i, j):
        return 0 <= i < self._n and bool(self._adj[i] >> j & 1)

    def neighbors(self, v):
        """Bitset of the neighbours of ``v``."""
        return self._adj[v]

    def degree(self, v):
        return popcount(self._adj[v])

    def is_clique(self, vertices):
        """Whether ``vertices`` induce a complete subgraph."""
        vertices = list(vertices)
        mask = to_mask(vertices)
        return all((self._adj[v] | 1 << v) & mask == mask for v in vertices)

    def to_networkx(self):
        graph = nx.Graph()
        graph.add_nodes_from(range(self._n))
        graph.add_edges_from(self.edges)
        return graph

    def __eq__(self, other):
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self):
        return hash(self._adj)

    def __repr__(self):
        return f'{self.__class__.__name__}(n={self._n}, m={self.num_edges})'


class Hypergraph:
    """
    An r-uniform hypergraph on the vertices ``0..n-1``.

    Edges are stored as sorted r-tuples without duplicates.

    Raises
    ------
    GraphError
        If ``r < 3`` or an edge does not consist of ``r`` distinct vertices
        in range.
    """

    __slots__ = ('_n', '_r', '_edges', '_masks')

    def __init__(self, n, r, edges=()):
        if n < 1:
            raise GraphError(f'A hypergraph needs at least one vertex, '
                             f'got n={n}')
        if r < 3:
            raise GraphError(f'Uniformity must be at least 3, got r={r}')
        canonical = set()
        for edge in edges:
            edge = tuple(sorted(edge))
            if len(edge) != r or len(set(edge)) != r:
                raise GraphError(f'Edge {edge!r} does not have {r} distinct '
                                 f'vertices')
            if edge[0] < 0 or edge[-1] >= n:
                raise GraphError(f'Edge {edge!r} out of range for n={n}')
            canonical.add(edge)
        self._n = n
        self._r = r
        self._edges = tuple(sorted(canonical))
        self._masks = None

    @classmethod
    def complete(cls, n, r):
        """The complete r-uniform hypergraph on ``n`` vertices."""
        return cls(n, r, itertools.combinations(range(n), r))

    @property
    def n(self):
        return self._n

    @property
    def r(self):
        return self._r

    @property
    def edges(self):
        """Lexicographically sorted tuple of edges."""
        return self._edges

    @property
    def edge_set(self):
        return frozenset(self._edges)

    @property
    def masks(self):
        """Edges as bitsets, in the order of :attr:`edges`."""
        if self._masks is None:
            self._masks = tuple(to_mask(edge) for edge in self._edges)
        return self._masks

    def has_edge(self, vertices):
        return tuple(sorted(vertices)) in self.edge_set

    def covered(self):
        """Bitset of the vertices lying in at least one edge."""
        mask = 0
        for edge_mask in self.masks:
            mask |= edge_mask
        return mask

    def __len__(self):
        return len(self._edges)

    def __contains__(self, vertices):
        return self.has_edge(vertices)

    def __eq__(self, other):
        return (isinstance(other, Hypergraph) and self._n == other._n
                and self._r == other._r and self._edges == other._edges)

    def __hash__(self):
        return hash((self._n, self._r, self._edges))

    def __repr__(self):
        return (f'{self.__class__.__name__}(n={self._n}, r={self._r}, '
                f'm={len(self._edges)})')


class Violation(str, enum.Enum):
    """Named reasons a certificate can be rejected."""
    BAD_M = 'bad-m'
    RANGE = 'range'
    UNIFORMITY = 'uniformity'
    NON_CLIQUE = 'non-clique'
    NON_EDGE = 'non-edge'
    NOT_COPY = 'not-copy'
    BAD_OVERLAP = 'bad-overlap'
    BAD_DISJOINTNESS = 'bad-disjointness'
    NOT_SPANNING = 'not-spanning'
    EDGE_OVERLAP = 'edge-overlap'
    NOT_CONSECUTIVE = 'not-consecutive'
    BAD_CONNECTOR = 'bad-connector'


class VerifyResult:
    """
    Outcome of a certificate check.

    Truthy exactly when the certificate was accepted.

    Attributes
    ----------
    ok : bool
    violation : Violation or None
        The first failing condition.
    index : int or None
        Position of the offending clique / edge / copy, when there is one.
    detail : str
    """

    __slots__ = ('ok', 'violation', 'index', 'detail')

    def __init__(self, ok, violation=None, index=None, detail=''):
        self.ok = ok
        self.violation = violation
        self.index = index
        self.detail = detail

    @classmethod
    def accept(cls):
        return cls(True)

    @classmethod
    def reject(cls, violation, index=None, detail=''):
        logger.debug('Certificate rejected: %s at %s (%s)',
                     violation.value, index, detail)
        return cls(False, violation, index, detail)

    def __bool__(self):
        return self.ok

    def __eq__(self, other):
        if isinstance(other, VerifyResult):
            return (self.ok, self.violation, self.index) == \
                   (other.ok, other.violation, other.index)
        return NotImplemented

    def __repr__(self):
        if self.ok:
            return 'VerifyResult(ok)'
        return (f'VerifyResult({self.violation.value}, index={self.index}, '
                f'detail={self.detail!r})')


class KrCycleCert:
    """
    An ordered sequence of r-cliques ``H_1 .. H_m`` claimed to form a
    spanning K_r-cycle.

    Consecutive cliques (cyclically) should share exactly one vertex, the
    connector, and all other pairs should be vertex disjoint.
    """

    __slots__ = ('r', 'cliques')

    def __init__(self, r, cliques):
        self.r = r
        self.cliques = tuple(tuple(sorted(clique)) for clique in cliques)

    @property
    def m(self):
        return len(self.cliques)

    def connectors(self):
        """The shared vertices ``v_i = H_i & H_{i+1}`` where well defined."""
        m = self.m
        return tuple(
            min(set(self.cliques[i]) & set(self.cliques[(i + 1) % m]),
                default=None)
            for i in range(m)
        )

    def __eq__(self, other):
        return (isinstance(other, KrCycleCert) and self.r == other.r
                and self.cliques == other.cliques)

    def __hash__(self):
        return hash((self.r, self.cliques))

    def __repr__(self):
        return f'{self.__class__.__name__}(r={self.r}, cliques={self.cliques})'


class LooseHCCert:
    """
    A loose Hamilton cycle: a cyclic vertex ordering together with the edges
    ``E_1 .. E_m``, each made of r consecutive vertices of the ordering.
    """

    __slots__ = ('ordering', 'edges')

    def __init__(self, ordering, edges):
        self.ordering = tuple(ordering)
        self.edges = tuple(tuple(sorted(edge)) for edge in edges)

    @classmethod
    def from_ordering(cls, ordering, r, offset=0):
        """
        Cut a cyclic ordering into the windows of a loose cycle.

        The i-th edge holds positions ``offset + i(r-1) .. offset + i(r-1) +
        r - 1`` of the ordering (cyclically).
        """
        n = len(ordering)
        if n % (r - 1):
            raise CertificateError(f'n={n} is not divisible by r-1={r - 1}')
        edges = [[ordering[(offset + i * (r - 1) + k) % n] for k in range(r)]
                 for i in range(n // (r - 1))]
        return cls(ordering, edges)

    @classmethod
    def from_edges(cls, edges):
        """
        Recover the cyclic ordering from the edge sequence alone.

        The ordering starts at the connector shared by the last and first
        edge. Edge sequences that do not overlap in single vertices get a
        placeholder ordering (first appearance order), which the verifier
        will reject.
        """
        edges = [tuple(sorted(edge)) for edge in edges]
        m = len(edges)
        shared = [set(edges[i - 1]) & set(edges[i]) for i in range(m)]
        if m < 3 or any(len(s) != 1 for s in shared):
            return cls(dict.fromkeys(v for e in edges for v in e), edges)
        ordering = []
        for i, edge in enumerate(edges):
            entry = next(iter(shared[i]))
            exit_ = next(iter(shared[(i + 1) % m]))
            ordering.append(entry)
            ordering.extend(v for v in edge if v not in (entry, exit_))
        return cls(ordering, edges)

    @property
    def m(self):
        return len(self.edges)

    @property
    def r(self):
        return len(self.edges[0]) if self.edges else 0

    def __eq__(self, other):
        return (isinstance(other, LooseHCCert)
                and self.ordering == other.ordering
                and self.edges == other.edges)

    def __hash__(self):
        return hash((self.ordering, self.edges))

    def __repr__(self):
        return (f'{self.__class__.__name__}(ordering={self.ordering}, '
                f'edges={self.edges})')


@dataclass(frozen=True)
class FCopy:
    """
    One copy of a pattern F inside a host graph.

    Attributes
    ----------
    vertices : tuple
        Sorted host vertices of the copy.
    edges : tuple
        Sorted host edges ``(i, j)``, ``i < j``.
    labels : tuple
        ``(host_vertex, pattern_vertex)`` pairs of one embedding of F onto
        the copy, sorted by host vertex. Empty when unknown.
    """
    vertices: tuple
    edges: tuple
    labels: tuple = field(default=(), compare=False)

    def label_of(self, v):
        return dict(self.labels).get(v)


class FCycleCert:
    """An ordered sequence of F-copies claimed to form a spanning F-cycle."""

    __slots__ = ('copies',)

    def __init__(self, copies):
        self.copies = tuple(copies)

    @property
    def m(self):
        return len(self.copies)

    def __eq__(self, other):
        return isinstance(other, FCycleCert) and self.copies == other.copies

    def __hash__(self):
        return hash(self.copies)

    def __repr__(self):
        return f'{self.__class__.__name__}(m={self.m})'


def _check_cycle_sets(sets, n, block):
    """
    Shared checks of the overlap, disjointness and spanning conditions for a
    cyclic sequence of vertex sets of equal size ``block``.
    """
    m = len(sets)
    for i in range(m):
        shared = sets[i] & sets[(i + 1) % m]
        if len(shared) != 1:
            return VerifyResult.reject(
                Violation.BAD_OVERLAP, i,
                f'sets {i} and {(i + 1) % m} share {sorted(shared)}')
    for i, j in itertools.combinations(range(m), 2):
        if j - i in (1, m - 1):
            continue
        if sets[i] & sets[j]:
            return VerifyResult.reject(
                Violation.BAD_DISJOINTNESS, i,
                f'non-adjacent sets {i} and {j} share '
                f'{sorted(sets[i] & sets[j])}')
    union = set().union(*sets)
    if union != set(range(n)) or n != (block - 1) * m:
        return VerifyResult.reject(
            Violation.NOT_SPANNING, None,
            f'cover {len(union)} of n={n} vertices with m={m} sets of '
            f'size {block}')
    return None


def verify_kr_cycle(g, cert):
    """
    Check that ``cert`` is a spanning K_r-cycle of ``g``.

    Conditions are checked in the fixed order: number of cliques, vertex
    range, uniformity, clique-ness, overlap, disjointness, spanning.

    Returns
    -------
    VerifyResult
    """
    r = cert.r
    if cert.m < 3:
        return VerifyResult.reject(Violation.BAD_M, None,
                                   f'm={cert.m} is below 3')
    for i, clique in enumerate(cert.cliques):
        if any(not 0 <= v < g.n for v in clique):
            return VerifyResult.reject(Violation.RANGE, i,
                                       f'clique {clique} leaves 0..{g.n - 1}')
    for i, clique in enumerate(cert.cliques):
        if r < 3 or len(clique) != r or len(set(clique)) != r:
            return VerifyResult.reject(
                Violation.UNIFORMITY, i,
                f'clique {clique} is not a set of r={r} vertices')
    for i, clique in enumerate(cert.cliques):
        if not g.is_clique(clique):
            return VerifyResult.reject(Violation.NON_CLIQUE, i,
                                       f'{clique} is not complete in g')
    return (_check_cycle_sets([set(c) for c in cert.cliques], g.n, r)
            or VerifyResult.accept())


def _window_offset(ordering, first_edge, r):
    """Offset of the window of ``ordering`` equal to ``first_edge``."""
    n = len(ordering)
    target = set(first_edge)
    for offset in range(n):
        if {ordering[(offset + k) % n] for k in range(r)} == target:
            return offset
    return None


def verify_loose_hc(h, cert):
    """
    Check that ``cert`` is a loose Hamilton cycle of the hypergraph ``h``.

    Conditions are checked in the order: number of edges, vertex range,
    uniformity, edge membership, overlap, disjointness, spanning and finally
    that the edges are consecutive windows of the stated ordering.

    Returns
    -------
    VerifyResult
    """
    n, r = h.n, h.r
    if cert.m < 3:
        return VerifyResult.reject(Violation.BAD_M, None,
                                   f'm={cert.m} is below 3')
    vertices = itertools.chain(cert.ordering, *cert.edges)
    if any(not 0 <= v < n for v in vertices):
        return VerifyResult.reject(Violation.RANGE, None,
                                   f'vertex outside 0..{n - 1}')
    for i, edge in enumerate(cert.edges):
        if len(edge) != r or len(set(edge)) != r:
            return VerifyResult.reject(
                Violation.UNIFORMITY, i,
                f'edge {edge} is not a set of r={r} vertices')
    edge_set = h.edge_set
    for i, edge in enumerate(cert.edges):
        if edge not in edge_set:
            return VerifyResult.reject(Violation.NON_EDGE, i,
                                       f'{edge} is not an edge of h')
    failure = _check_cycle_sets([set(e) for e in cert.edges], n, r)
    if failure is not None:
        return failure
    # Edges must be the consecutive windows of the ordering
    ordering = cert.ordering
    if sorted(ordering) != list(range(n)):
        return VerifyResult.reject(Violation.NOT_CONSECUTIVE, None,
                                   'ordering is not a permutation of V')
    offset = _window_offset(ordering, cert.edges[0], r)
    if offset is None:
        return VerifyResult.reject(Violation.NOT_CONSECUTIVE, 0,
                                   'first edge is not a window')
    for i, edge in enumerate(cert.edges):
        start = offset + i * (r - 1)
        window = {ordering[(start + k) % n] for k in range(r)}
        if window != set(edge):
            return VerifyResult.reject(
                Violation.NOT_CONSECUTIVE, i,
                f'edge {edge} is not the window at position {start % n}')
    return VerifyResult.accept()


def _embedding(copy_graph, pattern_graph, labels):
    """
    An isomorphism from the copy onto the pattern, as ``{host: pattern}``.

    Uses the stored labels when they form an isomorphism, otherwise searches.
    """
    if labels:
        mapping = dict(labels)
        mapped = {frozenset((mapping.get(u), mapping.get(v)))
                  for u, v in copy_graph.edges}
        wanted = {frozenset(edge) for edge in pattern_graph.edges}
        if (len(mapping) == copy_graph.number_of_nodes()
                and set(mapping) == set(copy_graph.nodes)
                and mapped == wanted):
            return mapping
        return None
    matcher = nx.algorithms.isomorphism.GraphMatcher(copy_graph,
                                                     pattern_graph)
    return next(matcher.isomorphisms_iter(), None)


def verify_f_cycle(g, f, cert, constraint=None):
    """
    Check that ``cert`` is a spanning F-cycle of ``g``.

    Besides the K_r-cycle conditions (with F-copies in place of cliques)
    the copies must be pairwise edge disjoint and, when ``constraint`` is
    given, every connector must be admissible for both incident copies.

    Parameters
    ----------
    g : Graph
    f : krcycles.patterns.PatternGraph
    cert : FCycleCert
    constraint : krcycles.patterns.ConnectorConstraint, optional

    Returns
    -------
    VerifyResult
    """
    m = cert.m
    if m < 3:
        return VerifyResult.reject(Violation.BAD_M, None, f'm={m} is below 3')
    for i, copy in enumerate(cert.copies):
        vertices = itertools.chain(copy.vertices, *copy.edges)
        if any(not 0 <= v < g.n for v in vertices):
            return VerifyResult.reject(Violation.RANGE, i,
                                       f'copy {i} leaves 0..{g.n - 1}')
    for i, copy in enumerate(cert.copies):
        spanned = {v for edge in copy.edges for v in edge}
        if (len(copy.vertices) != f.n or len(set(copy.vertices)) != f.n
                or len(set(map(frozenset, copy.edges))) != len(f.edges)
                or not spanned <= set(copy.vertices)):
            return VerifyResult.reject(
                Violation.UNIFORMITY, i,
                f'copy {i} does not have the size of {f.name}')
    pattern_graph = f.to_networkx()
    embeddings = []
    for i, copy in enumerate(cert.copies):
        if not all(g.has_edge(u, v) for u, v in copy.edges):
            return VerifyResult.reject(Violation.NOT_COPY, i,
                                       f'copy {i} uses a non-edge of g')
        copy_graph = nx.Graph()
        copy_graph.add_nodes_from(copy.vertices)
        copy_graph.add_edges_from(copy.edges)
        embedding = _embedding(copy_graph, pattern_graph, copy.labels)
        if embedding is None:
            return VerifyResult.reject(Violation.NOT_COPY, i,
                                       f'copy {i} is not isomorphic to '
                                       f'{f.name}')
        embeddings.append(embedding)
    failure = _check_cycle_sets([set(c.vertices) for c in cert.copies],
                                g.n, f.n)
    if failure is not None:
        return failure
    seen = {}
    for i, copy in enumerate(cert.copies):
        for edge in copy.edges:
            key = frozenset(edge)
            if key in seen:
                return VerifyResult.reject(
                    Violation.EDGE_OVERLAP, i,
                    f'edge {edge} in copies {seen[key]} and {i}')
            seen[key] = i
    if constraint is not None:
        for i, copy in enumerate(cert.copies):
            entry = (set(copy.vertices)
                     & set(cert.copies[i - 1].vertices)).pop()
            exit_ = (set(copy.vertices)
                     & set(cert.copies[(i + 1) % m].vertices)).pop()
            labels = embeddings[i]
            if not constraint.allows(f, labels[entry], labels[exit_]):
                return VerifyResult.reject(
                    Violation.BAD_CONNECTOR, i,
                    f'connectors {entry}, {exit_} of copy {i} are not '
                    f'admissible')
    return VerifyResult.accept()


def lift(h_cert):
    """
    Lift a loose Hamilton cycle of a clique hypergraph to a K_r-cycle.

    Every hyperedge becomes the clique on the same vertex set, in order.

    Raises
    ------
    CertificateError
        If the cycle has fewer than three edges.
    """
    if h_cert.m < 3:
        raise CertificateError(f'Can not lift a loose cycle with '
                               f'm={h_cert.m} < 3 edges')
    return KrCycleCert(h_cert.r, h_cert.edges)
