"""
Small pattern graphs F, their symmetries, and the pattern registry.
"""
import itertools
import logging
import os.path
import re
from dataclasses import dataclass
from fractions import Fraction

import entrypoints
import networkx as nx

from .errors import PatternError

logger = logging.getLogger(__name__)

KRCYCLES_ENTRY_POINT_KEY = 'krcycles.patterns'

#: Largest pattern the brute-force routines accept
MAX_PATTERN_VERTICES = 8


class PatternGraph:
    """
    A small labelled graph F on the vertices ``0..n-1``.

    Parameters
    ----------
    n : int
        Number of vertices, at least two.
    edges : iterable of pairs
    name : str, optional
        Short display name, such as ``K4`` or ``C4``.

    Attributes
    ----------
    origin : tuple
        Vertices of the parent pattern this one was induced from, if any.

    Raises
    ------
    PatternError
        If ``n < 2`` or an edge is a loop or out of range.
    """

    def __init__(self, n, edges, name=None):
        if n < 2:
            raise PatternError(f'A pattern needs at least two vertices, '
                               f'got {n}')
        canonical = set()
        for u, v in edges:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise PatternError(f'Invalid pattern edge ({u}, {v}) for '
                                   f'n={n}')
            canonical.add((min(u, v), max(u, v)))
        self.n = n
        self.edges = tuple(sorted(canonical))
        self.name = name or f'F{n}.{len(self.edges)}'
        self.origin = tuple(range(n))
        self._automorphisms = None

    @classmethod
    def complete(cls, r):
        return cls(r, itertools.combinations(range(r), 2), name=f'K{r}')

    @classmethod
    def cycle(cls, k):
        return cls(k, [(i, (i + 1) % k) for i in range(k)], name=f'C{k}')

    @classmethod
    def path(cls, k):
        """Path on ``k`` vertices."""
        return cls(k, [(i, i + 1) for i in range(k - 1)], name=f'P{k}')

    @classmethod
    def star(cls, k):
        """Star on ``k`` vertices centred at 0."""
        return cls(k, [(0, i) for i in range(1, k)], name=f'S{k}')

    @classmethod
    def from_name(cls, name):
        """
        Build a pattern from its short name.

        Understood names are ``K<r>``, ``K<r>-e`` (one edge removed),
        ``C<k>``, ``P<k>`` (path on k vertices) and ``S<k>`` (star on k
        vertices).
        """
        match = re.fullmatch(r'([KCPS])(\d+)(-e)?', name.strip())
        if match is None:
            raise PatternError(f'Unknown pattern name {name!r}')
        family, size, minus = match.group(1), int(match.group(2)), \
            match.group(3)
        if family == 'K':
            pattern = cls.complete(size)
            if minus:
                pattern = cls(size, pattern.edges[1:], name=f'K{size}-e')
            return pattern
        if minus:
            raise PatternError(f'Unknown pattern name {name!r}')
        if family == 'C':
            if size < 3:
                raise PatternError('A cycle needs at least three vertices')
            return cls.cycle(size)
        if family == 'S':
            return cls.star(size)
        return cls.path(size)

    @classmethod
    def from_graph(cls, graph, name=None):
        """Pattern with the same vertices and edges as a :class:`Graph`."""
        return cls(graph.n, graph.edges, name=name)

    @property
    def num_edges(self):
        return len(self.edges)

    @property
    def d1(self):
        """The 1-density ``|E(F)| / (|V(F)| - 1)`` as an exact rational."""
        return Fraction(len(self.edges), self.n - 1)

    @property
    def is_complete(self):
        return len(self.edges) == self.n * (self.n - 1) // 2

    def degree(self, v):
        return sum(v in edge for edge in self.edges)

    def is_connected(self):
        return nx.is_connected(self.to_networkx())

    def has_edge(self, u, v):
        return (min(u, v), max(u, v)) in self.edges

    def induced(self, vertices):
        """The subgraph induced on ``vertices``, relabelled ``0..k-1``."""
        vertices = tuple(sorted(vertices))
        index = {v: i for i, v in enumerate(vertices)}
        sub = PatternGraph(
            len(vertices),
            [(index[u], index[v]) for u, v in self.edges
             if u in index and v in index],
            name=f'{self.name}[{",".join(map(str, vertices))}]')
        sub.origin = tuple(self.origin[v] for v in vertices)
        return sub

    def to_networkx(self):
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph

    def validate(self, min_vertices=2):
        """
        Check the pattern can drive copy enumeration and cycle searches.

        Raises
        ------
        PatternError
            If the pattern is too small, too large, or disconnected.
        """
        if self.n < min_vertices:
            raise PatternError(f'{self.name} needs at least {min_vertices} '
                               f'vertices')
        if self.n > MAX_PATTERN_VERTICES:
            raise PatternError(f'{self.name} has {self.n} vertices, more '
                               f'than {MAX_PATTERN_VERTICES}')
        if not self.is_connected():
            raise PatternError(f'{self.name} is disconnected')

    def automorphisms(self):
        """All automorphisms of the pattern as ``{vertex: image}`` dicts."""
        if self._automorphisms is None:
            graph = self.to_networkx()
            matcher = nx.algorithms.isomorphism.GraphMatcher(graph, graph)
            self._automorphisms = tuple(matcher.isomorphisms_iter())
            logger.debug('%s has %d automorphisms', self.name,
                         len(self._automorphisms))
        return self._automorphisms

    def vertex_orbits(self):
        """Orbits of ``Aut(F)`` on vertices, ordered by smallest member."""
        orbits = {frozenset(a[v] for a in self.automorphisms())
                  for v in range(self.n)}
        return tuple(sorted(orbits, key=min))

    def orbit_of(self, v):
        """Index into :meth:`vertex_orbits` of the orbit holding ``v``."""
        for index, orbit in enumerate(self.vertex_orbits()):
            if v in orbit:
                return index
        raise PatternError(f'{v} is not a vertex of {self.name}')

    def pair_orbits(self):
        """
        Orbits of ``Aut(F)`` on unordered pairs of distinct vertices.

        Each orbit is a frozenset of 2-element frozensets; orbits are ordered
        by their smallest pair.
        """
        orbits = {
            frozenset(frozenset((a[u], a[v])) for a in self.automorphisms())
            for u, v in itertools.combinations(range(self.n), 2)
        }
        return tuple(sorted(orbits,
                            key=lambda orbit: min(tuple(sorted(p))
                                                  for p in orbit)))

    def pair_orbit_of(self, u, v):
        """Index into :meth:`pair_orbits` of the orbit holding ``{u, v}``."""
        pair = frozenset((u, v))
        for index, orbit in enumerate(self.pair_orbits()):
            if pair in orbit:
                return index
        raise PatternError(f'{{{u}, {v}}} is not a vertex pair of '
                           f'{self.name}')

    def __eq__(self, other):
        return (isinstance(other, PatternGraph) and self.n == other.n
                and self.edges == other.edges)

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return (f'{self.__class__.__name__}({self.name}, n={self.n}, '
                f'e={len(self.edges)})')


@dataclass(frozen=True)
class ConnectorConstraint:
    """
    Admissible positions of the connectors inside each copy of F.

    Both connectors of a copy (the vertex shared with the previous copy and
    the one shared with the next) are mapped back into F. With
    ``vertex_orbits`` set, each must lie in one of the listed vertex orbits;
    with ``pair_orbits`` set, the unordered pair of them must lie in one of
    the listed pair orbits.

    Attributes
    ----------
    vertex_orbits : frozenset of int, optional
        Indices into :meth:`PatternGraph.vertex_orbits`.
    pair_orbits : frozenset of int, optional
        Indices into :meth:`PatternGraph.pair_orbits`.
    """
    vertex_orbits: frozenset = None
    pair_orbits: frozenset = None

    @classmethod
    def opposite(cls, f, degree=None):
        """
        Connectors must be non-adjacent inside their copy, optionally also
        restricted to vertices of the given degree.
        """
        pairs = frozenset(
            index for index, orbit in enumerate(f.pair_orbits())
            if not f.has_edge(*tuple(next(iter(orbit))))
        )
        vertices = None
        if degree is not None:
            vertices = frozenset(
                index for index, orbit in enumerate(f.vertex_orbits())
                if f.degree(min(orbit)) == degree
            )
        return cls(vertex_orbits=vertices, pair_orbits=pairs)

    def allows(self, f, u, v):
        """Whether pattern vertices ``u`` and ``v`` may both be connectors."""
        if u == v:
            return False
        if self.vertex_orbits is not None and not (
                f.orbit_of(u) in self.vertex_orbits
                and f.orbit_of(v) in self.vertex_orbits):
            return False
        if (self.pair_orbits is not None
                and f.pair_orbit_of(u, v) not in self.pair_orbits):
            return False
        return True

    def describe(self):
        parts = []
        if self.vertex_orbits is not None:
            parts.append(f'vertex orbits {sorted(self.vertex_orbits)}')
        if self.pair_orbits is not None:
            parts.append(f'pair orbits {sorted(self.pair_orbits)}')
        return ', '.join(parts) or 'unconstrained'


DEFAULT_PATTERNS = {
    'K3': lambda: PatternGraph.complete(3),
    'K4': lambda: PatternGraph.complete(4),
    'K4-e': lambda: PatternGraph.from_name('K4-e'),
    'C4': lambda: PatternGraph.cycle(4),
    'P3': lambda: PatternGraph.path(3),
}


class PatternRegistry:
    """
    Named patterns, including those contributed by other packages.

    Packages register patterns under the ``krcycles.patterns`` entry point
    group; each entry point must resolve to a :class:`PatternGraph` or a
    zero-argument callable returning one.
    """
    __instance = None

    def __init__(self):
        if self.__initialized:
            return
        self._registry = {}
        self.load()
        self.__initialized = True

    def __new__(cls, *args, **kwargs):
        if cls.__instance is None:
            cls.__instance = object.__new__(PatternRegistry)
            cls.__instance.__initialized = False
        return cls.__instance

    def __getitem__(self, item):
        if item not in self._registry:
            self.load()
        factory = self._registry.get(item)
        if factory is None:
            raise KeyError(item)
        return factory()

    def __contains__(self, item):
        if item not in self._registry:
            self.load()
        return item in self._registry

    def names(self):
        return sorted(self._registry)

    def _safe_add(self, entry_name, factory):
        """
        Add an entry into the registry.

        Raises
        ------
        RuntimeError
            If the entry name is already taken.
        """
        if entry_name in self._registry:
            raise RuntimeError(f'Duplicated pattern entry found for key: '
                               f'{entry_name}')
        self._registry[entry_name] = factory

    def load(self):
        """
        Load entries into the Registry.
        """
        self._registry = dict(DEFAULT_PATTERNS)
        for entry in entrypoints.get_group_all(KRCYCLES_ENTRY_POINT_KEY):
            try:
                obj = entry.load()
            except Exception:
                logger.exception('Failed to load krcycles.patterns entry: %s',
                                 entry)
                continue
            if isinstance(obj, PatternGraph):
                self._safe_add(entry.name, lambda obj=obj: obj)
            elif callable(obj):
                self._safe_add(entry.name, obj)
            else:
                logger.warning('Ignoring krcycles.patterns entry %s: not a '
                               'pattern', entry.name)


registry = PatternRegistry()


def resolve_pattern(spec):
    """
    Turn a pattern argument into a :class:`PatternGraph`.

    ``spec`` may be a path to a graph file, a registered pattern name, or a
    name understood by :meth:`PatternGraph.from_name`.
    """
    if isinstance(spec, PatternGraph):
        return spec
    if os.path.exists(os.path.expanduser(spec)):
        from .formats import load_graph
        name = os.path.splitext(os.path.basename(spec))[0]
        return PatternGraph.from_graph(load_graph(spec), name=name)
    if spec in registry:
        return registry[spec]
    return PatternGraph.from_name(spec)
