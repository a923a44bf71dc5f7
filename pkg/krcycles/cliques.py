"""
Copies of K_r and of small patterns F inside a graph.
"""
import logging

import networkx as nx

from .core import FCopy, Hypergraph
from .utils import iter_bits, popcount

logger = logging.getLogger(__name__)


def _extend(adj, clique, candidates, size, out):
    """Append every size-``size`` clique extending ``clique`` from
    ``candidates`` (all larger than the members of ``clique``)."""
    need = size - len(clique)
    if need == 0:
        out.append(tuple(clique))
        return
    if popcount(candidates) < need:
        return
    for v in iter_bits(candidates):
        higher = candidates >> (v + 1) << (v + 1)
        clique.append(v)
        _extend(adj, clique, higher & adj[v], size, out)
        clique.pop()


def _has_clique(adj, candidates, size):
    """Whether ``candidates`` contains a clique on ``size`` vertices."""
    if size == 0:
        return True
    if popcount(candidates) < size:
        return False
    for v in iter_bits(candidates):
        higher = candidates >> (v + 1) << (v + 1)
        if _has_clique(adj, higher & adj[v], size - 1):
            return True
    return False


def enumerate_cliques(g, r):
    """
    All vertex sets of size ``r`` inducing complete subgraphs of ``g``.

    Cliques are grown in increasing vertex order by intersecting
    neighbourhood bitsets, so the output comes out lexicographically sorted.

    Returns
    -------
    list of tuple
    """
    if r < 1:
        raise ValueError(f'r must be positive, got {r}')
    out = []
    if r > g.n:
        return out
    adj = g.adj
    for v in range(g.n):
        higher = adj[v] >> (v + 1) << (v + 1)
        _extend(adj, [v], higher, r, out)
    logger.debug('Found %d copies of K%d in %r', len(out), r, g)
    return out


def clique_hypergraph(g, r):
    """The r-uniform hypergraph whose edges are the r-cliques of ``g``."""
    return Hypergraph(g.n, r, enumerate_cliques(g, r))


def uncovered_vertices(g, r):
    """
    Vertices of ``g`` lying in no r-clique.

    If any exist, ``g`` has no spanning K_r-cycle.

    Returns
    -------
    frozenset
    """
    if r > g.n:
        return frozenset(range(g.n))
    adj = g.adj
    return frozenset(v for v in range(g.n)
                     if not _has_clique(adj, adj[v], r - 1))


def coverage_counts(g, r):
    """Number of r-cliques of ``g`` through each vertex."""
    counts = [0] * g.n
    for clique in enumerate_cliques(g, r):
        for v in clique:
            counts[v] += 1
    return counts


def enumerate_f_copies(g, f):
    """
    All subgraphs of ``g`` isomorphic to the pattern ``f``.

    Copies are subgraphs, not necessarily induced, and two embeddings with
    the same image edge set count once. Each copy keeps the
    lexicographically smallest of its embeddings as labels.

    Parameters
    ----------
    g : Graph
    f : krcycles.patterns.PatternGraph

    Returns
    -------
    list of FCopy
        Sorted by vertex set, then edge set.

    Raises
    ------
    PatternError
        If ``f`` is disconnected or too large.
    """
    f.validate(min_vertices=2)
    matcher = nx.algorithms.isomorphism.GraphMatcher(g.to_networkx(),
                                                     f.to_networkx())
    copies = {}
    for mapping in matcher.subgraph_monomorphisms_iter():
        inverse = {pv: hv for hv, pv in mapping.items()}
        edges = tuple(sorted(tuple(sorted((inverse[a], inverse[b])))
                             for a, b in f.edges))
        labels = tuple(sorted(mapping.items()))
        known = copies.get(edges)
        if known is None or labels < known:
            copies[edges] = labels
    result = sorted(
        (FCopy(tuple(sorted(dict(labels))), edges, labels)
         for edges, labels in copies.items()),
        key=lambda copy: (copy.vertices, copy.edges),
    )
    logger.debug('Found %d copies of %s in %r', len(result), f.name, g)
    return result
