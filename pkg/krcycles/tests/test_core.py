import itertools

import pytest
from hypothesis import given, settings

from krcycles.cliques import clique_hypergraph
from krcycles.core import FCopy, FCycleCert, Graph, Hypergraph, \
    KrCycleCert, LooseHCCert, Violation, lift, verify_f_cycle, \
    verify_kr_cycle, verify_loose_hc
from krcycles.errors import CertificateError, GraphError
from krcycles.patterns import ConnectorConstraint, PatternGraph

from .conftest import RING, cycle_orderings, windows


def test_graph_is_symmetric():
    g = Graph(4, [(0, 1), (2, 1)])
    assert g.has_edge(1, 0)
    assert g.has_edge(1, 2)
    assert not g.has_edge(0, 2)
    assert g.edges == ((0, 1), (1, 2))
    assert g.degree(1) == 2


def test_graph_collapses_repeated_edges():
    assert Graph(3, [(0, 1), (1, 0)]).num_edges == 1


@pytest.mark.parametrize('edges', [[(1, 1)], [(0, 3)], [(-1, 2)]])
def test_graph_rejects_bad_edges(edges):
    with pytest.raises(GraphError):
        Graph(3, edges)


def test_graph_needs_a_vertex():
    with pytest.raises(GraphError):
        Graph(0)


def test_complete_graph():
    g = Graph.complete(5)
    assert g.num_edges == 10
    assert g.is_clique(range(5))
    assert g == Graph(5, itertools.combinations(range(5), 2))


def test_hypergraph_canonical_edges():
    h = Hypergraph(4, 3, [(2, 1, 0), (0, 1, 2), (1, 3, 2)])
    assert h.edges == ((0, 1, 2), (1, 2, 3))
    assert (2, 0, 1) in h
    assert len(h) == 2


@pytest.mark.parametrize('r, edges', [(2, []), (3, [(0, 1)]),
                                      (3, [(0, 0, 1)]), (3, [(0, 1, 4)])])
def test_hypergraph_rejects_bad_edges(r, edges):
    with pytest.raises(GraphError):
        Hypergraph(4, r, edges)


def test_verify_kr_cycle_ring(k6, ring_kr_cert):
    assert verify_kr_cycle(k6, ring_kr_cert)


def test_verify_kr_cycle_missing_edge(ring_kr_cert):
    g = Graph(6, [e for e in Graph.complete(6).edges if e != (0, 1)])
    result = verify_kr_cycle(g, ring_kr_cert)
    assert result.violation == Violation.NON_CLIQUE
    assert result.index == 0


def test_verify_kr_cycle_rotated_connectors(k6):
    # H_3 shares 1 with H_1 rather than 0; still a valid cycle
    cert = KrCycleCert(3, [(0, 1, 2), (2, 3, 4), (4, 5, 1)])
    assert verify_kr_cycle(k6, cert)
    assert cert.connectors() == (2, 4, 1)


@pytest.mark.parametrize('n, cliques, violation, index', [
    (6, [(0, 1, 2), (2, 3, 4)], Violation.BAD_M, None),
    (6, [(0, 1, 2), (2, 3, 4), (4, 5, 7)], Violation.RANGE, 2),
    (6, [(0, 1, 2), (2, 3), (3, 4, 0)], Violation.UNIFORMITY, 1),
    (6, [(0, 1, 2), (1, 2, 3), (3, 4, 0)], Violation.BAD_OVERLAP, 0),
    (8, [(0, 1, 2), (2, 3, 4), (4, 5, 1), (5, 6, 0)],
     Violation.BAD_DISJOINTNESS, 0),
    (7, RING, Violation.NOT_SPANNING, None),
])
def test_verify_kr_cycle_violations(n, cliques, violation, index):
    result = verify_kr_cycle(Graph.complete(n), KrCycleCert(3, cliques))
    assert not result
    assert result.violation == violation
    assert result.index == index


def test_verify_loose_hc_ring(ring_hypergraph, ring_hc_cert):
    assert ring_hc_cert.edges == ((0, 1, 2), (2, 3, 4), (0, 4, 5))
    assert verify_loose_hc(ring_hypergraph, ring_hc_cert)
    assert verify_loose_hc(Hypergraph.complete(6, 3), ring_hc_cert)


def test_verify_loose_hc_bad_overlap():
    cert = LooseHCCert(range(6), [(0, 1, 2), (1, 2, 3), (3, 4, 5)])
    result = verify_loose_hc(Hypergraph.complete(6, 3), cert)
    assert result.violation == Violation.BAD_OVERLAP
    assert result.index == 0


def test_verify_loose_hc_non_edge(ring_hc_cert):
    h = Hypergraph(6, 3, [(0, 1, 2), (0, 4, 5)])
    result = verify_loose_hc(h, ring_hc_cert)
    assert result.violation == Violation.NON_EDGE
    assert result.index == 1


@pytest.mark.parametrize('ordering, index', [((0, 2, 1, 3, 4, 5), 1),
                                             ((0, 1, 2, 3, 4, 4), None)])
def test_verify_loose_hc_not_consecutive(ordering, index):
    cert = LooseHCCert(ordering, RING)
    result = verify_loose_hc(Hypergraph.complete(6, 3), cert)
    assert result.violation == Violation.NOT_CONSECUTIVE
    assert result.index == index


def test_verify_loose_hc_bad_m():
    cert = LooseHCCert((0, 1, 2, 3), [(0, 1, 2), (2, 3, 0)])
    result = verify_loose_hc(Hypergraph.complete(4, 3), cert)
    assert result.violation == Violation.BAD_M


def test_loose_hc_from_edges():
    cert = LooseHCCert.from_edges(RING)
    assert cert.ordering == (0, 1, 2, 3, 4, 5)
    assert cert == LooseHCCert.from_ordering(range(6), 3)


def test_lift_ring(ring_hc_cert, ring_kr_cert):
    assert lift(ring_hc_cert) == ring_kr_cert


def test_lift_rejects_two_edges():
    with pytest.raises(CertificateError):
        lift(LooseHCCert((0, 1, 2, 3), [(0, 1, 2), (2, 3, 0)]))


@settings(max_examples=50, deadline=None)
@given(cycle_orderings())
def test_lift_round_trip(case):
    r, ordering = case
    h_cert = LooseHCCert.from_ordering(ordering, r)
    g = Graph.from_cliques(len(ordering), h_cert.edges)
    assert verify_loose_hc(clique_hypergraph(g, r), h_cert)
    kr_cert = lift(h_cert)
    assert verify_kr_cycle(g, kr_cert)
    # Accepted cycles are edge disjoint
    edge_sets = [set(itertools.combinations(c, 2)) for c in kr_cert.cliques]
    for a, b in itertools.combinations(edge_sets, 2):
        assert not a & b


def _swap_vertex(blocks, parts):
    """Replace an interior vertex of block 0 by one of block 2."""
    x, y = parts[0][1][0], parts[2][1][0]
    mutated = list(blocks)
    mutated[0] = [y if v == x else v for v in blocks[0]]
    return mutated


def _break_overlap(blocks, parts):
    """Replace an interior vertex of block 1 by one of block 0."""
    u, w = parts[1][1][0], parts[0][1][0]
    mutated = list(blocks)
    mutated[1] = [w if v == u else v for v in blocks[1]]
    return mutated


@settings(max_examples=50, deadline=None)
@given(cycle_orderings(min_m=4))
def test_kr_cycle_mutations_are_rejected(case):
    r, ordering = case
    n = len(ordering)
    parts = windows(ordering, r)
    cliques = [[entry, *interior, exit_] for entry, interior, exit_ in parts]
    witness = Graph.from_cliques(n, cliques)
    complete = Graph.complete(n)
    assert verify_kr_cycle(witness, KrCycleCert(r, cliques))

    swapped = KrCycleCert(r, _swap_vertex(cliques, parts))
    assert verify_kr_cycle(witness, swapped).violation == \
        Violation.NON_CLIQUE
    assert verify_kr_cycle(complete, swapped).violation == \
        Violation.BAD_DISJOINTNESS

    dropped = KrCycleCert(r, cliques[:1] + cliques[2:])
    result = verify_kr_cycle(complete, dropped)
    assert result.violation == Violation.BAD_OVERLAP
    assert result.index == 0

    broken = KrCycleCert(r, _break_overlap(cliques, parts))
    result = verify_kr_cycle(witness, broken)
    assert (result.violation, result.index) == (Violation.NON_CLIQUE, 1)
    result = verify_kr_cycle(complete, broken)
    assert (result.violation, result.index) == (Violation.BAD_OVERLAP, 0)


@settings(max_examples=50, deadline=None)
@given(cycle_orderings(min_m=4))
def test_loose_hc_mutations_are_rejected(case):
    r, ordering = case
    n = len(ordering)
    parts = windows(ordering, r)
    edges = [[entry, *interior, exit_] for entry, interior, exit_ in parts]
    witness = Hypergraph(n, r, edges)
    complete = Hypergraph.complete(n, r)
    assert verify_loose_hc(witness, LooseHCCert(ordering, edges))

    swapped = LooseHCCert(ordering, _swap_vertex(edges, parts))
    result = verify_loose_hc(witness, swapped)
    assert (result.violation, result.index) == (Violation.NON_EDGE, 0)
    assert verify_loose_hc(complete, swapped).violation == \
        Violation.BAD_DISJOINTNESS

    dropped = LooseHCCert(ordering, edges[:1] + edges[2:])
    assert verify_loose_hc(complete, dropped).violation == \
        Violation.BAD_OVERLAP

    broken = LooseHCCert(ordering, _break_overlap(edges, parts))
    result = verify_loose_hc(witness, broken)
    assert (result.violation, result.index) == (Violation.NON_EDGE, 1)
    assert verify_loose_hc(complete, broken).violation == \
        Violation.BAD_OVERLAP


def test_drop_from_three_cliques(k6):
    cert = KrCycleCert(3, RING[:1] + RING[2:])
    assert verify_kr_cycle(k6, cert).violation == Violation.BAD_M


def _c4_copies(cycles):
    f = PatternGraph.cycle(4)
    copies = []
    for cycle in cycles:
        edges = tuple(sorted(tuple(sorted((cycle[i], cycle[(i + 1) % 4])))
                             for i in range(4)))
        labels = tuple(sorted((v, i) for i, v in enumerate(cycle)))
        copies.append(FCopy(tuple(sorted(cycle)), edges, labels))
    return f, FCycleCert(copies)


def test_verify_f_cycle(c4_ring, c4_ring_opposite):
    f, cert = _c4_copies([(0, 1, 2, 3), (3, 4, 5, 6), (6, 7, 8, 0)])
    assert verify_f_cycle(c4_ring, f, cert)
    opposite = ConnectorConstraint.opposite(f)
    result = verify_f_cycle(c4_ring, f, cert, opposite)
    assert result.violation == Violation.BAD_CONNECTOR
    f, cert = _c4_copies([(0, 1, 2, 3), (2, 4, 5, 6), (5, 7, 0, 8)])
    assert verify_f_cycle(c4_ring_opposite, f, cert, opposite)


def test_verify_f_cycle_not_copy(c4_ring):
    f, cert = _c4_copies([(0, 1, 2, 3), (3, 4, 5, 6), (6, 7, 8, 0)])
    # The triangle 0-3-6 carries no 4-cycle
    bad = FCopy((0, 1, 3, 6), ((0, 1), (0, 3), (0, 6), (3, 6)))
    cert = FCycleCert([bad] + list(cert.copies[1:]))
    result = verify_f_cycle(c4_ring, f, cert)
    assert (result.violation, result.index) == (Violation.NOT_COPY, 0)


def test_verify_f_cycle_of_paths():
    f = PatternGraph.path(3)
    g = Graph.complete(6)
    copies = [FCopy((0, 1, 2), ((0, 1), (1, 2))),
              FCopy((2, 3, 4), ((2, 3), (3, 4))),
              FCopy((0, 4, 5), ((0, 5), (4, 5)))]
    assert verify_f_cycle(g, f, FCycleCert(copies))
    # An edge leaving the vertex set of its copy
    copies[1] = FCopy((2, 3, 4), ((1, 2), (3, 4)))
    result = verify_f_cycle(g, f, FCycleCert(copies))
    assert (result.violation, result.index) == (Violation.UNIFORMITY, 1)
