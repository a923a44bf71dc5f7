import logging

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from krcycles.core import Graph, Hypergraph, KrCycleCert, LooseHCCert

logger = logging.getLogger(__name__)

# The configuration isolation fixture below is function scoped and autouse
settings.register_profile(
    'krcycles', deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile('krcycles')

# Three triangles joined in a ring at vertices 2, 4 and 0
RING = [(0, 1, 2), (2, 3, 4), (4, 5, 0)]


@st.composite
def cycle_orderings(draw, min_m=3, max_m=7, rs=(3, 4, 5)):
    """``(r, ordering)`` describing a loose cycle on a shuffled vertex set."""
    r = draw(st.sampled_from(rs))
    m = draw(st.integers(min_value=min_m, max_value=max_m))
    ordering = draw(st.permutations(list(range((r - 1) * m))))
    return r, tuple(ordering)


def windows(ordering, r):
    """Per edge of the loose cycle cut from ``ordering``: the entry
    connector, the interior vertices and the exit connector."""
    n = len(ordering)
    out = []
    for i in range(n // (r - 1)):
        start = i * (r - 1)
        block = [ordering[(start + k) % n] for k in range(r)]
        out.append((block[0], block[1:-1], block[-1]))
    return out


@pytest.fixture(autouse=True)
def isolated_config(monkeypatch, tmp_path):
    # Keep any configuration file of the user out of the tests
    monkeypatch.delenv('KRCYCLES_CFG', raising=False)
    monkeypatch.setenv('XDG_CONFIG_HOME', str(tmp_path / 'config'))


@pytest.fixture(scope='function')
def k6():
    return Graph.complete(6)


@pytest.fixture(scope='function')
def ring_graph():
    return Graph.from_cliques(6, RING)


@pytest.fixture(scope='function')
def ring_hypergraph():
    return Hypergraph(6, 3, RING)


@pytest.fixture(scope='function')
def ring_kr_cert():
    return KrCycleCert(3, RING)


@pytest.fixture(scope='function')
def ring_hc_cert():
    return LooseHCCert.from_ordering(range(6), 3)


@pytest.fixture(scope='function')
def c4_ring():
    """Three 4-cycles joined at 3, 6 and 0, each pair of connectors adjacent
    inside its cycle."""
    return Graph(9, [(0, 1), (1, 2), (2, 3), (3, 0),
                     (3, 4), (4, 5), (5, 6), (6, 3),
                     (6, 7), (7, 8), (8, 0), (0, 6)])


@pytest.fixture(scope='function')
def c4_ring_opposite():
    """Three 4-cycles joined at 2, 5 and 0, each pair of connectors opposite
    inside its cycle."""
    return Graph(9, [(0, 1), (1, 2), (2, 3), (3, 0),
                     (2, 4), (4, 5), (5, 6), (6, 2),
                     (5, 7), (7, 0), (0, 8), (8, 5)])


@pytest.fixture(scope='function')
def krcycles_cfg(tmp_path, monkeypatch):
    cfg_path = tmp_path / 'config' / 'krcycles.cfg'
    cfg_path.parent.mkdir(exist_ok=True)
    cfg_path.write_text("""\
[DEFAULT]
node_limit=5000
time_limit_ms=2000
trials=4
seed=11
timing=false
""")
    return str(cfg_path)


@pytest.fixture(scope='function')
def graph_file(tmp_path):
    path = tmp_path / 'ring.txt'
    path.write_text("""\
# three triangles in a ring
6 9
0 1
0 2
1 2
2 3
2 4
3 4
0 4
0 5
4 5
""")
    return str(path)


@pytest.fixture(scope='function')
def hypergraph_file(tmp_path):
    path = tmp_path / 'ring.hyp'
    path.write_text("""\
6 3 3
0 1 2
2 3 4
0 4 5
""")
    return str(path)
