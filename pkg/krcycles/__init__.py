__all__ = ['Graph', 'Hypergraph', 'KrCycleCert', 'LooseHCCert', 'FCopy',
           'FCycleCert', 'Violation', 'VerifyResult', 'verify_kr_cycle',
           'verify_loose_hc', 'verify_f_cycle', 'lift', 'WeightAssignment',
           'graph_at', 'hypergraph_at', 'enumerate_cliques',
           'clique_hypergraph', 'uncovered_vertices', 'enumerate_f_copies',
           'PatternGraph', 'ConnectorConstraint', 'SearchBudget',
           'SearchOutcome', 'find_loose_hc', 'brute_force_loose_hc',
           'find_spanning_kr_cycle', 'find_f_cycle', 'SweepConfig',
           'run_sweep', 'summarize']
from ._version import __version__  # noqa: F401
from .cliques import clique_hypergraph, enumerate_cliques, \
    enumerate_f_copies, uncovered_vertices
from .core import FCopy, FCycleCert, Graph, Hypergraph, KrCycleCert, \
    LooseHCCert, VerifyResult, Violation, lift, verify_f_cycle, \
    verify_kr_cycle, verify_loose_hc
from .patterns import ConnectorConstraint, PatternGraph
from .random_models import WeightAssignment, graph_at, hypergraph_at
from .solver import SearchBudget, SearchOutcome, brute_force_loose_hc, \
    find_f_cycle, find_loose_hc, find_spanning_kr_cycle
from .sweep import SweepConfig, run_sweep, summarize
