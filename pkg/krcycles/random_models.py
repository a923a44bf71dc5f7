"""
Seeded, coupled samplers for ``G(n, p)`` and ``H(n, pi; r)``.

Every potential edge (a vertex pair or an r-set) gets a slot index and a
weight in ``[0, 1)`` computed from ``(seed, slot)`` alone by one splitmix64
step. An edge is present at probability ``p`` exactly when its weight is
below ``p``, so for a fixed seed the sampled graphs grow monotonically with
``p``. The generator is bit-exact across platforms and implementations.
"""
import itertools
import logging
import math
from dataclasses import dataclass

from .balance import kr_threshold, loose_hc_threshold_pi
from .core import Graph, Hypergraph
from .formats import load_json, store_json
from .utils import binomial, clamp_probability, colex_rank

logger = logging.getLogger(__name__)

GAMMA = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1

PAIR_WEIGHTS = 'pair'
RSET_WEIGHTS = 'r-set'


def splitmix64(state):
    """
    One splitmix64 step.

    Returns
    -------
    state, output : int, int
        The advanced state and the 64-bit output.
    """
    state = (state + GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def weight_bits(seed, slot):
    """The 53 high bits of the splitmix64 output for ``(seed, slot)``."""
    return splitmix64((seed + slot * GAMMA) & MASK64)[1] >> 11


def weight(seed, slot):
    """The weight of ``slot`` under ``seed``, a dyadic rational in [0, 1)."""
    return math.ldexp(weight_bits(seed, slot), -53)


def derive_seed(base_seed, counter):
    """A 64-bit seed derived from ``base_seed`` for the given counter."""
    return splitmix64((base_seed + counter * GAMMA) & MASK64)[1]


def pair_index(i, j, n):
    """
    Slot of the pair ``{i, j}``, ``i < j``, among the ``C(n, 2)`` pairs.

    Raises
    ------
    ValueError
        Unless ``0 <= i < j < n``.
    """
    if not 0 <= i < j < n:
        raise ValueError(f'({i}, {j}) is not a pair i < j of 0..{n - 1}')
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def _threshold_bits(p):
    """Weights below ``p`` are exactly those with fewer bits than this."""
    return p * 2.0 ** 53


class WeightAssignment:
    """
    Implicit weights for every slot of a random graph or hypergraph.

    Parameters
    ----------
    n : int
        Number of vertices.
    seed : int
        64-bit seed.
    kind : {'pair', 'r-set'}, optional
        Whether slots are vertex pairs or r-sets.
    r : int, optional
        Uniformity for r-set weights.
    """

    def __init__(self, n, seed, kind=PAIR_WEIGHTS, r=2):
        if kind not in (PAIR_WEIGHTS, RSET_WEIGHTS):
            raise ValueError(f'Unknown weight kind {kind!r}')
        if kind == RSET_WEIGHTS and r < 3:
            raise ValueError(f'r-set weights need r >= 3, got {r}')
        self.n = n
        self.seed = seed & MASK64
        self.kind = kind
        self.r = 2 if kind == PAIR_WEIGHTS else r
        self._bits = None

    @classmethod
    def for_graph(cls, n, seed):
        return cls(n, seed, kind=PAIR_WEIGHTS)

    @classmethod
    def for_hypergraph(cls, n, r, seed):
        return cls(n, seed, kind=RSET_WEIGHTS, r=r)

    @property
    def slots(self):
        return binomial(self.n, self.r)

    def weight(self, slot):
        return weight(self.seed, slot)

    def bits(self):
        """Tuple of the weight bits of every slot, computed once."""
        if self._bits is None:
            self._bits = tuple(weight_bits(self.seed, slot)
                               for slot in range(self.slots))
        return self._bits

    def __repr__(self):
        return (f'{self.__class__.__name__}(n={self.n}, kind={self.kind!r}, '
                f'r={self.r}, seed={self.seed})')


def graph_at(w, p):
    """
    The graph of all pairs whose weight is below ``p``.

    Raises
    ------
    ValueError
        If ``w`` holds r-set weights.
    """
    if w.kind != PAIR_WEIGHTS:
        raise ValueError('graph_at needs pair weights')
    limit = _threshold_bits(p)
    bits = w.bits()
    adj = [0] * w.n
    slot = 0
    for i in range(w.n):
        for j in range(i + 1, w.n):
            if bits[slot] < limit:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            slot += 1
    return Graph.from_adjacency(adj)


def hypergraph_at(w, pi, r=None):
    """
    The r-uniform hypergraph of all r-sets whose weight is below ``pi``.

    The slot of an r-set is its colexicographic rank.
    """
    if w.kind != RSET_WEIGHTS:
        raise ValueError('hypergraph_at needs r-set weights')
    if r is not None and r != w.r:
        raise ValueError(f'Weights were drawn for r={w.r}, not r={r}')
    limit = _threshold_bits(pi)
    bits = w.bits()
    edges = [edge for edge in itertools.combinations(range(w.n), w.r)
             if bits[colex_rank(edge)] < limit]
    return Hypergraph(w.n, w.r, edges)


@dataclass(frozen=True)
class ModelParams:
    """
    Probabilities for one experiment point.

    ``p`` is ``omega`` times the K_r-cycle threshold and ``pi`` is the loose
    Hamilton cycle probability at the same ``omega``, each clamped to
    ``[0, 1]`` with a flag recording the clamp.
    """
    n: int
    r: int
    omega: float
    p: float
    pi: float
    p_clamped: bool = False
    pi_clamped: bool = False

    @classmethod
    def at_threshold(cls, n, r, omega):
        base = kr_threshold(n, r)
        p, p_clamped = clamp_probability(omega * base.raw, what='p')
        pi, pi_clamped = clamp_probability(
            loose_hc_threshold_pi(n, r, omega, clamp=False), what='pi')
        return cls(n=n, r=r, omega=omega, p=p, pi=pi,
                   p_clamped=p_clamped, pi_clamped=pi_clamped)


def golden_weights(seed, count=16):
    """The first ``count`` weights of ``seed`` as ``float.hex`` strings."""
    return [weight(seed, slot).hex() for slot in range(count)]


def write_golden(path, seeds, count=16):
    """Store the golden weight file, mapping each seed to its weights."""
    doc = {str(seed): golden_weights(seed, count) for seed in seeds}
    store_json(doc, path)
    logger.info('Wrote golden weights for %d seeds to %s', len(doc), path)
    return doc


def read_golden(path):
    """Load a golden weight file as ``{seed: [weight, ...]}``."""
    return {int(seed): [float.fromhex(value) for value in values]
            for seed, values in load_json(path).items()}


def check_golden(path):
    """
    Compare a golden weight file with freshly computed weights.

    Returns
    -------
    mismatches : list of (seed, slot, expected, found)
    """
    mismatches = []
    for seed, expected in load_json(path).items():
        for slot, value in enumerate(expected):
            found = weight(int(seed), slot)
            if float.fromhex(value) != found:
                mismatches.append((int(seed), slot, value, found.hex()))
    if mismatches:
        logger.warning('%d golden weights differ', len(mismatches))
    return mismatches
