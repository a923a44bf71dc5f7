"""
Basic module utilities
"""
import logging
import math

logger = logging.getLogger(__name__)


def popcount(mask):
    """Number of set bits in a non-negative integer bitset."""
    return bin(mask).count('1')


def iter_bits(mask):
    """Yield the indices of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices):
    """Bitset with the bits of ``vertices`` set."""
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def from_mask(mask):
    """Sorted tuple of the vertices in ``mask``."""
    return tuple(iter_bits(mask))


def colex_rank(subset):
    """
    Colexicographic rank of a sorted set of non-negative integers.

    The rank of ``c_1 < c_2 < ... < c_r`` is ``sum(C(c_i, i))``, which maps
    the r-subsets of ``{0..n-1}`` onto ``0..C(n, r)-1``.
    """
    return sum(math.comb(c, i) for i, c in enumerate(subset, start=1))


def clamp_probability(value, what='probability'):
    """
    Clamp a value produced by a threshold formula to ``[0, 1]``.

    Returns
    -------
    value, clamped : float, bool
    """
    if value > 1.0:
        logger.warning('Clamping %s %.6g to 1', what, value)
        return 1.0, True
    if value < 0.0:
        logger.warning('Clamping %s %.6g to 0', what, value)
        return 0.0, True
    return float(value), False


def is_number(str_value):
    """
    Checks if it is a valid float number
    """
    try:
        float(str_value)
        return True
    except ValueError:
        return False


def parse_list(str_value, kind=float):
    """
    Parse a comma separated list of numbers.

    Ex:
        24
        0.25,0.5,1
        12,18
    """
    items = [item.strip() for item in str_value.split(',') if item.strip()]
    if not items or not all(is_number(item) for item in items):
        raise ValueError(f'{str_value!r} is not a comma separated list of '
                         f'numbers')
    if kind is int:
        values = [float(item) for item in items]
        if any(not v.is_integer() for v in values):
            raise ValueError(f'{str_value!r} contains non-integer values')
        return [int(v) for v in values]
    return [kind(item) for item in items]


def binomial(n, k):
    """``C(n, k)`` as an integer, zero outside the usual range."""
    return math.comb(n, k) if 0 <= k <= n else 0
