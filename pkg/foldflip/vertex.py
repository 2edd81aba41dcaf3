'''Single-vertex flat-foldability: closed-form rules for the families the
generators produce, a layer-order oracle for everything else, and exact
counting and sampling of the equal-angle vertex with 2n creases.
'''

import collections
import itertools
import math
from fractions import Fraction

import numpy as np

from foldflip.core import (MOUNTAIN, TOLERANCE, VALLEY, MVAssignment,
                           VertexStar, kawasaki_holds, maekawa_holds)

ORACLE_MAX_DEGREE = 12
ENUMERATE_MAX_N = 10
SQUARE_TWIST_ANGLES = tuple(math.radians(a) for a in (45, 90, 135, 90))

CircularLayerOrder = collections.namedtuple('CircularLayerOrder', ['order'])


def equal_angle_star(n):
    '''The star of the equal-angle vertex with 2n creases.'''
    if n < 1:
        raise ValueError('n must be at least 1')
    return VertexStar(None, tuple(range(2 * n)), (math.pi / n,) * (2 * n))


def _close(a, b):
    return abs(a - b) < TOLERANCE


def _rotation(angles, target):
    '''Return r such that ``angles[r + i] == target[i]`` for every i.'''
    size = len(angles)
    for r in range(size):
        if all(_close(angles[(r + i) % size], t) for i, t in enumerate(target)):
            return r
    return None


def _miura_rotation(angles):
    if len(angles) != 4:
        return None
    for r in range(4):
        theta = angles[r]
        if theta >= math.pi / 2 - TOLERANCE:
            continue
        target = (theta, math.pi - theta, math.pi - theta, theta)
        if all(_close(angles[(r + i) % 4], t) for i, t in enumerate(target)):
            return r
    return None


def _taco_key(tacos, point, side):
    for key in tacos:
        if key[1] == side and _close(key[0], point):
            return key
    return (point, side)


def _fold_constraints(star, values):
    '''Translate the flat-folded link of a vertex into order constraints on
    its sectors.

    Sector *i* folds onto an interval of the line; crease *i* joins sectors
    ``i - 1`` and ``i`` at a point. Three kinds of constraints come out: the
    fold direction of each crease, non-interleaving of creases meeting at the
    same point on the same side, and no sector strictly covering a crease
    point may sit between the two sectors of that crease.
    '''
    size = len(star.angles)
    points = [0.0]
    for i, angle in enumerate(star.angles[:-1]):
        points.append(points[-1] + (angle if i % 2 == 0 else -angle))
    intervals = []
    for i in range(size):
        a, b = points[i], points[(i + 1) % size]
        intervals.append((min(a, b), max(a, b)))
    constraints = []
    tacos = collections.defaultdict(list)
    for i in range(size):
        lower, upper = (i - 1) % size, i
        # sector i - 1 is face up when its index is even
        if (values[i] == VALLEY) != ((i - 1) % size % 2 == 0):
            lower, upper = upper, lower
        constraints.append(('above', (lower, upper)))
        side = 1 if i % 2 == 0 else -1
        tacos[_taco_key(tacos, points[i], side)].append(((i - 1) % size, i))
        for s, (lo, hi) in enumerate(intervals):
            if lo + TOLERANCE < points[i] < hi - TOLERANCE:
                constraints.append(('tortilla', ((i - 1) % size, i, s)))
    for group in tacos.values():
        for first, second in itertools.combinations(group, 2):
            constraints.append(('taco', first + second))
    return constraints


def violates(kind, sectors, position):
    if kind == 'above':
        lower, upper = sectors
        return position[lower] > position[upper]
    if kind == 'tortilla':
        a, b, s = sectors
        lo, hi = sorted((position[a], position[b]))
        return lo < position[s] < hi
    a, b, c, d = sectors
    x1, x2 = sorted((position[a], position[b]))
    y1, y2 = sorted((position[c], position[d]))
    return x1 < y1 < x2 < y2 or y1 < x1 < y2 < x2


def single_vertex_layer_oracle(star, assignment):
    '''Search for a layer order of the sectors of *star* folded under
    *assignment*. Sectors are inserted in link order and the partial order is
    pruned as soon as a constraint whose sectors are all placed fails.

    Returns a :class:`CircularLayerOrder` (bottom to top) or None.

    :raises ValueError: if the degree exceeds :data:`ORACLE_MAX_DEGREE` or
        Kawasaki's condition fails.
    '''
    size = len(star.angles)
    if size > ORACLE_MAX_DEGREE:
        raise ValueError('layer oracle supports degree up to {0}, got '
                         '{1}'.format(ORACLE_MAX_DEGREE, size))
    if not kawasaki_holds(star):
        raise ValueError('Kawasaki condition fails at this vertex')
    values = [assignment.value(c) for c in star.creases]
    ready = collections.defaultdict(list)
    for kind, sectors in _fold_constraints(star, values):
        ready[max(sectors)].append((kind, sectors))

    def extend(order, sector):
        if sector == size:
            return order
        for slot in range(len(order) + 1):
            candidate = order[:slot] + [sector] + order[slot:]
            position = dict((s, i) for i, s in enumerate(candidate))
            if any(violates(kind, sectors, position)
                   for kind, sectors in ready[sector]):
                continue
            found = extend(candidate, sector + 1)
            if found is not None:
                return found
        return None

    order = extend([], 0)
    if order is None:
        return None
    return CircularLayerOrder(tuple(order))


def is_valid_vertex(star, assignment):
    '''Decide single-vertex flat-foldability.

    Equal-angle stars need a Maekawa split of exactly two. Miura stars
    ``(t, pi - t, pi - t, t)`` additionally forbid the three creases around the
    two small sectors from being equal. Square-twist stars need differing
    creases around the 45 degree sector. Anything else is handed to
    :func:`single_vertex_layer_oracle`.

    :raises ValueError: if Kawasaki's condition fails.
    '''
    if not kawasaki_holds(star):
        raise ValueError('Kawasaki condition fails at this vertex')
    angles = star.angles
    values = [assignment.value(c) for c in star.creases]
    if all(_close(a, angles[0]) for a in angles):
        return abs(sum(values)) == 2
    r = _miura_rotation(angles)
    if r is not None:
        run = set((values[(r + 3) % 4], values[r], values[(r + 1) % 4]))
        return maekawa_holds(star, assignment) and len(run) > 1
    r = _rotation(angles, SQUARE_TWIST_ANGLES)
    if r is not None:
        return (maekawa_holds(star, assignment)
                and values[r] != values[(r + 1) % 4])
    return single_vertex_layer_oracle(star, assignment) is not None


def count_single_vertex_configs(n):
    '''Number of valid assignments of the equal-angle vertex with 2n
    creases.'''
    if n < 1:
        raise ValueError('n must be at least 1')
    return math.comb(2 * n, n + 1) + math.comb(2 * n, n - 1)


def _binom(m, k):
    return math.comb(m, k) if 0 <= k <= m else 0


def marginal_probability(n, j, r):
    '''Probability that crease *j* (1-based) is a valley given that the
    values of the creases before it sum to *r*, under the uniform
    distribution on valid assignments of the equal-angle vertex.
    '''
    if n < 1 or not 1 <= j <= 2 * n:
        raise ValueError('crease index must lie in 1..2n')
    if abs(r) > j - 1 or (r - j + 1) % 2:
        raise ValueError('partial sum {0} is impossible before crease '
                         '{1}'.format(r, j))
    m = 2 * n - j
    numerator = _binom(m, (m - r + 1) // 2) + _binom(m, (m - r - 3) // 2)
    denominator = (_binom(m + 1, (m - r + 3) // 2)
                   + _binom(m + 1, (m - r - 1) // 2))
    if denominator == 0:
        raise ValueError('partial sum {0} cannot be completed'.format(r))
    return Fraction(numerator, denominator)


def exact_sample_single_vertex(n, rng):
    '''Draw a uniformly random valid assignment of the equal-angle vertex.

    Creases are decided one at a time with their conditional valley
    probability. The two completion counts are binomials that are updated
    in place, so a draw takes O(n) big-integer operations, and each decision
    compares a 64-bit uniform integer against the exact threshold.
    '''
    if n < 1:
        raise ValueError('n must be at least 1')
    remaining = 2 * n
    # completions ending at +2 and at -2: C(m, k) with k valleys still needed
    need_up, need_down = n + 1, n - 1
    ways_up, ways_down = _binom(remaining, need_up), _binom(remaining, need_down)
    values = []
    while remaining:
        valley_ways = ways_up * need_up + ways_down * need_down
        total = remaining * (ways_up + ways_down)
        u = int(rng.integers(0, 2 ** 64 - 1, dtype=np.uint64, endpoint=True))
        if u * total < valley_ways * 2 ** 64:
            values.append(VALLEY)
            ways_up = ways_up * need_up // remaining
            ways_down = ways_down * need_down // remaining
            need_up -= 1
            need_down -= 1
        else:
            values.append(MOUNTAIN)
            ways_up = ways_up * (remaining - need_up) // remaining
            ways_down = ways_down * (remaining - need_down) // remaining
        remaining -= 1
    return MVAssignment.from_values(values)


def enumerate_single_vertex_configs(n):
    '''All valid assignments of the equal-angle vertex, sorted by their
    ``M``/``V`` string.'''
    if n < 1:
        raise ValueError('n must be at least 1')
    if n > ENUMERATE_MAX_N:
        raise ValueError('enumeration supports n up to {0}, got '
                         '{1}'.format(ENUMERATE_MAX_N, n))
    size = 2 * n
    found = []
    for count in (n - 1, n + 1):
        for mountains in itertools.combinations(range(size), count):
            bits = sum(1 << i for i in mountains)
            found.append(MVAssignment(bits, size))
    return sorted(found, key=MVAssignment.to_string)


def sector_kinds(assignment):
    '''For each sector of the equal-angle vertex, ``'MM'``, ``'VV'`` or
    ``'mixed'`` according to its two bordering creases.'''
    values = assignment.values
    kinds = []
    for i, value in enumerate(values):
        following = values[(i + 1) % len(values)]
        if value != following:
            kinds.append('mixed')
        else:
            kinds.append('MM' if value == MOUNTAIN else 'VV')
    return kinds


def mountain_class(assignment, n):
    '''``'M'`` for assignments with n + 1 mountains, ``'V'`` for n - 1,
    None otherwise.'''
    mountains = assignment.mountains
    if mountains == n + 1:
        return 'M'
    if mountains == n - 1:
        return 'V'
    return None
