'''Global flat-foldability of square grids.

A locally valid assignment of the m x n grid folds every face onto the same
unit square. A face keeps its orientation when ``r + c`` is even. A crease at
``x = k`` ends up on the left edge of the square when k is even and on the
right edge otherwise; likewise a crease at ``y = k`` goes to the top or the
bottom. The fold is globally flat-foldable when the faces admit a stacking
order in which every crease folds the right way and, on each edge of the
square, no two creases interleave.
'''

import collections
import math
from fractions import Fraction

from foldflip.chain import (exact_sample_square_grid,
                            exact_sample_square_grid_batch)
from foldflip.core import (MOUNTAIN, VALLEY, MVAssignment, StateSpaceOverflow,
                           face_classification, is_locally_flat_foldable)
from foldflip.flipgraph import enumerate_states, flip_set
from foldflip.patterns import reference_assignment, square_grid
from foldflip.vertex import violates

SEARCH_MAX_FACES = 12
ENUMERATION_MAX_FACES = 10
SIGMA_SP_SHAPE = (2, 5)
TILE_SHAPE = (3, 6)
EDGES = ('left', 'right', 'top', 'bottom')
Z_95 = 1.96

FoldImage = collections.namedtuple('FoldImage', ['parity', 'crease_edges'])
LayerOrder = collections.namedtuple('LayerOrder', ['order'])
Subgrid = collections.namedtuple('Subgrid', ['row', 'col', 'rows', 'cols'])
GlobalEstimate = collections.namedtuple(
    'GlobalEstimate', ['probability', 'half_width', 'mode', 'trials'])
TileEvent = collections.namedtuple('TileEvent', ['hits', 'trials', 'frequency'])
ExtensionCheck = collections.namedtuple(
    'ExtensionCheck', ['matches_block', 'unchanged_outside', 'valid'])


def _dims(pattern):
    if pattern.family != 'square_grid':
        raise ValueError('expected a square grid, got '
                         '{0!r}'.format(pattern.family))
    m, n = pattern.params['dims']
    return m, n


def fold_image(pattern):
    '''Orientation of every face and the edge of the folded square each
    crease lands on.'''
    _, n = _dims(pattern)
    parity = face_classification(pattern).parity
    edges = []
    for a, b in pattern.crease_faces:
        r, c = divmod(a, n)
        r2, c2 = divmod(b, n)
        if r == r2:
            k = max(c, c2)
            edges.append('left' if k % 2 == 0 else 'right')
        else:
            k = max(r, r2)
            edges.append('top' if k % 2 == 0 else 'bottom')
    return FoldImage(parity, tuple(edges))


def _constraints(pattern, assignment):
    image = fold_image(pattern)
    constraints = []
    tacos = collections.defaultdict(list)
    for crease, (a, b) in enumerate(pattern.crease_faces):
        # a valley puts b on top of a exactly when a faces up
        b_above = (assignment.value(crease) == VALLEY) == (image.parity[a] == 0)
        constraints.append(('above', (a, b) if b_above else (b, a)))
        tacos[image.crease_edges[crease]].append((a, b))
    for edge in EDGES:
        group = tacos[edge]
        for i, first in enumerate(group):
            for second in group[i + 1:]:
                constraints.append(('taco', first + second))
    return constraints


def _insertion_order(m, n):
    order = []
    for r in range(m):
        columns = range(n) if r % 2 == 0 else range(n - 1, -1, -1)
        order.extend(r * n + c for c in columns)
    return order


def check_layer_order(pattern, assignment, order):
    '''Whether *order* (faces listed bottom to top) is a valid stacking of
    the folded grid.'''
    faces = len(pattern.faces)
    if sorted(order) != list(range(faces)):
        return False
    position = dict((face, i) for i, face in enumerate(order))
    return not any(violates(kind, members, position)
                   for kind, members in _constraints(pattern, assignment))


def is_globally_flat_foldable(pattern, assignment):
    '''Search for a stacking order of the folded grid.

    Faces are inserted row by row in boustrophedon order and a partial order
    is abandoned as soon as a constraint whose faces are all placed fails.
    Returns a :class:`LayerOrder` (bottom to top) or None.

    :raises StateSpaceOverflow: if the grid has more than
        :data:`SEARCH_MAX_FACES` faces.
    :raises ValueError: if the assignment is not locally flat-foldable.
    '''
    m, n = _dims(pattern)
    if m * n > SEARCH_MAX_FACES:
        raise StateSpaceOverflow('layer search supports up to {0} faces, the '
                                 'grid has {1}'.format(SEARCH_MAX_FACES, m * n))
    if not is_locally_flat_foldable(pattern, assignment):
        raise ValueError('assignment is not locally flat-foldable')
    sequence = _insertion_order(m, n)
    step = dict((face, i) for i, face in enumerate(sequence))
    ready = collections.defaultdict(list)
    for kind, faces in _constraints(pattern, assignment):
        ready[max(step[f] for f in faces)].append((kind, faces))

    def extend(order, k):
        if k == len(sequence):
            return order
        face = sequence[k]
        for slot in range(len(order) + 1):
            candidate = order[:slot] + [face] + order[slot:]
            position = dict((f, i) for i, f in enumerate(candidate))
            if any(violates(kind, faces, position)
                   for kind, faces in ready[k]):
                continue
            found = extend(candidate, k + 1)
            if found is not None:
                return found
        return None

    order = extend([], 0)
    if order is None:
        return None
    if not check_layer_order(pattern, assignment, order):
        raise RuntimeError('layer search produced an invalid witness')
    return LayerOrder(tuple(order))


def _check_subgrid(pattern, sub):
    m, n = _dims(pattern)
    if min(sub) < 0 or sub.row + sub.rows > m or sub.col + sub.cols > n:
        raise ValueError('subgrid {0} does not fit in the {1}x{2} '
                         'grid'.format(tuple(sub), m, n))
    return m, n


def neighborhood(pattern, sub):
    '''The subgrid grown by one face in every direction, clipped to the
    grid. An empty subgrid is its own neighborhood.'''
    m, n = _check_subgrid(pattern, sub)
    if sub.rows == 0 or sub.cols == 0:
        return sub
    row, col = max(0, sub.row - 1), max(0, sub.col - 1)
    return Subgrid(row, col, min(m, sub.row + sub.rows + 1) - row,
                   min(n, sub.col + sub.cols + 1) - col)


def subgrid_faces(pattern, sub):
    _, n = _check_subgrid(pattern, sub)
    return [r * n + c for r in range(sub.row, sub.row + sub.rows)
            for c in range(sub.col, sub.col + sub.cols)]


def subgrid_creases(pattern, sub):
    '''Creases with both faces inside the subgrid, in index order.'''
    inside = set(subgrid_faces(pattern, sub))
    return [e for e, (a, b) in enumerate(pattern.crease_faces)
            if a in inside and b in inside]


def _block_map(pattern, shape, offset):
    '''Pairs ``(local crease, global crease)`` for an S_{a,b} block placed
    at *offset*.'''
    a, b = shape
    r0, c0 = offset
    _, n = _check_subgrid(pattern, Subgrid(r0, c0, a, b))
    block = square_grid(a, b)
    pairs = []
    for local, (f, g) in enumerate(block.crease_faces):
        fr, fc = divmod(f, b)
        gr, gc = divmod(g, b)
        crease = pattern.crease_between((r0 + fr) * n + c0 + fc,
                                        (r0 + gr) * n + c0 + gc)
        pairs.append((local, crease))
    return block, pairs


def extend_partial(pattern, sigma, tau, shape, offset):
    '''Overwrite the block at *offset* with *tau* and repair only the creases
    around it so the result stays locally flat-foldable.

    Both assignments are written as face labels relative to the reference
    assignment; the block's labels replace those of *sigma* inside the block
    and the assignment is rebuilt from the combined labeling.

    :raises ValueError: if the block does not fit or either assignment is
        not locally flat-foldable.
    '''
    m, n = _dims(pattern)
    a, b = shape
    if a == 0 or b == 0:
        _check_subgrid(pattern, Subgrid(offset[0], offset[1], a, b))
        return sigma
    block, pairs = _block_map(pattern, shape, offset)
    if tau.size != len(block.creases):
        raise ValueError('block assignment has {0} creases, expected '
                         '{1}'.format(tau.size, len(block.creases)))
    if not is_locally_flat_foldable(block, tau):
        raise ValueError('block assignment is not locally flat-foldable')
    if not is_locally_flat_foldable(pattern, sigma):
        raise ValueError('assignment is not locally flat-foldable')
    reference = reference_assignment(pattern)
    labels = [0] * (m * n)
    for face in flip_set(pattern, reference, sigma):
        labels[face] = 1
    differs = dict((local, tau.value(local) != reference.value(crease))
                   for local, crease in pairs)
    inner = [None] * (a * b)
    inner[0] = 0
    queue = collections.deque([0])
    while queue:
        face = queue.popleft()
        for other, local in block.neighbours(face):
            expected = inner[face] ^ differs[local]
            if inner[other] is None:
                inner[other] = expected
                queue.append(other)
            elif inner[other] != expected:
                raise ValueError('block assignment has no face labeling')
    r0, c0 = offset
    for local, label in enumerate(inner):
        r, c = divmod(local, b)
        labels[(r0 + r) * n + c0 + c] = label
    bits = reference.bits
    for face, label in enumerate(labels):
        if label:
            bits ^= pattern.face_masks[face]
    return MVAssignment(bits, len(pattern.creases))


def check_extension(pattern, sigma, tau, shape, offset, result):
    '''Report whether *result* agrees with *tau* on the block, with *sigma*
    away from the block's neighborhood, and is locally flat-foldable.'''
    block, pairs = _block_map(pattern, shape, offset)
    matches = all(result.value(crease) == tau.value(local)
                  for local, crease in pairs)
    near = set(subgrid_creases(pattern, neighborhood(
        pattern, Subgrid(offset[0], offset[1], shape[0], shape[1]))))
    unchanged = all(result.value(e) == sigma.value(e)
                    for e in range(len(pattern.creases)) if e not in near)
    return ExtensionCheck(matches, unchanged,
                          is_locally_flat_foldable(pattern, result))


def count_locally_valid(m, n):
    '''Locally flat-foldable assignments of the m x n grid: ``2**(mn - 1)``.'''
    if m < 1 or n < 1:
        raise ValueError('grid dimensions must be positive')
    return 2 ** (m * n - 1)


def count_global(m, n):
    '''Number of globally flat-foldable assignments of the m x n grid, by
    running the layer search on every locally valid one.'''
    if m < 1 or n < 1:
        raise ValueError('grid dimensions must be positive')
    if m * n > ENUMERATION_MAX_FACES:
        raise StateSpaceOverflow('global counting supports up to {0} faces, '
                                 'the grid has {1}'.format(
                                     ENUMERATION_MAX_FACES, m * n))
    pattern = square_grid(m, n)
    return sum(1 for state in enumerate_states(pattern, 'scan')
               if is_globally_flat_foldable(pattern, state) is not None)


def estimate_global_probability(m, n, trials, rng):
    '''Probability that a uniform locally valid assignment of the m x n grid
    is globally flat-foldable.

    Small grids are enumerated and the exact Fraction comes back with a zero
    half width. Otherwise *trials* exact samples are checked and the half
    width of a 95% normal interval is attached.
    '''
    if m < 1 or n < 1:
        raise ValueError('grid dimensions must be positive')
    if m * n <= ENUMERATION_MAX_FACES:
        total = count_locally_valid(m, n)
        return GlobalEstimate(Fraction(count_global(m, n), total), 0.0,
                              'enumeration', total)
    if m * n > SEARCH_MAX_FACES:
        raise StateSpaceOverflow('global checks support up to {0} '
                                 'faces'.format(SEARCH_MAX_FACES))
    if trials < 1:
        raise ValueError('at least one trial is needed')
    pattern = square_grid(m, n)
    hits = 0
    for _ in range(trials):
        sample = exact_sample_square_grid(m, n, rng)
        if is_globally_flat_foldable(pattern, sample) is not None:
            hits += 1
    p = hits / trials
    return GlobalEstimate(p, Z_95 * math.sqrt(p * (1 - p) / trials),
                          'sampling', trials)


def sigma_sp():
    '''The locally valid 2 x 5 assignment that does not fold flat.'''
    pattern = square_grid(*SIGMA_SP_SHAPE)
    n = SIGMA_SP_SHAPE[1]
    values = [None] * len(pattern.creases)
    M, V = MOUNTAIN, VALLEY
    for c, value in enumerate((V, V, M, V, V)):
        values[pattern.crease_between(c, n + c)] = value
    for c, value in enumerate((M, V, V, M)):
        values[pattern.crease_between(c, c + 1)] = value
    for c, value in enumerate((V, V, V, V)):
        values[pattern.crease_between(n + c, n + c + 1)] = value
    return pattern, MVAssignment.from_values(values)


def sigma_sp_tiles(pattern):
    '''Top-left corners of the disjoint 3 x 6 tiles of the grid; each hosts
    a copy of the 2 x 5 block at its own top-left.'''
    m, n = _dims(pattern)
    rows, cols = TILE_SHAPE
    return [(rows * i, cols * j) for i in range(m // rows)
            for j in range(n // cols)]


def _tile_targets(pattern, anchors):
    _, target = sigma_sp()
    result = []
    for anchor in anchors:
        _, pairs = _block_map(pattern, SIGMA_SP_SHAPE, anchor)
        result.append([(crease, target.value(local))
                       for local, crease in pairs])
    return result


def contains_sigma_sp(pattern, assignment, anchors=None):
    '''For every anchor, whether the 2 x 5 block there carries the
    non-foldable assignment.'''
    m, n = _dims(pattern)
    if m < TILE_SHAPE[0] or n < TILE_SHAPE[1]:
        raise ValueError('the grid must be at least {0}x{1}'.format(
            *TILE_SHAPE))
    if anchors is None:
        anchors = sigma_sp_tiles(pattern)
    return tuple(all(assignment.value(crease) == value
                     for crease, value in targets)
                 for targets in _tile_targets(pattern, anchors))


def tile_event_frequency(m, n, samples, rng, chunk=100000):
    '''Sample uniform assignments of the m x n grid and count, over all
    disjoint tiles, how often a tile carries the non-foldable block.'''
    pattern = square_grid(m, n)
    anchors = sigma_sp_tiles(pattern)
    if not anchors:
        raise ValueError('the grid must be at least {0}x{1}'.format(
            *TILE_SHAPE))
    if samples < 1:
        raise ValueError('at least one sample is needed')
    targets = _tile_targets(pattern, anchors)
    hits = 0
    remaining = samples
    while remaining:
        count = min(chunk, remaining)
        batch = exact_sample_square_grid_batch(pattern, count, rng)
        for tile in targets:
            columns = [crease for crease, _ in tile]
            wanted = [value for _, value in tile]
            hits += int((batch[:, columns] == wanted).all(axis=1).sum())
        remaining -= count
    trials = samples * len(anchors)
    return TileEvent(hits, trials, hits / trials)
