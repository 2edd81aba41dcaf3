'''Correspondence between locally flat-foldable Miura-ori assignments and
proper 3-colorings of the face grid with the top-left face fixed to
color 0.

Crossing a zigzag crease from face (r, c) to (r, c + 1) adds ``s(r) * value``
to the color, with ``s(r) = -1`` on even rows and ``+1`` on odd rows.
Crossing a horizontal crease from (r, c) to (r + 1, c) adds ``value``. Colors
live in Z/3.
'''

import collections

from foldflip.core import (MVAssignment, face_flippable, flip_face,
                           is_locally_flat_foldable)
from foldflip.flipgraph import enumerate_states

COLORS = 3
ANCHOR = ((0, 0), 0)

GridColoring = collections.namedtuple('GridColoring', ['colors', 'anchor'])
# signs indexed by row parity (even, odd)
DifferenceRule = collections.namedtuple('DifferenceRule',
                                        ['zigzag', 'horizontal'])
ConjugacyFailure = collections.namedtuple('ConjugacyFailure',
                                          ['state', 'face', 'reason'])
ConjugacyCheck = collections.namedtuple('ConjugacyCheck',
                                        ['ok', 'counterexample'])

DEFAULT_RULE = DifferenceRule(zigzag=(-1, 1), horizontal=(1, 1))


def _dims(pattern):
    if pattern.family != 'miura':
        raise ValueError('expected a Miura-ori pattern, got '
                         '{0!r}'.format(pattern.family))
    m, n = pattern.params['dims']
    return m, n


def _crossing(rule, n, face, other):
    '''Sign by which the MV value of the crease from *face* to *other*
    enters the color difference.'''
    r, c = divmod(face, n)
    r2, c2 = divmod(other, n)
    if r == r2:
        return rule.zigzag[r % 2] * (c2 - c)
    return rule.horizontal[min(r, r2) % 2] * (r2 - r)


def mv_to_coloring(pattern, assignment, rule=DEFAULT_RULE):
    '''Map a locally flat-foldable Miura assignment to its anchored
    coloring.

    :raises ValueError: if the assignment is not locally flat-foldable or the
        difference rule is not path independent on it.
    '''
    m, n = _dims(pattern)
    if not is_locally_flat_foldable(pattern, assignment):
        raise ValueError('assignment is not locally flat-foldable')
    colors = [None] * (m * n)
    colors[0] = ANCHOR[1]
    queue = collections.deque([0])
    while queue:
        face = queue.popleft()
        for other, crease in pattern.neighbours(face):
            delta = _crossing(rule, n, face, other) * assignment.value(crease)
            expected = (colors[face] + delta) % COLORS
            if colors[other] is None:
                colors[other] = expected
                queue.append(other)
            elif colors[other] != expected:
                raise ValueError('coloring is inconsistent around face '
                                 '{0}'.format(other))
    grid = tuple(tuple(colors[r * n:(r + 1) * n]) for r in range(m))
    return GridColoring(grid, ANCHOR)


def is_proper(colors):
    for r, row in enumerate(colors):
        for c, color in enumerate(row):
            if color not in range(COLORS):
                return False
            if c + 1 < len(row) and row[c + 1] == color:
                return False
            if r + 1 < len(colors) and colors[r + 1][c] == color:
                return False
    return True


def coloring_to_mv(pattern, coloring, rule=DEFAULT_RULE):
    '''Inverse of :func:`mv_to_coloring`.

    :raises ValueError: if the coloring has the wrong shape, is not proper
        or does not respect the anchor.
    '''
    m, n = _dims(pattern)
    colors = coloring.colors
    if len(colors) != m or any(len(row) != n for row in colors):
        raise ValueError('coloring shape does not match the {0}x{1} '
                         'pattern'.format(m, n))
    if not is_proper(colors):
        raise ValueError('coloring is not proper')
    (ar, ac), anchor = ANCHOR
    if colors[ar][ac] != anchor:
        raise ValueError('anchor face must have color {0}'.format(anchor))
    values = []
    for face, other in pattern.crease_faces:
        r, c = divmod(face, n)
        r2, c2 = divmod(other, n)
        difference = (colors[r2][c2] - colors[r][c]) % COLORS
        signed = 1 if difference == 1 else -1
        values.append(signed * _crossing(rule, n, face, other))
    return MVAssignment.from_values(values)


def allowed_colors(colors, r, c):
    '''Colors vertex (r, c) may take without breaking properness.'''
    taken = set()
    for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
        rr, cc = r + dr, c + dc
        if 0 <= rr < len(colors) and 0 <= cc < len(colors[0]):
            taken.add(colors[rr][cc])
    return [k for k in range(COLORS) if k not in taken]


def recolor(coloring, r, c, color):
    '''Give vertex (r, c) a new color. Recoloring the anchor shifts every
    other vertex instead, so the anchor keeps its fixed color.'''
    (ar, ac), anchor = coloring.anchor
    rows = [list(row) for row in coloring.colors]
    if (r, c) != (ar, ac):
        rows[r][c] = color
    else:
        shift = color - anchor
        rows = [[(k - shift) % COLORS for k in row] for row in rows]
        rows[ar][ac] = anchor
    return coloring._replace(colors=tuple(tuple(row) for row in rows))


def enumerate_colorings(m, n):
    '''All proper 3-colorings of the m x n grid with the anchor colored 0,
    in row-major lexicographic order.'''
    if m < 1 or n < 1:
        raise ValueError('grid dimensions must be positive')
    cells = [None] * (m * n)
    found = []

    def extend(index):
        if index == m * n:
            grid = tuple(tuple(cells[r * n:(r + 1) * n]) for r in range(m))
            found.append(GridColoring(grid, ANCHOR))
            return
        r, c = divmod(index, n)
        choices = [ANCHOR[1]] if index == 0 else range(COLORS)
        for color in choices:
            if c and cells[index - 1] == color:
                continue
            if r and cells[index - n] == color:
                continue
            cells[index] = color
            extend(index + 1)
        cells[index] = None

    extend(0)
    return found


def flip_recolor_conjugacy_check(pattern, rule=DEFAULT_RULE):
    '''Check exhaustively that the coloring map is a bijection and that
    flipping a face corresponds to recoloring its grid vertex.

    Returns a :class:`ConjugacyCheck` whose counterexample is the first
    failure found.
    '''
    m, n = _dims(pattern)
    states = enumerate_states(pattern, 'scan')

    def failed(state, face, reason):
        return ConjugacyCheck(False, ConjugacyFailure(state.to_string(), face,
                                                      reason))

    images = {}
    for state in states:
        try:
            coloring = mv_to_coloring(pattern, state, rule)
            back = coloring_to_mv(pattern, coloring, rule)
        except ValueError as exc:
            return failed(state, None, str(exc))
        if back != state:
            return failed(state, None, 'round trip changes the assignment')
        images[state] = coloring
    if len(set(images.values())) != len(states):
        return ConjugacyCheck(False, ConjugacyFailure(None, None,
                                                      'map is not injective'))
    if len(enumerate_colorings(m, n)) != len(states):
        return ConjugacyCheck(False, ConjugacyFailure(None, None,
                                                      'map is not surjective'))
    for state in states:
        coloring = images[state]
        for face in range(m * n):
            r, c = divmod(face, n)
            current = coloring.colors[r][c]
            moves = [k for k in allowed_colors(coloring.colors, r, c)
                     if k != current]
            flippable = face_flippable(pattern, state.bits, face)
            if flippable != bool(moves):
                return failed(state, face, 'flippability disagrees with the '
                                           'recolor moves')
            if not flippable:
                continue
            target = images[flip_face(pattern, state, face)]
            if target != recolor(coloring, r, c, moves[0]):
                return failed(state, face, 'flip changes more than the face '
                                           'color')
    return ConjugacyCheck(True, None)


def pushed_kernel_matches(pattern):
    '''Compare the one-step face-flip kernel, pushed through the coloring
    map, with the Glauber kernel on anchored colorings. Exact arithmetic.'''
    # chain imports this module
    from foldflip.chain import face_flip_kernel, glauber_kernel

    m, n = _dims(pattern)
    pushed = {}
    for state, row in face_flip_kernel(pattern).items():
        image = mv_to_coloring(pattern, state)
        pushed[image] = dict((mv_to_coloring(pattern, target), p)
                             for target, p in row.items())
    return pushed == glauber_kernel(m, n)
