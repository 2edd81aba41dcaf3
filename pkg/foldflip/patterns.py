'''This module contains the generators for the supported crease-pattern
families together with a locally flat-foldable reference assignment for
each of them.

Faces are numbered row-major and creases are sorted by the ``(y, x)``
position of their midpoint, except for single vertices whose creases are
numbered counterclockwise from the positive x axis.
'''

import collections
import functools
import math

from foldflip.core import (MOUNTAIN, TOLERANCE, VALLEY, CreasePattern,
                           MVAssignment, point_key)

DEFAULT_THETA = {'miura': 60.0, 'kite': 30.0}
TWIST_MODES = ('alternating', 'uniform')
# half diagonal of the central square of a twist
TWIST_H = 0.25
_DIMENSIONS = {
    'square_grid': 2,
    'square_twist': 2,
    'miura': 2,
    'triangle': 2,
    'kite': 2,
    'single_vertex': 1,
}

PatternSpec = collections.namedtuple('PatternSpec',
                                     ['family', 'dims', 'theta', 'mode'],
                                     defaults=(None, 'alternating'))


def normalize_spec(spec):
    '''Validate *spec* and fill in the family defaults.

    :raises ValueError: if the family is unknown, the dimensions are missing
        or not positive, the angle is not acute or the mode is unknown.
    '''
    expected = _DIMENSIONS.get(spec.family)
    if expected is None:
        raise ValueError('cannot generate family {0!r}'.format(spec.family))
    dims = tuple(int(d) for d in spec.dims or ())
    if len(dims) != expected:
        raise ValueError('family {0} takes {1} dimension(s), got '
                         '{2}'.format(spec.family, expected, len(dims)))
    if any(d < 1 for d in dims):
        raise ValueError('dimensions must be at least 1, got {0}'.format(dims))
    theta = spec.theta
    if spec.family in DEFAULT_THETA:
        theta = float(DEFAULT_THETA[spec.family] if theta is None else theta)
        if not 0 < theta < 90:
            raise ValueError('theta must lie strictly between 0 and 90 '
                             'degrees, got {0}'.format(theta))
    else:
        theta = None
    mode = spec.mode if spec.family == 'square_twist' else None
    if mode is not None and mode not in TWIST_MODES:
        raise ValueError('unknown tiling mode {0!r}'.format(mode))
    return PatternSpec(spec.family, dims, theta, mode)


def generate(spec):
    '''Build the crease pattern described by *spec*.'''
    return _generate(normalize_spec(spec))


@functools.lru_cache(maxsize=64)
def _generate(spec):
    params = {'dims': list(spec.dims)}
    if spec.theta is not None:
        params['theta'] = spec.theta
    if spec.mode is not None:
        params['mode'] = spec.mode
    key = spec.mode if spec.family == 'square_twist' else spec.family
    builder = _BUILDERS[key]
    return builder(spec, params)


def _square_grid(spec, params):
    m, n = spec.dims
    polygons = [[(c, r), (c + 1, r), (c + 1, r + 1), (c, r + 1)]
                for r in range(m) for c in range(n)]
    return CreasePattern.from_polygons(polygons, 'square_grid', params=params)


def _miura(spec, params):
    m, n = spec.dims
    theta = math.radians(spec.theta)

    def point(i, j):
        return (j + (math.cos(theta) if i % 2 else 0.0), i * math.sin(theta))

    def tagger(p, q):
        return 'horizontal' if abs(p[1] - q[1]) < TOLERANCE else 'zigzag'

    polygons = [[point(r, c), point(r, c + 1), point(r + 1, c + 1),
                 point(r + 1, c)] for r in range(m) for c in range(n)]
    return CreasePattern.from_polygons(polygons, 'miura', tagger=tagger,
                                       params=params)


def _triangle(spec, params):
    m, n = spec.dims
    height = math.sqrt(3) / 2

    def point(i, j):
        return (j + i / 2.0, i * height)

    def tagger(p, q):
        if abs(p[1] - q[1]) < TOLERANCE:
            return 'horizontal'
        # rhombus sides lean right going down, diagonals lean left
        lower, upper = (p, q) if p[1] > q[1] else (q, p)
        return 'rhombus_side' if lower[0] > upper[0] else 'rhombus_diagonal'

    polygons = []
    for r in range(m):
        for c in range(n):
            polygons.append([point(r, c), point(r, c + 1), point(r + 1, c)])
            polygons.append([point(r, c + 1), point(r + 1, c + 1),
                             point(r + 1, c)])
    return CreasePattern.from_polygons(polygons, 'triangle', tagger=tagger,
                                       params=params)


def kite_vertex(i, j, theta):
    '''Corner (i, j) of the right-kite tiling with apex angle *theta*
    (radians): the base kite has its apex at the origin, its right angles at
    ``(0, 1)`` and ``(1, 0)`` and its obtuse corner at ``(1, 1)``.
    '''
    half = theta / 2
    base = [
        (0.0, 0.0),
        (math.cos(math.pi / 4 - half), math.sin(math.pi / 4 - half)),
        (math.cos(math.pi / 4) / math.cos(half),
         math.sin(math.pi / 4) / math.cos(half)),
        (math.cos(math.pi / 4 + half), math.sin(math.pi / 4 + half)),
    ]
    p0, p1, p2, p3 = base
    across = (p1[0] + p2[0] - p0[0] - p3[0], p1[1] + p2[1] - p0[1] - p3[1])
    down = (p3[0] + p2[0] - p0[0] - p1[0], p3[1] + p2[1] - p0[1] - p1[1])
    corner = {(0, 0): p0, (0, 1): p1, (1, 1): p2, (1, 0): p3}[(i % 2, j % 2)]
    return (corner[0] + (i // 2) * down[0] + (j // 2) * across[0],
            corner[1] + (i // 2) * down[1] + (j // 2) * across[1])


def _kite(spec, params):
    rows, cols = spec.dims
    theta = math.radians(spec.theta)
    points = dict(((i, j), kite_vertex(i, j, theta))
                  for i in range(rows + 1) for j in range(cols + 1))
    classes = {}

    def edge(p, q):
        return frozenset((point_key(p), point_key(q)))

    for (i, j), p in points.items():
        if (i, j + 1) in points:
            classes[edge(p, points[i, j + 1])] = 'row'
        if (i + 1, j) in points:
            classes[edge(p, points[i + 1, j])] = 'column'

    def tagger(p, q):
        return classes[edge(p, q)]

    polygons = [[points[r, c], points[r, c + 1], points[r + 1, c + 1],
                 points[r + 1, c]] for r in range(rows) for c in range(cols)]
    return CreasePattern.from_polygons(polygons, 'kite', tagger=tagger,
                                       params=params)


def _single_vertex(spec, params):
    n, = spec.dims
    step = math.pi / n

    def on_circle(angle):
        return (math.cos(angle), math.sin(angle))

    polygons = [[(0.0, 0.0), on_circle(k * step), on_circle((k + 0.5) * step),
                 on_circle((k + 1) * step)] for k in range(2 * n)]

    def by_angle(midpoint):
        return round(math.atan2(midpoint[1], midpoint[0]) % (2 * math.pi), 9)

    return CreasePattern.from_polygons(polygons, 'single_vertex',
                                       tagger=lambda p, q: 'ray',
                                       crease_key=by_angle, params=params)


def _twist_tile():
    '''Faces of one square-twist tile on the unit square: the central
    diamond, four corner rectangles and four trapezoidal wings.'''
    h = TWIST_H
    top, right = (0.5, 0.5 + h), (0.5 + h, 0.5)
    bottom, left = (0.5, 0.5 - h), (0.5 - h, 0.5)
    return [
        [bottom, right, top, left],
        [top, (1, 0.5 + h), (1, 1), (0.5, 1)],
        [(0.5 + h, 0), (1, 0), (1, 0.5), right],
        [(0, 0), (0.5, 0), bottom, (0, 0.5 - h)],
        [(0, 0.5), left, (0.5 - h, 1), (0, 1)],
        [right, (1, 0.5), (1, 0.5 + h), top],
        [bottom, (0.5, 0), (0.5 + h, 0), right],
        [left, (0, 0.5), (0, 0.5 - h), bottom],
        [top, (0.5, 1), (0.5 - h, 1), left],
    ]


def _outline(polygons):
    '''Boundary cycle of a union of edge-adjacent polygons.'''
    directed = set()
    for polygon in polygons:
        keys = [point_key(p) for p in polygon]
        if _area(keys) < 0:
            keys.reverse()
        for p, q in zip(keys, keys[1:] + keys[:1]):
            directed.add((p, q))
    following = {}
    for p, q in directed:
        if (q, p) in directed:
            continue
        if p in following:
            raise ValueError('merged faces do not form a simple polygon')
        following[p] = q
    start = min(following)
    cycle = [start]
    while following[cycle[-1]] != start:
        cycle.append(following[cycle[-1]])
    if len(cycle) != len(following):
        raise ValueError('merged faces do not form a simple polygon')
    return _drop_collinear(cycle)


def _area(points):
    return sum(x1 * y2 - x2 * y1 for (x1, y1), (x2, y2)
               in zip(points, points[1:] + points[:1]))


def _drop_collinear(cycle):
    changed = True
    while changed and len(cycle) > 3:
        changed = False
        for i, (px, py) in enumerate(cycle):
            ax, ay = cycle[i - 1]
            bx, by = cycle[(i + 1) % len(cycle)]
            cross = (px - ax) * (by - py) - (py - ay) * (bx - px)
            if abs(cross) < TOLERANCE:
                del cycle[i]
                changed = True
                break
    return cycle


def _merge_across(polygons, is_cut):
    '''Merge polygons that share an edge for which ``is_cut(p, q)`` holds.'''
    parent = list(range(len(polygons)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owners = collections.defaultdict(list)
    for i, polygon in enumerate(polygons):
        keys = [point_key(p) for p in polygon]
        for p, q in zip(keys, keys[1:] + keys[:1]):
            if is_cut(p, q):
                owners[frozenset((p, q))].append(i)
    for members in owners.values():
        for other in members[1:]:
            parent[find(other)] = find(members[0])
    groups = collections.OrderedDict()
    for i in range(len(polygons)):
        groups.setdefault(find(i), []).append(polygons[i])
    return [group[0] if len(group) == 1 else _outline(group)
            for group in groups.values()]


def _square_twist_alternating(spec, params):
    rows, cols = spec.dims
    pieces = []
    for r in range(rows):
        for c in range(cols):
            for polygon in _twist_tile():
                pieces.append([(c + (1 - x if c % 2 else x),
                                r + (1 - y if r % 2 else y))
                               for x, y in polygon])

    def internal(value, limit):
        return (abs(value - round(value)) < TOLERANCE
                and 0 < round(value) < limit)

    def is_cut(p, q):
        return ((p[0] == q[0] and internal(p[0], cols))
                or (p[1] == q[1] and internal(p[1], rows)))

    return CreasePattern.from_polygons(_merge_across(pieces, is_cut),
                                       'square_twist', params=params)


def _square_twist_uniform(spec, params):
    rows, cols = spec.dims
    h = TWIST_H

    def centre(r, c):
        return (c - r * h, c * h + r)

    def corner(r, c, name):
        x, y = centre(r, c)
        return {'top': (x, y + h), 'right': (x + h, y),
                'bottom': (x, y - h), 'left': (x - h, y)}[name]

    polygons = []
    for r in range(rows):
        for c in range(cols):
            polygons.append([corner(r, c, 'bottom'), corner(r, c, 'right'),
                             corner(r, c, 'top'), corner(r, c, 'left')])
    for r in range(rows):
        for c in range(-1, cols):
            polygons.append([corner(r, c, 'top'), corner(r, c, 'right'),
                             corner(r, c + 1, 'bottom'),
                             corner(r, c + 1, 'left')])
    for r in range(-1, rows):
        for c in range(cols):
            polygons.append([corner(r, c, 'left'), corner(r, c, 'top'),
                             corner(r + 1, c, 'right'),
                             corner(r + 1, c, 'bottom')])
    for r in range(-1, rows):
        for c in range(-1, cols):
            polygons.append([corner(r, c, 'top'), corner(r, c + 1, 'left'),
                             corner(r + 1, c + 1, 'bottom'),
                             corner(r + 1, c, 'right')])
    return CreasePattern.from_polygons(polygons, 'square_twist',
                                       params=params)


_BUILDERS = {
    'square_grid': _square_grid,
    'miura': _miura,
    'triangle': _triangle,
    'kite': _kite,
    'single_vertex': _single_vertex,
    'alternating': _square_twist_alternating,
    'uniform': _square_twist_uniform,
}


def square_grid(m, n):
    '''Shortcut for the m x n square grid.'''
    return generate(PatternSpec('square_grid', (m, n)))


def link_components(pattern):
    '''Group the creases of a pattern whose interior vertices all have degree
    four and a unique smallest sector.

    At such a vertex a valid assignment gives different values to the two
    creases around the smallest sector and equal values to the two creases
    around the opposite one. Each component is returned as a dict mapping
    crease to relative parity (0 for the first crease of the component).

    :raises ValueError: if a vertex does not have that shape or the
        constraints contradict each other.
    '''
    links = collections.defaultdict(list)
    for star in pattern.stars:
        angles = star.angles
        if len(angles) != 4:
            raise ValueError('vertex {0} does not have degree '
                             '4'.format(star.vertex))
        k = min(range(4), key=lambda i: angles[i])
        if sum(1 for a in angles if abs(a - angles[k]) < TOLERANCE) > 1:
            raise ValueError('vertex {0} has no unique smallest '
                             'sector'.format(star.vertex))
        creases = star.creases
        for first, second, differ in ((k, k + 1, 1), (k + 2, k + 3, 0)):
            a, b = creases[first % 4], creases[second % 4]
            links[a].append((b, differ))
            links[b].append((a, differ))
    components = []
    seen = set()
    for start in range(len(pattern.creases)):
        if start in seen:
            continue
        parity = {start: 0}
        stack = [start]
        while stack:
            crease = stack.pop()
            for other, differ in links[crease]:
                expected = parity[crease] ^ differ
                if other not in parity:
                    parity[other] = expected
                    stack.append(other)
                elif parity[other] != expected:
                    raise ValueError('vertex constraints around crease {0} '
                                     'contradict each other'.format(other))
        seen.update(parity)
        components.append(parity)
    return components


def _linked_reference(pattern):
    values = [VALLEY] * len(pattern.creases)
    for component in link_components(pattern):
        for crease, parity in component.items():
            values[crease] = MOUNTAIN if parity else VALLEY
    return values


def _grid_reference(pattern):
    m, n = pattern.params['dims']
    values = [MOUNTAIN] * len(pattern.creases)
    for r in range(m):
        for c in range(n - 1):
            crease = pattern.crease_between(r * n + c, r * n + c + 1)
            values[crease] = MOUNTAIN if r % 2 == 0 else VALLEY
    return values


def _miura_reference(pattern):
    m, n = pattern.params['dims']
    values = [MOUNTAIN] * len(pattern.creases)

    def line(j):
        return VALLEY if j % 2 else MOUNTAIN

    for r in range(m):
        for c in range(n):
            face = r * n + c
            if c + 1 < n:
                values[pattern.crease_between(face, face + 1)] = line(c + 1)
            if r + 1 < m:
                crease = pattern.crease_between(face, face + n)
                values[crease] = -line(c) if (r + 1) % 2 == 0 else line(c)
    return values


def _triangle_reference(pattern):
    height = math.sqrt(3) / 2
    values = []
    for (u, v), tag in zip(pattern.creases, pattern.tags):
        if tag == 'horizontal':
            row = int(round(pattern.vertices[u][1] / height))
            values.append(MOUNTAIN if row % 2 else VALLEY)
        else:
            values.append(MOUNTAIN if tag == 'rhombus_side' else VALLEY)
    return values


def _single_vertex_reference(pattern):
    n, = pattern.params['dims']
    return [MOUNTAIN] * (n + 1) + [VALLEY] * (n - 1)


_REFERENCES = {
    'square_grid': _grid_reference,
    'miura': _miura_reference,
    'triangle': _triangle_reference,
    'single_vertex': _single_vertex_reference,
    'square_twist': _linked_reference,
    'kite': _linked_reference,
}


def reference_assignment(pattern):
    '''A locally flat-foldable assignment of a generated pattern.

    :raises ValueError: for custom patterns.
    '''
    builder = _REFERENCES.get(pattern.family)
    if builder is None:
        raise ValueError('no reference assignment for family '
                         '{0!r}'.format(pattern.family))
    return MVAssignment.from_values(builder(pattern))


def kite_flip_sets(pattern):
    '''Partition the creases of a kite pattern into the sets that can be
    negated independently. Sets are sorted by their smallest crease.'''
    if pattern.family != 'kite':
        raise ValueError('kite flip sets need a kite pattern, got '
                         '{0!r}'.format(pattern.family))
    return sorted((frozenset(c) for c in link_components(pattern)), key=min)


def set_mask(creases):
    return sum(1 << c for c in creases)
