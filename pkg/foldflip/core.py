'''This module contains the crease-pattern data model shared by every other
module: MV assignments, vertex stars, face flips and the local
flat-foldability check.

Angles are radians and are compared with an absolute tolerance of
:data:`TOLERANCE`. Mountain creases have value ``-1`` and valley creases
``+1``.
'''

import collections
import json
import math

TOLERANCE = 1e-8
MOUNTAIN = -1
VALLEY = 1

FAMILIES = (
    'square_grid',
    'square_twist',
    'miura',
    'triangle',
    'kite',
    'single_vertex',
    'custom',
)
SHAPE_TAGS = ('rectangular', 'non_rectangular', 'other')


class StateSpaceOverflow(ValueError):
    '''Raised when an enumeration, a matrix or a search exceeds its bound.'''


BaseAssignment = collections.namedtuple('BaseAssignment', ['bits', 'size'])
VertexStar = collections.namedtuple('VertexStar', ['vertex', 'creases', 'angles'])
FaceClass = collections.namedtuple('FaceClass', ['parity', 'shape_tags'])


class MVAssignment(BaseAssignment):
    '''A mountain-valley assignment packed into an integer.

    Bit *i* of :attr:`bits` is set when crease *i* is a mountain. *size* is
    the number of creases of the pattern the assignment belongs to. Two
    assignments are equal when they are equal as tuples, so they can be used
    directly as dictionary keys.
    '''

    __slots__ = ()

    @classmethod
    def from_values(cls, values):
        '''Build an assignment from a sequence of ``-1``/``+1`` values.'''
        bits = 0
        size = 0
        for i, value in enumerate(values):
            if value == MOUNTAIN:
                bits |= 1 << i
            elif value != VALLEY:
                raise ValueError('MV values must be -1 or +1, got '
                                 '{0!r}'.format(value))
            size += 1
        return cls(bits, size)

    @classmethod
    def from_string(cls, text):
        '''Parse an ``M``/``V`` string. Whitespace is ignored.'''
        letters = ''.join(text.split()).upper()
        values = []
        for letter in letters:
            if letter == 'M':
                values.append(MOUNTAIN)
            elif letter == 'V':
                values.append(VALLEY)
            else:
                raise ValueError('unexpected character {0!r} in MV '
                                 'string'.format(letter))
        return cls.from_values(values)

    def value(self, crease):
        '''Return the value of the given crease.'''
        if not 0 <= crease < self.size:
            raise IndexError('crease index {0} out of range'.format(crease))
        return MOUNTAIN if self.bits >> crease & 1 else VALLEY

    @property
    def values(self):
        return tuple(MOUNTAIN if self.bits >> i & 1 else VALLEY
                     for i in range(self.size))

    @property
    def mountains(self):
        return bin(self.bits).count('1')

    def flip(self, mask):
        '''Negate every crease whose bit is set in *mask*.'''
        return self._replace(bits=self.bits ^ mask)

    def to_string(self):
        return ''.join('M' if self.bits >> i & 1 else 'V'
                       for i in range(self.size))


def star_from_angles(angles, degrees=True):
    '''Build a standalone :class:`VertexStar` whose creases are numbered
    ``0..k-1``. Handy for working with a single vertex.
    '''
    if degrees:
        angles = [math.radians(a) for a in angles]
    angles = tuple(float(a) for a in angles)
    return VertexStar(None, tuple(range(len(angles))), angles)


def kawasaki_holds(star):
    '''Return True if the alternating sum of the sector angles of *star*
    vanishes.

    :raises ValueError: if the star has an odd number of creases.
    '''
    if len(star.angles) % 2:
        raise ValueError('a vertex star must have an even number of creases')
    alternating = sum(a if i % 2 == 0 else -a
                      for i, a in enumerate(star.angles))
    return abs(alternating) < TOLERANCE


def maekawa_holds(star, assignment):
    '''Return True if mountains and valleys around *star* differ by two.'''
    return abs(sum(assignment.value(c) for c in star.creases)) == 2


def big_little_big_violations(star, assignment):
    '''Return the indices of the sectors that are strictly smaller than both
    neighbours and are bordered by two creases of the same type. Sector *i*
    lies between ``creases[i]`` and ``creases[i + 1]``.
    '''
    angles = star.angles
    size = len(angles)
    violations = []
    for i, angle in enumerate(angles):
        if not (angle < angles[i - 1] - TOLERANCE
                and angle < angles[(i + 1) % size] - TOLERANCE):
            continue
        left = assignment.value(star.creases[i])
        right = assignment.value(star.creases[(i + 1) % size])
        if left == right:
            violations.append(i)
    return violations


def direction_tag(p, q):
    '''Geometric class of the segment *pq* derived from its direction.'''
    angle = math.atan2(q[1] - p[1], q[0] - p[0]) % math.pi
    if angle < TOLERANCE or abs(angle - math.pi) < TOLERANCE:
        return 'horizontal'
    if abs(angle - math.pi / 2) < TOLERANCE:
        return 'vertical'
    return 'diagonal'


def point_key(point):
    # adding 0.0 turns -0.0 into 0.0
    return (round(point[0], 9) + 0.0, round(point[1], 9) + 0.0)


def _midpoint_key(midpoint):
    return (round(midpoint[1], 9), round(midpoint[0], 9))


def signed_area(points):
    '''Shoelace area, positive for counterclockwise polygons.'''
    total = 0.0
    for (x1, y1), (x2, y2) in zip(points, points[1:] + points[:1]):
        total += x1 * y2 - x2 * y1
    return total / 2.0


def corner_angles(points):
    '''Interior angles of a simple polygon, in the order of its vertices.'''
    if signed_area(list(points)) < 0:
        return corner_angles(points[::-1])[::-1]
    size = len(points)
    angles = []
    for i, (px, py) in enumerate(points):
        ax, ay = points[i - 1]
        bx, by = points[(i + 1) % size]
        d1 = (px - ax, py - ay)
        d2 = (bx - px, by - py)
        turn = math.atan2(d1[0] * d2[1] - d1[1] * d2[0],
                          d1[0] * d2[0] + d1[1] * d2[1])
        angles.append(math.pi - turn)
    return angles


def shape_tag(points):
    '''Classify a face polygon as rectangular, non_rectangular or other.'''
    corners = [a for a in corner_angles(list(points))
               if abs(a - math.pi) > TOLERANCE]
    if len(corners) != 4:
        return 'other'
    if all(abs(a - math.pi / 2) < TOLERANCE for a in corners):
        return 'rectangular'
    return 'non_rectangular'


class CreasePattern(object):
    '''A planar crease pattern.

    *vertices* are 2-D points, *creases* are vertex pairs, *faces* are
    vertex cycles. An edge of a face that is not listed among the creases lies
    on the paper boundary. A vertex is interior when none of its edges lies on
    the boundary; only interior vertices get a :class:`VertexStar`.

    *tags* give the geometric class of every crease (derived from the edge
    direction when omitted) and *params* records the generator arguments.
    Patterns are not meant to be modified after construction.
    '''

    def __init__(self, vertices, creases, faces, family='custom', tags=None,
                 params=None):
        if family not in FAMILIES:
            raise ValueError('unknown pattern family {0!r}'.format(family))
        self.family = family
        self.params = dict(params or {})
        self.vertices = tuple((float(x), float(y)) for x, y in vertices)
        self.creases = tuple(tuple(int(v) for v in c) for c in creases)
        self.faces = tuple(tuple(int(v) for v in f) for f in faces)
        self._index = {}
        for i, crease in enumerate(self.creases):
            if len(crease) != 2 or crease[0] == crease[1]:
                raise ValueError('malformed crease {0!r}'.format(crease))
            for v in crease:
                if not 0 <= v < len(self.vertices):
                    raise ValueError('crease {0} references unknown vertex '
                                     '{1}'.format(i, v))
            key = frozenset(crease)
            if key in self._index:
                raise ValueError('duplicated crease {0!r}'.format(crease))
            self._index[key] = i
        if tags is None:
            tags = [direction_tag(self.vertices[u], self.vertices[v])
                    for u, v in self.creases]
        self.tags = tuple(tags)
        if len(self.tags) != len(self.creases):
            raise ValueError('expected one tag per crease')
        self._build_incidence()
        self._build_stars()

    def _build_incidence(self):
        face_creases = []
        crease_faces = [[] for _ in self.creases]
        boundary = set()
        for f, cycle in enumerate(self.faces):
            if len(cycle) < 3:
                raise ValueError('face {0} has fewer than 3 vertices'.format(f))
            own = []
            for u, v in zip(cycle, cycle[1:] + cycle[:1]):
                crease = self._index.get(frozenset((u, v)))
                if crease is None:
                    boundary.add(frozenset((u, v)))
                else:
                    own.append(crease)
                    crease_faces[crease].append(f)
            face_creases.append(tuple(own))
        for i, faces in enumerate(crease_faces):
            if len(faces) != 2:
                raise ValueError('crease {0} borders {1} faces instead of '
                                 'two'.format(i, len(faces)))
        self.face_creases = tuple(face_creases)
        self.crease_faces = tuple(tuple(f) for f in crease_faces)
        self.boundary_edges = tuple(sorted(tuple(sorted(e)) for e in boundary))
        self.face_masks = tuple(sum(1 << c for c in own)
                                for own in self.face_creases)
        self._between = {}
        for i, (f, g) in enumerate(self.crease_faces):
            self._between.setdefault(frozenset((f, g)), i)

    def _build_stars(self):
        on_boundary = set(v for edge in self.boundary_edges for v in edge)
        incident = collections.defaultdict(list)
        for i, (u, v) in enumerate(self.creases):
            incident[u].append(i)
            incident[v].append(i)
        in_face = set(v for cycle in self.faces for v in cycle)
        stars = []
        vertex_star = {}
        for vertex in range(len(self.vertices)):
            if (vertex in on_boundary or vertex not in in_face
                    or not incident[vertex]):
                continue
            x, y = self.vertices[vertex]
            directions = []
            for crease in incident[vertex]:
                u, v = self.creases[crease]
                other = self.vertices[v if u == vertex else u]
                directions.append(
                    (math.atan2(other[1] - y, other[0] - x), crease))
            directions.sort()
            if len(directions) % 2:
                raise ValueError('interior vertex {0} has odd degree '
                                 '{1}'.format(vertex, len(directions)))
            angles = []
            for i, (theta, _) in enumerate(directions):
                following = directions[(i + 1) % len(directions)][0]
                angles.append((following - theta) % (2 * math.pi))
            vertex_star[vertex] = len(stars)
            stars.append(VertexStar(vertex, tuple(c for _, c in directions),
                                    tuple(angles)))
        self.stars = tuple(stars)
        self.vertex_star = vertex_star
        self.interior = tuple(v in vertex_star
                              for v in range(len(self.vertices)))
        face_stars = []
        for f, cycle in enumerate(self.faces):
            own = set(self.face_creases[f])
            entries = []
            for vertex in cycle:
                s = vertex_star.get(vertex)
                if s is None:
                    continue
                mask = 0
                for j, crease in enumerate(self.stars[s].creases):
                    if crease in own:
                        mask |= 1 << j
                entries.append((s, mask))
            face_stars.append(tuple(entries))
        self.face_stars = tuple(face_stars)

    @classmethod
    def from_polygons(cls, polygons, family='custom', tagger=None,
                      crease_key=None, params=None):
        '''Assemble a pattern from face polygons.

        Vertices are merged when their coordinates agree to 9 decimals and are
        numbered by ``(y, x)``. A merged vertex keeps the coordinates it was
        first given, unrounded. Faces keep the order of *polygons* and are
        oriented counterclockwise. Edges shared by two polygons become creases,
        sorted by *crease_key* applied to their midpoint (``(y, x)`` by
        default); edges used once are paper boundary.
        '''
        first_seen = {}
        for polygon in polygons:
            for p in polygon:
                first_seen.setdefault(point_key(p),
                                      (float(p[0]) + 0.0, float(p[1]) + 0.0))
        order = sorted(first_seen, key=lambda k: (k[1], k[0]))
        index = dict((k, i) for i, k in enumerate(order))
        keys = [first_seen[k] for k in order]
        faces = []
        counts = collections.Counter()
        for polygon in polygons:
            cycle = []
            for point in polygon:
                i = index[point_key(point)]
                if not cycle or cycle[-1] != i:
                    cycle.append(i)
            if len(cycle) > 1 and cycle[0] == cycle[-1]:
                cycle.pop()
            if signed_area([keys[i] for i in cycle]) < 0:
                cycle.reverse()
            faces.append(cycle)
            for u, v in zip(cycle, cycle[1:] + cycle[:1]):
                counts[frozenset((u, v))] += 1
        if any(count > 2 for count in counts.values()):
            raise ValueError('an edge is shared by more than two faces')
        key = crease_key or _midpoint_key

        def midpoint(edge):
            (x1, y1), (x2, y2) = keys[edge[0]], keys[edge[1]]
            return ((x1 + x2) / 2.0, (y1 + y2) / 2.0)

        creases = sorted((tuple(sorted(e)) for e, count in counts.items()
                          if count == 2), key=lambda e: key(midpoint(e)))
        tag = tagger or direction_tag
        tags = [tag(keys[u], keys[v]) for u, v in creases]
        return cls(keys, creases, faces, family, tags, params)

    @property
    def interior_vertices(self):
        return tuple(star.vertex for star in self.stars)

    def crease_between(self, face_a, face_b):
        '''Index of the crease shared by two faces, or None.'''
        return self._between.get(frozenset((face_a, face_b)))

    def face_points(self, face):
        return [self.vertices[v] for v in self.faces[face]]

    def neighbours(self, face):
        '''Faces sharing a crease with *face*, as ``(face, crease)`` pairs.'''
        result = []
        for crease in self.face_creases[face]:
            f, g = self.crease_faces[crease]
            result.append((g if f == face else f, crease))
        return result

    def __repr__(self):
        return ('CreasePattern(family={0!r}, vertices={1}, creases={2}, '
                'faces={3})'.format(self.family, len(self.vertices),
                                    len(self.creases), len(self.faces)))


_TABLES = {}


def star_table(star):
    '''Validity lookup table for *star*: entry *code* tells whether the local
    assignment encoded by *code* (bit *j* set iff the *j*-th crease of the
    star is a mountain) folds flat. Tables are cached by angle signature.
    '''
    key = tuple(round(a, 9) for a in star.angles)
    table = _TABLES.get(key)
    if table is None:
        # vertex depends on this module
        from foldflip.vertex import is_valid_vertex

        degree = len(star.angles)
        template = VertexStar(None, tuple(range(degree)), star.angles)
        table = tuple(is_valid_vertex(template, MVAssignment(code, degree))
                      for code in range(1 << degree))
        _TABLES[key] = table
    return table


def star_code(star, bits):
    '''Encode the restriction of packed assignment *bits* to *star*.'''
    code = 0
    for j, crease in enumerate(star.creases):
        if bits >> crease & 1:
            code |= 1 << j
    return code


def _check_size(pattern, assignment):
    if assignment.size != len(pattern.creases):
        raise ValueError('assignment covers {0} creases but the pattern has '
                         '{1}'.format(assignment.size, len(pattern.creases)))


def _check_face(pattern, face):
    if not 0 <= face < len(pattern.faces):
        raise ValueError('face index {0} out of range'.format(face))


def is_locally_flat_foldable(pattern, assignment):
    '''Return True if every interior vertex folds flat under *assignment*.'''
    _check_size(pattern, assignment)
    bits = assignment.bits
    for star in pattern.stars:
        if not star_table(star)[star_code(star, bits)]:
            return False
    return True


def flip_face(pattern, assignment, face):
    '''Return the assignment obtained by negating every crease of *face*.'''
    _check_size(pattern, assignment)
    _check_face(pattern, face)
    return assignment.flip(pattern.face_masks[face])


def face_flippable(pattern, bits, face):
    '''Flippability test for an assignment already known to be valid. Only
    the stars at the corners of *face* are inspected.
    '''
    for s, mask in pattern.face_stars[face]:
        star = pattern.stars[s]
        if not star_table(star)[star_code(star, bits) ^ mask]:
            return False
    return True


def is_flippable(pattern, assignment, face):
    '''Return True if flipping *face* keeps *assignment* locally
    flat-foldable.

    :raises ValueError: if *assignment* is not locally flat-foldable.
    '''
    _check_face(pattern, face)
    if not is_locally_flat_foldable(pattern, assignment):
        raise ValueError('assignment is not locally flat-foldable')
    return face_flippable(pattern, assignment.bits, face)


def flippable_faces(pattern, assignment):
    '''Indices of the flippable faces of a valid assignment.'''
    return [f for f in range(len(pattern.faces))
            if face_flippable(pattern, assignment.bits, f)]


class FlipTracker(object):
    '''Keep per-vertex codes of a valid assignment up to date while faces
    are flipped, so that each flippability test costs one table lookup per
    corner of the face.
    '''

    def __init__(self, pattern, assignment):
        _check_size(pattern, assignment)
        self.pattern = pattern
        self.bits = assignment.bits
        self.size = assignment.size
        self.tables = [star_table(star) for star in pattern.stars]
        self.codes = [star_code(star, self.bits) for star in pattern.stars]
        self.masks = pattern.face_masks
        self.corners = pattern.face_stars

    def flippable(self, face):
        tables, codes = self.tables, self.codes
        for s, mask in self.corners[face]:
            if not tables[s][codes[s] ^ mask]:
                return False
        return True

    def flip(self, face):
        codes = self.codes
        for s, mask in self.corners[face]:
            codes[s] ^= mask
        self.bits ^= self.masks[face]

    @property
    def assignment(self):
        return MVAssignment(self.bits, self.size)


def face_classification(pattern):
    '''Compute the proper 2-colouring of the face-adjacency graph by
    breadth-first search together with the shape tag of every face.

    :raises ValueError: if the face-adjacency graph is not bipartite.
    '''
    parity = [None] * len(pattern.faces)
    for start in range(len(pattern.faces)):
        if parity[start] is not None:
            continue
        parity[start] = 0
        queue = collections.deque([start])
        while queue:
            face = queue.popleft()
            for other, _ in pattern.neighbours(face):
                if parity[other] is None:
                    parity[other] = 1 - parity[face]
                    queue.append(other)
                elif parity[other] == parity[face]:
                    raise ValueError('face adjacency graph is not bipartite '
                                     '(faces {0} and {1})'.format(face, other))
    tags = tuple(shape_tag(pattern.face_points(f))
                 for f in range(len(pattern.faces)))
    return FaceClass(tuple(parity), tags)


def pattern_to_dict(pattern, assignment=None):
    '''Convert a pattern, and optionally an assignment, to the JSON layout.'''
    if assignment is None:
        letters = 'U' * len(pattern.creases)
    else:
        _check_size(pattern, assignment)
        letters = assignment.to_string()
    return {
        'file_creator': 'foldflip',
        'frame_class': pattern.family,
        'frame_foldflip:params': pattern.params,
        'vertices_coords': [list(v) for v in pattern.vertices],
        'edges_vertices': [list(c) for c in pattern.creases],
        'edges_assignment': list(letters),
        'edges_foldflip:class': list(pattern.tags),
        'faces_vertices': [list(f) for f in pattern.faces],
    }


def pattern_from_dict(data):
    '''Inverse of :func:`pattern_to_dict`. Returns ``(pattern, assignment)``
    where the assignment is None unless every crease is ``M`` or ``V``.
    '''
    try:
        vertices = data['vertices_coords']
        creases = data['edges_vertices']
        faces = data['faces_vertices']
    except KeyError as exc:
        raise ValueError('missing field {0} in pattern file'.format(exc))
    pattern = CreasePattern(vertices, creases, faces,
                            family=data.get('frame_class', 'custom'),
                            tags=data.get('edges_foldflip:class'),
                            params=data.get('frame_foldflip:params'))
    letters = ''.join(data.get('edges_assignment') or [])
    assignment = None
    if letters and set(letters) <= set('MV'):
        assignment = MVAssignment.from_string(letters)
        _check_size(pattern, assignment)
    return pattern, assignment


def dumps_pattern(pattern, assignment=None):
    '''Serialize to canonical JSON text (sorted keys, one space indent).'''
    return json.dumps(pattern_to_dict(pattern, assignment), sort_keys=True,
                      indent=1)


def loads_pattern(text):
    return pattern_from_dict(json.loads(text))


def save_pattern(pattern, fobj, assignment=None):
    fobj.write(dumps_pattern(pattern, assignment))
    fobj.write('\n')


def load_pattern(fobj):
    return loads_pattern(fobj.read())
