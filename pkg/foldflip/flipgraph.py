'''This module enumerates the locally flat-foldable assignments of a pattern,
builds the graph whose edges are face flips and checks the hypercube
structures of square twists and square grids.
'''

import collections

import networkx as nx

from foldflip.core import (MVAssignment, StateSpaceOverflow,
                           face_classification, face_flippable,
                           is_locally_flat_foldable, star_code, star_table)
from foldflip.patterns import reference_assignment

SCAN_MAX_CREASES = 24
BFS_MAX_STATES = 2 ** 16
STRATEGIES = ('auto', 'scan', 'bfs')
# families whose flip graphs are known to be connected
CONNECTED_FAMILIES = ('square_grid', 'square_twist', 'miura', 'triangle',
                      'single_vertex')

GraphInvariants = collections.namedtuple(
    'GraphInvariants',
    ['connected', 'components', 'diameter', 'degree_histogram', 'bipartite'],
)
HypercubeCheck = collections.namedtuple(
    'HypercubeCheck', ['ok', 'dimension', 'labeling', 'counterexample'])
QuotientCheck = collections.namedtuple(
    'QuotientCheck', ['ok', 'states', 'faces', 'counterexample'])


def _scan(pattern):
    size = len(pattern.creases)
    if size > SCAN_MAX_CREASES:
        raise StateSpaceOverflow('direct scan supports up to {0} creases, the '
                                 'pattern has {1}'.format(SCAN_MAX_CREASES,
                                                          size))
    closing = collections.defaultdict(list)
    for star in pattern.stars:
        closing[max(star.creases)].append((star, star_table(star)))
    found = []

    def extend(crease, bits):
        if crease == size:
            found.append(bits)
            return
        for candidate in (bits, bits | 1 << crease):
            if all(table[star_code(star, candidate)]
                   for star, table in closing[crease]):
                extend(crease + 1, candidate)

    extend(0, 0)
    return sorted(found)


def _closure(pattern, start, limit):
    if not is_locally_flat_foldable(pattern, start):
        raise ValueError('BFS start is not locally flat-foldable')
    masks = pattern.face_masks
    seen = set([start.bits])
    queue = collections.deque([start.bits])
    while queue:
        bits = queue.popleft()
        for face in range(len(pattern.faces)):
            if not face_flippable(pattern, bits, face):
                continue
            following = bits ^ masks[face]
            if following in seen:
                continue
            if len(seen) >= limit:
                raise StateSpaceOverflow('more than {0} states reachable by '
                                         'face flips'.format(limit))
            seen.add(following)
            queue.append(following)
    return sorted(seen)


def enumerate_states(pattern, strategy='auto', start=None,
                     limit=BFS_MAX_STATES):
    '''Return every locally flat-foldable assignment, sorted by packed bits.

    ``'scan'`` tries all assignments crease by crease and prunes as soon as a
    vertex is complete and invalid. ``'bfs'`` closes *start* (the reference
    assignment by default) under face flips, which only finds everything when
    the flip graph is connected. ``'auto'`` uses BFS for the families known to
    be connected and the scan otherwise.
    '''
    if strategy not in STRATEGIES:
        raise ValueError('unknown enumeration strategy {0!r}'.format(strategy))
    if strategy == 'auto':
        strategy = 'bfs' if pattern.family in CONNECTED_FAMILIES else 'scan'
    size = len(pattern.creases)
    if strategy == 'scan':
        states = _scan(pattern)
    else:
        if start is None:
            start = reference_assignment(pattern)
        states = _closure(pattern, start, limit)
    return [MVAssignment(bits, size) for bits in states]


class FlipGraph(object):
    '''The flip graph of a pattern.

    ``adjacency[i]`` lists ``(j, face)`` for every face whose flip takes
    state *i* to state *j*; two faces producing the same move give two
    entries.
    '''

    def __init__(self, pattern, states, adjacency):
        self.pattern = pattern
        self.states = tuple(states)
        self.adjacency = tuple(tuple(row) for row in adjacency)
        self.index = dict((s.bits, i) for i, s in enumerate(self.states))

    def __len__(self):
        return len(self.states)

    def degree(self, i):
        return len(self.adjacency[i])

    def edges(self):
        '''Yield each face-labelled edge once as ``(i, j, face)``.'''
        for i, row in enumerate(self.adjacency):
            for j, face in row:
                if i < j:
                    yield i, j, face

    def to_networkx(self):
        graph = nx.Graph()
        graph.add_nodes_from(range(len(self.states)))
        graph.add_edges_from((i, j) for i, j, _ in self.edges())
        return graph


def build_flip_graph(pattern, strategy='auto', start=None):
    '''Enumerate the states of *pattern* and connect them by face flips.'''
    states = enumerate_states(pattern, strategy, start)
    index = dict((s.bits, i) for i, s in enumerate(states))
    masks = pattern.face_masks
    adjacency = []
    for state in states:
        row = []
        for face in range(len(pattern.faces)):
            if face_flippable(pattern, state.bits, face):
                row.append((index[state.bits ^ masks[face]], face))
        adjacency.append(row)
    return FlipGraph(pattern, states, adjacency)


def connected_components(graph):
    '''State indices of each component, sorted by smallest index.'''
    return sorted((sorted(c) for c in
                   nx.connected_components(graph.to_networkx())), key=min)


def graph_invariants(graph):
    '''Connectivity, component count, diameter (None when disconnected),
    degree histogram and bipartiteness. Parallel edges count once.'''
    simple = graph.to_networkx()
    components = nx.number_connected_components(simple)
    connected = components == 1
    histogram = collections.Counter(d for _, d in simple.degree())
    return GraphInvariants(
        connected=connected,
        components=components,
        diameter=nx.diameter(simple) if connected else None,
        degree_histogram=dict(sorted(histogram.items())),
        bipartite=nx.is_bipartite(simple),
    )


def check_hypercube_isomorphism(graph, pattern):
    '''Label every state by which template each non-rectangular face
    carries (0 when its creases agree with the reference assignment, 1 when
    they are all negated) and verify that this labeling is a bijection onto
    ``{0, 1}^d`` under which flips are unit moves.
    '''
    if pattern.family != 'square_twist':
        raise ValueError('the hypercube check applies to square twists, got '
                         '{0!r}'.format(pattern.family))
    tags = face_classification(pattern).shape_tags
    wings = [f for f, tag in enumerate(tags) if tag == 'non_rectangular']
    dimension = len(wings)
    masks = pattern.face_masks
    reference = reference_assignment(pattern).bits
    labels = []
    for state in graph.states:
        label = []
        for face in wings:
            difference = (state.bits ^ reference) & masks[face]
            if difference == 0:
                label.append(0)
            elif difference == masks[face]:
                label.append(1)
            else:
                return HypercubeCheck(False, dimension, tuple(labels),
                                      'face {0} of state {1} matches neither '
                                      'template'.format(face,
                                                        state.to_string()))
        labels.append(tuple(label))
    if len(set(labels)) != len(labels) or len(labels) != 2 ** dimension:
        return HypercubeCheck(False, dimension, tuple(labels),
                              '{0} states for dimension '
                              '{1}'.format(len(labels), dimension))
    position = dict((face, k) for k, face in enumerate(wings))
    for i, row in enumerate(graph.adjacency):
        if len(row) != dimension:
            return HypercubeCheck(False, dimension, tuple(labels),
                                  'state {0} has degree {1}'.format(i, len(row)))
        for j, face in row:
            moved = [k for k in range(dimension) if labels[i][k] != labels[j][k]]
            if face not in position or moved != [position[face]]:
                return HypercubeCheck(False, dimension, tuple(labels),
                                      'edge ({0}, {1}) through face {2} is not '
                                      'a unit move'.format(i, j, face))
    return HypercubeCheck(True, dimension, tuple(labels), None)


def flip_set(pattern, reference, state):
    '''Faces to flip from *reference* to reach *state* on a square grid.

    Labels propagate from face 0 across every crease on which the two
    assignments differ; the complementary set gives the same state.
    '''
    label = [None] * len(pattern.faces)
    label[0] = 0
    queue = collections.deque([0])
    differs = reference.bits ^ state.bits
    while queue:
        face = queue.popleft()
        for other, crease in pattern.neighbours(face):
            expected = label[face] ^ (differs >> crease & 1)
            if label[other] is None:
                label[other] = expected
                queue.append(other)
            elif label[other] != expected:
                raise ValueError('state is not reachable by face flips')
    return frozenset(f for f, value in enumerate(label) if value)


def check_quotient_hypercube(graph, pattern):
    '''Verify the square-grid flip graph is the Cayley graph of subsets of
    faces modulo complementation.'''
    if pattern.family != 'square_grid':
        raise ValueError('the quotient check applies to square grids, got '
                         '{0!r}'.format(pattern.family))
    faces = len(pattern.faces)
    states = len(graph.states)

    def failed(message):
        return QuotientCheck(False, states, faces, message)

    if states != 2 ** (faces - 1):
        return failed('{0} states instead of {1}'.format(states,
                                                         2 ** (faces - 1)))
    reference = reference_assignment(pattern)
    masks = pattern.face_masks
    everything = frozenset(range(faces))
    total = 0
    for mask in masks:
        total ^= mask
    if total:
        return failed('flipping every face changes the assignment')
    sets = []
    for state in graph.states:
        flipped = flip_set(pattern, reference, state)
        bits = reference.bits
        for face in flipped:
            bits ^= masks[face]
        if bits != state.bits:
            return failed('flip set of {0} does not reproduce '
                          'it'.format(state.to_string()))
        sets.append(flipped)
    for i, row in enumerate(graph.adjacency):
        if len(row) != faces:
            return failed('state {0} has degree {1}'.format(i, len(row)))
        for j, face in row:
            moved = sets[i] ^ sets[j]
            if moved != frozenset([face]) and moved != everything - set([face]):
                return failed('edge ({0}, {1}) through face {2} is not a '
                              'single flip'.format(i, j, face))
    return QuotientCheck(True, states, faces, None)


def graph_to_dict(graph):
    return {
        'states': [s.to_string() for s in graph.states],
        'edges': [[i, j, face] for i, j, face in graph.edges()],
    }
