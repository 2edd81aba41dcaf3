import networkx as nx
import pytest

from foldflip.core import MVAssignment, StateSpaceOverflow, flippable_faces
from foldflip.flipgraph import (build_flip_graph, check_hypercube_isomorphism,
                                check_quotient_hypercube,
                                connected_components, enumerate_states,
                                flip_set, graph_invariants, graph_to_dict)
from foldflip.patterns import (PatternSpec, generate, kite_flip_sets,
                               reference_assignment, square_grid)

# (spec, states)
STATE_COUNTS = [
    (PatternSpec('square_grid', (1, 2)), 2),
    (PatternSpec('square_grid', (2, 2)), 8),
    (PatternSpec('square_grid', (2, 3)), 32),
    (PatternSpec('miura', (2, 2)), 6),
    (PatternSpec('single_vertex', (3,)), 30),
    (PatternSpec('square_twist', (1, 1)), 16),
    (PatternSpec('kite', (3, 3)), 16),
]


@pytest.mark.parametrize('spec,states', STATE_COUNTS)
def test_state_counts(spec, states):
    assert len(enumerate_states(generate(spec))) == states


@pytest.mark.parametrize('spec', [PatternSpec('square_grid', (2, 3)),
                                  PatternSpec('miura', (2, 3)),
                                  PatternSpec('triangle', (1, 2)),
                                  PatternSpec('square_twist', (1, 1))])
def test_scan_and_bfs_agree(spec):
    pattern = generate(spec)
    assert enumerate_states(pattern, 'scan') == \
        enumerate_states(pattern, 'bfs')


def test_states_sorted_and_valid():
    pattern = generate(PatternSpec('miura', (2, 3)))
    states = enumerate_states(pattern, 'scan')
    assert [s.bits for s in states] == sorted(s.bits for s in states)
    assert reference_assignment(pattern) in states


def test_unknown_strategy(grid22):
    with pytest.raises(ValueError):
        enumerate_states(grid22, 'dfs')


def test_scan_overflow():
    with pytest.raises(StateSpaceOverflow):
        enumerate_states(square_grid(4, 5), 'scan')


def test_bfs_limit():
    with pytest.raises(StateSpaceOverflow):
        enumerate_states(square_grid(3, 3), 'bfs', limit=100)


def test_bfs_needs_valid_start(grid22):
    with pytest.raises(ValueError):
        enumerate_states(grid22, 'bfs', start=MVAssignment(0b1111, 4))


def test_grid22_invariants(grid22):
    graph = build_flip_graph(grid22)
    invariants = graph_invariants(graph)
    assert invariants.connected
    assert invariants.components == 1
    # subsets of four faces modulo complement with single-face moves
    assert invariants.diameter == 2
    assert invariants.degree_histogram == {4: 8}
    assert invariants.bipartite
    assert nx.is_isomorphic(graph.to_networkx(),
                            nx.complete_bipartite_graph(4, 4))


def test_edges_are_face_flips(grid22):
    graph = build_flip_graph(grid22)
    masks = grid22.face_masks
    edges = list(graph.edges())
    assert len(edges) == 16
    for i, j, face in edges:
        assert i < j
        assert graph.states[i].bits ^ graph.states[j].bits == masks[face]
    assert all(graph.degree(i) == 4 for i in range(len(graph)))


def test_twist_hypercube(twist_tile):
    pattern = twist_tile
    graph = build_flip_graph(pattern)
    check = check_hypercube_isomorphism(graph, pattern)
    assert check.ok, check.counterexample
    assert len(graph) == 2 ** check.dimension
    assert len(set(check.labeling)) == len(graph)


def test_twist_tile_invariants(twist_tile):
    invariants = graph_invariants(build_flip_graph(twist_tile))
    assert invariants.connected
    assert invariants.diameter == 4
    assert invariants.degree_histogram == {4: 16}


def test_hypercube_wrong_family(grid22):
    with pytest.raises(ValueError):
        check_hypercube_isomorphism(build_flip_graph(grid22), grid22)


@pytest.mark.parametrize('m,n', [(1, 2), (2, 2), (2, 3), (3, 3)])
def test_grid_quotient_hypercube(m, n):
    pattern = square_grid(m, n)
    check = check_quotient_hypercube(build_flip_graph(pattern), pattern)
    assert check.ok, check.counterexample
    assert check.states == 2 ** (m * n - 1)


def test_quotient_wrong_family(miura22):
    with pytest.raises(ValueError):
        check_quotient_hypercube(build_flip_graph(miura22), miura22)


def test_flip_set(grid22):
    reference = reference_assignment(grid22)
    assert flip_set(grid22, reference, reference) == frozenset()
    masks = grid22.face_masks
    target = reference.flip(masks[0] ^ masks[3])
    assert flip_set(grid22, reference, target) in (frozenset([0, 3]),
                                                  frozenset([1, 2]))


def test_flip_set_unreachable(grid22):
    reference = reference_assignment(grid22)
    with pytest.raises(ValueError):
        flip_set(grid22, reference, reference.flip(0b0001))


def test_kite_is_disconnected(kite33):
    graph = build_flip_graph(kite33)
    components = connected_components(graph)
    assert len(components) == len(kite_flip_sets(kite33)) == 4
    assert sum(len(c) for c in components) == 16
    invariants = graph_invariants(graph)
    assert not invariants.connected
    assert invariants.diameter is None


def test_connected_families():
    for spec in (PatternSpec('miura', (2, 2)),
                 PatternSpec('triangle', (2, 2)),
                 PatternSpec('single_vertex', (3,))):
        graph = build_flip_graph(generate(spec), 'scan')
        assert graph_invariants(graph).connected


def test_graph_to_dict(grid22):
    data = graph_to_dict(build_flip_graph(grid22))
    assert len(data['states']) == 8
    assert 'MMMV' in data['states']
    assert len(data['edges']) == 16
    assert all(len(edge) == 3 for edge in data['edges'])


@pytest.mark.parametrize('spec', [PatternSpec('kite', (2, 2)),
                                  PatternSpec('kite', (3, 3)),
                                  PatternSpec('kite', (3, 4), theta=20)])
def test_kite_only_extreme_corners_flip(spec):
    # every other kite has a right angle at an interior vertex
    pattern = generate(spec)
    corners = [0, len(pattern.faces) - 1]
    states = enumerate_states(pattern)
    assert len(states) == 2 ** len(kite_flip_sets(pattern))
    for state in states:
        assert flippable_faces(pattern, state) == corners
    graph = build_flip_graph(pattern)
    assert len(connected_components(graph)) == len(states) // 4
