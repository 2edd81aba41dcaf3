'''This module contains the face-flip Markov chain, Glauber dynamics on
anchored grid colorings, the exact sampler for square grids and the mixing
diagnostics computed on enumerated state spaces.

All randomness comes from :class:`numpy.random.Generator` instances seeded
by the caller. Independent trajectories get one child of
``SeedSequence(seed).spawn(count)`` each.
'''

import collections
import math
import multiprocessing
from fractions import Fraction

import numpy as np

from foldflip.core import (FlipTracker, MVAssignment, StateSpaceOverflow,
                           flip_face, is_flippable, is_locally_flat_foldable)
from foldflip.flipgraph import (BFS_MAX_STATES, build_flip_graph,
                                connected_components)
from foldflip.miura_coloring import (allowed_colors, enumerate_colorings,
                                     recolor)
from foldflip.patterns import (PatternSpec, generate, reference_assignment,
                               square_grid)

RATIONAL_MAX_STATES = 4096
DENSE_MAX_STATES = 4096
MAX_MIXING_STEPS = 100000
DEFAULT_EPS = Fraction(1, 4)
# numpy draws are made in blocks of this many steps
CHUNK = 1 << 16

ChainConfig = collections.namedtuple(
    'ChainConfig', ['pattern', 'initial', 'steps', 'seed', 'interval'],
    defaults=(0,))
ChainResult = collections.namedtuple(
    'ChainResult', ['final', 'steps', 'accepted', 'face_counts', 'trace'])
TraceRow = collections.namedtuple('TraceRow', ['step', 'accepted', 'mountains'])
Distribution = collections.namedtuple('Distribution', ['probabilities', 'mode'])
ScalingRow = collections.namedtuple(
    'ScalingRow',
    ['size', 'faces', 'omega', 'tmix', 'gap', 'normalized', 'mode',
     'components'],
)


class ReducibleChainError(ValueError):
    '''The flip graph has more than one component.'''

    def __init__(self, components):
        self.components = components
        super(ReducibleChainError, self).__init__(
            'the face-flip chain is reducible: {0} '
            'components'.format(components))


class TransitionMatrix(collections.namedtuple('TransitionMatrix',
                                              ['states', 'rows', 'mode'])):
    '''Sparse transition matrix over enumerated states. ``rows[i]`` maps
    column index to probability; entries are Fractions in ``'rational'``
    mode and floats in ``'double'`` mode.'''

    __slots__ = ()

    def dense(self):
        size = len(self.states)
        if size > DENSE_MAX_STATES:
            raise StateSpaceOverflow('dense matrices support up to {0} '
                                     'states'.format(DENSE_MAX_STATES))
        matrix = np.zeros((size, size))
        for i, row in enumerate(self.rows):
            for j, p in row.items():
                matrix[i, j] = float(p)
        return matrix


def face_flip_step(pattern, assignment, rng):
    '''One step of the lazy face-flip chain: choose a face uniformly, then
    flip it with probability 1/2 if that keeps the assignment valid.'''
    face = int(rng.integers(len(pattern.faces)))
    coin = int(rng.integers(2))
    if not is_flippable(pattern, assignment, face) or not coin:
        return assignment
    return flip_face(pattern, assignment, face)


def _run(pattern, initial, steps, rng, interval=0):
    if steps < 0:
        raise ValueError('step budget must be non-negative')
    if not is_locally_flat_foldable(pattern, initial):
        raise ValueError('initial assignment is not locally flat-foldable')
    tracker = FlipTracker(pattern, initial)
    faces = len(pattern.faces)
    counts = [0] * faces
    accepted = 0
    trace = []
    done = 0
    while done < steps:
        chunk = min(CHUNK, steps - done)
        picks = rng.integers(0, faces, size=chunk).tolist()
        coins = rng.integers(0, 2, size=chunk).tolist()
        for offset in range(chunk):
            face = picks[offset]
            if coins[offset] and tracker.flippable(face):
                tracker.flip(face)
                accepted += 1
                counts[face] += 1
            if interval and (done + offset + 1) % interval == 0:
                trace.append(TraceRow(done + offset + 1, accepted,
                                      bin(tracker.bits).count('1')))
        done += chunk
    return ChainResult(tracker.assignment, steps, accepted, tuple(counts),
                       tuple(trace))


def run_chain(config):
    '''Run the face-flip chain for ``config.steps`` steps. Identical seeds
    give identical results.'''
    rng = np.random.default_rng(config.seed)
    return _run(config.pattern, config.initial, config.steps, rng,
                config.interval)


def _trajectory(job):
    pattern, initial, steps, stream, interval = job
    return _run(pattern, initial, steps, np.random.default_rng(stream),
                interval)


def run_trajectories(config, count, workers=1):
    '''Run *count* independent copies of the chain, one spawned seed stream
    each, optionally in a process pool.'''
    streams = np.random.SeedSequence(config.seed).spawn(count)
    jobs = [(config.pattern, config.initial, config.steps, stream,
             config.interval) for stream in streams]
    if workers > 1:
        with multiprocessing.Pool(workers) as pool:
            return pool.map(_trajectory, jobs)
    return [_trajectory(job) for job in jobs]


def exact_sample_square_grid(m, n, rng):
    '''Uniform sample of the valid assignments of the m x n grid: flip each
    face of the reference assignment with probability 1/2.'''
    pattern = square_grid(m, n)
    flips = rng.integers(0, 2, size=len(pattern.faces)).tolist()
    bits = reference_assignment(pattern).bits
    for face, flip in enumerate(flips):
        if flip:
            bits ^= pattern.face_masks[face]
    return MVAssignment(bits, len(pattern.creases))


def incidence_matrix(pattern):
    '''Face by crease 0/1 matrix.'''
    matrix = np.zeros((len(pattern.faces), len(pattern.creases)),
                      dtype=np.uint8)
    for face, creases in enumerate(pattern.face_creases):
        matrix[face, list(creases)] = 1
    return matrix


def exact_sample_square_grid_batch(pattern, count, rng):
    '''Draw *count* uniform square-grid samples at once. Returns an int8
    array of shape ``(count, creases)`` holding the MV values.'''
    if pattern.family != 'square_grid':
        raise ValueError('batch sampling needs a square grid, got '
                         '{0!r}'.format(pattern.family))
    subsets = rng.integers(0, 2, size=(count, len(pattern.faces)),
                           dtype=np.uint8)
    # every crease borders two faces, so the products fit in uint8
    toggles = (subsets @ incidence_matrix(pattern)) & 1
    reference = np.array(reference_assignment(pattern).values, dtype=np.int8)
    return reference * (1 - 2 * toggles.astype(np.int8))


def glauber_step_coloring(coloring, rng):
    '''One Glauber update: pick a vertex uniformly, then a color uniformly
    among those its neighbours leave free.'''
    colors = coloring.colors
    n = len(colors[0])
    r, c = divmod(int(rng.integers(len(colors) * n)), n)
    allowed = allowed_colors(colors, r, c)
    choice = allowed[int(rng.integers(len(allowed)))]
    if choice == colors[r][c]:
        return coloring
    return recolor(coloring, r, c, choice)


def transition_matrix(pattern, graph=None, rational=None):
    '''Transition matrix of the lazy face-flip chain over the enumerated
    states. Exact Fractions are used up to :data:`RATIONAL_MAX_STATES`
    states unless *rational* says otherwise.'''
    if graph is None:
        graph = build_flip_graph(pattern)
    size = len(graph.states)
    if size > BFS_MAX_STATES:
        raise StateSpaceOverflow('{0} states exceed the matrix bound '
                                 '{1}'.format(size, BFS_MAX_STATES))
    if rational is None:
        rational = size <= RATIONAL_MAX_STATES
    faces = len(pattern.faces)
    step = Fraction(1, 2 * faces) if rational else 1.0 / (2 * faces)
    rows = []
    for i, adjacency in enumerate(graph.adjacency):
        row = {i: 1 - len(adjacency) * step}
        for j, _ in adjacency:
            row[j] = row.get(j, 0) + step
        rows.append(row)
    return TransitionMatrix(graph.states, tuple(rows),
                            'rational' if rational else 'double')


def uniform_distribution(states, mode='rational'):
    p = Fraction(1, len(states)) if mode == 'rational' else 1.0 / len(states)
    return Distribution(dict((s, p) for s in states), mode)


def point_mass(states, state, mode='rational'):
    one, zero = (Fraction(1), Fraction(0)) if mode == 'rational' else (1.0, 0.0)
    if state not in states:
        raise ValueError('state is not part of the universe')
    return Distribution(dict((s, one if s == state else zero)
                             for s in states), mode)


def tv_distance(mu, nu):
    '''Total variation distance, half the L1 distance.'''
    if set(mu.probabilities) != set(nu.probabilities):
        raise ValueError('distributions live on different universes')
    total = sum(abs(p - nu.probabilities[x])
                for x, p in mu.probabilities.items())
    if mu.mode == nu.mode == 'rational':
        return Fraction(total) / 2
    return float(total) / 2


def step_distribution(matrix, distribution):
    '''Push a distribution through one step of *matrix*.'''
    result = dict((s, 0 * p) for s, p in distribution.probabilities.items())
    states = matrix.states
    for i, row in enumerate(matrix.rows):
        p = distribution.probabilities[states[i]]
        if not p:
            continue
        for j, q in row.items():
            result[states[j]] += p * q
    return Distribution(result, matrix.mode)


def distribution_after(pattern, start, steps, graph=None):
    '''Exact law of the chain after *steps* steps from *start*.'''
    matrix = transition_matrix(pattern, graph)
    distribution = point_mass(matrix.states, start, matrix.mode)
    for _ in range(steps):
        distribution = step_distribution(matrix, distribution)
    return distribution


def _irreducible_matrix(pattern, graph):
    if graph is None:
        graph = build_flip_graph(pattern)
    components = connected_components(graph)
    if len(components) > 1:
        raise ReducibleChainError(len(components))
    return transition_matrix(pattern, graph, rational=False).dense()


def tv_profile(pattern, steps, graph=None):
    '''Worst-case distance to uniform over point-mass starts for
    ``t = 0..steps`` (float64).'''
    matrix = _irreducible_matrix(pattern, graph)
    size = len(matrix)
    current = np.eye(size)
    profile = []
    for _ in range(steps + 1):
        profile.append(float(np.abs(current - 1.0 / size).sum(axis=1).max() / 2))
        current = current @ matrix
    return profile


def exact_mixing_time(pattern, eps=DEFAULT_EPS, graph=None,
                      max_steps=MAX_MIXING_STEPS):
    '''First t at which every point-mass start is within *eps* of uniform
    in total variation, by dense float64 matrix powering.

    :raises ReducibleChainError: if the flip graph is disconnected.
    '''
    matrix = _irreducible_matrix(pattern, graph)
    size = len(matrix)
    threshold = float(eps) + 1e-12
    current = np.eye(size)
    for t in range(max_steps + 1):
        if np.abs(current - 1.0 / size).sum(axis=1).max() / 2 <= threshold:
            return t
        current = current @ matrix
    raise ValueError('no convergence to {0} within {1} '
                     'steps'.format(eps, max_steps))


def spectral_gap(pattern, graph=None, tol=1e-10, max_iter=100000, seed=0):
    '''One minus the second largest eigenvalue, by power iteration on the
    complement of the constant vector. Eigenvalues of the lazy chain are
    non-negative, so the dominant remaining one is the second largest.'''
    matrix = _irreducible_matrix(pattern, graph)
    size = len(matrix)
    if size == 1:
        return 1.0
    vector = np.random.default_rng(seed).standard_normal(size)
    vector -= vector.mean()
    vector /= np.linalg.norm(vector)
    previous = None
    value = 0.0
    for _ in range(max_iter):
        image = matrix @ vector
        image -= image.mean()
        value = float(vector @ image)
        norm = np.linalg.norm(image)
        if norm == 0:
            value = 0.0
            break
        vector = image / norm
        if previous is not None and abs(value - previous) < tol:
            break
        previous = value
    return 1.0 - value


def dense_spectral_gap(pattern, graph=None):
    '''Cross-check of :func:`spectral_gap` through a full symmetric
    eigensolve.'''
    matrix = _irreducible_matrix(pattern, graph)
    if len(matrix) == 1:
        return 1.0
    eigenvalues = np.linalg.eigvalsh(matrix)
    return float(1.0 - eigenvalues[-2])


def mixing_bounds(gap, eps, pi_min):
    '''Lower and upper mixing-time bounds implied by the spectral gap.'''
    if not 0 < gap <= 1:
        raise ValueError('spectral gap must lie in (0, 1]')
    eps = float(eps)
    lower = (1.0 / gap - 1.0) * math.log(1.0 / (2 * eps))
    upper = (1.0 / gap) * math.log(1.0 / (eps * float(pi_min)))
    return lower, upper


def mixing_time_bound(tmix, eps):
    '''Extrapolate the mixing time at *eps* from the one at 1/4.'''
    if not 0 < eps < 1:
        raise ValueError('eps must lie in (0, 1)')
    return int(math.ceil(math.log2(1.0 / float(eps)))) * tmix


def parse_size(size):
    if isinstance(size, str):
        return tuple(int(part) for part in size.lower().split('x'))
    return tuple(size)


def mixing_row(pattern, label, eps=DEFAULT_EPS):
    '''Mixing diagnostics of one pattern as a :class:`ScalingRow`. A
    reducible chain gets ``tmix = 'reducible'`` and its component count.'''
    graph = build_flip_graph(pattern)
    faces = len(pattern.faces)
    try:
        tmix = exact_mixing_time(pattern, eps, graph)
    except ReducibleChainError as exc:
        return ScalingRow(label, faces, len(graph.states), 'reducible', None,
                          None, 'double', exc.components)
    gap = spectral_gap(pattern, graph)
    scale = faces * math.log(faces)
    return ScalingRow(label, faces, len(graph.states), tmix, gap,
                      tmix / scale if scale else None, 'double', 1)


def mixing_scaling_report(family, sizes, eps=DEFAULT_EPS, theta=None,
                          mode='alternating'):
    '''One row per size: faces, number of states, mixing time, spectral gap
    and mixing time over ``F log F``.'''
    rows = []
    for size in sizes:
        dims = parse_size(size)
        pattern = generate(PatternSpec(family, dims, theta, mode))
        rows.append(mixing_row(pattern, 'x'.join(str(d) for d in dims), eps))
    return rows


def face_flip_kernel(pattern, graph=None):
    '''Exact one-step kernel as nested dicts keyed by assignment.'''
    matrix = transition_matrix(pattern, graph, rational=True)
    states = matrix.states
    return dict((states[i], dict((states[j], p) for j, p in row.items()))
                for i, row in enumerate(matrix.rows))


def glauber_kernel(m, n):
    '''Exact one-step Glauber kernel on anchored colorings of the m x n
    grid.'''
    kernel = {}
    for coloring in enumerate_colorings(m, n):
        row = collections.defaultdict(Fraction)
        for r in range(m):
            for c in range(n):
                allowed = allowed_colors(coloring.colors, r, c)
                weight = Fraction(1, m * n * len(allowed))
                for color in allowed:
                    if color == coloring.colors[r][c]:
                        row[coloring] += weight
                    else:
                        row[recolor(coloring, r, c, color)] += weight
        kernel[coloring] = dict(row)
    return kernel
