import math
from fractions import Fraction

import pytest

from foldflip.chain import exact_sample_square_grid
from foldflip.core import (MVAssignment, StateSpaceOverflow,
                           is_locally_flat_foldable)
from foldflip.globalfold import (SIGMA_SP_SHAPE, Subgrid, check_extension,
                                 check_layer_order, contains_sigma_sp,
                                 count_global, count_locally_valid,
                                 estimate_global_probability, extend_partial,
                                 fold_image, is_globally_flat_foldable,
                                 neighborhood, sigma_sp, sigma_sp_tiles,
                                 subgrid_creases, subgrid_faces,
                                 tile_event_frequency)
from foldflip.flipgraph import enumerate_states
from foldflip.patterns import reference_assignment, square_grid

NEIGHBORHOOD_CASES = [
    (Subgrid(2, 3, 2, 2), Subgrid(1, 2, 4, 4)),
    (Subgrid(0, 0, 2, 2), Subgrid(0, 0, 3, 3)),
    (Subgrid(3, 5, 2, 2), Subgrid(2, 4, 3, 3)),
    (Subgrid(0, 0, 5, 7), Subgrid(0, 0, 5, 7)),
    (Subgrid(2, 2, 0, 3), Subgrid(2, 2, 0, 3)),
]

# sums of strips that stay within the enumeration bound
STACKING_CASES = [
    ((1, 2), (1, 2)),
    ((1, 3), (1, 3)),
    ((1, 4), (1, 4)),
    ((1, 5), (1, 5)),
    ((2, 3), (1, 3)),
    ((2, 2), (2, 2)),
]

# blocks flush with the grid edges, down to the whole grid
EDGE_BLOCK_CASES = [
    ((4, 3), (0, 0)),
    ((4, 3), (0, 3)),
    ((3, 6), (1, 0)),
    ((2, 5), (2, 1)),
    ((1, 6), (3, 0)),
    ((4, 6), (0, 0)),
]


def test_sigma_sp_is_locally_valid_not_global():
    pattern, assignment = sigma_sp()
    assert pattern.params['dims'] == list(SIGMA_SP_SHAPE)
    assert len(pattern.creases) == 13
    assert is_locally_flat_foldable(pattern, assignment)
    assert is_globally_flat_foldable(pattern, assignment) is None


def test_reference_folds(grid22):
    reference = reference_assignment(grid22)
    witness = is_globally_flat_foldable(grid22, reference)
    assert witness is not None
    assert sorted(witness.order) == [0, 1, 2, 3]
    assert check_layer_order(grid22, reference, witness.order)


def test_check_layer_order():
    pattern = square_grid(1, 2)
    state = reference_assignment(pattern)
    order = is_globally_flat_foldable(pattern, state).order
    assert check_layer_order(pattern, state, order)
    assert not check_layer_order(pattern, state, order[::-1])
    assert not check_layer_order(pattern, state, (0, 0))


def test_global_search_errors(grid22):
    with pytest.raises(StateSpaceOverflow):
        is_globally_flat_foldable(square_grid(4, 4),
                                  reference_assignment(square_grid(4, 4)))
    with pytest.raises(ValueError):
        is_globally_flat_foldable(grid22, MVAssignment(0b1111, 4))


def test_global_search_needs_grid(miura22):
    with pytest.raises(ValueError):
        is_globally_flat_foldable(miura22, reference_assignment(miura22))


def test_fold_image(grid22):
    image = fold_image(grid22)
    assert image.parity == (0, 1, 1, 0)
    assert image.crease_edges == ('right', 'bottom', 'bottom', 'right')


@pytest.mark.parametrize('n', [1, 2, 3, 4, 5])
def test_strips_always_fold(n):
    assert count_global(1, n) == 2 ** (n - 1)


def test_count_global_grid22():
    assert count_global(2, 2) == 8


@pytest.mark.parametrize('top,bottom', STACKING_CASES)
def test_stacking_bound(top, bottom):
    # the seam between the two strips is fixed up to one global complement
    (m, n), (m2, _) = top, bottom
    assert count_global(m + m2, n) <= \
        2 * count_global(m, n) * count_global(m2, n)


def test_global_probability_is_monotone():
    probabilities = [estimate_global_probability(2, n, 0, None).probability
                     for n in range(1, 6)]
    assert all(a >= b for a, b in zip(probabilities, probabilities[1:]))
    assert probabilities[0] == 1
    assert probabilities[-1] < 1


def test_estimate_enumeration():
    estimate = estimate_global_probability(2, 2, 0, None)
    assert estimate.mode == 'enumeration'
    assert estimate.probability == Fraction(1)
    assert estimate.half_width == 0.0
    assert estimate.trials == 8


def test_estimate_sampling(rng):
    estimate = estimate_global_probability(1, 11, 40, rng)
    assert estimate.mode == 'sampling'
    assert estimate.trials == 40
    assert estimate.probability == 1.0
    assert estimate.half_width == 0.0


def test_estimate_errors(rng):
    with pytest.raises(StateSpaceOverflow):
        estimate_global_probability(4, 4, 10, rng)
    with pytest.raises(ValueError):
        estimate_global_probability(1, 11, 0, rng)
    with pytest.raises(ValueError):
        estimate_global_probability(0, 3, 10, rng)


def test_counting_errors():
    assert count_locally_valid(2, 3) == 32
    with pytest.raises(ValueError):
        count_locally_valid(0, 1)
    with pytest.raises(ValueError):
        count_global(1, 0)
    with pytest.raises(StateSpaceOverflow):
        count_global(3, 4)


@pytest.mark.parametrize('sub,expected', NEIGHBORHOOD_CASES)
def test_neighborhood(sub, expected):
    assert neighborhood(square_grid(5, 7), sub) == expected


def test_neighborhood_out_of_range():
    with pytest.raises(ValueError):
        neighborhood(square_grid(5, 7), Subgrid(4, 6, 2, 2))
    with pytest.raises(ValueError):
        neighborhood(square_grid(5, 7), Subgrid(-1, 0, 1, 1))


def test_subgrid_faces_and_creases(grid22):
    top = Subgrid(0, 0, 1, 2)
    assert subgrid_faces(grid22, top) == [0, 1]
    assert subgrid_creases(grid22, top) == [0]
    everything = Subgrid(0, 0, 2, 2)
    assert subgrid_creases(grid22, everything) == [0, 1, 2, 3]


def test_extend_partial_random(rng):
    pattern = square_grid(5, 7)
    for _ in range(1000):
        a = int(rng.integers(1, 4))
        b = int(rng.integers(1, 4))
        offset = (int(rng.integers(0, 5 - a + 1)),
                  int(rng.integers(0, 7 - b + 1)))
        sigma = exact_sample_square_grid(5, 7, rng)
        tau = exact_sample_square_grid(a, b, rng)
        result = extend_partial(pattern, sigma, tau, (a, b), offset)
        check = check_extension(pattern, sigma, tau, (a, b), offset, result)
        assert check.matches_block
        assert check.unchanged_outside
        assert check.valid


def test_extend_partial_empty_block(rng):
    pattern = square_grid(5, 7)
    sigma = exact_sample_square_grid(5, 7, rng)
    assert extend_partial(pattern, sigma, MVAssignment(0, 0), (0, 3),
                          (2, 2)) == sigma


def test_extend_partial_errors(rng):
    pattern = square_grid(5, 7)
    sigma = exact_sample_square_grid(5, 7, rng)
    block = square_grid(2, 2)
    with pytest.raises(ValueError):
        extend_partial(pattern, sigma, MVAssignment(0b1111, 4), (2, 2),
                       (0, 0))
    with pytest.raises(ValueError):
        extend_partial(pattern, sigma, MVAssignment(0, 3), (2, 2), (0, 0))
    with pytest.raises(ValueError):
        extend_partial(pattern, sigma, reference_assignment(block), (2, 2),
                       (4, 6))


def test_contains_sigma_sp():
    pattern = square_grid(3, 6)
    _, block = sigma_sp()
    reference = reference_assignment(pattern)
    assert contains_sigma_sp(pattern, reference) == (False,)
    planted = extend_partial(pattern, reference, block, SIGMA_SP_SHAPE,
                             (0, 0))
    assert contains_sigma_sp(pattern, planted) == (True,)
    assert contains_sigma_sp(pattern, planted, [(1, 1)]) == (False,)


def test_contains_sigma_sp_small_grid():
    with pytest.raises(ValueError):
        contains_sigma_sp(*sigma_sp())


def test_sigma_sp_tiles():
    assert sigma_sp_tiles(square_grid(6, 12)) == [(0, 0), (0, 6), (3, 0),
                                                  (3, 6)]
    assert sigma_sp_tiles(square_grid(5, 11)) == [(0, 0)]
    assert sigma_sp_tiles(square_grid(2, 11)) == []


def test_tile_event_frequency(rng):
    samples = 200000
    event = tile_event_frequency(3, 6, samples, rng, chunk=50000)
    assert event.trials == samples
    p = 2.0 ** -9
    sd = math.sqrt(samples * p * (1 - p))
    assert abs(event.hits - samples * p) < 5 * sd
    assert event.frequency == event.hits / float(samples)


def test_tile_event_frequency_errors(rng):
    with pytest.raises(ValueError):
        tile_event_frequency(2, 6, 10, rng)
    with pytest.raises(ValueError):
        tile_event_frequency(3, 6, 0, rng)


def restrict(pattern, assignment, sub):
    block = square_grid(sub.rows, sub.cols)
    n = pattern.params['dims'][1]
    values = []
    for f, g in block.crease_faces:
        fr, fc = divmod(f, sub.cols)
        gr, gc = divmod(g, sub.cols)
        values.append(assignment.value(pattern.crease_between(
            (sub.row + fr) * n + sub.col + fc,
            (sub.row + gr) * n + sub.col + gc)))
    return block, MVAssignment.from_values(values)


def test_restrictions_of_foldable_states_fold():
    pattern = square_grid(3, 3)
    blocks = [Subgrid(0, 0, 2, 3), Subgrid(2, 0, 1, 3), Subgrid(1, 1, 2, 2)]
    folded = 0
    for state in enumerate_states(pattern, 'scan'):
        if is_globally_flat_foldable(pattern, state) is None:
            continue
        folded += 1
        for sub in blocks:
            block, part = restrict(pattern, state, sub)
            assert is_locally_flat_foldable(block, part)
            assert is_globally_flat_foldable(block, part) is not None
    assert folded == count_global(3, 3)


def test_sigma_sp_planted_in_random_state(rng):
    pattern = square_grid(3, 6)
    _, block = sigma_sp()
    for _ in range(50):
        sigma = exact_sample_square_grid(3, 6, rng)
        planted = extend_partial(pattern, sigma, block, SIGMA_SP_SHAPE,
                                 (0, 0))
        check = check_extension(pattern, sigma, block, SIGMA_SP_SHAPE,
                                (0, 0), planted)
        assert check.matches_block
        assert check.unchanged_outside
        assert check.valid
        assert contains_sigma_sp(pattern, planted) == (True,)
        _, part = restrict(pattern, planted, Subgrid(0, 0, 2, 5))
        assert part == block


@pytest.mark.parametrize('shape,offset', EDGE_BLOCK_CASES)
def test_extend_partial_at_grid_edges(rng, shape, offset):
    pattern = square_grid(4, 6)
    for _ in range(20):
        sigma = exact_sample_square_grid(4, 6, rng)
        tau = exact_sample_square_grid(shape[0], shape[1], rng)
        result = extend_partial(pattern, sigma, tau, shape, offset)
        check = check_extension(pattern, sigma, tau, shape, offset, result)
        assert check.matches_block
        assert check.unchanged_outside
        assert check.valid
        if shape == (4, 6):
            assert result == tau
