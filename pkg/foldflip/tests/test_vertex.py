from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from foldflip.core import MOUNTAIN, VALLEY, MVAssignment, star_from_angles
from foldflip.vertex import (count_single_vertex_configs, equal_angle_star,
                             enumerate_single_vertex_configs,
                             exact_sample_single_vertex, is_valid_vertex,
                             marginal_probability, mountain_class,
                             sector_kinds, single_vertex_layer_oracle)

M, V = MOUNTAIN, VALLEY

# (angles in degrees, number of valid assignments)
STAR_CASES = [
    ((90, 90, 90, 90), 8),
    ((60,) * 6, 30),
    ((45,) * 8, 112),
    ((60, 120, 120, 60), 6),
    ((30, 150, 150, 30), 6),
    ((45, 90, 135, 90), 4),
    ((90, 135, 90, 45), 4),
]

MARGINAL_CASES = [
    (3, 1, 0, Fraction(1, 2)),
    (3, 6, -3, Fraction(1)),
    (2, 2, -1, Fraction(1, 2)),
    (1, 2, 1, Fraction(1)),
    (1, 2, -1, Fraction(0)),
]

COUNT_CASES = [(1, 2), (2, 8), (3, 30), (5, 420)]

# chi-square critical value at the 0.01 level with 29 degrees of freedom
CHI2_29_01 = 49.588


@pytest.mark.parametrize('angles,valid', STAR_CASES)
def test_rules_agree_with_oracle(angles, valid):
    star = star_from_angles(angles)
    size = len(angles)
    accepted = 0
    for bits in range(2 ** size):
        assignment = MVAssignment(bits, size)
        rule = is_valid_vertex(star, assignment)
        witness = single_vertex_layer_oracle(star, assignment)
        assert rule == (witness is not None), assignment.to_string()
        accepted += rule
    assert accepted == valid


def test_oracle_witness():
    star = equal_angle_star(2)
    witness = single_vertex_layer_oracle(
        star, MVAssignment.from_values((M, M, M, V)))
    assert witness is not None
    assert sorted(witness.order) == [0, 1, 2, 3]
    assert single_vertex_layer_oracle(
        star, MVAssignment.from_values((M, M, V, V))) is None


def test_oracle_rejects_little_sector_with_equal_creases():
    star = star_from_angles((45, 90, 135, 90))
    assignment = MVAssignment.from_values((M, M, M, V))
    assert single_vertex_layer_oracle(star, assignment) is None
    assert not is_valid_vertex(star, assignment)


def test_oracle_errors():
    with pytest.raises(ValueError):
        single_vertex_layer_oracle(equal_angle_star(7), MVAssignment(0, 14))
    bad = star_from_angles((100, 80, 100, 80))
    with pytest.raises(ValueError):
        single_vertex_layer_oracle(bad, MVAssignment(0, 4))
    with pytest.raises(ValueError):
        is_valid_vertex(bad, MVAssignment(0, 4))


@pytest.mark.parametrize('n,expected', COUNT_CASES)
def test_count(n, expected):
    assert count_single_vertex_configs(n) == expected
    assert len(enumerate_single_vertex_configs(n)) == expected


def test_count_errors():
    with pytest.raises(ValueError):
        count_single_vertex_configs(0)
    with pytest.raises(ValueError):
        enumerate_single_vertex_configs(11)


def test_enumerate_small():
    assert [a.to_string() for a in enumerate_single_vertex_configs(1)] == \
        ['MM', 'VV']
    states = enumerate_single_vertex_configs(2)
    assert all(a.mountains in (1, 3) for a in states)
    strings = [a.to_string() for a in states]
    assert strings == sorted(strings)


@pytest.mark.parametrize('n,j,r,expected', MARGINAL_CASES)
def test_marginal_probability(n, j, r, expected):
    assert marginal_probability(n, j, r) == expected


def test_marginal_probability_errors():
    with pytest.raises(ValueError):
        marginal_probability(3, 0, 0)
    with pytest.raises(ValueError):
        marginal_probability(3, 7, 0)
    # parity of r must match the number of creases before j
    with pytest.raises(ValueError):
        marginal_probability(3, 2, 0)
    with pytest.raises(ValueError):
        marginal_probability(3, 3, 4)


@pytest.mark.parametrize('n', [1, 2, 3, 4, 5])
def test_product_of_marginals_is_uniform(n):
    states = enumerate_single_vertex_configs(n)
    for state in states:
        probability = Fraction(1)
        partial = 0
        for j, value in enumerate(state.values, 1):
            p = marginal_probability(n, j, partial)
            probability *= p if value == VALLEY else 1 - p
            partial += value
        assert probability == Fraction(1, len(states))


def test_sampler_outputs_are_valid(rng):
    star = equal_angle_star(3)
    valid = set(enumerate_single_vertex_configs(3))
    for _ in range(10000):
        sample = exact_sample_single_vertex(3, rng)
        assert sample in valid
        assert is_valid_vertex(star, sample)


def test_sampler_chi_square():
    rng = np.random.default_rng(7)
    draws = 30000
    counts = Counter(exact_sample_single_vertex(3, rng)
                     for _ in range(draws))
    assert len(counts) == 30
    expected = draws / 30.0
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    assert chi2 < CHI2_29_01


def test_sampler_n1(rng):
    seen = Counter(exact_sample_single_vertex(1, rng).to_string()
                   for _ in range(400))
    assert set(seen) == set(['MM', 'VV'])


def test_sampler_is_seeded():
    a = [exact_sample_single_vertex(4, np.random.default_rng(3))
         for _ in range(5)]
    b = [exact_sample_single_vertex(4, np.random.default_rng(3))
         for _ in range(5)]
    assert a == b


def test_sector_kinds():
    assignment = MVAssignment.from_string('MMVVVV')
    assert sector_kinds(assignment) == ['MM', 'mixed', 'VV', 'VV', 'VV',
                                        'mixed']


def test_mountain_class():
    assert mountain_class(MVAssignment.from_string('MMMMVV'), 3) == 'M'
    assert mountain_class(MVAssignment.from_string('MMVVVV'), 3) == 'V'
    assert mountain_class(MVAssignment.from_string('MMMVVV'), 3) is None
