import os
import textwrap

import numpy as np
import pytest

from foldflip.patterns import PatternSpec, generate, square_grid


@pytest.fixture
def log_mock(mocker):
    return mocker.patch('foldflip.cli.log_result')


class FoldflipConfig(object):
    def __init__(self):
        self._fname = os.path.join(os.path.dirname(__file__), 'foldflip.cfg')

    def write(self, text):
        _cfg = textwrap.dedent(text)
        with open(self._fname, 'w') as cfg_f:
            cfg_f.write("# Autogenerated from pytest \n[foldflip]\n")
            cfg_f.write(_cfg)

    def __del__(self):
        with open(self._fname, 'w') as cfg_f:
            cfg_f.write('# Session completed')


@pytest.fixture(scope="session")
def foldflip_config():
    r = FoldflipConfig()
    yield r
    del r


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def grid22():
    return square_grid(2, 2)


@pytest.fixture
def c6():
    return generate(PatternSpec('single_vertex', (3,)))


@pytest.fixture
def miura22():
    return generate(PatternSpec('miura', (2, 2)))


@pytest.fixture
def twist_tile():
    return generate(PatternSpec('square_twist', (1, 1)))


@pytest.fixture
def kite33():
    return generate(PatternSpec('kite', (3, 3)))
