"""
Pytest configuration and fixtures
"""
import random

import pytest
from django.core.cache import cache

from basym.conf import get_config
from basym.grading import DegreeGroup
from basym.polyalg import Ring
from basym.session import parse_session


GOLDEN_SESSION = """\
field 32003;
grading Z^1;
ring x:1 y:1 z:1;
ideal I = x^2+y^2+z^2, x^5+y^5+z^5, x^8+y^8+z^8;
window t=1..4 wcap=40;
"""

SQUARE_SESSION = """\
ring x:1 y:1;
ideal I = x^2, x*y, y^2;  # the square of the maximal ideal
window t=1..3 wcap=20;
"""


def pytest_addoption(parser):
    parser.addoption(
        '--basym-seed',
        action='store',
        type=int,
        default=None,
        help='Seed for the randomized property tests',
    )


@pytest.fixture
def seed(request):
    """Seed for randomized tests: --basym-seed, else BASYM_CONFIG['seed']"""
    value = request.config.getoption('--basym-seed')
    return get_config()['seed'] if value is None else value


@pytest.fixture
def rng(seed):
    """A seeded random generator"""
    return random.Random(seed)


@pytest.fixture(autouse=True)
def clear_cache():
    """Start every test with an empty oracle cache"""
    cache.clear()
    yield
    cache.clear()


@pytest.fixture
def ring_xy():
    """k[x, y], standard grading"""
    return Ring(['x', 'y'], [1, 1])


@pytest.fixture
def ring_xyz():
    """k[x, y, z], standard grading"""
    return Ring(['x', 'y', 'z'], [1, 1, 1])


@pytest.fixture
def ring_bigraded():
    """k[x, y] graded by Z^2 with deg x = (1, 0), deg y = (0, 1)"""
    group = DegreeGroup(2)
    return Ring(['x', 'y'], [group.degree(1, 0), group.degree(0, 1)], group)


@pytest.fixture
def golden_session():
    """Three power sums of degrees 2, 5, 8 in k[x, y, z]"""
    return parse_session(GOLDEN_SESSION)


@pytest.fixture
def square_session():
    """(x, y)^2 in k[x, y]"""
    return parse_session(SQUARE_SESSION)


@pytest.fixture
def session_file(tmp_path):
    """Write session text to a file and return its path"""
    def write(text, name='session.basym'):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write
