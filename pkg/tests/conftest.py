from fractions import Fraction

import pytest

from payback.models.discount import DiscountFunction
from payback.models.project import make_project
from payback.services.generators import default_params
from payback.utils.logging import setup_logging


def pytest_configure(config):
    # structlog caches loggers on first use; configure before any module logs
    setup_logging("WARNING")


@pytest.fixture
def demo_project():
    return make_project([(0, -100), (1, 150), (2, -100), (3, 60)])


@pytest.fixture
def acons_pair():
    x = make_project([(0, -1), (1, 2), (2, -3), (4, 2)])
    y = make_project([(0, -2), (3, 3)])
    return x, y


@pytest.fixture
def halving_table():
    return DiscountFunction.tabulated({0: 1, 1: Fraction(1, 2), 2: Fraction(1, 4)})


@pytest.fixture
def growing_table():
    return DiscountFunction.tabulated({0: 1, 1: 2, 2: 1})


@pytest.fixture
def params():
    return default_params()


@pytest.fixture
def write_file(tmp_path):
    def _write(name, content):
        path = tmp_path / name
        path.write_text(content, encoding="utf-8")
        return str(path)

    return _write
