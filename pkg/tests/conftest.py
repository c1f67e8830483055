import os

import pytest
from hypothesis import HealthCheck, settings

from cutset_lab.core.graph_core import build_window
from cutset_lab.core.graph_providers import make_provider

settings.register_profile('default', max_examples = 30, deadline = None, suppress_health_check = [HealthCheck.too_slow])
settings.register_profile('thorough', max_examples = 300, deadline = None, suppress_health_check = [HealthCheck.too_slow])
settings.load_profile(os.environ.get('HYPOTHESIS_PROFILE', 'default'))


@pytest.fixture(scope = 'session')
def square():
    return make_provider('lattice', rank = 2)


@pytest.fixture(scope = 'session')
def square_window(square):
    return build_window(square, 10)


@pytest.fixture(scope = 'session')
def hex_window():
    return build_window(make_provider('hex'), 10)


@pytest.fixture(scope = 'session')
def tree_window():
    return build_window(make_provider('tree', degree = 3), 6)


@pytest.fixture(scope = 'session')
def king_window():
    return build_window(make_provider('king'), 12)
