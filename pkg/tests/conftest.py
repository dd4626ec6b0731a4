import numpy as np
import pytest

from normgeo.search import SearchConfig
from normgeo.spaces import battery_specs, build_space, parse_space_spec

# Spaces shared across test modules.  Session scope: building is cheap but the
# reports computed from them in test_acceptance are not.

BATTERY_LP = ("lp:p=1,dim=2", "lp:p=1.2,dim=2", "lp:p=1.5,dim=2",
              "lp:p=2,dim=2", "lp:p=3,dim=2", "lp:p=4,dim=2", "linf:dim=2")


@pytest.fixture(scope="session")
def l1():
    return build_space(parse_space_spec("lp:p=1,dim=2"))


@pytest.fixture(scope="session")
def l2():
    return build_space(parse_space_spec("lp:p=2,dim=2"))


@pytest.fixture(scope="session")
def linf():
    return build_space(parse_space_spec("linf:dim=2"))


@pytest.fixture(scope="session")
def l15():
    return build_space(parse_space_spec("lp:p=1.5,dim=2"))


@pytest.fixture(scope="session")
def hexagon():
    # Regular hexagon ball; corners off the coordinate axes.
    return build_space(parse_space_spec(
        "polyv:v=[[1,0],[0.5,0.8660254037844386],[-0.5,0.8660254037844386]]"))


@pytest.fixture(scope="session")
def battery_spaces():
    """The full acceptance battery: 20 seeded polyhedral + the lp family."""
    spaces = [build_space(s) for s in battery_specs(7, 20)]
    spaces += [build_space(parse_space_spec(s)) for s in BATTERY_LP]
    return spaces


@pytest.fixture(scope="session")
def quick_cfg():
    """Coarse config for tests that only need rough values fast."""
    return SearchConfig(grid_per_dim=180, refine_iters=60, multistart=6)


def pair_norms(space, x, y):
    a = float(space.gauge(np.asarray(x) + np.asarray(y)))
    b = float(space.gauge(np.asarray(x) - np.asarray(y)))
    return a, b
