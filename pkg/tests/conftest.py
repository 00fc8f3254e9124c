import numpy as np
import pytest

from curvlab import profiles as pf
from curvlab.spaces import CP2, S4


@pytest.fixture(scope="session")
def s4_params():
    return pf.default_gz_params(S4)


@pytest.fixture(scope="session")
def cp2_params():
    return pf.default_gz_params(CP2)


@pytest.fixture(scope="session")
def gz_s4_1024(s4_params):
    return pf.gz_profiles(S4, s4_params, 1024)


@pytest.fixture(scope="session")
def gz_s4_2048(s4_params):
    return pf.gz_profiles(S4, s4_params, 2048)


@pytest.fixture(scope="session")
def gz_cp2_1024(cp2_params):
    return pf.gz_profiles(CP2, cp2_params, 1024)


@pytest.fixture(scope="session")
def gz_cp2_2048(cp2_params):
    return pf.gz_profiles(CP2, cp2_params, 2048)


def _params_of(space):
    return pf.default_gz_params(space)


@pytest.fixture(scope="session")
def s_star():
    """Witness-certified interpolation range per space (bisection)."""
    from curvlab.cli import bisect_certified_s

    out = {}
    for space in (S4, CP2):
        out[space.name] = bisect_certified_s(space, _params_of(space), n_grid=1024)
    return out


def random_smooth_triple(rng: np.ndarray, space, n_grid: int = 512):
    """A random smooth positive triple: an affine mixture of the standard
    metric, a Grove-Ziller metric with random admissible parameters, and
    their interpolations.  Mixtures of smooth metrics satisfy the endpoint
    parity rules exactly."""
    from curvlab.spaces import max_beta_bound

    a = rng.uniform(1.08, 4.0 / 3.0)
    b = rng.uniform(0.35, 0.75) * max_beta_bound(space, a) * pf.bump_efficiency()
    params = pf.make_gz_params(space, a, b)
    gz = pf.gz_profiles(space, params, n_grid)
    std = pf.standard_profiles(space).sample(n_grid)
    s = rng.uniform(0.05, 0.95)
    return pf.interpolate(s, gz, std)
