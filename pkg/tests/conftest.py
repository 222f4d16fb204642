import numpy as np
import pytest

from reach.contacts import extract_contacts
from reach.utils import Config, EnvironmentBounds, ReachabilityQuery, TimeInterval, TrajectorySet
from reach.workloads import RwpParams, gen_rwp

# Positions of o1..o4 (ids 0..3) at ticks 0..3, d_T = 1 in a 10x10 environment.
# They realise exactly the contacts (o1,o2,[0,0]), (o2,o4,[1,1]), (o3,o4,[1,2]), (o1,o2,[2,3]).
FOUR_OBJECTS = [
    [(0.0, 0.0), (0.0, 3.0), (0.0, 3.0), (0.0, 3.0)],
    [(0.5, 0.0), (4.2, 5.0), (0.5, 3.0), (0.5, 3.0)],
    [(5.0, 5.0), (5.8, 5.0), (5.8, 5.0), (9.0, 9.0)],
    [(7.0, 7.0), (5.0, 5.0), (5.0, 5.0), (5.0, 5.0)],
]

# (query, reachable)
FOUR_OBJECTS_QUERIES = [
    (ReachabilityQuery(0, 3, TimeInterval(0, 1)), True),
    (ReachabilityQuery(3, 0, TimeInterval(0, 1)), False),
    (ReachabilityQuery(0, 1, TimeInterval(2, 3)), True),
    (ReachabilityQuery(0, 3, TimeInterval(0, 3)), True),
    (ReachabilityQuery(2, 0, TimeInterval(0, 3)), False),
    (ReachabilityQuery(2, 1, TimeInterval(1, 3)), False),
]


def four_objects_trajectories():
    config = Config(1.0, EnvironmentBounds(10.0, 10.0), TimeInterval(0, 3))
    return TrajectorySet(np.array(FOUR_OBJECTS), config)


def small_rwp(seed, *, n_objects=12, ticks=40, size=200.0, d_T=25.0):
    p = RwpParams(n_objects, EnvironmentBounds(size, size), mean_speed=2.0, duration_ticks=ticks, rng_seed=seed)
    return gen_rwp(p, d_T)


def sample_queries(trajectories, count, seed):
    """Random queries over every (source, destination) pair, intervals of any length."""
    rng = np.random.default_rng(seed)
    horizon = trajectories.horizon
    out = []
    for _ in range(count):
        source, destination = rng.choice(trajectories.n_objects, size=2, replace=False).tolist()
        start, end = sorted(rng.integers(horizon.start, horizon.end + 1, size=2).tolist())
        out.append(ReachabilityQuery(source, destination, TimeInterval(start, end)))
    return out


@pytest.fixture
def four_objects():
    return four_objects_trajectories()


@pytest.fixture
def four_objects_contacts(four_objects):
    return extract_contacts(four_objects)


@pytest.fixture(params=[1, 2, 3])
def rwp_instance(request):
    return small_rwp(request.param)


@pytest.fixture
def rwp_contacts(rwp_instance):
    return extract_contacts(rwp_instance)
