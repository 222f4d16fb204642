import numpy as np
import pytest

from reach.utils import (Config, Contact, EnvironmentBounds, QueryError, ReachabilityQuery, TimeInterval,
                         TrajectorySet, check_query, interval_intersect, validate_contact_path)
from reach.utils.unionfind import UnionFind


def test_interval_rejects_inverted_bounds():
    with pytest.raises(ValueError):
        TimeInterval(3, 2)
    with pytest.raises(ValueError):
        TimeInterval(-1, 2)


def test_interval_basics():
    w = TimeInterval(2, 5)
    assert w.length == 4
    assert 2 in w and 5 in w and 6 not in w
    assert list(w.ticks()) == [2, 3, 4, 5]
    assert w.covers(TimeInterval(3, 4))
    assert not w.covers(TimeInterval(3, 6))
    assert w.overlaps(TimeInterval(5, 9))
    assert not w.overlaps(TimeInterval(6, 9))


def test_interval_intersect():
    assert interval_intersect(TimeInterval(0, 4), TimeInterval(3, 8)) == TimeInterval(3, 4)
    assert interval_intersect(TimeInterval(0, 2), TimeInterval(3, 8)) is None


def test_contact_is_canonical():
    c = Contact.between(4, 1, TimeInterval(0, 0))
    assert (c.a, c.b) == (1, 4)
    assert c.other(1) == 4 and 4 in c
    with pytest.raises(ValueError):
        Contact.between(2, 2, TimeInterval(0, 0))


def test_trajectory_set_validates(four_objects):
    assert four_objects.n_objects == 4
    assert four_objects.n_ticks == 4
    assert four_objects.segment(1, TimeInterval(1, 2)).position(2) == (0.5, 3.0)

    config = four_objects.config
    with pytest.raises(ValueError):
        TrajectorySet(np.zeros((2, 3, 2)), config)
    with pytest.raises(ValueError):
        TrajectorySet(np.full((2, 4, 2), 11.0), config)
    with pytest.raises(ValueError):
        TrajectorySet(np.full((2, 4, 2), np.nan), config)
    with pytest.raises(QueryError):
        four_objects.positions_at(4)


def test_config_validates():
    with pytest.raises(ValueError):
        Config(0.0, EnvironmentBounds(1.0, 1.0), TimeInterval(0, 1)).validate()
    with pytest.raises(ValueError):
        Config(1.0, EnvironmentBounds(0.0, 1.0), TimeInterval(0, 1)).validate()


def test_check_query():
    horizon = TimeInterval(0, 3)
    check_query(ReachabilityQuery(0, 3, TimeInterval(0, 3)), 4, horizon)
    with pytest.raises(QueryError):
        check_query(ReachabilityQuery(0, 4, TimeInterval(0, 3)), 4, horizon)
    with pytest.raises(QueryError):
        check_query(ReachabilityQuery(0, 3, TimeInterval(2, 4)), 4, horizon)


def test_contact_paths_of_four_objects(four_objects_contacts):
    c1, c2, c3, c4 = four_objects_contacts
    assert [(c.a, c.b, tuple(c.validity)) for c in (c1, c2, c3, c4)] == [
        (0, 1, (0, 0)), (1, 3, (1, 1)), (2, 3, (1, 2)), (0, 1, (2, 3)),
    ]

    assert validate_contact_path([c1, c2], ReachabilityQuery(0, 3, TimeInterval(0, 1)))
    # o2 meets o4 before it receives the item.
    assert not validate_contact_path([c4, c2], ReachabilityQuery(0, 3, TimeInterval(0, 3)))
    # Wrong destination.
    assert not validate_contact_path([c1], ReachabilityQuery(0, 3, TimeInterval(0, 1)))
    # Outside the interval.
    assert not validate_contact_path([c4], ReachabilityQuery(0, 1, TimeInterval(0, 1)))
    # Same-tick hand-off through o4.
    assert validate_contact_path([c2, c3], ReachabilityQuery(1, 2, TimeInterval(1, 1)))
    with pytest.raises(ValueError):
        validate_contact_path([], ReachabilityQuery(0, 1, TimeInterval(0, 1)))


def test_union_find_groups():
    uf = UnionFind(6)
    uf.union(4, 2)
    uf.union(0, 5)
    uf.union(2, 5)
    assert uf.groups() == [[0, 2, 4, 5], [1], [3]]
    assert uf.groups([3, 4, 1]) == [[1], [3], [4]]
