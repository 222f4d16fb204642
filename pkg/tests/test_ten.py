import pytest

from reach.oracle import oracle_reach
from reach.reachgraph import merge_runs, reduce_components
from reach.ten import build_ten, ten_counts, ten_reachable
from reach.utils import Contact, ReachabilityQuery, TimeInterval

from conftest import FOUR_OBJECTS_QUERIES, sample_queries


@pytest.fixture
def four_objects_ten(four_objects_contacts):
    return build_ten(four_objects_contacts, 4, TimeInterval(0, 3))


def test_first_snapshot_has_one_contact_edge(four_objects_ten):
    snapshot = four_objects_ten.snapshot(0)
    assert [tuple(sorted(e)) for e in snapshot.graph.edges()] == [((0, 0), (1, 0))]


def test_hand_off_path_exists(four_objects_ten):
    g = four_objects_ten.graph
    path = [(0, 0), (1, 0), (1, 1), (3, 1)]
    assert all(g.has_edge(u, v) for u, v in zip(path, path[1:]))


def test_counts(four_objects_contacts, four_objects_ten):
    counts = four_objects_ten.counts
    assert counts.vertices == 16
    assert counts.hold_edges == 12
    # One directed pair per contact tick: [0,0], [1,1], [1,2], [2,3].
    assert counts.contact_edges == 6
    assert ten_counts(4, TimeInterval(0, 3), four_objects_contacts) == counts


def test_pairs_at(four_objects_ten):
    assert four_objects_ten.pairs_at(1) == [(1, 3), (2, 3)]
    assert four_objects_ten.pairs_at(3) == [(0, 1)]
    with pytest.raises(ValueError):
        four_objects_ten.snapshot(4)


def test_unknown_objects_are_refused():
    with pytest.raises(ValueError):
        build_ten([Contact.between(0, 5, TimeInterval(0, 0))], 3, TimeInterval(0, 1))


@pytest.mark.parametrize("query, expected", FOUR_OBJECTS_QUERIES)
def test_four_objects_queries(four_objects_ten, query, expected):
    assert ten_reachable(four_objects_ten, query) is expected


def test_source_is_its_own_destination(four_objects_ten):
    assert ten_reachable(four_objects_ten, ReachabilityQuery(2, 2, TimeInterval(1, 1)))


def test_agrees_with_the_oracle(rwp_instance, rwp_contacts):
    ten = build_ten(rwp_contacts, rwp_instance.n_objects, rwp_instance.horizon)
    for q in sample_queries(rwp_instance, 150, seed=3):
        assert ten_reachable(ten, q) == oracle_reach(rwp_contacts, q).reachable, q


def test_components_are_mutually_reachable_within_their_tick(four_objects_contacts, four_objects_ten):
    dag = reduce_components(four_objects_contacts)
    # o2 and o3 never touch at tick 1, both touch o4.
    assert (1, 2) not in four_objects_ten.pairs_at(1)
    assert dag.vertex_at(1, 1) is dag.vertex_at(2, 1)

    for t in range(4):
        for a in range(4):
            for b in range(4):
                q = ReachabilityQuery(a, b, TimeInterval(t, t))
                together = dag.vertex_at(a, t) is dag.vertex_at(b, t)
                assert oracle_reach(four_objects_contacts, q).reachable is together, q
                assert ten_reachable(four_objects_ten, q) is together, q


def test_reach_chains_through_consecutive_ticks(four_objects_contacts):
    unmerged = reduce_components(four_objects_contacts)
    # o1 meets o2 at tick 0, o2 meets o4 at tick 1.
    first, second = unmerged.vertex_at(0, 0), unmerged.vertex_at(3, 1)
    assert second.id in unmerged.out_edges[first.id]
    assert oracle_reach(four_objects_contacts, ReachabilityQuery(0, 3, TimeInterval(0, 1))).reachable

    # {o1, o2} stays together over [2, 3]: one vertex per tick before merging, one weighted edge after.
    a, b = unmerged.vertex_at(0, 2), unmerged.vertex_at(0, 3)
    assert (a.t_start, a.t_end, b.t_start, b.t_end) == (2, 2, 3, 3)
    assert b.id in unmerged.out_edges[a.id]
    assert unmerged.weight(a.id, b.id) == 1

    merged = merge_runs(unmerged)
    run = merged.vertex_at(0, 2)
    assert run is merged.vertex_at(1, 3)
    assert (run.t_start, run.t_end, run.members) == (2, 3, (0, 1))
    parent = merged.vertex_at(1, 1)
    assert run.id in merged.out_edges[parent.id]
    assert merged.weight(parent.id, run.id) == 2
