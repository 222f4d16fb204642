import logbook
import pytest

from reach.oracle import oracle_reach
from reach.reachgraph import Placement, build_reachgraph
from reach.traversal import BACKWARD, FORWARD, b_bfs, bm_bfs, e_dfs
from reach.utils import BlockStore, QueryError, ReachabilityQuery, TimeInterval

from conftest import FOUR_OBJECTS_QUERIES, sample_queries

ENGINES = [bm_bfs, b_bfs, e_dfs]


@pytest.fixture
def four_objects_index(four_objects_contacts):
    return build_reachgraph(four_objects_contacts, BlockStore(256, 16), resolutions=[2], d_p=2)


@pytest.mark.parametrize("engine", ENGINES)
@pytest.mark.parametrize("query, expected", FOUR_OBJECTS_QUERIES)
def test_four_objects(four_objects_index, engine, query, expected):
    assert engine(four_objects_index, query) is expected


def test_search_stops_at_the_first_component_holding_the_destination(four_objects_index):
    trace = []
    assert bm_bfs(four_objects_index, ReachabilityQuery(0, 3, TimeInterval(0, 3)), trace=trace)
    # o4 holds the item by tick 2, so the long edge from {o1, o2} at tick 0 is passed over
    # and the base edges meet o4 in {o2, o3, o4} at tick 1.
    forward = [step for step in trace if step.direction == FORWARD]
    assert [step.edge for step in forward] == ["base", "base", "meet"]
    assert forward[-1].vertex == four_objects_index.find_vertex(1, 1)[0]
    assert forward[-1].tick == 1

    checks = [step for step in trace if step.direction == BACKWARD]
    assert [(step.vertex, step.tick) for step in checks] == [(four_objects_index.find_vertex(3, 2)[0], 2)]


def test_same_component_at_both_ends(four_objects_index):
    # o1 and o2 share a component over [2, 3].
    trace = []
    assert bm_bfs(four_objects_index, ReachabilityQuery(0, 1, TimeInterval(2, 3)), trace=trace)
    assert trace[0].edge == "meet"


def test_rejects_bad_queries(four_objects_index):
    for engine in ENGINES:
        with pytest.raises(QueryError):
            engine(four_objects_index, ReachabilityQuery(0, 1, TimeInterval(1, 4)))
        with pytest.raises(QueryError):
            engine(four_objects_index, ReachabilityQuery(7, 1, TimeInterval(1, 2)))


@pytest.mark.parametrize("placement", list(Placement))
@pytest.mark.parametrize("resolutions, d_p", [((2, 4, 8), 1), ((2, 4, 8, 16), 4), ((), 32)])
def test_engines_match_the_oracle(rwp_instance, rwp_contacts, placement, resolutions, d_p):
    index = build_reachgraph(rwp_contacts, BlockStore(512, 32), resolutions=resolutions, d_p=d_p,
                             placement=placement, seed=5)
    for q in sample_queries(rwp_instance, 120, seed=6):
        expected = oracle_reach(rwp_contacts, q).reachable
        for engine in ENGINES:
            assert engine(index, q) == expected, (engine.__name__, q)


def test_long_edges_are_taken(rwp_instance, rwp_contacts):
    index = build_reachgraph(rwp_contacts, BlockStore(512, 32), resolutions=(2, 4, 8), d_p=4)
    horizon = rwp_instance.horizon
    kinds = set()
    for o in range(rwp_instance.n_objects):
        trace = []
        bm_bfs(index, ReachabilityQuery(o, (o + 1) % rwp_instance.n_objects, horizon), trace=trace)
        kinds.update(step.edge for step in trace)
    assert any(kind.startswith("long:") for kind in kinds)


def test_plain_search_uses_base_edges_only(rwp_instance, rwp_contacts):
    index = build_reachgraph(rwp_contacts, BlockStore(512, 32), resolutions=(2, 4, 8), d_p=4)
    for q in sample_queries(rwp_instance, 40, seed=2):
        trace = []
        b_bfs(index, q, trace=trace)
        assert not any(step.edge.startswith("long:") for step in trace)
        assert all(step.direction == FORWARD for step in trace)


def test_vertices_are_expanded_in_tick_order(rwp_instance, rwp_contacts):
    index = build_reachgraph(rwp_contacts, BlockStore(512, 32), resolutions=(2, 4, 8), d_p=4)
    for q in sample_queries(rwp_instance, 60, seed=12):
        trace = []
        bm_bfs(index, q, trace=trace)
        ticks = [step.tick for step in trace if step.direction == FORWARD]
        assert ticks == sorted(ticks)
        assert all(q.interval.start <= t <= q.interval.end for t in ticks)
        assert len({step.vertex for step in trace if step.direction == FORWARD}) == len(ticks)


def test_long_edges_never_skip_the_destination(rwp_instance, rwp_contacts):
    index = build_reachgraph(rwp_contacts, BlockStore(512, 32), resolutions=(2, 4, 8), d_p=4)
    for q in sample_queries(rwp_instance, 80, seed=4):
        result = oracle_reach(rwp_contacts, q)
        trace = []
        assert bm_bfs(index, q, trace=trace) == result.reachable
        if result.reachable and q.source != q.destination:
            # The search meets the destination no later than its earliest reach.
            assert trace[-1].edge == "meet"
            assert trace[-1].tick <= result.earliest_reach


@pytest.mark.parametrize("engine", [bm_bfs, b_bfs])
@pytest.mark.parametrize("placement", list(Placement))
def test_trailing_ticks_cost_nothing(rwp_instance, rwp_contacts, engine, placement):
    index = build_reachgraph(rwp_contacts, BlockStore(256, 32), resolutions=(2, 4, 8), d_p=4, placement=placement)
    store = index.store
    horizon = rwp_instance.horizon
    checked = 0
    for q in sample_queries(rwp_instance, 200, seed=10):
        if not oracle_reach(rwp_contacts, q).reachable or q.interval.end == horizon.end:
            continue

        padded = ReachabilityQuery(q.source, q.destination,
                                   TimeInterval(q.interval.start,
                                                min(horizon.end, q.interval.end + 2 * q.interval.length)))
        costs = []
        for query in (q, padded):
            store.reset(flush=True)
            assert engine(index, query)
            costs.append(store.report())
        assert costs[0] == costs[1], q
        checked += 1
    assert checked


def test_search_visits_no_more_than_exhaustive_search(rwp_instance, rwp_contacts):
    index = build_reachgraph(rwp_contacts, BlockStore(256, 0), resolutions=(2, 4, 8), d_p=4)
    horizon = rwp_instance.horizon
    for o in range(rwp_instance.n_objects):
        q = ReachabilityQuery(o, (o + 5) % rwp_instance.n_objects, horizon)
        if oracle_reach(rwp_contacts, q).reachable:
            continue
        # Unreachable: the exhaustive search has to visit every vertex reachable from the source.
        seen = {}
        for engine in (e_dfs, bm_bfs):
            trace = []
            engine(index, q, trace=trace)
            seen[engine] = {step.vertex for step in trace if step.direction == FORWARD}
        assert seen[bm_bfs] <= seen[e_dfs]


def test_searches_log_under_their_own_channel(four_objects_index):
    with logbook.TestHandler() as handler:
        bm_bfs(four_objects_index, ReachabilityQuery(0, 3, TimeInterval(0, 3)))
    assert handler.records
    assert {record.channel for record in handler.records} == {"Traversal"}
