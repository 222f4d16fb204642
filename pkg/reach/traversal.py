"""Query engines over a placed ReachGraph.

``bm_bfs`` grows the components reachable from the source's component at
``t1`` in the order of the tick each is reached, and stops at the first one
holding the destination. A long edge is followed only when the destination's
component at its far end, read from the destination's timeline, is not among
its targets; otherwise the destination is reached inside the skipped span and
the search drops to a shorter resolution, then to the base edges.

Only the pop bound looks at ``t2``, so a reachable query reads the same blocks
however far its interval extends past the earliest reach.
"""
import heapq
from typing import NamedTuple

import logbook

from reach.reachgraph import Placement, ReachGraphIndex, build_reachgraph
from reach.utils import ReachabilityQuery
from reach.utils.meta_engine import Engine
from reach.utils.model import check_query

log = logbook.Logger("Traversal")

FORWARD = "forward"
BACKWARD = "backward"


class TraceStep(NamedTuple):
    direction: str
    vertex: int
    tick: int
    # Forward: "base", "long:<L>", "meet" or "none". Backward: "timeline".
    edge: str


class TraversalState:
    __slots__ = ("frontier", "reached", "destination", "timeline")

    def __init__(self, destination):
        # Heap of (reached-at tick, vertex, partition).
        self.frontier = []
        # Vertex -> earliest tick it was pushed with.
        self.reached = {}
        self.destination = destination
        # Tick -> vertex holding the destination, as read so far.
        self.timeline = {}

    def push(self, vertex, partition, tick):
        if tick < self.reached.get(vertex, tick + 1):
            self.reached[vertex] = tick
            heapq.heappush(self.frontier, (tick, vertex, partition))

    def pop(self):
        """Earliest live entry, or ``None``; entries superseded by an earlier tick are dropped."""
        while self.frontier:
            tick, vertex, partition = heapq.heappop(self.frontier)
            if self.reached[vertex] == tick:
                return vertex, partition, tick
        return None

    def destination_at(self, index: ReachGraphIndex, t, trace):
        try:
            return self.timeline[t]
        except KeyError:
            vid = self.timeline[t] = index.timeline_vertex(self.destination, t)
            if trace is not None:
                trace.append(TraceStep(BACKWARD, vid, t, "timeline"))
            return vid

    def __repr__(self):
        return f"<TraversalState frontier={len(self.frontier)} reached={len(self.reached)}>"


def _expand(index, state: TraversalState, v, reached, long_edges, trace):
    if long_edges:
        for L, boundary, targets in v.long_edges:
            if boundary < reached:
                continue

            landing = boundary + L
            if state.destination_at(index, landing, trace) in {w for w, _ in targets}:
                continue

            for w, wp in targets:
                state.push(w, wp, landing)
            return f"long:{L}"

    for w, wp, _ in v.out_edges:
        state.push(w, wp, v.t_end + 1)
    return "base" if v.out_edges else "none"


def bm_bfs(index: ReachGraphIndex, q: ReachabilityQuery, *, long_edges=True, trace=None) -> bool:
    check_query(q, index.n_objects, index.horizon)
    if q.source == q.destination:
        return True

    t1, t2 = q.interval
    state = TraversalState(q.destination)
    v1, p1 = index.find_vertex(q.source, t1)
    state.push(v1, p1, t1)

    popped = 0
    while True:
        entry = state.pop()
        if entry is None or entry[2] > t2:
            log.debug(f"{q}: not reached, {popped} vertices expanded.")
            return False

        vid, pid, reached = entry
        v = index.vertex(vid, pid)
        popped += 1
        if q.destination in v.members:
            if trace is not None:
                trace.append(TraceStep(FORWARD, vid, reached, "meet"))
            log.debug(f"{q}: reached at tick {reached}, {popped} vertices expanded.")
            return True

        edge = _expand(index, state, v, reached, long_edges, trace)
        if trace is not None:
            trace.append(TraceStep(FORWARD, vid, reached, edge))


def b_bfs(index: ReachGraphIndex, q: ReachabilityQuery, *, trace=None) -> bool:
    return bm_bfs(index, q, long_edges=False, trace=trace)


def e_dfs(index: ReachGraphIndex, q: ReachabilityQuery, *, trace=None) -> bool:
    """Exhaustive forward DFS over base edges, bounded by ``t2``."""
    check_query(q, index.n_objects, index.horizon)
    if q.source == q.destination:
        return True

    t1, t2 = q.interval
    v1, p1 = index.find_vertex(q.source, t1)
    v2, _ = index.find_vertex(q.destination, t2)

    seen = {v1}
    stack = [(v1, p1, t1)]
    while stack:
        vid, pid, reached = stack.pop()
        v = index.vertex(vid, pid)
        if trace is not None:
            trace.append(TraceStep(FORWARD, vid, reached, "base"))
        if vid == v2:
            return True

        if v.t_end + 1 > t2:
            continue

        for w, wp, _ in reversed(v.out_edges):
            if w not in seen:
                seen.add(w)
                stack.append((w, wp, v.t_end + 1))

    return False


class ReachGraphEngine(Engine):
    """Answers from the instance's placed ReachGraph."""

    def prepare(self, instance):
        settings = instance.settings
        placement = Placement[settings.placement]

        def build():
            return build_reachgraph(instance.contacts, instance.new_store(), resolutions=settings.resolutions,
                                    d_p=settings.partition_depth, placement=placement, seed=settings.seed)

        return instance.structure(f"reachgraph:{placement.name}", build)


class BmBfs(ReachGraphEngine):
    name = "bm-bfs"

    def answer(self, instance, query):
        return bm_bfs(self.prepare(instance), query)


class BBfs(ReachGraphEngine):
    name = "b-bfs"

    def answer(self, instance, query):
        return b_bfs(self.prepare(instance), query)


class EDfs(ReachGraphEngine):
    name = "e-dfs"

    def answer(self, instance, query):
        return e_dfs(self.prepare(instance), query)


def setup(workbench):
    for engine in (BmBfs, BBfs, EDfs):
        engine.setup(workbench)
