"""Time expanded network of a contact set.

One vertex per (object, tick), bidirectional contact edges inside a tick and
directed hold edges from every tick to the next. This is the reference
semantics for reachability; it is never the disk-resident query path.
"""
from typing import NamedTuple

import networkx as nx

from reach.utils import ReachabilityQuery, TimeInterval
from reach.utils.model import check_query

__all__ = ("TenGraph", "Snapshot", "TenCounts", "build_ten", "ten_reachable", "ten_counts")


class Snapshot(NamedTuple):
    t: int
    graph: nx.Graph


class TenCounts(NamedTuple):
    vertices: int
    hold_edges: int
    contact_edges: int

    @property
    def edges(self):
        return self.hold_edges + self.contact_edges


class TenGraph:
    def __init__(self, graph: nx.DiGraph, n_objects, horizon: TimeInterval, contact_edges):
        self.graph = graph
        self.n_objects = n_objects
        self.horizon = horizon
        self.contact_edges = contact_edges

    @property
    def hold_edges(self):
        return self.n_objects * (self.horizon.length - 1)

    @property
    def counts(self):
        return TenCounts(self.graph.number_of_nodes(), self.hold_edges, self.contact_edges)

    def pairs_at(self, t):
        return sorted({(min(u[0], v[0]), max(u[0], v[0])) for u, v in self.snapshot(t).graph.edges()})

    def snapshot(self, t) -> Snapshot:
        if t not in self.horizon:
            raise ValueError(f"tick {t} is outside the horizon {self.horizon!r}")

        g = nx.Graph()
        g.add_nodes_from((o, t) for o in range(self.n_objects))
        g.add_edges_from((u, v) for u, v in self.graph.edges((o, t) for o in range(self.n_objects)) if v[1] == t)
        return Snapshot(t, g)

    def __repr__(self):
        return f"<TenGraph objects={self.n_objects} horizon={self.horizon!r} contact_edges={self.contact_edges}>"


def ten_counts(n_objects, horizon: TimeInterval, contacts):
    """Vertex and edge counts of the TEN, without building it."""
    return TenCounts(n_objects * horizon.length,
                     n_objects * (horizon.length - 1),
                     sum(c.validity.length for c in contacts))


def build_ten(contacts, n_objects, horizon: TimeInterval) -> TenGraph:
    g = nx.DiGraph()
    g.add_nodes_from((o, t) for t in horizon.ticks() for o in range(n_objects))
    g.add_edges_from(((o, t), (o, t + 1)) for t in range(horizon.start, horizon.end) for o in range(n_objects))

    contact_edges = 0
    for c in contacts:
        if not (0 <= c.a < n_objects and 0 <= c.b < n_objects):
            raise ValueError(f"contact {c} references an unknown object (population is {n_objects})")
        if not horizon.covers(c.validity):
            raise ValueError(f"contact {c} lies outside the horizon {horizon!r}")

        for t in c.validity.ticks():
            g.add_edge((c.a, t), (c.b, t))
            g.add_edge((c.b, t), (c.a, t))
            contact_edges += 1

    return TenGraph(g, n_objects, horizon, contact_edges)


def ten_reachable(ten: TenGraph, q: ReachabilityQuery) -> bool:
    check_query(q, ten.n_objects, ten.horizon)
    t1, t2 = q.interval
    # Edges never go back in time, so any path stays inside the interval.
    return nx.has_path(ten.graph, (q.source, t1), (q.destination, t2))
