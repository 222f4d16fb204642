"""ReachGraph construction and disk placement.

The pipeline is

1. per tick, the connected components of the contact snapshot become vertices;
   an edge joins the components of consecutive ticks that share an object,
2. runs of identical components over consecutive ticks collapse into a single
   vertex spanning the run, reached through aggregated edges,
3. for every resolution ``L``, long edges join each component alive at an
   aligned tick ``kL`` to every component alive at ``(k+1)L`` it reaches,
4. vertices are grouped into partitions by bounded-depth BFS in time order
   and packed onto blocks, together with a per-tick object to vertex map.
"""
import enum
import time
from bisect import bisect_left
from typing import NamedTuple

import logbook
import lru
import numpy as np
import psutil

from reach.ten import ten_counts
from reach.utils import BlockStore, Extent, ReachabilityQuery, TimeInterval
from reach.utils.model import QueryError, check_query
from reach.utils.records import Column, Record, UInt32, read_manifest, write_manifest
from reach.utils.unionfind import UnionFind

log = logbook.Logger("ReachGraph")

__all__ = (
    "ComponentVertex",
    "ComponentDag",
    "LongEdgeLayer",
    "ReachGraph",
    "Partition",
    "Placement",
    "ReachGraphIndex",
    "ReachGraphStats",
    "reduce_components",
    "reduce_network",
    "merge_runs",
    "augment",
    "partition",
    "partition_and_place",
    "build_reachgraph",
)


class ComponentVertex:
    __slots__ = ("id", "t_start", "t_end", "members")

    def __init__(self, id, t_start, t_end, members):
        if not members:
            raise ValueError(f"component c{id} has no members")
        self.id = id
        self.t_start = t_start
        self.t_end = t_end
        self.members = tuple(members)

    @property
    def length(self):
        return self.t_end - self.t_start + 1

    def covers(self, t):
        return self.t_start <= t <= self.t_end

    def __eq__(self, other):
        return (isinstance(other, ComponentVertex) and
                (self.id, self.t_start, self.t_end, self.members) ==
                (other.id, other.t_start, other.t_end, other.members))

    def __repr__(self):
        return f"<c{self.id} [{self.t_start},{self.t_end}] {{{', '.join(f'o{o}' for o in self.members)}}}>"


class ComponentDag:
    """Components and the edges between consecutive ones.

    Vertex ids are ordered by ``(t_start, smallest member)``, which is a
    topological order. Every child starts the tick after its parent ends, so
    an edge ``u -> v`` has weight ``v.length`` and ``u.t_end + weight == v.t_end``.
    """

    def __init__(self, vertices, out_edges, n_objects, horizon: TimeInterval, locator=None):
        self.vertices = vertices
        self.out_edges = [sorted(set(e)) for e in out_edges]
        self.n_objects = n_objects
        self.horizon = horizon

        self.in_edges = [[] for _ in vertices]
        for u, children in enumerate(self.out_edges):
            for v in children:
                self.in_edges[v].append(u)

        if locator is None:
            locator = np.full((horizon.length, n_objects), -1, dtype=np.int32)
            for v in vertices:
                locator[v.t_start - horizon.start:v.t_end - horizon.start + 1, list(v.members)] = v.id
        self.locator = locator
        self._starts = [v.t_start for v in vertices]

    @classmethod
    def from_edges(cls, spans, edges, n_objects, horizon: TimeInterval):
        """Builds a DAG by hand from ``(t_start, t_end, members)`` spans and ``(u, v)`` pairs."""
        vertices = [ComponentVertex(i, a, b, m) for i, (a, b, m) in enumerate(spans)]
        out_edges = [[] for _ in vertices]
        for u, v in edges:
            out_edges[u].append(v)
        return cls(vertices, out_edges, n_objects, horizon)

    def __len__(self):
        return len(self.vertices)

    @property
    def n_edges(self):
        return sum(len(e) for e in self.out_edges)

    def weight(self, u, v):
        return self.vertices[v].length

    def edges(self):
        for u, children in enumerate(self.out_edges):
            for v in children:
                yield u, v, self.vertices[v].length

    def vertex_at(self, o, t) -> ComponentVertex:
        return self.vertices[int(self.locator[t - self.horizon.start, o])]

    def alive_at(self, t):
        """Ids of the vertices covering tick ``t``, ascending."""
        return sorted(set(self.locator[t - self.horizon.start].tolist()))

    def starting_between(self, lo, hi):
        """Ids of the vertices whose span starts inside ``[lo, hi]``."""
        return range(bisect_left(self._starts, lo), bisect_left(self._starts, hi + 1))

    def reachable(self, q: ReachabilityQuery) -> bool:
        check_query(q, self.n_objects, self.horizon)
        t1, t2 = q.interval
        start = self.vertex_at(q.source, t1).id
        target = self.vertex_at(q.destination, t2).id

        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            if u == target:
                return True
            for v in self.out_edges[u]:
                if v not in seen and self.vertices[v].t_start <= t2:
                    seen.add(v)
                    stack.append(v)
        return False

    def __repr__(self):
        return f"<ComponentDag vertices={len(self)} edges={self.n_edges} horizon={self.horizon!r}>"


def _components(pairs, n_objects):
    uf = UnionFind(n_objects)
    for a, b in pairs:
        uf.union(a, b)
    return uf.groups()


def reduce_components(network) -> ComponentDag:
    """One vertex per connected component per tick, edges between consecutive ticks.

    ``network`` is a :class:`~reach.ten.TenGraph` or anything else exposing
    ``n_objects``, ``horizon`` and ``pairs_at(t)``.
    """
    n, horizon = network.n_objects, network.horizon
    locator = np.empty((horizon.length, n), dtype=np.int32)
    vertices, out_edges = [], []

    for t in horizon.ticks():
        row = locator[t - horizon.start]
        for group in _components(network.pairs_at(t), n):
            row[group] = len(vertices)
            vertices.append(ComponentVertex(len(vertices), t, t, group))
            out_edges.append([])

        if t > horizon.start:
            previous = locator[t - horizon.start - 1]
            for u, v in np.unique(np.stack([previous, row], axis=1), axis=0).tolist():
                out_edges[u].append(v)

    return ComponentDag(vertices, out_edges, n, horizon, locator)


def merge_runs(dag: ComponentDag) -> ComponentDag:
    """Collapses runs of identical components into their last snapshot's span.

    A vertex continues its parent's run when it is the parent's only child,
    the parent is its only parent and both have the same members.
    """
    run_of = np.empty(len(dag), dtype=np.int32)
    runs = []
    for v in dag.vertices:
        parents = dag.in_edges[v.id]
        if len(parents) == 1:
            p = dag.vertices[parents[0]]
            if dag.out_edges[p.id] == [v.id] and p.members == v.members and p.t_end + 1 == v.t_start:
                run = runs[run_of[p.id]]
                run[1] = v.t_end
                run_of[v.id] = run_of[p.id]
                continue

        run_of[v.id] = len(runs)
        runs.append([v.t_start, v.t_end, v.members])

    vertices = [ComponentVertex(i, a, b, m) for i, (a, b, m) in enumerate(runs)]
    out_edges = [[] for _ in vertices]
    for u, v, _ in dag.edges():
        ru, rv = int(run_of[u]), int(run_of[v])
        if ru != rv:
            out_edges[ru].append(rv)

    return ComponentDag(vertices, out_edges, dag.n_objects, dag.horizon, run_of[dag.locator])


class ReductionCounts(NamedTuple):
    vertices: int
    edges: int


def reduce_network(network):
    """:func:`reduce_components` and :func:`merge_runs` in a single pass over the ticks.

    Returns the merged DAG and the vertex and edge counts the unmerged DAG
    would have had.
    """
    n, horizon = network.n_objects, network.horizon
    locator = np.empty((horizon.length, n), dtype=np.int32)
    vertices, out_edges = [], []
    unmerged_vertices = unmerged_edges = 0

    alive = {}
    for t in horizon.ticks():
        row = locator[t - horizon.start]
        groups = _components(network.pairs_at(t), n)
        unmerged_vertices += len(groups)

        still_alive = {}
        for group in groups:
            key = tuple(group)
            vid = alive.get(key)
            if vid is None:
                vid = len(vertices)
                vertices.append(ComponentVertex(vid, t, t, key))
                out_edges.append([])
            else:
                vertices[vid].t_end = t
            still_alive[key] = vid
            row[group] = vid

        if t > horizon.start:
            previous = locator[t - horizon.start - 1]
            transitions = np.unique(np.stack([previous, row], axis=1), axis=0).tolist()
            unmerged_edges += len(transitions)
            for u, v in transitions:
                if u != v:
                    out_edges[u].append(v)

        alive = still_alive

    dag = ComponentDag(vertices, out_edges, n, horizon, locator)
    return dag, ReductionCounts(unmerged_vertices, unmerged_edges)


class LongEdgeLayer:
    """Edges of one resolution, keyed by ``(source, boundary tick)``."""
    __slots__ = ("resolution", "edges")

    def __init__(self, resolution, edges):
        self.resolution = resolution
        self.edges = edges

    @property
    def n_edges(self):
        return sum(len(v) for v in self.edges.values())

    @property
    def average_degree(self):
        sources = {src for src, _ in self.edges}
        return self.n_edges / len(sources) if sources else 0.0

    def targets(self, v, boundary):
        return self.edges.get((v, boundary), ())

    def __repr__(self):
        return f"<LongEdgeLayer L={self.resolution} edges={self.n_edges}>"


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _long_edges(dag: ComponentDag, resolution):
    """Sweeps each aligned interval ``[kL, (k+1)L]`` forward, propagating source labels."""
    horizon = dag.horizon
    edges = {}
    first = -(-horizon.start // resolution) * resolution
    for t_a in range(first, horizon.end - resolution + 1, resolution):
        t_b = t_a + resolution
        sources = dag.alive_at(t_a)
        labels = {v: 1 << i for i, v in enumerate(sources)}

        for v in dag.starting_between(t_a + 1, t_b):
            label = 0
            for p in dag.in_edges[v]:
                label |= labels[p]
            labels[v] = label

        for v in dag.alive_at(t_b):
            for i in _bits(labels[v]):
                src = sources[i]
                if src != v:
                    edges.setdefault((src, t_a), []).append(v)

    return LongEdgeLayer(resolution, edges)


class ReachGraph:
    def __init__(self, base: ComponentDag, layers):
        self.base = base
        self.layers = layers

    @property
    def resolutions(self):
        return sorted(self.layers)

    @property
    def reverse_base(self):
        return self.base.in_edges

    def long_edges_of(self, v: ComponentVertex):
        """Per resolution, descending, the long edges leaving ``v`` at its last aligned tick."""
        out = []
        for L in sorted(self.layers, reverse=True):
            boundary = (v.t_end // L) * L
            if boundary < v.t_start:
                continue
            targets = self.layers[L].targets(v.id, boundary)
            if targets:
                out.append((L, boundary, targets))
        return out

    def __repr__(self):
        return f"<ReachGraph base={self.base!r} resolutions={self.resolutions}>"


def augment(dag: ComponentDag, resolutions) -> ReachGraph:
    resolutions = list(resolutions)
    if any(b <= a for a, b in zip(resolutions, resolutions[1:])):
        raise ValueError(f"resolutions must be strictly ascending, got {resolutions}")
    if resolutions and resolutions[0] < 2:
        raise ValueError(f"long-edge resolutions start at 2 ticks, got {resolutions[0]}")

    layers = {}
    for L in resolutions:
        layers[L] = layer = _long_edges(dag, L)
        log.debug(f"Layer L={L}: {layer.n_edges} long edges.")

    return ReachGraph(dag, layers)


class Placement(enum.Enum):
    topological = 1
    random = 2


class Partition(NamedTuple):
    id: int
    root: int
    members: tuple


def partition(dag: ComponentDag, d_p) -> list:
    """Groups vertices by BFS over base edges, at most ``d_p`` hops from each root.

    Roots are taken in id order among unassigned vertices and a BFS only
    collects unassigned vertices.
    """
    if d_p < 1:
        raise ValueError(f"partition depth must be at least 1, got {d_p}")

    assigned = np.full(len(dag), -1, dtype=np.int64)
    partitions = []
    for root in range(len(dag)):
        if assigned[root] >= 0:
            continue

        pid = len(partitions)
        assigned[root] = pid
        members = [root]
        frontier = [root]
        for _ in range(d_p):
            following = []
            for u in frontier:
                for v in dag.out_edges[u]:
                    if assigned[v] < 0:
                        assigned[v] = pid
                        members.append(v)
                        following.append(v)
            frontier = following
            if not frontier:
                break

        partitions.append(Partition(pid, root, tuple(members)))

    return partitions


class VertexHeader(Record):
    id = Column(UInt32)
    t_start = Column(UInt32)
    t_end = Column(UInt32)
    n_members = Column(UInt32)
    n_out = Column(UInt32)
    n_in = Column(UInt32)
    # Layers with stored long edges.
    n_long = Column(UInt32)


class Member(Record):
    object = Column(UInt32)


class EdgeEntry(Record):
    # The other end of the edge.
    vertex = Column(UInt32)
    # Partition holding that vertex.
    partition = Column(UInt32)
    # Ticks spanned, aggregated edges span more than one.
    weight = Column(UInt32)


class LongEdgeHeader(Record):
    resolution = Column(UInt32)
    boundary = Column(UInt32)
    n_targets = Column(UInt32)


class PartitionHeader(Record):
    partition = Column(UInt32)
    n_vertices = Column(UInt32)


class TimeIndexEntry(Record):
    vertex = Column(UInt32)
    partition = Column(UInt32)


class TimelineEntry(Record):
    vertex = Column(UInt32)


RECORDS = (VertexHeader, Member, EdgeEntry, LongEdgeHeader, PartitionHeader, TimeIndexEntry, TimelineEntry)


class VertexRecord:
    """A vertex as read back from its partition."""
    __slots__ = ("id", "t_start", "t_end", "members", "out_edges", "in_edges", "long_edges")

    def __init__(self, id, t_start, t_end, members, out_edges, in_edges, long_edges):
        self.id = id
        self.t_start = t_start
        self.t_end = t_end
        self.members = members
        # (vertex, partition, weight) triples.
        self.out_edges = out_edges
        self.in_edges = in_edges
        # (resolution, boundary, [(vertex, partition)]), highest resolution first.
        self.long_edges = long_edges

    def __repr__(self):
        return f"<VertexRecord c{self.id} [{self.t_start},{self.t_end}] members={len(self.members)}>"


def _encode_partition(graph: ReachGraph, part: Partition, part_of):
    dag = graph.base
    chunks = [PartitionHeader.pack(part.id, len(part.members))]
    for vid in part.members:
        v = dag.vertices[vid]
        long_edges = graph.long_edges_of(v)
        chunks.append(VertexHeader.pack(v.id, v.t_start, v.t_end, len(v.members),
                                        len(dag.out_edges[vid]), len(dag.in_edges[vid]), len(long_edges)))
        chunks.append(Member.pack_many((o,) for o in v.members))
        chunks.append(EdgeEntry.pack_many((w, part_of[w], dag.vertices[w].length) for w in dag.out_edges[vid]))
        chunks.append(EdgeEntry.pack_many((w, part_of[w], v.length) for w in dag.in_edges[vid]))
        for L, boundary, targets in long_edges:
            chunks.append(LongEdgeHeader.pack(L, boundary, len(targets)))
            chunks.append(EdgeEntry.pack_many((w, part_of[w], L) for w in targets))

    return b"".join(chunks)


def _decode_partition(data):
    pid, count = PartitionHeader.unpack(data)
    offset = PartitionHeader.size()
    vertices = {}
    for _ in range(count):
        vid, t_start, t_end, n_members, n_out, n_in, n_long = VertexHeader.unpack(data, offset)
        offset += VertexHeader.size()

        members = tuple(m for m, in Member.unpack_many(data, n_members, offset))
        offset += n_members * Member.size()
        out_edges = EdgeEntry.unpack_many(data, n_out, offset)
        offset += n_out * EdgeEntry.size()
        in_edges = EdgeEntry.unpack_many(data, n_in, offset)
        offset += n_in * EdgeEntry.size()

        long_edges = []
        for _ in range(n_long):
            L, boundary, n_targets = LongEdgeHeader.unpack(data, offset)
            offset += LongEdgeHeader.size()
            targets = [(w, p) for w, p, _ in EdgeEntry.unpack_many(data, n_targets, offset)]
            offset += n_targets * EdgeEntry.size()
            long_edges.append((L, boundary, targets))

        vertices[vid] = VertexRecord(vid, t_start, t_end, members, out_edges, in_edges, long_edges)

    return pid, vertices


class ReachGraphStats(NamedTuple):
    ten_vertices: int
    ten_edges: int
    unmerged_vertices: int
    unmerged_edges: int
    vertices: int
    edges: int
    layers: dict
    partitions: int
    blocks: int
    seconds: float
    rss_mib: float

    @property
    def vertex_reduction(self):
        return 1 - self.vertices / self.ten_vertices if self.ten_vertices else 0.0

    @property
    def edge_reduction(self):
        return 1 - self.edges / self.ten_edges if self.ten_edges else 0.0

    @property
    def mean_partition_size(self):
        return self.vertices / self.partitions if self.partitions else 0.0

    def rows(self):
        rows = [
            ("TEN vertices", self.ten_vertices),
            ("TEN edges", self.ten_edges),
            ("D_N vertices before merging", self.unmerged_vertices),
            ("D_N edges before merging", self.unmerged_edges),
            ("D_N vertices", self.vertices),
            ("D_N edges", self.edges),
            ("vertex reduction", self.vertex_reduction),
            ("edge reduction", self.edge_reduction),
        ]
        for L, (n_edges, degree) in sorted(self.layers.items()):
            rows.append((f"layer {L} edges", n_edges))
            rows.append((f"layer {L} mean out-degree", float(degree)))
        rows += [
            ("partitions", self.partitions),
            ("mean partition size", self.mean_partition_size),
            ("blocks", self.blocks),
            ("seconds", self.seconds),
            ("RSS MiB", self.rss_mib),
        ]
        return rows


def _persisted(stats):
    # Timings differ between runs and stay out of the manifest.
    if stats is None:
        return None
    return {k: v for k, v in stats._asdict().items() if k not in ("seconds", "rss_mib")}


class ReachGraphIndex:
    """A placed ReachGraph: partitions, the time index and the object timelines on one block store.

    The time index is tick-major, so the components of every object at one tick
    share a block. The timelines hold only vertex ids, object-major, so one block
    covers a long stretch of a single object.
    """
    KIND = "reachgraph"

    def __init__(self, store: BlockStore, directory, time_index: Extent, timeline: Extent, n_objects,
                 horizon: TimeInterval, resolutions, d_p, placement: Placement, stats: ReachGraphStats = None):
        self.store = store
        # Partition id -> extent of its vertex records.
        self.directory = directory
        self.time_index = time_index
        self.timeline = timeline
        self.n_objects = n_objects
        self.horizon = horizon
        self.resolutions = list(resolutions)
        self.d_p = d_p
        self.placement = placement
        self.stats = stats
        self._decoded = lru.LRU(4096)

    @property
    def n_partitions(self):
        return len(self.directory)

    def find_vertex(self, o, t):
        """Returns ``(vertex id, partition id)`` of the component holding ``o`` at ``t``."""
        if not 0 <= o < self.n_objects:
            raise QueryError(f"unknown object o{o} (population is {self.n_objects})")
        if t not in self.horizon:
            raise QueryError(f"tick {t} is outside the horizon {self.horizon!r}")

        size = TimeIndexEntry.size()
        entry = self.time_index.sub(((t - self.horizon.start) * self.n_objects + o) * size, size)
        return TimeIndexEntry.unpack(self.store.read_extent(entry))

    def timeline_vertex(self, o, t):
        """Vertex id of the component holding ``o`` at ``t``, read from its timeline."""
        if not 0 <= o < self.n_objects:
            raise QueryError(f"unknown object o{o} (population is {self.n_objects})")
        if t not in self.horizon:
            raise QueryError(f"tick {t} is outside the horizon {self.horizon!r}")

        size = TimelineEntry.size()
        entry = self.timeline.sub((o * self.horizon.length + t - self.horizon.start) * size, size)
        return TimelineEntry.unpack(self.store.read_extent(entry))[0]

    def vertex(self, vid, pid) -> VertexRecord:
        data = self.store.read_extent(self.directory[pid])
        try:
            vertices = self._decoded[pid]
        except KeyError:
            _, vertices = _decode_partition(data)
            self._decoded[pid] = vertices
        return vertices[vid]

    def save(self, directory):
        data = {
            "kind": self.KIND,
            "objects": self.n_objects,
            "horizon": list(self.horizon),
            "resolutions": self.resolutions,
            "partition_depth": self.d_p,
            "placement": self.placement.name,
            "store": self.store.save(directory),
            "directory": {
                "offsets": [e.offset for e in self.directory],
                "lengths": [e.length for e in self.directory],
            },
            "time_index": list(self.time_index),
            "timeline": list(self.timeline),
            "stats": _persisted(self.stats),
        }
        if self.stats:
            data["stats"]["layers"] = {str(L): list(v) for L, v in self.stats.layers.items()}
        write_manifest(directory, data, RECORDS)

    @classmethod
    def open(cls, directory, *, buffer_blocks=1024, sequential_discount=20):
        data = read_manifest(directory, cls.KIND, RECORDS)
        store = BlockStore.load(directory, data["store"], buffer_blocks=buffer_blocks,
                                sequential_discount=sequential_discount)
        extents = [Extent(o, n) for o, n in zip(data["directory"]["offsets"], data["directory"]["lengths"])]

        stats = data.get("stats")
        if stats:
            stats["layers"] = {int(L): tuple(v) for L, v in stats["layers"].items()}
            stats = ReachGraphStats(**stats, seconds=0.0, rss_mib=0.0)

        return cls(store, extents, Extent(*data["time_index"]), Extent(*data["timeline"]), data["objects"],
                   TimeInterval(*data["horizon"]), data["resolutions"], data["partition_depth"],
                   Placement[data["placement"]], stats)

    def __repr__(self):
        return (f"<ReachGraphIndex partitions={self.n_partitions} resolutions={self.resolutions} "
                f"d_p={self.d_p} placement={self.placement.name}>")


def partition_and_place(graph: ReachGraph, d_p, store: BlockStore, *, placement=Placement.topological, seed=0):
    """Writes the partitions of ``graph``, its time index and the object timelines onto ``store``."""
    dag = graph.base
    if placement is Placement.topological:
        partitions = partition(dag, d_p)
        order = range(len(partitions))
    else:
        partitions = [Partition(v, v, (v,)) for v in range(len(dag))]
        order = np.random.default_rng(seed).permutation(len(partitions)).tolist()

    part_of = np.empty(len(dag), dtype=np.int64)
    for part in partitions:
        part_of[list(part.members)] = part.id
    part_of = part_of.tolist()

    directory = [None] * len(partitions)
    with store.writer() as writer:
        for pid in order:
            directory[pid] = writer.write(_encode_partition(graph, partitions[pid], part_of))

        writer.align()
        entries = np.empty((dag.horizon.length, dag.n_objects), dtype=TimeIndexEntry.dtype())
        entries["vertex"] = dag.locator
        entries["partition"] = np.asarray(part_of, dtype=np.int64)[dag.locator]
        time_index = writer.write(entries.tobytes())

        writer.align()
        timeline = writer.write(np.ascontiguousarray(dag.locator.T, dtype="<u4").tobytes())

    log.info(f"Placed {len(dag)} vertices in {len(partitions)} partitions ({placement.name}) "
             f"on {store.n_blocks} blocks.")
    return ReachGraphIndex(store, directory, time_index, timeline, dag.n_objects, dag.horizon, graph.resolutions,
                           d_p, placement)


def build_reachgraph(contacts, store: BlockStore, *, resolutions=(2, 4, 8, 16, 32), d_p=32,
                     placement=Placement.topological, seed=0) -> ReachGraphIndex:
    """Reduces, augments and places the contact network of ``contacts``."""
    started = time.perf_counter()
    ten = ten_counts(contacts.n_objects, contacts.horizon, contacts)
    log.info(f"TEN: {ten.vertices} vertices, {ten.edges} edges.")

    dag, unmerged = reduce_network(contacts)
    log.info(f"D_N: {unmerged.vertices} -> {len(dag)} vertices, {unmerged.edges} -> {dag.n_edges} edges "
             f"after merging runs.")

    graph = augment(dag, resolutions)
    for L, layer in sorted(graph.layers.items()):
        log.info(f"Layer {L}: {layer.n_edges} long edges, mean out-degree {layer.average_degree:.2f}.")

    index = partition_and_place(graph, d_p, store, placement=placement, seed=seed)
    index.stats = ReachGraphStats(
        ten.vertices, ten.edges, unmerged.vertices, unmerged.edges, len(dag), dag.n_edges,
        {L: (layer.n_edges, layer.average_degree) for L, layer in graph.layers.items()},
        index.n_partitions, store.n_blocks, time.perf_counter() - started,
        psutil.Process().memory_info().rss / 1024 ** 2,
    )
    return index
