"""Contact extraction by spatiotemporal self-join, and the SPJ baseline.

Two objects are in contact at a tick when their distance is at most d_T.
"""
from collections import defaultdict
from typing import NamedTuple

import logbook
import numpy as np

from reach.oracle import oracle_reach
from reach.utils import Config, Contact, ReachabilityQuery, TimeInterval, TrajectorySegment, TrajectorySet
from reach.utils.blockstore import BlockStore, Extent
from reach.utils.meta_engine import Engine
from reach.utils.model import check_query
from reach.utils.records import Float64, Column, Record

log = logbook.Logger("Contacts")

# Cells compared against each cell, so every unordered cell pair is visited once.
_HALF_NEIGHBOURHOOD = ((1, -1), (1, 0), (1, 1), (0, 1))


class ContactSet:
    """Contacts of a population over a horizon, sorted by ``(start, a, b)``."""

    def __init__(self, contacts, config: Config, n_objects):
        self.contacts = sorted(contacts, key=lambda c: (c.validity.start, c.a, c.b))
        self.config = config
        self.n_objects = n_objects
        self._by_tick = None

        for c in self.contacts:
            if c.b >= n_objects:
                raise ValueError(f"contact {c} references an object outside the population of {n_objects}")
            if not self.horizon.covers(c.validity):
                raise ValueError(f"contact {c} lies outside the horizon {self.horizon!r}")

    @property
    def horizon(self):
        return self.config.horizon

    def __iter__(self):
        return iter(self.contacts)

    def __len__(self):
        return len(self.contacts)

    def __eq__(self, other):
        return isinstance(other, ContactSet) and self.contacts == other.contacts

    def pairs_at(self, t):
        """The object pairs in contact at tick ``t``."""
        if self._by_tick is None:
            by_tick = defaultdict(list)
            for c in self.contacts:
                for tick in c.validity.ticks():
                    by_tick[tick].append((c.a, c.b))
            self._by_tick = by_tick

        return self._by_tick.get(t, ())

    def __repr__(self):
        return f"<ContactSet contacts={len(self)} objects={self.n_objects} horizon={self.horizon!r}>"


def close_pairs(points, d_T):
    """All index pairs ``(i, j)``, ``i < j``, of points at most ``d_T`` apart.

    Points are hashed into square cells of side ``d_T``; each cell is compared
    with itself and half of its eight neighbours.
    """
    points = np.asarray(points, dtype=np.float64)
    if len(points) < 2:
        return []

    limit = d_T * d_T
    keys = np.floor(points / d_T).astype(np.int64)
    buckets = defaultdict(list)
    for i, (cx, cy) in enumerate(keys.tolist()):
        buckets[(cx, cy)].append(i)

    buckets = {k: np.array(v) for k, v in buckets.items()}
    pairs = []
    for (cx, cy), own in buckets.items():
        mine = points[own]
        if len(own) > 1:
            d = mine[:, None, :] - mine[None, :, :]
            ii, jj = np.nonzero(np.triu((d * d).sum(axis=-1) <= limit, 1))
            pairs.extend(zip(own[ii].tolist(), own[jj].tolist()))

        for dx, dy in _HALF_NEIGHBOURHOOD:
            other = buckets.get((cx + dx, cy + dy))
            if other is None:
                continue

            d = mine[:, None, :] - points[other][None, :, :]
            ii, jj = np.nonzero((d * d).sum(axis=-1) <= limit)
            pairs.extend(zip(own[ii].tolist(), other[jj].tolist()))

    return sorted((i, j) if i < j else (j, i) for i, j in pairs)


def window_join(segments, d_T, w: TimeInterval):
    """Every pair within ``d_T`` at some tick of ``w``, with its maximal runs.

    Returns a set of ``(a, b, TimeInterval)`` with ``a < b``.
    """
    segments = sorted(segments, key=lambda s: s.object)
    for s in segments:
        if not s.window.covers(w):
            raise ValueError(f"segment {s!r} does not cover the join window {w!r}")

    if len(segments) < 2:
        return set()

    ids = np.array([s.object for s in segments])
    out = set()
    open_runs = {}
    for t in w.ticks():
        points = np.array([s.positions[t - s.window.start] for s in segments])
        current = {(int(ids[i]), int(ids[j])) for i, j in close_pairs(points, d_T)}

        for pair in [p for p in open_runs if p not in current]:
            out.add((*pair, TimeInterval(open_runs.pop(pair), t - 1)))

        for pair in current:
            open_runs.setdefault(pair, t)

    for pair, start in open_runs.items():
        out.add((*pair, TimeInterval(start, w.end)))

    return out


def extract_contacts(trajectories: TrajectorySet, config: Config = None) -> ContactSet:
    config = config or trajectories.config
    if config.horizon != trajectories.horizon:
        raise ValueError(f"horizon {config.horizon!r} does not match the trajectories' {trajectories.horizon!r}")

    runs = window_join(trajectories.segments(config.horizon), config.d_T, config.horizon)
    contacts = ContactSet([Contact.between(a, b, validity) for a, b, validity in runs], config,
                          trajectories.n_objects)
    log.info(f"Extracted {len(contacts)} contacts among {trajectories.n_objects} objects over "
             f"{config.horizon.length} ticks.")
    return contacts


class Position(Record):
    x = Column(Float64)
    y = Column(Float64)


class SpjTable(NamedTuple):
    """Trajectories stored object-major on a block store."""
    store: BlockStore
    extents: list
    config: Config
    n_objects: int

    @classmethod
    def build(cls, trajectories: TrajectorySet, store: BlockStore):
        extents = []
        with store.writer() as writer:
            for o in range(trajectories.n_objects):
                extents.append(writer.write(Position.pack_many(trajectories.positions[o].tolist())))

        log.info(f"Placed {trajectories.n_objects} trajectories on {store.n_blocks} blocks.")
        return cls(store, extents, trajectories.config, trajectories.n_objects)

    def segment(self, o, window: TimeInterval):
        size = Position.size()
        extent: Extent = self.extents[o]
        part = extent.sub((window.start - self.config.horizon.start) * size, window.length * size)
        positions = Position.to_array(self.store.read_extent(part))
        return TrajectorySegment(o, window, np.stack([positions['x'], positions['y']], axis=1))


def spj_query(table: SpjTable, q: ReachabilityQuery) -> bool:
    """Reads every segment of the interval, joins them, then propagates."""
    check_query(q, table.n_objects, table.config.horizon)
    if q.source == q.destination:
        return True

    segments = [table.segment(o, q.interval) for o in range(table.n_objects)]
    runs = window_join(segments, table.config.d_T, q.interval)
    window = Config(table.config.d_T, table.config.environment, q.interval)
    contacts = ContactSet([Contact.between(a, b, validity) for a, b, validity in runs], window, table.n_objects)
    return oracle_reach(contacts, q).reachable


class Spj(Engine):
    name = "spj"

    def prepare(self, instance):
        return instance.structure("spj", lambda: SpjTable.build(instance.trajectories, instance.new_store()))

    def answer(self, instance, query):
        return spj_query(self.prepare(instance), query)


setup = Spj.setup
