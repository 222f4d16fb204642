"""ReachGrid: temporal buckets of R_T ticks, each a uniform grid of R_S-meter cells.

Buckets are laid out in time order. Inside a bucket, non-empty cells are
packed in cell-id order, followed by an object-major locator giving each
object's cell at every tick of the bucket. Both start on a fresh block.

A query sweeps the interval tick by tick, growing the set of seeds (objects
already holding the item) and loading only the cells a seed can touch.
"""
import math
import time
from collections import defaultdict
from typing import NamedTuple

import logbook
import numpy as np

from reach.utils import BlockStore, Extent, ReachabilityQuery, TimeInterval, TrajectorySet
from reach.utils.meta_engine import Engine
from reach.utils.model import QueryError, TrajectorySegment, check_query
from reach.utils.records import Column, Float64, Record, UInt32, read_manifest, write_manifest

log = logbook.Logger("ReachGrid")

__all__ = (
    "GridIndex",
    "GridStats",
    "GridTrace",
    "build_grid",
    "find_cells",
    "neighbor_cells",
    "grid_query",
)


class GridSample(Record):
    tick = Column(UInt32)
    object = Column(UInt32)
    x = Column(Float64)
    y = Column(Float64)


class LocatorEntry(Record):
    cell = Column(UInt32)


RECORDS = (GridSample, LocatorEntry)


class Bucket(NamedTuple):
    interval: TimeInterval
    # Cell id -> extent of its samples, for non-empty cells only.
    cells: dict
    locator: Extent
    # First block and one past the last block of the bucket.
    blocks: tuple


class GridStats(NamedTuple):
    buckets: int
    cells: int
    samples: int
    blocks: int
    seconds: float

    @property
    def mean_samples_per_cell(self):
        return self.samples / self.cells if self.cells else 0.0

    def rows(self):
        return [
            ("buckets", self.buckets),
            ("non-empty cells", self.cells),
            ("mean samples per cell", self.mean_samples_per_cell),
            ("blocks", self.blocks),
            ("seconds", self.seconds),
        ]


class GridIndex:
    KIND = "reachgrid"

    def __init__(self, store: BlockStore, buckets, R_T, R_S, nrows, ncols, d_T, n_objects,
                 horizon: TimeInterval, stats: GridStats = None):
        self.store = store
        self.buckets = buckets
        self.R_T = R_T
        self.R_S = R_S
        self.nrows = nrows
        self.ncols = ncols
        self.d_T = d_T
        self.n_objects = n_objects
        self.horizon = horizon
        self.stats = stats

    def bucket_of(self, t):
        return (t - self.horizon.start) // self.R_T

    def _col_row(self, x, y):
        # Points outside the environment clamp to the border cells.
        col = min(max(int(math.floor(x / self.R_S)), 0), self.ncols - 1)
        row = min(max(int(math.floor(y / self.R_S)), 0), self.nrows - 1)
        return col, row

    def cell_of(self, x, y):
        col, row = self._col_row(x, y)
        return row * self.ncols + col

    def cells_in_box(self, x0, y0, x1, y1):
        c0, r0 = self._col_row(x0, y0)
        c1, r1 = self._col_row(x1, y1)
        return {r * self.ncols + c for r in range(r0, r1 + 1) for c in range(c0, c1 + 1)}

    def locator_cells(self, o, window: TimeInterval):
        """Cells holding ``o`` at each tick of ``window``, which must lie in one bucket."""
        if not 0 <= o < self.n_objects:
            raise QueryError(f"unknown object o{o} (population is {self.n_objects})")

        bucket = self.buckets[self.bucket_of(window.start)]
        if not bucket.interval.covers(window):
            raise QueryError(f"window {window!r} crosses the bucket {bucket.interval!r}")

        size = LocatorEntry.size()
        offset = (o * bucket.interval.length + window.start - bucket.interval.start) * size
        data = self.store.read_extent(bucket.locator.sub(offset, window.length * size))
        return [int(c) for c in LocatorEntry.to_array(data)["cell"]]

    def save(self, directory):
        data = {
            "kind": self.KIND,
            "objects": self.n_objects,
            "horizon": list(self.horizon),
            "d_T": self.d_T,
            "R_T": self.R_T,
            "R_S": self.R_S,
            "grid": [self.nrows, self.ncols],
            "store": self.store.save(directory),
            "buckets": [
                {
                    "interval": list(b.interval),
                    "cells": {str(c): list(e) for c, e in b.cells.items()},
                    "locator": list(b.locator),
                    "blocks": list(b.blocks),
                }
                for b in self.buckets
            ],
            "stats": {k: v for k, v in self.stats._asdict().items() if k != "seconds"} if self.stats else None,
        }
        write_manifest(directory, data, RECORDS)

    @classmethod
    def open(cls, directory, *, buffer_blocks=1024, sequential_discount=20):
        data = read_manifest(directory, cls.KIND, RECORDS)
        store = BlockStore.load(directory, data["store"], buffer_blocks=buffer_blocks,
                                sequential_discount=sequential_discount)
        buckets = [
            Bucket(TimeInterval(*b["interval"]), {int(c): Extent(*e) for c, e in b["cells"].items()},
                   Extent(*b["locator"]), tuple(b["blocks"]))
            for b in data["buckets"]
        ]
        stats = GridStats(**data["stats"], seconds=0.0) if data.get("stats") else None
        return cls(store, buckets, data["R_T"], data["R_S"], *data["grid"], data["d_T"], data["objects"],
                   TimeInterval(*data["horizon"]), stats)

    def __repr__(self):
        return (f"<GridIndex R_T={self.R_T} R_S={self.R_S} grid={self.nrows}x{self.ncols} "
                f"buckets={len(self.buckets)}>")


def build_grid(trajectories: TrajectorySet, R_T, R_S, store: BlockStore) -> GridIndex:
    if R_T < 1:
        raise ValueError(f"R_T must be at least one tick, got {R_T}")
    if not R_S > 0:
        raise ValueError(f"R_S must be positive, got {R_S}")

    started = time.perf_counter()
    env = trajectories.config.environment
    horizon = trajectories.horizon
    ncols = max(1, math.ceil(env.width / R_S))
    nrows = max(1, math.ceil(env.height / R_S))

    positions = trajectories.positions
    cols = np.clip(np.floor(positions[..., 0] / R_S).astype(np.int64), 0, ncols - 1)
    rows = np.clip(np.floor(positions[..., 1] / R_S).astype(np.int64), 0, nrows - 1)
    cells = rows * ncols + cols

    n = trajectories.n_objects
    buckets = []
    n_cells = n_samples = 0
    dtype = GridSample.dtype()
    with store.writer() as writer:
        for start in range(horizon.start, horizon.end + 1, R_T):
            interval = TimeInterval(start, min(start + R_T - 1, horizon.end))
            lo, hi = start - horizon.start, interval.end - horizon.start + 1
            first_block = store.n_blocks

            own = cells[:, lo:hi]
            ticks = np.broadcast_to(np.arange(interval.start, interval.end + 1), own.shape)
            objects = np.broadcast_to(np.arange(n)[:, None], own.shape)

            # Each sample also goes to the cells of its neighbouring ticks inside the bucket,
            # so a cell holds both ends of every crossing.
            keys = [np.stack([own, ticks, objects], axis=-1).reshape(-1, 3)]
            if own.shape[1] > 1:
                keys.append(np.stack([own[:, :-1], ticks[:, 1:], objects[:, 1:]], axis=-1).reshape(-1, 3))
                keys.append(np.stack([own[:, 1:], ticks[:, :-1], objects[:, :-1]], axis=-1).reshape(-1, 3))
            keys = np.unique(np.concatenate(keys), axis=0)

            samples = np.empty(len(keys), dtype=dtype)
            samples["tick"] = keys[:, 1]
            samples["object"] = keys[:, 2]
            samples["x"] = positions[keys[:, 2], keys[:, 1] - horizon.start, 0]
            samples["y"] = positions[keys[:, 2], keys[:, 1] - horizon.start, 1]

            extents = {}
            boundaries = np.flatnonzero(np.diff(keys[:, 0])) + 1
            for chunk_keys, chunk in zip(np.split(keys[:, 0], boundaries), np.split(samples, boundaries)):
                extents[int(chunk_keys[0])] = writer.write(chunk.tobytes())

            writer.align()
            locator = writer.write(own.astype("<u4").tobytes())
            writer.align()

            buckets.append(Bucket(interval, extents, locator, (first_block, store.n_blocks)))
            n_cells += len(extents)
            n_samples += len(samples)

    stats = GridStats(len(buckets), n_cells, n_samples, store.n_blocks, time.perf_counter() - started)
    log.info(f"Built {len(buckets)} buckets of {R_T} ticks on a {nrows}x{ncols} grid of {R_S} m cells: "
             f"{n_cells} non-empty cells, {store.n_blocks} blocks.")
    return GridIndex(store, buckets, R_T, R_S, nrows, ncols, trajectories.config.d_T, n, horizon, stats)


def find_cells(index: GridIndex, seeds, t):
    """Cells holding the seeds at tick ``t``, one locator read per seed."""
    if t not in index.horizon:
        raise QueryError(f"tick {t} is outside the horizon {index.horizon!r}")
    window = TimeInterval(t, t)
    return {index.locator_cells(o, window)[0] for o in seeds}


def neighbor_cells(index: GridIndex, segments, d_T):
    """Cells intersecting the ``d_T``-inflated bounding box of any segment."""
    out = set()
    for segment in segments:
        x0, y0, x1, y1 = segment.mbr()
        out |= index.cells_in_box(x0 - d_T, y0 - d_T, x1 + d_T, y1 + d_T)
    return out


class GridTrace:
    def __init__(self):
        # Bucket index -> cells loaded while sweeping it, in load order.
        self.cells = defaultdict(list)
        # (tick, object) in the order objects joined the seeds.
        self.discoveries = []

    def __repr__(self):
        return f"<GridTrace buckets={len(self.cells)} discoveries={len(self.discoveries)}>"


class _BucketSweep:
    """Cells loaded for one bucket; their blocks are pinned until :meth:`release`."""

    def __init__(self, index: GridIndex, bucket_id, trace):
        self.index = index
        self.bucket_id = bucket_id
        self.bucket = index.buckets[bucket_id]
        self.trace = trace
        self.loaded = set()
        self.blocks = set()
        # Tick -> object -> position.
        self.samples = defaultdict(dict)

    def load(self, cells):
        store = self.index.store
        for cell in sorted(set(cells) - self.loaded):
            self.loaded.add(cell)
            extent = self.bucket.cells.get(cell)
            if extent is None:
                continue

            store.pin_extent(extent)
            self.blocks.update(extent.blocks(store.page_size))
            for tick, o, x, y in GridSample.to_array(store.read_extent(extent)).tolist():
                self.samples[tick][o] = (x, y)

            if self.trace is not None:
                self.trace.cells[self.bucket_id].append(cell)

    def add_seed(self, o, t):
        """Load the cells of ``o``'s segment from ``t`` to the bucket end and their ``d_T`` neighbourhood."""
        window = TimeInterval(t, self.bucket.interval.end)
        self.load(self.index.locator_cells(o, window))

        track = np.array([self.samples[tick][o] for tick in window.ticks()])
        self.load(neighbor_cells(self.index, [TrajectorySegment(o, window, track)], self.index.d_T))

    def release(self):
        store = self.index.store
        for block in self.blocks:
            store.unpin(block)
            store.discard(block)


def _closest_new(present, seeds, d_T):
    """Smallest non-seed object within ``d_T`` of a seed, or ``None``."""
    candidates = sorted(o for o in present if o not in seeds)
    if not candidates:
        return None

    here = np.array([present[o] for o in seeds if o in present])
    there = np.array([present[o] for o in candidates])
    d = there[:, None, :] - here[None, :, :]
    close = np.flatnonzero(((d * d).sum(axis=-1) <= d_T * d_T).any(axis=1))
    return candidates[close[0]] if len(close) else None


def grid_query(index: GridIndex, q: ReachabilityQuery, *, trace: GridTrace = None) -> bool:
    check_query(q, index.n_objects, index.horizon)
    if q.source == q.destination:
        return True

    t1, t2 = q.interval
    seeds = {q.source}
    for bucket_id in range(index.bucket_of(t1), index.bucket_of(t2) + 1):
        sweep = _BucketSweep(index, bucket_id, trace)
        interval = sweep.bucket.interval
        lo, hi = max(t1, interval.start), min(t2, interval.end)
        try:
            sweep.load(find_cells(index, seeds, lo))
            for o in sorted(seeds):
                sweep.add_seed(o, lo)

            for t in range(lo, hi + 1):
                while True:
                    o = _closest_new(sweep.samples[t], seeds, index.d_T)
                    if o is None:
                        break

                    seeds.add(o)
                    if trace is not None:
                        trace.discoveries.append((t, o))
                    if o == q.destination:
                        log.debug(f"{q}: reached at tick {t} with {len(seeds)} seeds.")
                        return True
                    sweep.add_seed(o, t)
        finally:
            sweep.release()

    return False


class ReachGridEngine(Engine):
    name = "reachgrid"

    def prepare(self, instance):
        settings = instance.settings

        def build():
            return build_grid(instance.trajectories, settings.grid_ticks, settings.grid_meters, instance.new_store())

        return instance.structure("reachgrid", build)

    def answer(self, instance, query):
        return grid_query(self.prepare(instance), query)


setup = ReachGridEngine.setup
