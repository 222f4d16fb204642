"""Domain types shared by every index and engine.

Time is discretised into integer ticks and every interval is closed on both
ends. Positions are 2-D points in meters; all objects are sampled once per
tick over the whole horizon.
"""
from __future__ import annotations

import math
from typing import Iterator, NamedTuple, Optional, Sequence

import numpy as np

__all__ = (
    "QueryError",
    "TimeInterval",
    "Point",
    "EnvironmentBounds",
    "Sample",
    "Trajectory",
    "TrajectorySegment",
    "TrajectorySet",
    "Contact",
    "ContactPath",
    "ReachabilityQuery",
    "Config",
    "interval_intersect",
    "validate_contact_path",
    "check_query",
)


class QueryError(Exception):
    """A query references ticks or objects the data does not cover."""
    pass


def check_query(q, n_objects, horizon):
    for o in (q.source, q.destination):
        if not 0 <= o < n_objects:
            raise QueryError(f"unknown object o{o} (population is {n_objects})")

    if not horizon.covers(q.interval):
        raise QueryError(f"query interval {q.interval!r} is outside the horizon {horizon!r}")


class _Interval(NamedTuple):
    start: int
    end: int


class TimeInterval(_Interval):
    __slots__ = ()

    def __new__(cls, start, end):
        start, end = int(start), int(end)
        if start < 0:
            raise ValueError(f"interval start must be non-negative, got {start}")
        if end < start:
            raise ValueError(f"interval [{start}, {end}] ends before it starts")
        return super().__new__(cls, start, end)

    @property
    def length(self):
        return self.end - self.start + 1

    def __contains__(self, t):
        return self.start <= t <= self.end

    def ticks(self):
        return range(self.start, self.end + 1)

    def overlaps(self, other):
        return self.start <= other.end and other.start <= self.end

    def covers(self, other):
        return self.start <= other.start and other.end <= self.end

    def __repr__(self):
        return f"[{self.start},{self.end}]"


def interval_intersect(a: TimeInterval, b: TimeInterval) -> Optional[TimeInterval]:
    start, end = max(a.start, b.start), min(a.end, b.end)
    if start > end:
        return None
    return TimeInterval(start, end)


class Point(NamedTuple):
    x: float
    y: float

    def distance(self, other):
        return math.hypot(self.x - other.x, self.y - other.y)


class EnvironmentBounds(NamedTuple):
    width: float
    height: float

    def validate(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError(f"environment must have positive extent, got {self.width}x{self.height}")
        return self

    def contains(self, x, y):
        return 0 <= x <= self.width and 0 <= y <= self.height


class Config(NamedTuple):
    """Contact semantics of a dataset: d_T, environment and horizon."""
    d_T: float
    environment: EnvironmentBounds
    horizon: TimeInterval

    def validate(self):
        if not self.d_T > 0:
            raise ValueError(f"d_T must be positive, got {self.d_T}")
        self.environment.validate()
        return self


class Sample(NamedTuple):
    object: int
    t: int
    pos: Point


class TrajectorySegment:
    """The samples of one object whose ticks fall inside ``window``."""
    __slots__ = ("object", "window", "positions")

    def __init__(self, object_id, window: TimeInterval, positions: np.ndarray):
        if len(positions) != window.length:
            raise ValueError(f"segment of o{object_id} has {len(positions)} samples for window {window!r}")
        self.object = object_id
        self.window = window
        # Shape (window.length, 2), row i is tick window.start + i.
        self.positions = positions

    @property
    def samples(self) -> Iterator[Sample]:
        for t, (x, y) in zip(self.window.ticks(), self.positions):
            yield Sample(self.object, t, Point(float(x), float(y)))

    def position(self, t):
        x, y = self.positions[t - self.window.start]
        return Point(float(x), float(y))

    def mbr(self):
        lo = self.positions.min(axis=0)
        hi = self.positions.max(axis=0)
        return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])

    def __repr__(self):
        return f"<TrajectorySegment o{self.object} {self.window!r}>"


class Trajectory(TrajectorySegment):
    """A segment spanning the whole horizon."""
    __slots__ = ()

    def __repr__(self):
        return f"<Trajectory o{self.object} {self.window!r}>"


class TrajectorySet:
    """Dense positions of a constant population, one sample per (object, tick)."""

    def __init__(self, positions, config: Config):
        positions = np.asarray(positions, dtype=np.float64)
        if positions.ndim != 3 or positions.shape[2] != 2:
            raise ValueError(f"positions must have shape (objects, ticks, 2), got {positions.shape}")

        config.validate()
        if positions.shape[1] != config.horizon.length:
            raise ValueError(f"{positions.shape[1]} ticks of samples for horizon {config.horizon!r}")

        if not np.isfinite(positions).all():
            raise ValueError("positions must be finite")

        env = config.environment
        if (positions < 0).any() or (positions[..., 0] > env.width).any() or (positions[..., 1] > env.height).any():
            raise ValueError(f"positions fall outside the {env.width}x{env.height} environment")

        self.positions = positions
        self.config = config

    @property
    def n_objects(self):
        return self.positions.shape[0]

    @property
    def horizon(self):
        return self.config.horizon

    @property
    def n_ticks(self):
        return self.config.horizon.length

    def _column(self, t):
        if t not in self.horizon:
            raise QueryError(f"tick {t} is outside the horizon {self.horizon!r}")
        return t - self.horizon.start

    def positions_at(self, t) -> np.ndarray:
        return self.positions[:, self._column(t)]

    def trajectory(self, o) -> Trajectory:
        return Trajectory(o, self.horizon, self.positions[o])

    def segment(self, o, window: TimeInterval) -> TrajectorySegment:
        if not self.horizon.covers(window):
            raise QueryError(f"window {window!r} is outside the horizon {self.horizon!r}")
        lo = window.start - self.horizon.start
        return TrajectorySegment(o, window, self.positions[o, lo:lo + window.length])

    def segments(self, window: TimeInterval):
        return [self.segment(o, window) for o in range(self.n_objects)]

    def __repr__(self):
        return f"<TrajectorySet objects={self.n_objects} ticks={self.n_ticks} d_T={self.config.d_T}>"


class Contact(NamedTuple):
    a: int
    b: int
    validity: TimeInterval

    @classmethod
    def between(cls, o1, o2, validity: TimeInterval):
        if o1 == o2:
            raise ValueError(f"an object cannot contact itself (o{o1})")
        if o1 > o2:
            o1, o2 = o2, o1
        return cls(o1, o2, validity)

    @property
    def objects(self):
        return self.a, self.b

    def other(self, o):
        return self.b if o == self.a else self.a

    def __contains__(self, o):
        return o == self.a or o == self.b


ContactPath = Sequence[Contact]


class ReachabilityQuery(NamedTuple):
    source: int
    destination: int
    interval: TimeInterval

    def __str__(self):
        return f"o{self.source} -> o{self.destination} during {self.interval!r}"


def validate_contact_path(path: ContactPath, q: ReachabilityQuery) -> bool:
    if not path:
        raise ValueError("contact path must not be empty")

    if any(not c.validity.overlaps(q.interval) for c in path):
        return False

    if q.source not in path[0] or q.destination not in path[-1]:
        return False

    carriers = {q.source}
    arrival = max(q.interval.start, path[0].validity.start)
    for index, contact in enumerate(path):
        if index and contact.validity.start < path[index - 1].validity.start:
            return False

        # Same-tick hand-offs are allowed.
        if not carriers & set(contact.objects) or contact.validity.end < arrival:
            return False

        arrival = max(arrival, contact.validity.start)
        carriers = set(contact.objects)

    return True
