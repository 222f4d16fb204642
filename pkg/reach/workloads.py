"""Seeded synthetic trajectories and query batches.

All generators draw from numpy's PCG64 (``numpy.random.default_rng(seed)``),
so a seed reproduces the same output on every platform.
"""
from typing import NamedTuple, Tuple

import logbook
import numpy as np

from reach.utils import Config, EnvironmentBounds, ReachabilityQuery, TimeInterval, TrajectorySet

log = logbook.Logger("Workloads")

__all__ = ("RwpParams", "RoadGridParams", "QueryWorkload", "gen_rwp", "gen_road_grid", "gen_queries")


class RwpParams(NamedTuple):
    n_objects: int = 500
    environment: EnvironmentBounds = EnvironmentBounds(2000.0, 2000.0)
    # Meters per second; each leg draws its speed from [0.5, 1.5] times this.
    mean_speed: float = 2.0
    tick_seconds: float = 6.0
    duration_ticks: int = 2000
    rng_seed: int = 0

    def validate(self):
        if self.n_objects < 1 or self.duration_ticks < 1:
            raise ValueError("need at least one object and one tick")
        if self.mean_speed < 0 or not self.tick_seconds > 0:
            raise ValueError("speed must be non-negative and ticks must last a positive time")
        self.environment.validate()
        return self


class RoadGridParams(NamedTuple):
    n_objects: int = 500
    environment: EnvironmentBounds = EnvironmentBounds(2000.0, 2000.0)
    # Distance between parallel roads.
    spacing: float = 250.0
    speed_range: Tuple[float, float] = (1.0, 3.0)
    tick_seconds: float = 6.0
    duration_ticks: int = 2000
    rng_seed: int = 0

    def validate(self):
        if self.n_objects < 1 or self.duration_ticks < 1:
            raise ValueError("need at least one object and one tick")
        lo, hi = self.speed_range
        if lo < 0 or hi < lo or not self.tick_seconds > 0:
            raise ValueError(f"invalid speed range {self.speed_range}")
        if not self.spacing > 0:
            raise ValueError(f"road spacing must be positive, got {self.spacing}")
        self.environment.validate()
        return self


class QueryWorkload(NamedTuple):
    queries: list
    rng_seed: int

    def __len__(self):
        return len(self.queries)

    def __iter__(self):
        return iter(self.queries)


def gen_rwp(p: RwpParams, d_T=25.0) -> TrajectorySet:
    """Random waypoint: each object walks in a straight line to a uniform
    destination at a per-leg speed, then draws the next leg on arrival."""
    p.validate()
    rng = np.random.default_rng(p.rng_seed)
    env = np.array(p.environment, dtype=np.float64)
    n = p.n_objects

    pos = rng.uniform(0, 1, size=(n, 2)) * env
    dest = rng.uniform(0, 1, size=(n, 2)) * env
    speed = rng.uniform(0.5, 1.5, size=n) * p.mean_speed

    out = np.empty((n, p.duration_ticks, 2))
    for t in range(p.duration_ticks):
        out[:, t] = pos

        step = speed * p.tick_seconds
        delta = dest - pos
        dist = np.hypot(delta[:, 0], delta[:, 1])
        arrived = dist <= step
        with np.errstate(invalid="ignore", divide="ignore"):
            moved = pos + delta * (step / np.where(arrived, 1.0, dist))[:, None]
        pos = np.clip(np.where(arrived[:, None], dest, moved), 0, env)

        count = int(arrived.sum())
        if count:
            dest[arrived] = rng.uniform(0, 1, size=(count, 2)) * env
            speed[arrived] = rng.uniform(0.5, 1.5, size=count) * p.mean_speed

    config = Config(d_T, p.environment, TimeInterval(0, p.duration_ticks - 1))
    log.info(f"Generated {n} random waypoint trajectories over {p.duration_ticks} ticks.")
    return TrajectorySet(out, config)


_DIRECTIONS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def gen_road_grid(p: RoadGridParams, d_T=25.0) -> TrajectorySet:
    """Objects drive along a Manhattan grid of roads, turning at intersections.

    At each intersection an object picks uniformly among the in-bounds
    directions other than the one it came from; it turns back only at dead ends.
    """
    p.validate()
    rng = np.random.default_rng(p.rng_seed)
    width, height = p.environment
    nx, ny = int(width // p.spacing), int(height // p.spacing)
    if nx < 1 and ny < 1:
        raise ValueError(f"road spacing {p.spacing} leaves no road segment in a {width}x{height} environment")

    out = np.empty((p.n_objects, p.duration_ticks, 2))
    for o in range(p.n_objects):
        ix, iy = int(rng.integers(0, nx + 1)), int(rng.integers(0, ny + 1))
        speed = rng.uniform(*p.speed_range)
        # Position as an intersection plus the distance travelled towards the next one.
        heading, travelled = None, 0.0

        for t in range(p.duration_ticks):
            dx, dy = heading or (0, 0)
            out[o, t] = ix * p.spacing + dx * travelled, iy * p.spacing + dy * travelled

            remaining = speed * p.tick_seconds
            while remaining > 0:
                if heading is None:
                    heading = _pick_heading(rng, ix, iy, nx, ny, None)
                    if heading is None:
                        break

                left = p.spacing - travelled
                if remaining < left:
                    travelled += remaining
                    break

                remaining -= left
                ix, iy = ix + heading[0], iy + heading[1]
                heading, travelled = _pick_heading(rng, ix, iy, nx, ny, heading), 0.0

    out[..., 0] = np.clip(out[..., 0], 0, width)
    out[..., 1] = np.clip(out[..., 1], 0, height)
    config = Config(d_T, p.environment, TimeInterval(0, p.duration_ticks - 1))
    log.info(f"Generated {p.n_objects} road grid trajectories over {p.duration_ticks} ticks "
             f"on {nx + 1}x{ny + 1} intersections.")
    return TrajectorySet(out, config)


def _pick_heading(rng, ix, iy, nx, ny, came):
    options = [(dx, dy) for dx, dy in _DIRECTIONS if 0 <= ix + dx <= nx and 0 <= iy + dy <= ny]
    if not options:
        return None

    if came is not None:
        back = (-came[0], -came[1])
        forward = [d for d in options if d != back]
        options = forward or options

    return options[int(rng.integers(0, len(options)))]


def gen_queries(horizon: TimeInterval, n, len_range, seed, n_objects) -> QueryWorkload:
    """Uniform source != destination, uniform length in ``len_range``, uniform start."""
    lo, hi = len_range
    if lo < 1 or hi < lo:
        raise ValueError(f"invalid interval length range {len_range}")
    if hi > horizon.length:
        raise ValueError(f"interval lengths up to {hi} do not fit the {horizon.length}-tick horizon")
    if n and n_objects < 2:
        raise ValueError("queries need at least two objects")

    rng = np.random.default_rng(seed)
    queries = []
    for _ in range(n):
        source = int(rng.integers(0, n_objects))
        destination = int(rng.integers(0, n_objects - 1))
        if destination >= source:
            destination += 1

        length = int(rng.integers(lo, hi + 1))
        start = int(rng.integers(horizon.start, horizon.end - length + 2))
        queries.append(ReachabilityQuery(source, destination, TimeInterval(start, start + length - 1)))

    return QueryWorkload(queries, seed)


def default_lengths(horizon: TimeInterval):
    """Interval lengths of 15% to 35% of the horizon."""
    return max(1, horizon.length * 15 // 100), max(1, horizon.length * 35 // 100)
