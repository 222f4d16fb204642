"""Plain-text formats for trajectories, contacts, query batches and results.

Every file starts with one ``#key=value ...`` header line.
"""
import logging
from pathlib import Path

import numpy as np

from .model import Config, Contact, EnvironmentBounds, ReachabilityQuery, TimeInterval, TrajectorySet

__all__ = (
    "TrajectoryFormatError",
    "read_trajectories",
    "write_trajectories",
    "read_contacts",
    "write_contacts",
    "read_queries",
    "write_queries",
    "write_results",
)

log = logging.getLogger(__name__)


class TrajectoryFormatError(Exception):
    def __init__(self, path, line, message):
        self.path = path
        self.line = line
        self.message = message
        super().__init__(f"{path}:{line}: {message}")


def _parse_header(path, text, required):
    if not text.startswith("#"):
        raise TrajectoryFormatError(path, 1, "missing '#' header line")

    fields = {}
    for token in text[1:].replace("#", " ").split():
        key, sep, value = token.partition("=")
        if not sep:
            raise TrajectoryFormatError(path, 1, f"malformed header field {token!r}")
        fields[key] = value

    missing = [k for k in required if k not in fields]
    if missing:
        raise TrajectoryFormatError(path, 1, f"header lacks {', '.join(missing)}")

    return fields


def _rows(path, lines, width):
    for number, line in enumerate(lines, 2):
        line = line.strip()
        if not line or line.startswith("#"):
            continue

        parts = line.split(",")
        if len(parts) != width:
            raise TrajectoryFormatError(path, number, f"expected {width} fields, got {len(parts)}")
        yield number, parts


def _read_lines(path):
    try:
        return Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise TrajectoryFormatError(path, 0, str(e)) from None


def read_trajectories(path) -> TrajectorySet:
    lines = _read_lines(path)
    if not lines:
        raise TrajectoryFormatError(path, 1, "empty file")

    header = _parse_header(path, lines[0], ("objects", "ticks", "width", "height", "d_T"))
    try:
        n_objects, n_ticks = int(header["objects"]), int(header["ticks"])
        config = Config(float(header["d_T"]),
                        EnvironmentBounds(float(header["width"]), float(header["height"])),
                        TimeInterval(0, n_ticks - 1))
    except ValueError as e:
        raise TrajectoryFormatError(path, 1, str(e)) from None

    positions = np.full((n_objects, n_ticks, 2), np.nan)
    previous = None
    for number, parts in _rows(path, lines[1:], 4):
        try:
            o, t = int(parts[0]), int(parts[1])
            x, y = float(parts[2]), float(parts[3])
        except ValueError as e:
            raise TrajectoryFormatError(path, number, str(e)) from None

        if not (0 <= o < n_objects and 0 <= t < n_ticks):
            raise TrajectoryFormatError(path, number, f"sample o{o}@{t} is outside the header's population/horizon")

        if previous is not None and (t, o) <= previous:
            raise TrajectoryFormatError(path, number, "samples must be sorted by (tick, object) without duplicates")
        previous = (t, o)
        positions[o, t] = (x, y)

    if np.isnan(positions).any():
        o, t = map(int, np.argwhere(np.isnan(positions[..., 0]))[0])
        raise TrajectoryFormatError(path, len(lines), f"no sample for o{o} at tick {t}")

    try:
        trajectories = TrajectorySet(positions, config)
    except ValueError as e:
        raise TrajectoryFormatError(path, 1, str(e)) from None

    log.info("Read %s objects over %s ticks from %s.", n_objects, n_ticks, path)
    return trajectories


def write_trajectories(path, trajectories: TrajectorySet):
    config = trajectories.config
    env = config.environment
    with open(path, "w", encoding="utf-8") as fp:
        fp.write(f"#objects={trajectories.n_objects} #ticks={trajectories.n_ticks} "
                 f"width={env.width!r} height={env.height!r} d_T={config.d_T!r}\n")
        for t in trajectories.horizon.ticks():
            for o, (x, y) in enumerate(trajectories.positions_at(t)):
                fp.write(f"{o},{t},{float(x)!r},{float(y)!r}\n")


def read_contacts(path):
    """Returns ``(contacts, d_T, horizon, n_objects)``."""
    lines = _read_lines(path)
    if not lines:
        raise TrajectoryFormatError(path, 1, "empty file")

    header = _parse_header(path, lines[0], ("objects", "d_T", "start", "end"))
    try:
        horizon = TimeInterval(int(header["start"]), int(header["end"]))
        d_T, n_objects = float(header["d_T"]), int(header["objects"])
    except ValueError as e:
        raise TrajectoryFormatError(path, 1, str(e)) from None

    contacts = []
    for number, parts in _rows(path, lines[1:], 4):
        try:
            a, b, start, end = map(int, parts)
            contacts.append(Contact.between(a, b, TimeInterval(start, end)))
        except ValueError as e:
            raise TrajectoryFormatError(path, number, str(e)) from None

    return contacts, d_T, horizon, n_objects


def write_contacts(path, contacts):
    with open(path, "w", encoding="utf-8") as fp:
        fp.write(f"#objects={contacts.n_objects} d_T={contacts.config.d_T!r} "
                 f"start={contacts.horizon.start} end={contacts.horizon.end}\n")
        for c in contacts:
            fp.write(f"{c.a},{c.b},{c.validity.start},{c.validity.end}\n")


def read_queries(path):
    lines = _read_lines(path)
    queries = []
    # The header is optional for query batches.
    for number, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue

        parts = line.split(",")
        if len(parts) != 4:
            raise TrajectoryFormatError(path, number, f"expected 4 fields, got {len(parts)}")
        try:
            source, destination, start, end = map(int, parts)
            queries.append(ReachabilityQuery(source, destination, TimeInterval(start, end)))
        except ValueError as e:
            raise TrajectoryFormatError(path, number, str(e)) from None

    return queries


def write_queries(path, queries, *, seed=None):
    with open(path, "w", encoding="utf-8") as fp:
        fp.write(f"#queries={len(queries)}" + (f" seed={seed}" if seed is not None else "") + "\n")
        for q in queries:
            fp.write(f"{q.source},{q.destination},{q.interval.start},{q.interval.end}\n")


def write_results(fp, rows):
    """Writes ``(query, reachable, IoReport)`` rows to an open text file."""
    fp.write("#source,destination,start,end,reachable,io_random,io_sequential,io_normalized\n")
    for q, reachable, io in rows:
        fp.write(f"{q.source},{q.destination},{q.interval.start},{q.interval.end},{int(reachable)},"
                 f"{io.random_reads},{io.sequential_reads},{io.normalized_cost:.4f}\n")
