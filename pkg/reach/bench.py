"""Benchmark records, their CSV form and per-engine aggregates."""
import csv
import json
from collections import OrderedDict
from pathlib import Path
from typing import NamedTuple

import logbook

from reach.utils.formatting import TabularData

log = logbook.Logger("Bench")

CSV_VERSION = 1
CSV_COLUMNS = ("engine", "query_id", "result", "io_random", "io_sequential", "io_normalized", "cpu_micros")


class OracleMismatch(Exception):
    def __init__(self, engine, query_id, query, expected, actual, bundle=None):
        self.engine = engine
        self.query_id = query_id
        self.query = query
        self.expected = expected
        self.actual = actual
        self.bundle = bundle
        super().__init__(f"{engine} answered {actual} for query {query_id} ({query}), the oracle says {expected}")


class BenchRecord(NamedTuple):
    engine: str
    query_id: int
    result: bool
    io_random: int
    io_sequential: int
    io_normalized: float
    cpu_micros: int


def write_csv(path, records, *, label=None):
    """Writes records after a versioned header comment."""
    with open(path, "w", encoding="utf-8", newline="") as fp:
        fp.write(f"# contact-reach bench v{CSV_VERSION}" + (f" {label}" if label else "") + "\n")
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow((r.engine, r.query_id, int(r.result), r.io_random, r.io_sequential,
                             f"{r.io_normalized:.4f}", r.cpu_micros))


def read_csv(path):
    with open(path, encoding="utf-8", newline="") as fp:
        rows = [line for line in fp if not line.startswith("#")]

    records = []
    for row in csv.DictReader(rows):
        records.append(BenchRecord(row["engine"], int(row["query_id"]), bool(int(row["result"])),
                                   int(row["io_random"]), int(row["io_sequential"]), float(row["io_normalized"]),
                                   int(row["cpu_micros"])))
    return records


class Aggregate(NamedTuple):
    engine: str
    queries: int
    reachable: int
    mean_io: float
    mean_random: float
    mean_sequential: float
    mean_cpu: float


def aggregate(records):
    """Per-engine means, engines in first-seen order."""
    grouped = OrderedDict()
    for r in records:
        grouped.setdefault(r.engine, []).append(r)

    out = []
    for engine, rows in grouped.items():
        n = len(rows)
        out.append(Aggregate(engine, n, sum(r.result for r in rows),
                             sum(r.io_normalized for r in rows) / n,
                             sum(r.io_random for r in rows) / n,
                             sum(r.io_sequential for r in rows) / n,
                             sum(r.cpu_micros for r in rows) / n))
    return out


def render_aggregates(aggregates, *, extra=()):
    table = TabularData()
    table.set_columns([*(name for name, _ in extra), "engine", "queries", "reachable", "mean io", "mean random",
                       "mean sequential", "mean cpu us"])
    for a in aggregates:
        table.add_row([*(value for _, value in extra), *a])
    return table.render()


def write_bundle(directory, engine, query_id, query, expected, actual, parameters):
    """Dumps what is needed to reproduce an engine/oracle disagreement."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    p = directory / f"mismatch-{engine}-{query_id}.json"
    data = {
        "engine": engine,
        "query_id": query_id,
        "query": {
            "source": query.source,
            "destination": query.destination,
            "start": query.interval.start,
            "end": query.interval.end,
        },
        "expected": expected,
        "actual": actual,
        "instance": parameters,
    }
    with p.open("w", encoding="utf-8") as fp:
        json.dump(data, fp, ensure_ascii=True, indent=4)

    log.error(f"Wrote mismatch bundle {p}.")
    return p
