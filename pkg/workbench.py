import importlib
import logging
import sys
import time
import traceback
from collections import OrderedDict
from pathlib import Path
from typing import NamedTuple

import logbook
from logbook import StreamHandler
from logbook.compat import redirect_logging
from sentry_sdk import init as sen_init, push_scope as sen_configure_scope, capture_exception

from reach.bench import BenchRecord, OracleMismatch, write_bundle
from reach.contacts import extract_contacts
from reach.oracle import oracle_reach
from reach.utils import BlockStore

try:
    import config
except ImportError:
    config = None

redirect_logging()
StreamHandler(sys.stderr).push_application()

DEFAULT_ENGINES = ("reach.contacts", "reach.reachgrid", "reach.traversal")


class Settings(NamedTuple):
    page_size: int = 4096
    buffer_blocks: int = 1024
    sequential_discount: int = 20
    d_T: float = 25.0
    resolutions: tuple = (2, 4, 8, 16, 32)
    partition_depth: int = 32
    grid_ticks: int = 20
    grid_meters: float = 250.0
    seed: int = 0
    placement: str = "topological"

    @classmethod
    def from_config(cls, module=None, **overrides):
        defaults = cls()
        values = {name: getattr(module, name, getattr(defaults, name)) for name in cls._fields}
        values["resolutions"] = tuple(values["resolutions"])
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


class Instance:
    """One dataset with the structures engines build over it, built on first use."""

    def __init__(self, trajectories, settings: Settings, *, label=None, contacts=None):
        self.trajectories = trajectories
        self.settings = settings
        self.label = label
        self._contacts = contacts
        self._structures = {}

    @property
    def contacts(self):
        if self._contacts is None:
            if self.trajectories is None:
                raise RuntimeError("this instance was opened from an index and carries no trajectories")
            self._contacts = extract_contacts(self.trajectories)
        return self._contacts

    @property
    def n_objects(self):
        return self.trajectories.n_objects

    @property
    def horizon(self):
        return self.trajectories.horizon

    def new_store(self):
        s = self.settings
        return BlockStore(s.page_size, s.buffer_blocks, s.sequential_discount)

    def structure(self, key, factory):
        try:
            return self._structures[key]
        except KeyError:
            built = self._structures[key] = factory()
            return built

    def adopt(self, key, structure):
        self._structures[key] = structure

    def parameters(self):
        out = {"label": self.label, **self.settings._asdict()}
        out["resolutions"] = list(out["resolutions"])
        if self.trajectories is not None:
            out.update(objects=self.n_objects, ticks=self.horizon.length, d_T=self.trajectories.config.d_T)
        return out

    def __repr__(self):
        return f"<Instance label={self.label!r} structures={list(self._structures)}>"


class Workbench:
    def __init__(self, *, seed=None, page_size=None, buffer_blocks=None, out=None, quiet=False, engines=None):
        # Logging stuff
        self.logger = logbook.Logger("Workbench")
        self.dev_mode = getattr(config, "dev_mode", False)
        if quiet:
            self.logger.level = logbook.WARNING
            logging.root.setLevel(logging.WARNING)
        elif self.dev_mode:
            self.logger.level = logbook.DEBUG
            logging.root.setLevel(logging.DEBUG)
        else:
            self.logger.level = logbook.INFO
            logging.root.setLevel(logging.INFO)

        # Support for sentry.
        self.sentry = None
        if sentry_dsn := getattr(config, "sentry_dsn", ""):
            self.logger.info("Logging errors to sentry.")
            self.sentry = sen_init(dsn=sentry_dsn, max_breadcrumbs=0)

        self.settings = Settings.from_config(config, seed=seed, page_size=page_size, buffer_blocks=buffer_blocks)
        self.out = Path(out or ".")
        self._engines = OrderedDict()

        for extension in engines or getattr(config, "engines", DEFAULT_ENGINES):
            try:
                self.load_engine(extension)
            except Exception as e:
                self.logger.critical(f"Failed to load engine module {extension} -> {e}.")
                traceback.print_exc()
            else:
                self.logger.debug(f"Loaded engine module {extension}.")

    def load_engine(self, name):
        module = importlib.import_module(name)
        module.setup(self)

    def add_engine(self, engine):
        if engine.name in self._engines:
            raise ValueError(f"an engine named {engine.name!r} is already loaded")
        self._engines[engine.name] = engine

    def get_engine(self, name):
        try:
            return self._engines[name]
        except KeyError:
            raise KeyError(f"no engine named {name!r}, loaded: {', '.join(self._engines)}") from None

    @property
    def engines(self):
        return list(self._engines.values())

    def resolve(self, names=None):
        return self.engines if not names else [self.get_engine(n) for n in names]

    def instance(self, trajectories, *, label=None, contacts=None, **overrides):
        settings = self.settings._replace(**{k: v for k, v in overrides.items() if v is not None})
        return Instance(trajectories, settings, label=label, contacts=contacts)

    def run_query(self, engine, instance, query, *, cpu=False):
        """Answers ``query`` from a cold, flushed buffer.

        Returns the answer, the :class:`~reach.utils.IoReport` and, when ``cpu``
        is set, the microseconds of a second run with every block resident.
        """
        store = engine.store(instance)
        store.reset(flush=True)
        answer = engine.answer(instance, query)
        io = store.report()

        micros = 0
        if cpu:
            with store.resident():
                started = time.perf_counter_ns()
                engine.answer(instance, query)
                micros = (time.perf_counter_ns() - started) // 1000

        return answer, io, micros

    def bench(self, instance, queries, engine_names=None, *, cpu=False):
        """Runs every query on every engine, failing hard on any disagreement with the oracle."""
        engines = self.resolve(engine_names)
        expected = [oracle_reach(instance.contacts, q).reachable for q in queries]

        records = []
        for engine in engines:
            engine.prepare(instance)
            for query_id, (query, truth) in enumerate(zip(queries, expected)):
                answer, io, micros = self.run_query(engine, instance, query, cpu=cpu)
                if answer != truth:
                    bundle = write_bundle(self.out, engine.name, query_id, query, truth, answer,
                                          instance.parameters())
                    error = OracleMismatch(engine.name, query_id, query, truth, answer, bundle)
                    self.report_exception(error, engine=engine.name, query=str(query), **instance.parameters())
                    raise error

                records.append(BenchRecord(engine.name, query_id, answer, io.random_reads, io.sequential_reads,
                                           io.normalized_cost, micros))

            self.logger.info(f"{engine.name}: answered {len(queries)} queries.")

        return records

    def verify(self, instance, queries, engine_names=None):
        """Cross-checks engines against the oracle, returning the mismatches per engine."""
        engines = self.resolve(engine_names)
        mismatches = OrderedDict((e.name, []) for e in engines)
        for query_id, query in enumerate(queries):
            truth = oracle_reach(instance.contacts, query).reachable
            for engine in engines:
                answer = engine.answer(instance, query)
                if answer != truth:
                    mismatches[engine.name].append(query_id)
                    write_bundle(self.out, engine.name, query_id, query, truth, answer, instance.parameters())

        for name, found in mismatches.items():
            if found:
                self.report_exception(OracleMismatch(name, found[0], queries[found[0]], None, None),
                                      engine=name, mismatches=len(found), **instance.parameters())
        return mismatches

    def mean_io(self, engine_name, instance, queries):
        engine = self.get_engine(engine_name)
        engine.prepare(instance)
        total = 0.0
        for query in queries:
            _, io, _ = self.run_query(engine, instance, query)
            total += io.normalized_cost
        return total / len(queries) if queries else 0.0

    def tune_grid(self, trajectories, queries, rts, rss):
        rows = []
        for rt in rts:
            for rs in rss:
                instance = self.instance(trajectories, grid_ticks=rt, grid_meters=rs, label=f"R_T={rt} R_S={rs}")
                cost = self.mean_io("reachgrid", instance, queries)
                self.logger.info(f"R_T={rt} R_S={rs}: mean normalized IO {cost:.4f}.")
                rows.append(((rt, rs), cost))
        return rows

    def tune_graph(self, trajectories, queries, dps, levels, *, contacts=None):
        rows = []
        for level in levels:
            resolutions = tuple(2 ** i for i in range(1, level))
            for dp in dps:
                instance = self.instance(trajectories, partition_depth=dp, resolutions=resolutions,
                                         label=f"d_p={dp} levels={level}", contacts=contacts)
                cost = self.mean_io("bm-bfs", instance, queries)
                self.logger.info(f"d_p={dp} levels={level}: mean normalized IO {cost:.4f}.")
                rows.append(((dp, level), cost))
        return rows

    def report_exception(self, error, **context):
        if self.sentry is None:
            return

        with sen_configure_scope() as scope:
            scope.set_context("Instance information", context)
            capture_exception(error)

    def __repr__(self):
        return f"<Workbench engines={list(self._engines)} settings={self.settings!r}>"
