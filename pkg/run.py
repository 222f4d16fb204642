import contextlib
import csv
import io
import json
import sys
from pathlib import Path

import click
import numpy as np

from reach.bench import OracleMismatch, aggregate, render_aggregates, write_csv
from reach.contacts import extract_contacts
from reach.reachgraph import Placement, ReachGraphIndex, build_reachgraph
from reach.reachgrid import GridIndex, build_grid
from reach.utils import BlockStoreError, EnvironmentBounds, QueryError, ReachabilityQuery, TimeInterval
from reach.utils.converters import FLOAT_LIST, INT_LIST, RANGE
from reach.utils.fileio import (TrajectoryFormatError, read_queries, read_trajectories, write_contacts,
                                write_queries, write_results, write_trajectories)
from reach.utils.formatting import Plural, TabularData
from reach.utils.records import MANIFEST_FILE, SchemaError
from reach.workloads import RoadGridParams, RwpParams, default_lengths, gen_queries, gen_road_grid, gen_rwp
from workbench import Workbench

EXPECTED_ERRORS = (TrajectoryFormatError, QueryError, SchemaError, BlockStoreError, ValueError, KeyError)
INDEX_ENGINES = {
    ReachGraphIndex.KIND: ("bm-bfs", "b-bfs", "e-dfs"),
    GridIndex.KIND: ("reachgrid",),
}


@contextlib.contextmanager
def expected_errors(workbench=None):
    try:
        yield
    except OracleMismatch as e:
        click.echo(f"Oracle mismatch: {e}", err=True)
        if e.bundle:
            click.echo(f"Reproduction bundle written to {e.bundle}.", err=True)
        sys.exit(2)
    except EXPECTED_ERRORS as e:
        message = e.args[0] if isinstance(e, KeyError) and e.args else e
        click.echo(f"Error: {message}", err=True)
        sys.exit(1)
    except Exception as e:
        if workbench is not None:
            workbench.report_exception(e, command=click.get_current_context().info_name)
        raise


@click.group(options_metavar="[options]")
@click.option("--seed", type=int, help="seed for generators and workloads")
@click.option("--page-size", type=int, help="block size in bytes")
@click.option("--buffer-blocks", type=int, help="buffer pool capacity in blocks")
@click.option("--out", type=click.Path(file_okay=False), default=".", help="directory for CSVs and bundles")
@click.option("-q", "--quiet", help="less verbose output", is_flag=True)
@click.pass_context
def main(ctx, seed, page_size, buffer_blocks, out, quiet):
    """Reachability indexes over contact networks."""
    ctx.obj = Workbench(seed=seed, page_size=page_size, buffer_blocks=buffer_blocks, out=out, quiet=quiet)


@main.group(short_help="Synthetic trajectories and query batches", options_metavar="[options]")
def generate():
    pass


@generate.command(short_help="Random waypoint trajectories")
@click.argument("output", type=click.Path(dir_okay=False))
@click.option("--objects", default=500, show_default=True)
@click.option("--ticks", default=2000, show_default=True)
@click.option("--width", default=2000.0, show_default=True)
@click.option("--height", default=2000.0, show_default=True)
@click.option("--speed", default=2.0, show_default=True, help="mean speed in m/s")
@click.option("--d-t", "d_T", type=float, help="contact distance in meters")
@click.pass_obj
def rwp(workbench, output, objects, ticks, width, height, speed, d_T):
    """Objects walk between uniform waypoints."""
    with expected_errors(workbench):
        p = RwpParams(objects, EnvironmentBounds(width, height), speed, duration_ticks=ticks,
                      rng_seed=workbench.settings.seed)
        write_trajectories(output, gen_rwp(p, d_T or workbench.settings.d_T))
    click.echo(f"Wrote {Plural(objects):object} over {Plural(ticks):tick} to {output}.")


@generate.command(short_help="Road grid trajectories")
@click.argument("output", type=click.Path(dir_okay=False))
@click.option("--objects", default=500, show_default=True)
@click.option("--ticks", default=2000, show_default=True)
@click.option("--width", default=2000.0, show_default=True)
@click.option("--height", default=2000.0, show_default=True)
@click.option("--spacing", default=250.0, show_default=True, help="distance between parallel roads")
@click.option("--d-t", "d_T", type=float, help="contact distance in meters")
@click.pass_obj
def road(workbench, output, objects, ticks, width, height, spacing, d_T):
    """Objects drive along a grid of roads."""
    with expected_errors(workbench):
        p = RoadGridParams(objects, EnvironmentBounds(width, height), spacing, duration_ticks=ticks,
                           rng_seed=workbench.settings.seed)
        write_trajectories(output, gen_road_grid(p, d_T or workbench.settings.d_T))
    click.echo(f"Wrote {Plural(objects):object} over {Plural(ticks):tick} to {output}.")


@generate.command(short_help="A batch of random queries")
@click.argument("trajectories", type=click.Path(exists=True, dir_okay=False))
@click.argument("output", type=click.Path(dir_okay=False))
@click.option("--count", default=400, show_default=True)
@click.option("--lengths", type=RANGE, help="interval length range lo,hi (default: 15% to 35% of the horizon)")
@click.pass_obj
def queries(workbench, trajectories, output, count, lengths):
    """Uniform source, destination and start; uniform length in range."""
    with expected_errors(workbench):
        data = read_trajectories(trajectories)
        workload = gen_queries(data.horizon, count, lengths or default_lengths(data.horizon),
                               workbench.settings.seed, data.n_objects)
        write_queries(output, workload.queries, seed=workload.rng_seed)
    click.echo(f"Wrote {Plural(count):query|queries} to {output}.")


@main.command(short_help="Extracts the contact network")
@click.argument("trajectories", type=click.Path(exists=True, dir_okay=False))
@click.argument("output", type=click.Path(dir_okay=False))
@click.pass_obj
def extract(workbench, trajectories, output):
    with expected_errors(workbench):
        contacts = extract_contacts(read_trajectories(trajectories))
        write_contacts(output, contacts)
    click.echo(f"Wrote {Plural(len(contacts)):contact} to {output}.")


@main.command(short_help="Builds an index", options_metavar="[options]")
@click.argument("trajectories", type=click.Path(exists=True, dir_okay=False))
@click.argument("index", type=click.Path(file_okay=False))
@click.option("--kind", type=click.Choice([ReachGraphIndex.KIND, GridIndex.KIND]), required=True)
@click.option("--rt", type=int, help="ReachGrid bucket length in ticks")
@click.option("--rs", type=float, help="ReachGrid cell side in meters")
@click.option("--resolutions", type=INT_LIST, help="ReachGraph long-edge resolutions, e.g. 2,4,8")
@click.option("--dp", type=int, help="ReachGraph partition depth")
@click.option("--placement", type=click.Choice([p.name for p in Placement]), help="ReachGraph placement")
@click.pass_obj
def build(workbench, trajectories, index, kind, rt, rs, resolutions, dp, placement):
    """Builds an index from a trajectory file and saves it to a directory."""
    with expected_errors(workbench):
        data = read_trajectories(trajectories)
        instance = workbench.instance(data, grid_ticks=rt, grid_meters=rs, partition_depth=dp,
                                      resolutions=tuple(resolutions) if resolutions else None, placement=placement)
        s = instance.settings
        if kind == GridIndex.KIND:
            built = build_grid(data, s.grid_ticks, s.grid_meters, instance.new_store())
        else:
            built = build_reachgraph(instance.contacts, instance.new_store(), resolutions=s.resolutions,
                                     d_p=s.partition_depth, placement=Placement[s.placement], seed=s.seed)
        built.save(index)

    table = TabularData()
    table.set_columns(["statistic", "value"])
    table.add_rows(built.stats.rows())
    click.echo(table.render())
    click.echo(f"Saved {kind} index to {index}.")


def open_index(directory, settings):
    """Opens a saved index, whichever its kind."""
    p = Path(directory) / MANIFEST_FILE
    try:
        kind = json.loads(p.read_text(encoding="utf-8")).get("kind")
    except (OSError, ValueError) as e:
        raise SchemaError(f"Could not read {p}: {e}") from None

    for cls in (ReachGraphIndex, GridIndex):
        if cls.KIND == kind:
            return cls.open(directory, buffer_blocks=settings.buffer_blocks,
                            sequential_discount=settings.sequential_discount)
    raise SchemaError(f"{p} holds an index of unknown kind {kind!r}")


@main.command(short_help="Answers a query batch from a saved index")
@click.argument("index", type=click.Path(exists=True, file_okay=False))
@click.argument("queries", type=click.Path(exists=True, dir_okay=False))
@click.option("--engine", help="engine to answer with (default: the index's first engine)")
@click.pass_obj
def query(workbench, index, queries, engine):
    """Prints one result line per query with its IO counts."""
    with expected_errors(workbench):
        opened = open_index(index, workbench.settings)
        engine = workbench.get_engine(engine or INDEX_ENGINES[opened.KIND][0])
        if engine.name not in INDEX_ENGINES[opened.KIND]:
            raise ValueError(f"engine {engine.name!r} cannot answer from a {opened.KIND} index")

        if opened.KIND == GridIndex.KIND:
            instance = workbench.instance(None, label=index)
            instance.adopt("reachgrid", opened)
        else:
            instance = workbench.instance(None, label=index, placement=opened.placement.name)
            instance.adopt(f"reachgraph:{opened.placement.name}", opened)

        rows = []
        for q in read_queries(queries):
            answer, cost, _ = workbench.run_query(engine, instance, q)
            rows.append((q, answer, cost))

    out = io.StringIO()
    write_results(out, rows)
    click.echo(out.getvalue(), nl=False)


def _workload(workbench, data, queries, count, length_range):
    if queries:
        return read_queries(queries)
    return gen_queries(data.horizon, count, length_range or default_lengths(data.horizon),
                       workbench.settings.seed, data.n_objects).queries


@main.command(short_help="Benchmarks engines against the oracle")
@click.argument("trajectories", type=click.Path(exists=True, dir_okay=False))
@click.option("--queries", type=click.Path(exists=True, dir_okay=False), help="query batch file")
@click.option("--count", default=400, show_default=True, help="number of generated queries")
@click.option("--lengths", type=INT_LIST, help="run once per fixed interval length, e.g. 150,250,350")
@click.option("--engines", type=click.Choice(["spj", "e-dfs", "b-bfs", "bm-bfs", "reachgrid"]), multiple=True)
@click.option("--placement", type=click.Choice([p.name for p in Placement]), help="ReachGraph placement")
@click.option("--cpu", is_flag=True, help="also time every query with all blocks resident")
@click.pass_obj
def bench(workbench, trajectories, queries, count, lengths, engines, placement, cpu):
    """Writes per-query records as CSV and prints per-engine aggregates.

    Aborts with status 2 when any engine disagrees with the oracle.
    """
    with expected_errors(workbench):
        data = read_trajectories(trajectories)
        instance = workbench.instance(data, label=trajectories, placement=placement)
        workbench.out.mkdir(parents=True, exist_ok=True)

        if not lengths:
            batch = _workload(workbench, data, queries, count, None)
            records = workbench.bench(instance, batch, engines, cpu=cpu)
            path = workbench.out / "bench.csv"
            write_csv(path, records, label=f"queries={len(batch)}")
            click.echo(render_aggregates(aggregate(records)))
            click.echo(f"Wrote {Plural(len(records)):record} to {path}.")
            return

        for length in lengths:
            batch = _workload(workbench, data, None, count, (length, length))
            records = workbench.bench(instance, batch, engines, cpu=cpu)
            path = workbench.out / f"bench-{length}.csv"
            write_csv(path, records, label=f"queries={len(batch)} length={length}")
            click.echo(render_aggregates(aggregate(records), extra=[("length", length)]))
            click.echo(f"Wrote {Plural(len(records)):record} to {path}.")


@main.command(short_help="Sweeps index parameters")
@click.argument("trajectories", type=click.Path(exists=True, dir_okay=False))
@click.option("--kind", type=click.Choice([ReachGraphIndex.KIND, GridIndex.KIND]), required=True)
@click.option("--rt", type=INT_LIST, default="5,10,20,40,80", show_default=True)
@click.option("--rs", type=FLOAT_LIST, default="62.5,125,250,500,1000", show_default=True)
@click.option("--dp", type=INT_LIST, default="1,4,16,32,64", show_default=True)
@click.option("--levels", type=INT_LIST, default="6", show_default=True,
              help="numbers of resolution levels, n gives resolutions 2..2^(n-1)")
@click.option("--queries", type=click.Path(exists=True, dir_okay=False), help="query batch file")
@click.option("--count", default=200, show_default=True)
@click.pass_obj
def tune(workbench, trajectories, kind, rt, rs, dp, levels, queries, count):
    """Writes the mean normalized IO of every setting and prints the cheapest."""
    with expected_errors(workbench):
        data = read_trajectories(trajectories)
        batch = _workload(workbench, data, queries, count, None)
        if kind == GridIndex.KIND:
            rows = workbench.tune_grid(data, batch, rt, rs)
            header = ("R_T", "R_S", "mean_io")
        else:
            contacts = extract_contacts(data)
            rows = workbench.tune_graph(data, batch, dp, levels, contacts=contacts)
            header = ("d_p", "levels", "mean_io")

    workbench.out.mkdir(parents=True, exist_ok=True)
    path = workbench.out / f"tune-{kind}.csv"
    with open(path, "w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(header)
        for params, cost in rows:
            writer.writerow([*params, f"{cost:.4f}"])

    table = TabularData()
    table.set_columns(header)
    table.add_rows([[*params, cost] for params, cost in rows])
    click.echo(table.render())

    best, cost = min(rows, key=lambda row: row[1])
    click.echo(f"Cheapest: {', '.join(f'{k}={v}' for k, v in zip(header, best))} at {cost:.4f}.")
    click.echo(f"Wrote {path}.")


@main.command(short_help="Cross-checks engines against the oracle")
@click.argument("trajectories", type=click.Path(exists=True, dir_okay=False))
@click.option("--queries", type=click.Path(exists=True, dir_okay=False), help="query batch file")
@click.option("--intervals", default=3, show_default=True,
              help="sampled intervals per (source, destination) pair without a batch file")
@click.option("--engines", type=click.Choice(["spj", "e-dfs", "b-bfs", "bm-bfs", "reachgrid"]), multiple=True)
@click.pass_obj
def verify(workbench, trajectories, queries, intervals, engines):
    """Exits with status 2 on any mismatch."""
    with expected_errors(workbench):
        data = read_trajectories(trajectories)
        instance = workbench.instance(data, label=trajectories)
        batch = read_queries(queries) if queries else _all_pairs(workbench, data, intervals)
        mismatches = workbench.verify(instance, batch, engines)

    table = TabularData()
    table.set_columns(["engine", "queries", "mismatches"])
    table.add_rows([[name, len(batch), len(found)] for name, found in mismatches.items()])
    click.echo(table.render())

    if any(mismatches.values()):
        click.echo(f"Mismatch bundles written to {workbench.out}.", err=True)
        sys.exit(2)


def _all_pairs(workbench, data, intervals):
    rng = np.random.default_rng(workbench.settings.seed)
    horizon = data.horizon
    lo, hi = default_lengths(horizon)
    batch = []
    for source in range(data.n_objects):
        for destination in range(data.n_objects):
            if source == destination:
                continue
            for _ in range(intervals):
                length = int(rng.integers(lo, hi + 1))
                start = int(rng.integers(horizon.start, horizon.end - length + 2))
                batch.append(ReachabilityQuery(source, destination, TimeInterval(start, start + length - 1)))
    return batch


if __name__ == "__main__":
    main()
