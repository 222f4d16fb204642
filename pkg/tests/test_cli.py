import pytest
from click.testing import CliRunner

from run import main


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


@pytest.fixture
def workspace(tmp_path, runner):
    trajectories = tmp_path / "walk.txt"
    result = runner.invoke(main, ["-q", "--out", str(tmp_path), "generate", "rwp", str(trajectories),
                                  "--objects", "10", "--ticks", "30", "--width", "200", "--height", "200"])
    assert result.exit_code == 0, result.output
    return tmp_path, trajectories


def _invoke(runner, tmp_path, *args):
    return runner.invoke(main, ["-q", "--out", str(tmp_path), *map(str, args)])


def test_generate_and_extract(runner, workspace):
    tmp_path, trajectories = workspace
    result = _invoke(runner, tmp_path, "generate", "queries", trajectories, tmp_path / "q.txt", "--count", "15")
    assert result.exit_code == 0, result.output
    assert "15 queries" in result.output

    result = _invoke(runner, tmp_path, "extract", trajectories, tmp_path / "contacts.txt")
    assert result.exit_code == 0, result.output
    assert (tmp_path / "contacts.txt").exists()

    result = _invoke(runner, tmp_path, "generate", "road", tmp_path / "road.txt", "--objects", "5", "--ticks", "10",
                     "--width", "400", "--height", "400", "--spacing", "100")
    assert result.exit_code == 0, result.output


@pytest.mark.parametrize("kind, options", [
    ("reachgraph", ["--resolutions", "2,4", "--dp", "4"]),
    ("reachgrid", ["--rt", "5", "--rs", "50"]),
])
def test_build_and_query(runner, workspace, kind, options):
    tmp_path, trajectories = workspace
    _invoke(runner, tmp_path, "generate", "queries", trajectories, tmp_path / "q.txt", "--count", "12")

    index = tmp_path / kind
    result = _invoke(runner, tmp_path, "build", trajectories, index, "--kind", kind, *options)
    assert result.exit_code == 0, result.output
    assert f"Saved {kind} index" in result.output

    result = _invoke(runner, tmp_path, "query", index, tmp_path / "q.txt")
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[0].startswith("#source,destination")
    assert len(lines) == 13


def test_rebuild_gives_identical_files(runner, workspace):
    tmp_path, trajectories = workspace
    for name in ("a", "b"):
        result = _invoke(runner, tmp_path, "build", trajectories, tmp_path / name, "--kind", "reachgraph",
                         "--placement", "random")
        assert result.exit_code == 0, result.output

    for f in ("manifest.json", "blocks.bin"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_query_rejects_foreign_engine(runner, workspace):
    tmp_path, trajectories = workspace
    _invoke(runner, tmp_path, "generate", "queries", trajectories, tmp_path / "q.txt", "--count", "3")
    _invoke(runner, tmp_path, "build", trajectories, tmp_path / "grid", "--kind", "reachgrid")
    result = _invoke(runner, tmp_path, "query", tmp_path / "grid", tmp_path / "q.txt", "--engine", "bm-bfs")
    assert result.exit_code == 1
    assert "cannot answer" in result.stderr


def test_bench_writes_csv(runner, workspace):
    tmp_path, trajectories = workspace
    result = _invoke(runner, tmp_path, "bench", trajectories, "--count", "20")
    assert result.exit_code == 0, result.output
    assert (tmp_path / "bench.csv").exists()
    assert "bm-bfs" in result.output

    result = _invoke(runner, tmp_path, "bench", trajectories, "--count", "5", "--lengths", "3,6",
                     "--engines", "spj", "--engines", "reachgrid")
    assert result.exit_code == 0, result.output
    assert (tmp_path / "bench-3.csv").exists() and (tmp_path / "bench-6.csv").exists()


def test_verify(runner, workspace):
    tmp_path, trajectories = workspace
    result = _invoke(runner, tmp_path, "verify", trajectories, "--intervals", "1")
    assert result.exit_code == 0, result.output
    assert "mismatches" in result.output


def test_tune(runner, workspace):
    tmp_path, trajectories = workspace
    result = _invoke(runner, tmp_path, "tune", trajectories, "--kind", "reachgrid", "--rt", "5,10", "--rs", "50,100",
                     "--count", "10")
    assert result.exit_code == 0, result.output
    assert "Cheapest: R_T=" in result.output
    lines = (tmp_path / "tune-reachgrid.csv").read_text().splitlines()
    assert lines[0] == "R_T,R_S,mean_io"
    assert len(lines) == 5

    result = _invoke(runner, tmp_path, "tune", trajectories, "--kind", "reachgraph", "--dp", "1,4", "--levels", "2,3",
                     "--count", "10")
    assert result.exit_code == 0, result.output
    lines = (tmp_path / "tune-reachgraph.csv").read_text().splitlines()
    assert lines[0] == "d_p,levels,mean_io"
    assert len(lines) == 5


def test_bad_inputs_exit_with_one(runner, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("this is not a trajectory file\n")
    result = _invoke(runner, tmp_path, "extract", bad, tmp_path / "out.txt")
    assert result.exit_code == 1
    assert result.stderr.startswith("Error:")

    empty = tmp_path / "empty"
    empty.mkdir()
    queries = tmp_path / "q.txt"
    queries.write_text("")
    result = _invoke(runner, tmp_path, "query", empty, queries)
    assert result.exit_code == 1
    assert "Could not read" in result.stderr
