import numpy as np
import pytest

from reach.utils import EnvironmentBounds, TimeInterval
from reach.workloads import RoadGridParams, RwpParams, default_lengths, gen_queries, gen_road_grid, gen_rwp


def test_rwp_is_reproducible():
    p = RwpParams(20, EnvironmentBounds(500.0, 300.0), duration_ticks=50, rng_seed=4)
    a, b = gen_rwp(p), gen_rwp(p)
    np.testing.assert_array_equal(a.positions, b.positions)
    assert not np.array_equal(a.positions, gen_rwp(p._replace(rng_seed=5)).positions)


def test_rwp_stays_inside_and_respects_speed():
    p = RwpParams(30, EnvironmentBounds(400.0, 400.0), mean_speed=2.0, tick_seconds=6.0, duration_ticks=100)
    t = gen_rwp(p, d_T=10.0)
    assert t.positions.shape == (30, 100, 2)
    assert t.config.d_T == 10.0
    assert t.horizon == TimeInterval(0, 99)

    steps = np.hypot(*np.moveaxis(np.diff(t.positions, axis=1), -1, 0))
    assert steps.max() <= 1.5 * 2.0 * 6.0 + 1e-9


def test_rwp_validates():
    with pytest.raises(ValueError):
        gen_rwp(RwpParams(0))
    with pytest.raises(ValueError):
        gen_rwp(RwpParams(5, tick_seconds=0.0))


def test_road_grid_keeps_objects_on_roads():
    p = RoadGridParams(25, EnvironmentBounds(1000.0, 1000.0), spacing=100.0, duration_ticks=80, rng_seed=2)
    t = gen_road_grid(p)
    x, y = t.positions[..., 0], t.positions[..., 1]
    on_vertical = np.isclose(np.mod(x, 100.0), 0.0) | np.isclose(np.mod(x, 100.0), 100.0)
    on_horizontal = np.isclose(np.mod(y, 100.0), 0.0) | np.isclose(np.mod(y, 100.0), 100.0)
    assert (on_vertical | on_horizontal).all()

    steps = np.abs(np.diff(t.positions, axis=1)).sum(axis=-1)
    assert steps.max() <= 3.0 * 6.0 + 1e-6


def test_road_grid_is_skewed():
    p = RoadGridParams(200, EnvironmentBounds(2000.0, 2000.0), spacing=1000.0, duration_ticks=30, rng_seed=1)
    t = gen_road_grid(p)
    cols_rows = np.minimum(np.floor(t.positions / 50.0).astype(int), 39)
    cells = (cols_rows @ np.array([1, 40])).ravel()
    # Three roads each way cross 40 cells apiece, at most 231 of 1600 cells.
    assert len(np.unique(cells)) <= 231
    assert len(np.unique(cells)) / 1600 < 0.2


def test_road_spacing_must_fit():
    with pytest.raises(ValueError):
        gen_road_grid(RoadGridParams(5, EnvironmentBounds(100.0, 100.0), spacing=500.0))
    with pytest.raises(ValueError):
        gen_road_grid(RoadGridParams(5, speed_range=(3.0, 1.0)))


def test_queries_are_reproducible_and_in_range():
    horizon = TimeInterval(0, 999)
    a = gen_queries(horizon, 300, (150, 350), seed=9, n_objects=50)
    b = gen_queries(horizon, 300, (150, 350), seed=9, n_objects=50)
    assert a.queries == b.queries
    assert a.rng_seed == 9 and len(a) == 300

    for q in a:
        assert q.source != q.destination
        assert 0 <= q.source < 50 and 0 <= q.destination < 50
        assert 150 <= q.interval.length <= 350
        assert horizon.covers(q.interval)


def test_queries_validate():
    horizon = TimeInterval(0, 99)
    with pytest.raises(ValueError):
        gen_queries(horizon, 10, (50, 150), seed=0, n_objects=10)
    with pytest.raises(ValueError):
        gen_queries(horizon, 10, (0, 5), seed=0, n_objects=10)
    with pytest.raises(ValueError):
        gen_queries(horizon, 10, (1, 5), seed=0, n_objects=1)


def test_default_lengths():
    assert default_lengths(TimeInterval(0, 1999)) == (300, 700)
    assert default_lengths(TimeInterval(0, 3)) == (1, 1)
