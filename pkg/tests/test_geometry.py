import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from interfsim.geometry import (
    PointSet,
    ZenoConfig,
    build_grid_index,
    gen_halving_chain,
    gen_uniform,
    gen_zeno,
    load_points,
    save_points,
    zeno_scale,
)

from conftest import oracle_range_query


class TestPointSet:
    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            PointSet(np.empty((0, 2)))

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            PointSet(np.array([[0.0, np.nan]]))

    def test_immutable(self):
        ps = gen_uniform(5, 2, 0)
        with pytest.raises(ValueError):
            ps.coords[0, 0] = 7.0


class TestGenUniform:
    def test_single_point_in_unit_square(self):
        ps = gen_uniform(1, 2, seed=3)
        assert ps.n == 1 and ps.dim == 2
        assert np.all(ps.coords >= 0.0) and np.all(ps.coords < 1.0)

    def test_deterministic(self):
        a = gen_uniform(1000, 2, seed=42)
        b = gen_uniform(1000, 2, seed=42)
        assert np.array_equal(a.coords, b.coords)

    def test_rejects_bad_sizes(self):
        with pytest.raises(ValueError):
            gen_uniform(0, 2, 1)
        with pytest.raises(ValueError):
            gen_uniform(2, 0, 1)

    def test_uniformity_chi_square(self):
        from scipy.stats import chisquare

        ps = gen_uniform(1000, 2, seed=42)
        cells = np.floor(ps.coords * 10).astype(int)
        counts = np.bincount(cells[:, 0] * 10 + cells[:, 1], minlength=100)
        assert counts.mean() == 10.0
        assert chisquare(counts).pvalue > 0.001


class TestHalvingChain:
    def test_three_points(self):
        ps = gen_halving_chain(3)
        assert ps.coords[:, 0].tolist() == [0.0, 0.5, 0.75]

    def test_two_points(self):
        ps = gen_halving_chain(2, g0=0.3)
        assert ps.coords[1, 0] - ps.coords[0, 0] == pytest.approx(0.3)

    def test_gap_ratio(self):
        ps = gen_halving_chain(12, ratio=0.25)
        gaps = np.diff(ps.coords[:, 0])
        assert np.allclose(gaps[1:] / gaps[:-1], 0.25)

    def test_extra_dims_zero(self):
        ps = gen_halving_chain(5, d=3)
        assert ps.dim == 3
        assert np.all(ps.coords[:, 1:] == 0.0)

    @pytest.mark.parametrize("ratio", [0.0, 0.6, 1.0, -0.1])
    def test_rejects_bad_ratio(self, ratio):
        with pytest.raises(ValueError):
            gen_halving_chain(5, ratio=ratio)


class TestGenZeno:
    def test_small_example(self):
        ps = gen_zeno(ZenoConfig(k=2, u=0.01, center=(0.5, 0.5)))
        assert np.allclose(ps.coords, [[0.5, 0.5], [0.53, 0.5]])

    def test_consecutive_nearest_neighbours(self):
        # the closest point to point i is point i-1, for i >= 1
        ps = gen_zeno(ZenoConfig(k=5))
        coords = ps.coords
        for i in range(1, 5):
            dists = np.linalg.norm(coords - coords[i], axis=1)
            dists[i] = np.inf
            assert np.argmin(dists) == i - 1

    def test_ball_disjointness(self):
        cfg = ZenoConfig(k=6)
        u = 0.25 * 3.0 ** -6
        ps = gen_zeno(cfg)
        gaps = np.diff(ps.coords[:, 0])
        assert np.all(gaps > 2 * u)

    def test_rejects_small_k(self):
        with pytest.raises(ValueError):
            ZenoConfig(k=1)

    def test_rejects_escaping_ball(self):
        with pytest.raises(ValueError):
            gen_zeno(ZenoConfig(k=3, u=0.1, center=(0.9, 0.5)))

    def test_sampled_mode_stays_in_balls(self):
        cfg = ZenoConfig(k=4, u=0.001)
        centers = gen_zeno(cfg).coords
        sampled = gen_zeno(cfg, seed=11).coords
        assert np.all(np.linalg.norm(sampled - centers, axis=1) <= 0.001)

    def test_scale_formula(self):
        # outer ball of radius u*3^k has area 1/n
        u = zeno_scale(n=100, k=4)
        r = u * 3.0 ** 4
        assert np.pi * r * r == pytest.approx(1.0 / 100)


class TestGridIndex:
    def test_single_point(self):
        ps = PointSet(np.array([[0.3, 0.7]]))
        idx = build_grid_index(ps, 0.5)
        assert len(idx.buckets) == 1
        assert idx.range_query((0.3, 0.7), 0.01) == [0]

    def test_cell_side_one(self):
        ps = gen_uniform(50, 2, seed=9)
        idx = build_grid_index(ps, 1.0)
        assert sum(len(b) for b in idx.buckets.values()) == 50
        assert len(idx.buckets) <= 4

    def test_range_query_matches_scan(self):
        ps = gen_uniform(100, 2, seed=5)
        idx = build_grid_index(ps, 0.07)
        q = (0.4, 0.6)
        assert idx.range_query(q, 0.1) == oracle_range_query(ps.coords, q, 0.1)

    @settings(max_examples=40, deadline=None)
    @given(
        seed=st.integers(0, 2 ** 31),
        n=st.integers(1, 60),
        d=st.integers(1, 3),
        cell=st.floats(0.03, 1.5),
        radius=st.floats(0.0, 0.8),
    )
    def test_range_query_property(self, seed, n, d, cell, radius):
        ps = gen_uniform(n, d, seed)
        idx = build_grid_index(ps, cell)
        q = gen_uniform(1, d, seed + 1).coords[0]
        assert idx.range_query(q, radius) == oracle_range_query(ps.coords, q, radius)


class TestPointIO:
    def test_round_trip_exact(self, tmp_path):
        ps = gen_uniform(200, 3, seed=17)
        path = tmp_path / "pts.txt"
        save_points(ps, path)
        back = load_points(path)
        assert back.dim == 3
        assert np.array_equal(back.coords, ps.coords)

    def test_header(self, tmp_path):
        path = tmp_path / "pts.txt"
        save_points(gen_uniform(4, 2, 0), path)
        assert path.read_text().splitlines()[0] == "2 4"

    def test_rejects_malformed(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 3\n0.1 0.2\n0.3 0.4\n")
        with pytest.raises(ValueError):
            load_points(path)
