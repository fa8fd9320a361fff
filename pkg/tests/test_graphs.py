import numpy as np
import pytest

from landscapeids.graphs import (Covering, Graph, GraphError, MetricKind, Region, ball,
                                 build_covering, covering_is_exhaustive, exterior_boundary,
                                 interior_boundary, kappa_union_covers, measure_overlap,
                                 translation_covers, volume_growth_probe)
from landscapeids.zoo import (GASKET_ALPHA, BandGraphSpec, PenroseSpec, SierpinskiSpec,
                              StackSpec, band_vertex_id, build_band_graph, build_penrose,
                              build_sierpinski, build_stacked, stacked_distance)


def band1d(w, extent):
    return build_band_graph(BandGraphSpec(d=1, W=w, extent=extent)), BandGraphSpec(d=1, W=w, extent=extent)


class TestConstruction:
    def test_adjacency_symmetric_and_sorted(self):
        g = build_band_graph(BandGraphSpec(d=1, W=2, extent=6))
        for x in range(g.vertex_count):
            for y in g.neighbors(x):
                assert x in g.neighbors(int(y))
            assert np.all(np.diff(g.neighbors(x)) > 0)

    def test_self_loop_rejected(self):
        with pytest.raises(GraphError):
            Graph(3, [(0, 1), (1, 1)])

    def test_disconnected_rejected(self):
        with pytest.raises(GraphError):
            Graph(4, [(0, 1), (2, 3)])

    def test_duplicate_edges_merged(self):
        g = Graph(3, [(0, 1), (1, 0), (1, 2)])
        assert g.edge_count == 2

    def test_max_degree_recorded(self):
        g = build_band_graph(BandGraphSpec(d=1, W=3, extent=8))
        assert g.max_degree == 6

    def test_region_bijection(self):
        g, spec = band1d(1, 5)
        reg = Region(g, [2, 4, 6])
        assert len(reg) == 3
        for i, v in enumerate(reg.vertices):
            assert reg.local_index(int(v)) == i
        with pytest.raises(KeyError):
            reg.local_index(0)
        with pytest.raises(GraphError):
            Region(g, [])


class TestBall:
    def test_one_hop_is_band(self):
        g, spec = band1d(2, 8)
        b = ball(g, band_vertex_id(spec, 0), 1)
        assert [int(v) - spec.extent for v in b.members] == [-2, -1, 0, 1, 2]

    def test_zero_radius(self):
        g, spec = band1d(2, 8)
        assert list(ball(g, 3, 0).members) == [3]

    def test_z2_l1_radius2_count(self):
        # oracle: brute-force count of lattice points with |x|+|y| <= 2
        expected = sum(1 for x in range(-3, 4) for y in range(-3, 4) if abs(x) + abs(y) <= 2)
        spec = BandGraphSpec(d=2, W=1, extent=6)
        g = build_band_graph(spec, metric=MetricKind.L1)
        b = ball(g, band_vertex_id(spec, (0, 0)), 2)
        assert b.members.size == expected == 13

    def test_graph_metric_radius_floored(self):
        g, spec = band1d(1, 10)
        c = band_vertex_id(spec, 0)
        assert np.array_equal(ball(g, c, 2.9).members, ball(g, c, 2).members)

    def test_invalid_vertex(self):
        g, _ = band1d(1, 4)
        with pytest.raises(GraphError):
            ball(g, 99, 1)
        with pytest.raises(GraphError):
            ball(g, 0, -1)


class TestBoundaries:
    def test_path_segment(self):
        g, spec = band1d(1, 10)
        seg = [band_vertex_id(spec, x) for x in range(6)]
        ext = exterior_boundary(g, seg)
        assert [int(v) - spec.extent for v in ext] == [-1, 6]

    def test_band2_segment(self):
        g, spec = band1d(2, 10)
        seg = [band_vertex_id(spec, x) for x in range(6)]
        # oracle: enumerate all neighbors of the segment not in it
        inside = set(seg)
        expected = sorted({int(y) for x in seg for y in g.neighbors(x)} - inside)
        ext = exterior_boundary(g, seg)
        assert list(ext) == expected
        assert [int(v) - spec.extent for v in ext] == [-2, -1, 6, 7]

    def test_whole_graph_has_empty_exterior(self):
        g, _ = band1d(1, 3)
        assert exterior_boundary(g, np.arange(g.vertex_count)).size == 0
        assert interior_boundary(g, np.arange(g.vertex_count)).size == 0

    def test_interior_boundary(self):
        g, spec = band1d(2, 10)
        seg = [band_vertex_id(spec, x) for x in range(6)]
        outside = set(range(g.vertex_count)) - set(seg)
        expected = sorted(x for x in seg if any(int(y) in outside for y in g.neighbors(x)))
        assert list(interior_boundary(g, seg)) == expected
        assert [int(v) - spec.extent for v in interior_boundary(g, seg)] == [0, 1, 4, 5]

    def test_boundaries_disjoint_from_input(self):
        g, spec = band1d(2, 12)
        seg = [band_vertex_id(spec, x) for x in range(-3, 4)]
        assert not set(map(int, exterior_boundary(g, seg))) & set(seg)
        assert set(map(int, interior_boundary(g, seg))) <= set(seg)


class TestCovering:
    def test_segment_covering(self):
        spec = BandGraphSpec(d=1, W=1, extent=49)  # 99 vertices ~ [0, 99) segment
        g = build_band_graph(spec)
        cov = build_covering(g, 10)
        assert covering_is_exhaustive(g, cov)
        assert cov.overlap_constant <= 5
        centers = np.array(cov.centers)
        assert np.all(np.diff(np.sort(centers)) >= 5)

    def test_single_vertex(self):
        g = Graph(1, [])
        cov = build_covering(g, 7)
        assert cov.centers == [0] and cov.overlap_constant == 1

    def test_z2_union_oracle(self):
        g = build_band_graph(BandGraphSpec(d=2, W=1, extent=25))
        cov = build_covering(g, 5)
        hit = np.zeros(g.vertex_count, dtype=bool)
        for i in range(len(cov.centers)):
            hit[cov.ball_members(g, i)] = True
        assert hit.all()

    def test_degenerate_small_radius_gives_singletons(self):
        g, _ = band1d(1, 5)
        cov = build_covering(g, 0.5)
        assert cov.centers == list(range(g.vertex_count))
        assert cov.overlap_constant == 1

    def test_measure_overlap_scale1_matches_stored(self):
        g = build_band_graph(BandGraphSpec(d=1, W=2, extent=40))
        cov = build_covering(g, 6)
        assert measure_overlap(g, cov, 1.0) == cov.overlap_constant

    def test_measure_overlap_scale2_oracle(self):
        g, _ = band1d(1, 40)
        cov = build_covering(g, 8)
        # oracle: count centers within 16 hops of each vertex by direct distance
        xs = np.arange(g.vertex_count)
        centers = np.array(cov.centers)
        counts = (np.abs(xs[:, None] - centers[None, :]) <= 16).sum(axis=1)
        assert measure_overlap(g, cov, 2.0) == counts.max()

    def test_disjoint_centers_overlap_one(self):
        g, _ = band1d(1, 30)
        cov = Covering(radius=1.0, centers=[0, 10, 20, 30], overlap_constant=1)
        assert measure_overlap(g, cov, 1.0) == 1

    def test_overlap_monotone_in_scale(self):
        g = build_sierpinski(SierpinskiSpec(4))
        cov = build_covering(g, 3)
        values = [measure_overlap(g, cov, s) for s in (1.0, 1.5, 2.0, 4.0)]
        assert values == sorted(values)


class TestTranslationCovers:
    def test_kappa_near_one(self):
        g, _ = band1d(1, 40)
        covers = translation_covers(g, 10, 0.99)
        assert len(covers) <= 3
        for cov in covers:
            assert covering_is_exhaustive(g, cov)
        assert kappa_union_covers(g, covers, 0.99)

    def test_kappa_quarter(self):
        g, _ = band1d(1, 32)
        covers = translation_covers(g, 8, 0.25)
        assert len(covers) <= 16  # C kappa^-alpha with alpha=1
        for cov in covers:
            assert covering_is_exhaustive(g, cov)
        assert kappa_union_covers(g, covers, 0.25)

    def test_degenerate_single_ball(self):
        g, _ = band1d(1, 1)  # 3 vertices
        covers = translation_covers(g, 10, 0.5)
        assert len(covers) == 1
        assert covering_is_exhaustive(g, covers[0])

    def test_bad_kappa(self):
        g, _ = band1d(1, 4)
        with pytest.raises(GraphError):
            translation_covers(g, 4, 1.5)


class TestVolumeGrowth:
    def test_z1(self):
        g, spec = band1d(1, 200)
        probe = volume_growth_probe(g, [spec.extent], [2, 4, 8, 16, 32, 64])
        assert abs(probe.alpha - 1.0) <= 0.1

    def test_z2(self):
        spec = BandGraphSpec(d=2, W=1, extent=42)
        g = build_band_graph(spec)
        probe = volume_growth_probe(g, [band_vertex_id(spec, (0, 0))], [8, 12, 16, 24, 32])
        assert abs(probe.alpha - 2.0) <= 0.1
        # oracle: exact l1 ball sizes 2r^2+2r+1 for interior centers
        for _, r, size in probe.rows:
            assert size == 2 * r * r + 2 * r + 1

    def test_gasket(self):
        g = build_sierpinski(SierpinskiSpec(7))
        corner = int(np.argmin(g.coords[:, 0] + g.coords[:, 1]))
        probe = volume_growth_probe(g, [corner], [4, 8, 16, 32, 64])
        assert abs(probe.alpha - GASKET_ALPHA) <= 0.1

    def test_radius_below_one_rejected(self):
        g, _ = band1d(1, 5)
        with pytest.raises(GraphError):
            volume_growth_probe(g, [0], [0.5, 2])


class TestStackedMetric:
    def setup_method(self):
        base = build_band_graph(BandGraphSpec(d=1, W=1, extent=4))
        self.base = base
        self.g = build_stacked(StackSpec(base, 3))

    def test_vertical_distance_half(self):
        assert stacked_distance(self.g, 0, 1) == 0.5
        assert stacked_distance(self.g, 0, 2) == 0.5
        assert stacked_distance(self.g, 0, 0) == 0.0

    def test_horizontal_distance_is_base(self):
        # vertices 0 and 9 are base vertices 0 and 3, same layer
        assert stacked_distance(self.g, 0, 9) == 3.0
        assert stacked_distance(self.g, 0, 10) == 3.0  # layer change is free when x != y

    def test_small_ball_is_singleton(self):
        assert list(ball(self.g, 4, 0.4).members) == [4]

    def test_half_ball_is_full_stack(self):
        assert list(ball(self.g, 4, 0.5).members) == [3, 4, 5]

    def test_radius_one_ball_is_base_ball_times_layers(self):
        got = set(map(int, ball(self.g, 4, 1.0).members))
        base_ball = self.base.bfs_ball(1, 1)
        expected = {int(b) * 3 + j for b in base_ball for j in range(3)}
        assert got == expected
