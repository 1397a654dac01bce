"""
Travelling-time datasets, graphs of fixed end points, arcs, cusps and
echographs.
"""
# external libraries imports
import numpy as np
import pytest

# riembill imports
from riembill.Core.Curve import ConvexCurve
from riembill.Core.Errors import AmbiguousChaining
from riembill.Scene import Scene
from riembill.TravelTimes import (start_grid, generate_dataset, reversal_closure, build_graph, station_graph,
                                  extract_arcs, gradient_of_time, detect_cusps, echograph, embed, branch_key,
                                  is_continuous, ArcSegment, ArcEnd, GraphPoint)


def _arc(order, tangencyCount, x, t, gradient):
    points = [GraphPoint(xi, -np.arcsin(g), ti, 0., order, tangencyCount, g, 0., i)
              for i, (xi, ti, g) in enumerate(zip(x, t, gradient))]
    return ArcSegment(0., points, x, 20*np.pi)

def _central_scene(euclidean):
    domain = ConvexCurve.circle(euclidean, (0., 0.), 10., nSamples=1024, name="domain")
    center = ConvexCurve.circle(euclidean, (0., 0.), 1., nSamples=512, name="center")
    return Scene(euclidean, domain, [center])


class TestDataset(object):
    def test_start_grid(self, disk_scene):
        xs, angles = start_grid(disk_scene, 8, 6)
        assert len(xs) == 8 and len(angles) == 6
        assert np.allclose(np.diff(xs), disk_scene.domain.length/8)
        assert np.all(np.abs(angles) < np.pi/2)
        assert np.allclose(angles, -angles[::-1])

    def test_generate(self, disk_scene):
        dataset, report = generate_dataset(disk_scene, 6, 5)
        assert report["rays"] == 30
        assert report["traced"] + report["trapped"] == 30
        assert report["orderViolations"] == 0
        assert sum(report["buckets"].values()) == report["traced"]
        chart, domain = disk_scene.chart, disk_scene.domain
        for s in dataset:
            assert not hasattr(s, "signature")
            assert np.abs(s.omegaOut) < np.pi/2
            if s.order == 0:
                # free chords: time is the distance and angles are symmetric
                assert s.t == pytest.approx(chart.distance(domain.position(s.x), domain.position(s.y)), abs=1e-7)
                assert abs(s.omegaOut) == pytest.approx(abs(s.omega), abs=1e-6)

    def test_resume_skips_done_rays(self, disk_scene):
        dataset, report = generate_dataset(disk_scene, 6, 5, done={(0, 0), (0, 1)})
        assert report["rays"] == 28
        assert report["skipped"] == 2
        assert (0, 0) not in set((s.xIndex, s.directionIndex) for s in dataset)

    def test_reversal_closure(self, two_circles_scene):
        dataset, _ = generate_dataset(two_circles_scene, 8, 16)
        report = reversal_closure(two_circles_scene, [s for s in dataset if s.tangencyCount == 0])
        assert report["checked"] > 0
        assert report["failures"] == 0
        assert report["maxParameterError"] < 1e-7
        assert report["maxTimeError"] < 1e-7

    def test_continuity(self):
        assert is_continuous(5., 1., 5.5, 1.6, 10.)
        assert not is_continuous(5., 1., 7., 1.6, 10.)
        # across the period
        assert is_continuous(5., 9.9, 5.15, 0.1, 10.)


class TestStationGraph(object):
    def test_reads_rays_backwards(self, disk_scene):
        dataset, _ = generate_dataset(disk_scene, 4, 8)
        graph = station_graph(disk_scene, dataset, 1)
        row   = dict((s.directionIndex, s) for s in dataset if s.xIndex == 1)
        assert graph.sweep == "angle" and not graph.periodic
        assert len(graph) == len(row)
        for p in graph:
            s = row[p.index]
            assert (p.x, p.y, p.t) == (s.y, s.x, s.t)
            assert p.angle == -s.omegaOut
            assert p.endAngle == s.omega
            assert p.gradient == pytest.approx(np.sin(s.omegaOut))
            assert branch_key(p) == branch_key(s)

    def test_missing_station(self, disk_scene):
        dataset, _ = generate_dataset(disk_scene, 2, 4)
        with pytest.raises(AssertionError):
            station_graph(disk_scene, dataset, 5)


@pytest.mark.slow
class TestGraph(object):
    def test_order_zero_graph_points(self, euclidean):
        scene  = _central_scene(euclidean)
        domain = scene.domain
        dataset, _ = generate_dataset(scene, 16, 16)
        graph = build_graph(scene, dataset, 0.)
        assert len(graph)
        P1 = domain.position(0.)
        for p in graph:
            assert abs(np.mod(p.y+0.5*domain.length, domain.length)-0.5*domain.length) < 1e-7
            assert p.gradient == pytest.approx(-np.sin(p.angle))
            if p.order == 0:
                assert p.t == pytest.approx(np.linalg.norm(domain.position(p.x)-P1), abs=1e-6)
        arcs = extract_arcs(graph, gradientJump=1.)
        for arc in arcs:
            assert all(branch_key(q) == arc.key for q in arc.points)
            assert np.all(np.diff(arc.x) > 0)

    def test_cusps_of_traced_station(self, euclidean):
        # the two rays from x1 tangent to the central unit circle
        scene = _central_scene(euclidean)
        dataset, _ = generate_dataset(scene, 1, 512)
        graph = station_graph(scene, dataset, 0)
        arcs  = extract_arcs(graph, scene=scene)
        assert sorted(a.order for a in arcs) == [0, 0, 1]
        unpaired = []
        cusps = detect_cusps(arcs, unpaired=unpaired)
        assert len(cusps) == 2
        assert unpaired == []
        for c in cusps:
            assert c.orders == (0, 1)
            assert c.grazePosition == "first"
            assert c.t == pytest.approx(20*np.sqrt(0.99), abs=1e-6)
            assert abs(np.sin(c.endAngle)) == pytest.approx(0.1, abs=1e-6)
            assert abs(c.gradient) == pytest.approx(0.1, abs=1e-6)
            # chords are symmetric, the cusp direction is the mirrored end angle
            assert abs(c.startAngle) == pytest.approx(abs(c.endAngle), abs=1e-6)
        assert sorted(np.sign(c.endAngle) for c in cusps) == [-1, 1]


class TestArcs(object):
    def test_gradient_of_time(self):
        x   = np.linspace(1., 2., 40)
        arc = _arc(0, 0, x, np.sin(x)+5., np.cos(x))
        report = gradient_of_time([arc])
        assert report["checked"] == 1
        assert report["passed"]
        bad = _arc(0, 0, x, np.sin(x)+5., np.cos(x)+0.1)
        assert not gradient_of_time([bad])["passed"]

    def test_cusp_pairing(self):
        x = np.linspace(1., 2., 10)
        low  = _arc(0, 0, x, x+5., np.ones_like(x)*0.3)
        high = _arc(1, 0, x, x+5.5, np.ones_like(x)*0.3)
        lone = _arc(2, 1, x, x+7., np.ones_like(x)*0.3)
        low.set_end(1, ArcEnd(2.5, 7., 0.3, 0.1, "graze", -1))
        high.set_end(1, ArcEnd(2.5, 7., 0.3, 0.2, "graze", -1))
        lone.set_end(0, ArcEnd(0.5, 7., 0.3, 0.2, "graze", 1))
        unpaired = []
        cusps = detect_cusps([low, high, lone], unpaired=unpaired)
        assert len(cusps) == 1
        assert cusps[0].arcs == (0, 1)
        assert cusps[0].orders == (0, 1)
        assert unpaired == [(2, 0)]

    def test_echograph(self, disk_scene):
        x = np.linspace(1., 2., 10)
        low  = _arc(0, 0, x, x+5., np.ones_like(x)*0.3)
        high = _arc(1, 0, x, x+5.5, np.ones_like(x)*0.3)
        low.set_end(1, ArcEnd(2.5, 7., 0.3, 0.1, "graze", -1))
        high.set_end(1, ArcEnd(2.5, 7., 0.3, 0.2, "graze", -1))
        cusps = detect_cusps([low, high])
        graph = echograph(disk_scene, [low, high], cusps, maxOrder=3)
        assert len(graph.arcs) == 2
        assert graph.adjacency == [(0, 1, 0, 1)]
        assert graph.adjacencyValid
        order, points = graph.arcs[0]
        assert order == 0 and len(points) == 12
        # points sit at distance t outside the boundary circle
        assert np.allclose(np.linalg.norm(points, axis=1)[1:-1], 10.+low.t, atol=1e-6)
        assert len(echograph(disk_scene, [low, high], cusps, maxOrder=0).adjacency) == 0

    def test_embed_on_boundary(self, disk_scene):
        P = embed(disk_scene, [0., 1.], [0., 0.])
        assert np.allclose(np.linalg.norm(P, axis=1), 10., atol=1e-8)
