"""
Scene scalars, free region and validation of the standing hypotheses.
"""
# external libraries imports
import numpy as np
import pytest

# riembill imports
from riembill.Core.Chart import PhaseState, get_chart
from riembill.Core.Curve import ConvexCurve
from riembill.Scene import Scene, validate_scene, side_of_geodesic, chord_clearance


def _circles(chart, centers, radius=1., domainCenter=(0., 0.), domainRadius=12., clockwise=False):
    domain = ConvexCurve.circle(chart, domainCenter, domainRadius, nSamples=512, name="domain", clockwise=clockwise)
    obstacles = [ConvexCurve.circle(chart, c, radius, nSamples=256, name="K%i"%i) for i, c in enumerate(centers)]
    return Scene(chart, domain, obstacles)


class TestSceneScalars(object):
    def test_distances(self, two_circles_scene):
        scene = two_circles_scene
        assert scene.nObstacles == 2
        assert scene.dK == pytest.approx(4., abs=1e-6)
        assert scene.diam_S == pytest.approx(24., abs=1e-6)
        assert scene.boundaryClearance == pytest.approx(8., abs=1e-6)
        assert scene.kappa_S == 0
        assert scene.kappa_K == pytest.approx(1., abs=1e-3)

    def test_free_region(self, two_circles_scene):
        inside = two_circles_scene.in_free_region([[3., 0.], [0., 0.], [20., 0.], [6., 1.5]])
        assert list(inside) == [True, False, False, True]

    def test_obstacles_must_share_the_chart(self, euclidean):
        other  = get_chart("euclidean-plane")
        domain = ConvexCurve.circle(euclidean, (0., 0.), 10., nSamples=128)
        with pytest.raises(AssertionError):
            Scene(euclidean, domain, [ConvexCurve.circle(other, (0., 0.), 1., nSamples=64)])


class TestSides(object):
    def test_euclidean_side(self, euclidean):
        state = PhaseState((0., 0.), (1., 0.))
        assert side_of_geodesic(euclidean, state, (0., 1.)) == "left"
        assert side_of_geodesic(euclidean, state, (3., -1.)) == "right"
        assert side_of_geodesic(euclidean, state, (2., 0.)) == "on"

    def test_half_plane_side(self):
        chart = get_chart("poincare-half-plane")
        state = PhaseState((0., 1.), (1., 0.))
        # the geodesic is the unit half circle, its inside is on the right
        assert side_of_geodesic(chart, state, (0., 0.5)) == "right"
        assert side_of_geodesic(chart, state, (0., 2.)) == "left"

    def test_chord_clearance(self, two_circles_scene):
        state = PhaseState((-5., 2.), (1., 0.))
        left  = two_circles_scene.obstacles[0]
        assert chord_clearance(two_circles_scene, state, 10., left) == pytest.approx(1., abs=1e-6)
        state = PhaseState((-5., 0.5), (1., 0.))
        assert chord_clearance(two_circles_scene, state, 10., left) < 0


class TestValidation(object):
    def test_valid_scene(self, two_circles_scene):
        report = validate_scene(two_circles_scene, nChords=100, bitangentSeeds=16)
        assert report.passed, str(report)
        assert report.get("monte-carlo chords")[2]["violations"] == 0
        assert report.to_dict()["passed"]

    def test_collinear_circles_fail_general_position(self, euclidean):
        scene  = _circles(euclidean, [(0., 0.), (4., 0.), (8., 0.)], domainCenter=(4., 0.), domainRadius=15.)
        report = validate_scene(scene, nChords=0, bitangentSeeds=16)
        assert not report.passed
        assert "general position" in report.failures()

    def test_overlapping_circles(self, euclidean):
        scene  = _circles(euclidean, [(0., 0.), (1., 0.)])
        report = validate_scene(scene, nChords=0)
        assert not report.get("disjoint K0 K1")[1]
        assert not report.get("general position")[1]

    def test_clockwise_domain_is_not_convex(self, euclidean):
        scene  = _circles(euclidean, [(-3., 0.), (3., 0.)], clockwise=True)
        report = validate_scene(scene, nChords=0)
        assert not report.get("convexity domain")[1]

    def test_single_obstacle(self, euclidean):
        scene  = _circles(euclidean, [(0., 0.)])
        report = validate_scene(scene, nChords=0)
        assert not report.get("obstacle count")[1]

    def test_obstacles_hugging_the_boundary(self, euclidean):
        scene  = _circles(euclidean, [(-10.5, 0.), (10.5, 0.)])
        report = validate_scene(scene, nChords=0, bitangentSeeds=16)
        entry  = report.get("order bound clearance")
        assert not entry[1]
        assert entry[2]["clearance"] == pytest.approx(0.5, abs=1e-6)
        assert "order bound clearance" in report.failures()
