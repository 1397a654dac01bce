"""
Envelopes of tangent families and the chaining of envelopes into closed
boundaries, on families of lines tangent to the unit circle.
"""
# external libraries imports
import numpy as np
import pytest

# riembill imports
from riembill.Core.Chart import PhaseState, get_chart
from riembill.Core.Curve import ConvexCurve
from riembill.Core.Errors import Ambiguity, NoIntersection, IncompleteCoverage
from riembill.Scene import Scene
from riembill.Strata import tangent_strata
from riembill.Reconstruct import (geodesic_intersection, envelope, is_extension, extend_step, reconstruct,
                                  build_tangent_arcs, ray_mismatch, terminal_ray, TangentArc, Envelope,
                                  ReconstructedObstacle)

STEP = 2*np.pi/1024


def _tangent_arc(id, first, last, isInitial=False, reverse=False, radius=1., center=(0., 0.), back=5., descending=False):
    """Lines tangent to a circle at angles k*STEP for k in [first, last],
    starting back before the tangency point."""
    states = []
    steps  = range(first, last+1)
    for k in (reversed(steps) if descending else steps):
        phi = k*STEP
        point = np.array(center) + radius*np.array([np.cos(phi), np.sin(phi)])
        direction = np.array([-np.sin(phi), np.cos(phi)])
        if reverse:
            direction = -direction
        states.append( PhaseState(point-back*direction, direction) )
    arc = TangentArc(id, states, [10.]*len(states), isInitial=isInitial)
    arc.set_envelope(envelope(get_chart("euclidean-plane"), arc))
    return arc

def _quarters(overlap=4):
    return [_tangent_arc(m, m*256-overlap, (m+1)*256+overlap, isInitial=(m==0)) for m in range(4)]

def _scene():
    chart  = get_chart("euclidean-plane")
    domain = ConvexCurve.circle(chart, (0., 0.), 10., nSamples=512, name="domain")
    return Scene(chart, domain, [ConvexCurve.circle(chart, (0., 0.), 1., nSamples=512, name="K")])


class TestIntersections(object):
    def test_euclidean_lines(self, euclidean):
        point, s = geodesic_intersection(euclidean, PhaseState((0., 0.), (1., 0.)), PhaseState((2., -1.), (0., 1.)), 5., 5.)
        assert np.allclose(point, [2., 0.])
        assert np.allclose(s, [2., 1.])
        with pytest.raises(NoIntersection):
            geodesic_intersection(euclidean, PhaseState((0., 0.), (1., 0.)), PhaseState((0., 1.), (1., 0.)), 5., 5.)

    def test_half_plane_geodesics(self):
        chart  = get_chart("poincare-half-plane")
        first  = PhaseState((-0.5, 1.), chart.unit_vector((-0.5, 1.), 0.3))
        target = chart.flow(first, 0.8).point
        second = chart.geodesic_between((0.5, 0.6), target)
        point, s = geodesic_intersection(chart, first, second, 2., 2.)
        assert np.allclose(point, target, atol=1e-9)
        assert s[0] == pytest.approx(0.8, abs=1e-8)


class TestEnvelope(object):
    def test_circle_envelope(self):
        arc = _tangent_arc(0, 0, 200)
        env = arc.envelope
        assert len(env) == 200
        assert np.allclose(np.linalg.norm(env.points, axis=1), 1., atol=1e-5)
        assert env.isConvex
        assert env.reliable

    def test_orientation_is_anticlockwise(self):
        env = _tangent_arc(0, 0, 200, reverse=True).envelope
        assert env.isConvex
        assert np.allclose(np.linalg.norm(env.points, axis=1), 1., atol=1e-5)

    def test_single_ray(self):
        with pytest.raises(NoIntersection):
            _tangent_arc(0, 0, 0)

    def test_reversed(self):
        env = _tangent_arc(0, 0, 20).envelope
        back = env.reversed()
        assert np.allclose(back.points, env.points[::-1])
        assert np.allclose(back.velocities, -env.velocities[::-1])


class TestChaining(object):
    def test_extension(self, euclidean):
        arcs = _quarters()
        assert is_extension(euclidean, arcs[0], arcs[1])
        assert not is_extension(euclidean, arcs[1], arcs[0])
        assert not is_extension(euclidean, arcs[0], arcs[2])
        assert not is_extension(euclidean, arcs[0], arcs[0])

    def test_terminal_ray(self):
        ascending  = _tangent_arc(0, 0, 40)
        descending = _tangent_arc(1, 0, 40, descending=True)
        assert terminal_ray(ascending) == 40
        # the envelope of a descending family is reversed, its end is the first ray
        assert terminal_ray(descending) == 0
        assert np.allclose(ascending.states[40].point, descending.states[0].point)

    def test_ray_mismatch(self):
        arcs = _quarters()
        foot, direction, _ = ray_mismatch(arcs[0].states[-1], arcs[1])
        assert foot < 1e-12 and direction < 1e-12
        # a ray between two samples of the family
        phi   = 260.5*STEP
        point = np.array([np.cos(phi), np.sin(phi)])
        ahead = np.array([-np.sin(phi), np.cos(phi)])
        foot, direction, (footAllowance, directionAllowance) = ray_mismatch(PhaseState(point-5*ahead, ahead), arcs[1])
        assert foot <= footAllowance
        assert direction <= directionAllowance
        # out of reach
        foot, direction, _ = ray_mismatch(arcs[0].states[0], arcs[2])
        assert np.isinf(foot) and np.isinf(direction)

    def test_extension_needs_matching_rays(self, euclidean):
        arcs = _quarters()
        # same envelope, rays starting elsewhere on their lines
        shifted = _tangent_arc(1, 256-4, 512+4, back=3.)
        assert is_extension(euclidean, arcs[0], arcs[1])
        assert not is_extension(euclidean, arcs[0], shifted)
        # same lines travelled the other way
        flipped = _tangent_arc(1, 256-4, 512+4, reverse=True)
        assert not is_extension(euclidean, arcs[0], flipped)

    def test_extend_step(self, euclidean):
        arcs = _quarters()
        step = extend_step(euclidean, [arcs[0]], arcs[0], arcs)
        assert step.kind == "next" and step.arc is arcs[1]
        step = extend_step(euclidean, arcs, arcs[3], arcs)
        assert step.kind == "closed" and step.arc is arcs[0]

    def test_ambiguity(self, euclidean):
        arcs = _quarters()
        twin = _tangent_arc(4, 256-4, 512+4)
        with pytest.raises(Ambiguity) as info:
            extend_step(euclidean, [arcs[0]], arcs[0], arcs+[twin])
        assert sorted(info.value.candidates) == [1, 4]

    def test_conjugate_switch(self, euclidean):
        a = _tangent_arc(0, 0, 100, isInitial=True)
        b = _tangent_arc(1, 0, 100, isInitial=True, reverse=True)
        a.set_conjugate(1)
        b.set_conjugate(0)
        step = extend_step(euclidean, [a], a, [a, b])
        assert step.kind == "conjugate" and step.arc is b
        assert extend_step(euclidean, [a, b], b, [a, b]).kind in ("stuck", "closed")


class TestReconstruct(object):
    def test_closed_circle(self):
        scene = _scene()
        obstacles, report = reconstruct(scene, arcs=_quarters())
        assert report["obstacles"] == 1
        assert report["closedChains"] == 1
        assert report["openChains"] == []
        obstacle = obstacles[0]
        assert obstacle.closed
        assert obstacle.arcIds == [0, 1, 2, 3]
        assert obstacle.truth == 0
        assert obstacle.hausdorff < 1e-3
        assert np.allclose(np.linalg.norm(obstacle.polyline, axis=1), 1., atol=1e-5)

    def test_open_chain(self):
        scene = _scene()
        arcs  = _quarters()[:3]
        obstacles, report = reconstruct(scene, arcs=arcs)
        assert report["obstacles"] == 0
        assert len(report["openChains"]) == 1
        assert report["openChains"][0]["arcs"] == [0, 1, 2]
        with pytest.raises(IncompleteCoverage):
            reconstruct(scene, arcs=arcs, strict=True)

    def test_polyline_sorted_by_angle(self):
        theta  = np.linspace(0., 2*np.pi, 16, endpoint=False)
        points = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        pieces = [Envelope(points[8:], [], np.zeros((8, 2))), Envelope(points[:8], [], np.zeros((8, 2)))]
        obstacle = ReconstructedObstacle(pieces, [0, 1], True, 0.)
        angles = np.arctan2(obstacle.polyline[:,1], obstacle.polyline[:,0])
        assert np.all(np.diff(angles) > 0)


@pytest.mark.slow
class TestThreeCircles(object):
    def test_round_trip(self, three_circles_scene, three_circles_dataset, three_circles_strata):
        scene  = three_circles_scene
        coarse = tangent_strata(scene, three_circles_dataset, stationStride=2, nThreads=4)
        errors = []
        for strata in (coarse, three_circles_strata):
            obstacles, report = reconstruct(scene, strata)
            assert report["obstacles"] == 3
            assert all(o.closed for o in obstacles)
            assert sorted(o.truth for o in obstacles) == [0, 1, 2]
            errors.append(max(o.hausdorff for o in obstacles))
        assert errors[1] <= 5e-3
        # doubling the stations shrinks the error at least three times
        assert errors[0] >= 3*errors[1]

    def test_arcs_verify_against_traced_rays(self, three_circles_scene, three_circles_strata):
        arcs = build_tangent_arcs(three_circles_scene, three_circles_strata, verify=True)
        assert any(a.isInitial for a in arcs)
        assert all(not hasattr(a, "label") for a in arcs)
