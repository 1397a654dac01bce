"""
Ray tracing: contacts, reflections, budgets and the travelling times of
simple configurations.
"""
# external libraries imports
import numpy as np
import pytest

# riembill imports
from riembill.Globals import DOMAIN_INDEX
from riembill.Core.Chart import PhaseState, get_chart
from riembill.Core.Curve import ConvexCurve
from riembill.Core.Errors import Trapped, OrderBoundViolation
from riembill.Core.Collection import periodic_difference
from riembill.Scene import Scene
from riembill.Billiard import (first_hit, reflect, boundary_state, boundary_angle, trace, trace_angle, endpoint_map,
                               check_order_bound, Trajectory, Event)


class TestPrimitives(object):
    def test_reflect(self, euclidean):
        omega = np.array([1., -1.])/np.sqrt(2.)
        assert np.allclose(reflect(euclidean, (0., 0.), omega, (0., 1.)), [1./np.sqrt(2.), 1./np.sqrt(2.)])

    def test_reflect_half_plane_keeps_unit_speed(self):
        chart = get_chart("poincare-half-plane")
        p     = np.array([0.3, 2.])
        omega = chart.unit_vector(p, 0.7)
        nu    = chart.unit_vector(p, -1.2)
        out   = reflect(chart, p, omega, nu)
        assert chart.norm(p, out) == pytest.approx(1., abs=1e-12)
        assert chart.inner(p, out, nu) == pytest.approx(-chart.inner(p, omega, nu), abs=1e-12)

    def test_boundary_angle_inverts_boundary_state(self, disk_scene):
        x = 0.37*disk_scene.domain.length
        state = boundary_state(disk_scene, x, 0.3)
        assert boundary_angle(disk_scene, x, state.velocity) == pytest.approx(0.3, abs=1e-9)

    def test_first_hit(self, disk_scene):
        state = PhaseState((9., 0.), (-1., 0.))
        hit = first_hit(disk_scene, state)
        assert hit.curve == 0
        assert hit.arclength == pytest.approx(8., abs=1e-8)
        assert hit.incidence == pytest.approx(np.pi/2, abs=1e-6)
        exit_ = first_hit(disk_scene, state, obstacles=False)
        assert exit_.curve == DOMAIN_INDEX
        assert exit_.arclength == pytest.approx(19., abs=1e-8)
        assert first_hit(disk_scene, state, exclude=0).curve == DOMAIN_INDEX


class TestTrace(object):
    def test_head_on_reflection(self, disk_scene):
        trajectory = trace_angle(disk_scene, 0., 0.)
        assert trajectory.isComplete
        assert trajectory.order == 1
        assert trajectory.signature == (0,)
        assert trajectory.totalTime == pytest.approx(18., abs=1e-7)
        assert np.allclose(trajectory.end.point, [10., 0.], atol=1e-7)

    def test_reflection_on_second_obstacle(self, disk_scene):
        x = 0.25*disk_scene.domain.length
        trajectory = trace_angle(disk_scene, x, 0.)
        assert trajectory.signature == (1,)
        assert trajectory.totalTime == pytest.approx(8., abs=1e-7)
        assert trajectory.order*disk_scene.dK <= trajectory.totalTime

    def test_miss(self, disk_scene):
        # chord at distance 10 sin(1.2) from the center, clear of both obstacles
        trajectory = trace_angle(disk_scene, 0.5*disk_scene.domain.length, 1.2)
        assert trajectory.order == 0
        assert trajectory.totalTime == pytest.approx(20*np.cos(1.2), abs=1e-7)

    def test_order_budget(self, disk_scene):
        with pytest.raises(Trapped) as info:
            trace_angle(disk_scene, 0., 0., maxOrder=0)
        assert info.value.trajectory.order == 1

    def test_endpoint_map(self, disk_scene):
        y, omega, t = endpoint_map(disk_scene, 0., boundary_state(disk_scene, 0., 0.).velocity)
        assert np.allclose(y, [10., 0.], atol=1e-7)
        assert t == pytest.approx(18., abs=1e-7)

    def test_half_plane_vertical_reflection(self):
        chart    = get_chart("poincare-half-plane")
        domain   = ConvexCurve.circle(chart, (0., 3.), 2., nSamples=1024, name="domain")
        obstacle = ConvexCurve.circle(chart, (0., 3.), 0.3, nSamples=512, name="K")
        scene    = Scene(chart, domain, [obstacle])
        x        = domain.nearest_parameter(np.array([0., 1.]))
        trajectory = trace(scene, x, np.array([0., 1.]))
        assert trajectory.signature == (0,)
        assert trajectory.totalTime == pytest.approx(2*np.log(2.7), rel=1e-6)


class TestOrderBound(object):
    def _hugging_scene(self, chart):
        domain = ConvexCurve.circle(chart, (0., 0.), 12., nSamples=1024, name="domain")
        west   = ConvexCurve.circle(chart, (-10.5, 0.), 1., nSamples=512, name="west")
        east   = ConvexCurve.circle(chart, (10.5, 0.), 1., nSamples=512, name="east")
        return Scene(chart, domain, [west, east])

    def test_every_trace_is_checked(self, euclidean):
        scene = self._hugging_scene(euclidean)
        x = scene.domain.nearest_parameter(np.array([-12., 0.]))
        # one reflection after 0.5, back in 1 < d_K = 19
        with pytest.raises(OrderBoundViolation) as info:
            trace_angle(scene, x, 0.)
        assert info.value.trajectory.order == 1
        trajectory = trace_angle(scene, x, 0., checkOrderBound=False)
        assert trajectory.totalTime == pytest.approx(1., abs=1e-7)

    def test_upper_bound(self, disk_scene):
        start = PhaseState((10., 0.), (-1., 0.))
        trajectory = Trajectory(start)
        trajectory.add_event(Event(np.array([-10., 0.]), start.velocity, start.velocity, False, DOMAIN_INDEX, 0.), 21.)
        with pytest.raises(OrderBoundViolation):
            check_order_bound(disk_scene, trajectory)

    def test_traced_rays_satisfy_both_bounds(self, two_circles_scene):
        L = two_circles_scene.domain.length
        for x in np.linspace(0., L, 9)[:-1]:
            for angle in np.linspace(-1.4, 1.4, 15):
                trajectory = trace_angle(two_circles_scene, x, angle)
                check_order_bound(two_circles_scene, trajectory)
                assert trajectory.order*two_circles_scene.dK <= trajectory.totalTime + 1e-9
                assert trajectory.totalTime <= (trajectory.order+1)*two_circles_scene.diam_S + 1e-9


class TestTimeReversal(object):
    def test_reversed_rays_retrace(self, two_circles_scene, rng):
        scene = two_circles_scene
        L = scene.domain.length
        checked = 0
        for x, omega in zip(rng.uniform(0., L, 40), rng.uniform(-1.4, 1.4, 40)):
            try:
                forward = trace_angle(scene, x, omega)
            except Trapped:
                continue
            if forward.tangencyCount:
                continue
            y    = forward.endParameter
            back = trace_angle(scene, y, -boundary_angle(scene, y, forward.end.velocity, outgoing=True))
            assert abs(periodic_difference(back.endParameter, x, L)) < 1e-7
            assert back.totalTime == pytest.approx(forward.totalTime, abs=1e-7)
            assert boundary_angle(scene, x, back.end.velocity, outgoing=True) == pytest.approx(-omega, abs=1e-7)
            # same contacts in reverse order
            there = [e.point for e in forward.obstacleEvents]
            again = [e.point for e in back.obstacleEvents][::-1]
            assert len(there) == len(again)
            if len(there):
                assert np.allclose(there, again, atol=1e-7)
            checked += 1
        assert checked > 30
