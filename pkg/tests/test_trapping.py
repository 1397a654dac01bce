"""
Riemannian ellipses, their foci property and the trapping obstacle built
on the half of an ellipse.
"""
# external libraries imports
import numpy as np
import pytest

# riembill imports
from riembill.Core.Chart import get_chart
from riembill.Core.Errors import InvalidRadius, CompletionInfeasible
from riembill.Trapping import (build_ellipse, verify_foci_property, focal_miss, focal_ray_path,
                               pocket_profile, build_trapping_obstacle, corridor_starts, verify_trapping)


@pytest.fixture(scope="module")
def ellipse():
    # semi-axes 2 and sqrt(3)
    return build_ellipse(get_chart("euclidean-plane"), (-1., 0.), (1., 0.), 4., nSamples=512)

@pytest.fixture(scope="module")
def obstacle(ellipse):
    return build_trapping_obstacle(ellipse, depth=0.05, skew=0., nSamples=1024)


class TestEllipse(object):
    def test_axis_points(self, ellipse):
        assert np.allclose(ellipse.A1, [-2., 0.], atol=1e-9)
        assert np.allclose(ellipse.A2, [2., 0.], atol=1e-9)
        assert ellipse.focalDistance == pytest.approx(2.)

    def test_semi_minor_axis(self, ellipse):
        top = ellipse.points[len(ellipse.points)//4]
        assert np.allclose(top, [0., np.sqrt(3.)], atol=1e-9)
        assert np.all(ellipse.upperHalf[1:-1, 1] > 0)

    def test_level_residuals(self, ellipse):
        assert np.max(np.abs(ellipse.level_residuals())) < 1e-4

    def test_exact_normal(self, ellipse):
        # gradient of x**2/4 + y**2/3 at (1, 1.5)
        n = ellipse.normal((1., 1.5))
        assert np.allclose(n, np.array([0.5, 1.])/np.sqrt(1.25))

    def test_radius_bounds(self):
        chart = get_chart("euclidean-plane")
        with pytest.raises(InvalidRadius):
            build_ellipse(chart, (-1., 0.), (1., 0.), 2.)
        with pytest.raises(InvalidRadius):
            build_ellipse(chart, (-1., 0.), (1., 0.), 1.)

    def test_half_plane_ellipse(self):
        chart   = get_chart("poincare-half-plane")
        ellipse = build_ellipse(chart, (-0.3, 1.), (0.3, 1.), 1.2, nSamples=256)
        assert np.max(np.abs(ellipse.level(ellipse.points))) < 1e-9
        assert np.all(ellipse.boundary.curvatures() > 0)


class TestFoci(object):
    def test_focal_miss(self, ellipse):
        assert focal_miss(ellipse, 1.) < 1e-6
        assert focal_miss(ellipse, np.pi) < 1e-6

    def test_verify_foci_property(self, ellipse):
        report = verify_foci_property(ellipse, nRays=6, seed=1)
        assert report["nRays"] == 6
        assert report["maxMiss"] < 1e-6
        assert report["meanMiss"] <= report["maxMiss"]
        assert report["maxLevelResidual"] < 1e-4

    def test_focal_ray_path(self, ellipse):
        path = focal_ray_path(ellipse, np.pi/2, nPoints=8)
        assert len(path) == 15
        assert np.allclose(path[0], [-1., 0.])
        assert np.allclose(path[-1], [1., 0.], atol=1e-6)


class TestTrappingObstacle(object):
    def test_pocket_profile(self):
        u = np.linspace(0., 2., 21)
        p = pocket_profile(u, 2., 0.05, 0.)
        assert p[0] == 0 and p[-1] == 0
        assert np.all(p[1:-1] < 0)
        assert p[10] == pytest.approx(-0.1)

    def test_axis_points(self, obstacle):
        uA1, uA2 = obstacle.axisPoints
        assert uA1 == pytest.approx(-1.)
        assert uA2 == pytest.approx(3.)

    def test_classify(self, obstacle):
        assert obstacle.classify((0., np.sqrt(3.))) == "l1:F1F2"
        assert obstacle.classify((-1.5, 1.)) == "l1:A1F1"
        assert obstacle.classify((1.5, 1.)) == "l1:F2A2"
        assert obstacle.classify((0., -0.05)) == "pocket"
        assert obstacle.classify((-1.5, -0.5)) == "side"

    def test_completion_below_gamma(self, obstacle):
        inner = obstacle.completion[1:]
        assert np.all(inner[:,1] <= 0)
        assert np.all(obstacle.curve.contains([[0., 0.5], [0., -0.05]]))

    def test_infeasible_completion(self, ellipse):
        with pytest.raises(CompletionInfeasible):
            build_trapping_obstacle(ellipse, depth=-0.05)
        with pytest.raises(CompletionInfeasible):
            build_trapping_obstacle(ellipse, skew=1.5)

    def test_corridor_starts(self, obstacle):
        starts = corridor_starts(obstacle, 10, seed=3)
        assert len(starts) == 10
        assert all(0 < u < 2 and 0 < a < np.pi for u, a in starts)
        assert starts == corridor_starts(obstacle, 10, seed=3)

    @pytest.mark.slow
    def test_corridor_rays_stay(self, obstacle):
        report = verify_trapping(obstacle, nRays=6, bounces=20, seed=0)
        assert report["nRays"] == 6
        assert report["failures"] == 0
        assert report["escapes"] == 0
        assert report["l1Reflections"] > 0

    @pytest.mark.slow
    def test_outer_start_escapes(self, obstacle):
        uA1, _ = obstacle.axisPoints
        report = verify_trapping(obstacle, bounces=20, starts=[(0.5*uA1, np.pi/3)])
        assert report["escapes"] == 1
        assert report["escaped"] == [0]


@pytest.mark.slow
class TestFullBudgets(object):
    def test_half_plane_foci_property(self):
        chart   = get_chart("poincare-half-plane")
        ellipse = build_ellipse(chart, (0., 1.), (0., 2.), 1.5, nSamples=1024)
        report  = verify_foci_property(ellipse, nRays=256, seed=0)
        assert report["nRays"] == 256
        assert report["maxMiss"] < 1e-5

    def test_euclidean_trapping(self, obstacle):
        report = verify_trapping(obstacle, nRays=512, bounces=200, seed=0, nThreads=4)
        assert report["nRays"] == 512
        assert report["failures"] == 0
        assert report["escapes"] == 0
        assert report["alternationViolations"] == 0

    def test_half_plane_trapping(self):
        chart    = get_chart("poincare-half-plane")
        ellipse  = build_ellipse(chart, (-0.3, 1.), (0.3, 1.), 1.2, nSamples=512)
        obstacle = build_trapping_obstacle(ellipse, depth=0.02, skew=0., nSamples=1024)
        report   = verify_trapping(obstacle, nRays=512, bounces=200, seed=0, nThreads=4)
        assert report["failures"] == 0
        assert report["escapes"] == 0
