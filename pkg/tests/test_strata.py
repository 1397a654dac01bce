"""
Grazing rays, tangent families and double tangency events.
"""
# external libraries imports
import numpy as np
import pytest

# riembill imports
from riembill.Scene import chord_clearance
from riembill.Core.Collection import periodic_difference
from riembill.Billiard import boundary_state, trace_angle
from riembill.TravelTimes import generate_dataset
from riembill.Strata import TangentRay, TangentFamily, TangentStrata, StrataEvent, tangent_strata


def _ray(xIndex, angle, orders=(0, 1), firstContact=True, side=1):
    return TangentRay(xIndex, float(xIndex), angle, 5., 0.2, 7., orders, firstContact, side)


class TestFamilies(object):
    def test_rays_carry_no_obstacle(self):
        assert TangentRay._fields == ("xIndex", "x", "angle", "y", "yAngle", "t", "orders", "firstContact", "side")

    def test_family_properties(self):
        family = TangentFamily([_ray(0, 0.1), _ray(1, 0.15), _ray(2, 0.3)])
        assert family.isInitial
        assert family.firstContact
        assert family.orders == (0, 1)
        assert family.key == (True, 1, (0, 1))
        assert family.stations == [0, 1, 2]
        assert family.maxAngleJump == pytest.approx(0.15)
        assert not TangentFamily([_ray(0, 0.1, orders=(1, 2))]).isInitial
        assert TangentFamily([_ray(0, 0.1, side=-1)]).key != family.key

    def test_strata_report(self):
        families = [TangentFamily([_ray(0, 0.1)]), TangentFamily([_ray(0, 0.2, side=-1)]),
                    TangentFamily([_ray(1, 0.3, orders=(1, 2))]), TangentFamily([_ray(1, 0.4, orders=(1, 2), firstContact=False)])]
        events = [StrataEvent(0, 0., 0.2, [0, 1, 2, 3], 2, (2, 2)), StrataEvent(3, 3., 0.5, [2, 3], 0, (1, 1))]
        strata = TangentStrata([], families, events, nStations=8, droppedStations=1)
        report = strata.report()
        assert strata.t02Count == 1
        assert len(strata.initialFamilies) == 2
        assert report["families"] == 4
        assert report["lastContactFamilies"] == 1
        assert report["fourMemberEvents"] == 1
        assert report["sideSplits"] == {"2/2":1, "1/1":1}
        assert report["droppedStations"] == 1


@pytest.mark.slow
class TestTwoCircles(object):
    def test_initial_families_graze(self, two_circles_scene):
        scene = two_circles_scene
        L = scene.domain.length
        dataset, _ = generate_dataset(scene, 24, 96)
        strata = tangent_strata(scene, dataset)
        assert strata.nStations == 24
        assert strata.droppedStations == 0
        assert len(strata.initialFamilies)
        for family in strata.initialFamilies:
            for r in family.rays:
                trajectory = trace_angle(scene, r.x, r.angle)
                assert trajectory.order in r.orders
                assert trajectory.totalTime == pytest.approx(r.t, abs=1e-6)
                assert abs(periodic_difference(trajectory.endParameter, r.y, L)) < 1e-6
                # the cusp direction at y leads back to the station
                back = trace_angle(scene, r.y, r.yAngle)
                assert abs(periodic_difference(back.endParameter, r.x, L)) < 1e-3
                state = boundary_state(scene, r.x, r.angle)
                clearance = min(abs(chord_clearance(scene, state, r.t, o)) for o in scene.obstacles)
                assert clearance < 1e-4
        report = strata.report()
        assert report["rays"] == len(strata.rays)
        assert report["initialFamilies"] == len(strata.initialFamilies)

    def test_station_stride(self, two_circles_scene):
        dataset, _ = generate_dataset(two_circles_scene, 12, 32)
        strata = tangent_strata(two_circles_scene, dataset, stationStride=3)
        assert strata.nStations == 4
        assert all(0 <= r.xIndex < 4 for r in strata.rays)
