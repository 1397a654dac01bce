"""
Common tangent geodesics of obstacle pairs and the obstacle count they
imply.
"""
# external libraries imports
import numpy as np
import pytest

# riembill imports
from riembill.Core.Collection import cross2, periodic_difference
from riembill.Core.Errors import NoIntegerSolution
from riembill.Bitangents import find_bitangents, all_bitangents, sign_rule_holds, count_obstacles, classify_t01_arcs
from riembill.Strata import TangentRay, TangentFamily, TangentStrata, StrataEvent


class TestTwoCircles(object):
    def test_four_undirected_bitangents(self, two_circles_scene):
        records = find_bitangents(two_circles_scene, 0, 1, nSeeds=16)
        assert len(records) == 8
        undirected = [b for b in records if b.fromIndex == 0]
        assert len(undirected) == 4
        left, right = two_circles_scene.obstacles
        outer, inner = 0, 0
        for b in undirected:
            p, q = left.position(b.sl), right.position(b.sj)
            if p[1]*q[1] > 0:
                # outer tangents are the lines y = 1 and y = -1
                outer += 1
                assert abs(p[1]) == pytest.approx(1., abs=1e-6)
                assert q[1] == pytest.approx(p[1], abs=1e-6)
                assert p[0] == pytest.approx(0., abs=1e-6)
            else:
                # inner tangents cross at the middle point
                inner += 1
                assert cross2(q-p, np.array([3., 0.])-p) == pytest.approx(0., abs=1e-6)
                assert p[0] == pytest.approx(1./3., abs=1e-6)
        assert (outer, inner) == (2, 2)
        assert sign_rule_holds(records)

    def test_directed_records_span_the_domain(self, two_circles_scene):
        records = find_bitangents(two_circles_scene, 1, 0, nSeeds=16)
        for b in records:
            assert b.pair == (0, 1)
            assert np.linalg.norm(b.start.point-[3., 0.]) == pytest.approx(12., abs=1e-6)
            assert np.linalg.norm(b.end.point-[3., 0.]) == pytest.approx(12., abs=1e-6)
            assert b.contacts[0] < b.contacts[1] < b.length
        reverse = [b for b in records if b.fromIndex == 1]
        assert len(reverse) == 4

    def test_all_bitangents(self, two_circles_scene):
        records = all_bitangents(two_circles_scene, nSeeds=16)
        assert count_obstacles(len(records), convention="directed") == 2


class TestCount(object):
    def test_directed(self):
        assert count_obstacles(24, convention="directed") == 3
        assert count_obstacles(48, convention="directed") == 4
        assert count_obstacles(range(8), convention="directed") == 2

    def test_undirected(self):
        assert count_obstacles(12, convention="undirected") == 3
        assert count_obstacles(12) == 3

    def test_no_solution(self):
        with pytest.raises(NoIntegerSolution) as info:
            count_obstacles(7)
        assert len(info.value.candidates) == 2

    def test_pair_bound(self):
        assert count_obstacles(5, convention="directed", allowPairBound=True) == 2


class TestInventory(object):
    def _family(self, side, orders=(0, 1)):
        ray = TangentRay(0, 0., 0.1, 5., -0.1, 7., orders, True, side)
        return TangentFamily([ray])

    def test_inventory_matches(self):
        families = [self._family(1-2*(i%2)) for i in range(8)] + [self._family(1, orders=(1, 2))]
        events   = [StrataEvent(k, 0., 0., [0, 1, 2, 3], 2, (2, 2)) for k in range(8)]
        strata   = TangentStrata([], families, events, nStations=16)
        inventory = classify_t01_arcs(strata)
        assert inventory["nObstacles"] == 2
        assert inventory["expected"] == 8
        assert inventory["matches"]
        assert inventory["bySide"] == {1:4, -1:4}

    def test_inventory_without_count(self):
        strata = TangentStrata([], [self._family(1)], [], nStations=4)
        inventory = classify_t01_arcs(strata)
        assert inventory["nObstacles"] is None
        assert not inventory["matches"]


@pytest.mark.slow
class TestThreeCircles(object):
    def test_count_from_travel_times(self, three_circles_strata):
        strata = three_circles_strata
        assert strata.droppedStations == 0
        assert strata.t02Count == 24
        assert count_obstacles(strata.t02Count, convention="directed") == 3
        assert classify_t01_arcs(strata)["nObstacles"] == 3

    def test_bitangent_rays_match_events(self, three_circles_scene, three_circles_strata):
        records = all_bitangents(three_circles_scene)
        assert len(records) == 24
        # every directed bitangent starts between the stations of one event
        L = three_circles_scene.domain.length
        spacing = L/three_circles_strata.nStations
        for b in records:
            gaps = [abs(periodic_difference(b.startParameter, e.x+0.5*spacing, L)) for e in three_circles_strata.t02Events]
            assert min(gaps) <= spacing
