"""
Tables, datasets, json reports and figures written by riembill.Output.
"""
# standard libraries imports
import os
import json

# external libraries imports
import numpy as np
import pytest

# riembill imports
from riembill.Core.Errors import ValidationError
from riembill.TravelTimes import TravelSample, Echograph
from riembill.Reconstruct import Envelope, ReconstructedObstacle
from riembill import Output


def _samples():
    return [TravelSample(0.1, 0.25, 3.5, 7.123456789012345, 1, 0, 0, 1, -0.25),
            TravelSample(0.1, -1.2, 1.5, 9.75, 0, 0, 0, 0, 1.2),
            TravelSample(2.3, 0.5, 0.7, 12.5, 2, 1, 3, 2, 0.5)]


class TestTables(object):
    def test_table_round_trip(self, tmp_path):
        path = str(tmp_path/"table.csv")
        Output.write_table(path, ["a", "b", "c"], [[1, 0.1, (2, 3)], [2, 1./3, ()]], comments="made by a test")
        header, rows = Output.read_table(path)
        assert header == ["a", "b", "c"]
        assert rows[0] == ["1", "0.1", "2;3"]
        assert float(rows[1][1]) == 1./3
        assert rows[1][2] == ""

    def test_missing_table(self, tmp_path):
        with pytest.raises(IOError):
            Output.read_table(str(tmp_path/"none.csv"))

    def test_ragged_table(self, tmp_path):
        path = str(tmp_path/"ragged.csv")
        with open(path, "w") as fd:
            fd.write("# a,b\n1,2\n3\n")
        with pytest.raises(ValidationError):
            Output.read_table(path)

    def test_dataset(self, tmp_path):
        path = str(tmp_path/"dataset.csv")
        Output.write_dataset(path, _samples()[::-1])
        dataset = Output.read_dataset(path)
        # sorted by grid indexes, floats exact
        assert [(s.xIndex, s.directionIndex) for s in dataset] == [(0, 0), (0, 1), (3, 2)]
        assert dataset[1].t == 7.123456789012345
        assert dataset[0].omegaOut == 1.2
        assert (dataset[2].order, dataset[2].tangencyCount) == (2, 1)
        assert Output.read_table(path)[0] == Output.DATASET_HEADER
        done, existing = Output.completed_indexes(path)
        assert done == set([(0, 0), (0, 1), (3, 2)])
        assert len(existing) == 3

    def test_no_dataset_yet(self, tmp_path):
        done, existing = Output.completed_indexes(str(tmp_path/"dataset.csv"))
        assert done == set() and existing == []

    def test_wrong_dataset_header(self, tmp_path):
        path = str(tmp_path/"other.csv")
        Output.write_table(path, ["a"], [[1]])
        with pytest.raises(ValidationError):
            Output.read_dataset(path)

    def test_json(self, tmp_path):
        path = str(tmp_path/"report.json")
        Output.write_json(path, {"n":np.int64(3), "x":np.float64(0.5), "v":np.arange(3), "ok":np.bool_(True),
                                 "far":np.inf, 1:(1, 2), "none":None})
        with open(path) as fd:
            report = json.load(fd)
        assert report == {"n":3, "x":0.5, "v":[0, 1, 2], "ok":True, "far":"inf", "1":[1, 2], "none":None}


class TestFigures(object):
    def test_scene_figure(self, disk_scene, tmp_path):
        path = str(tmp_path/"scene.svg")
        FIG, AXES = Output.scene_figure(disk_scene)
        assert len(AXES.lines) == 3
        Output.save_figure(FIG, path)
        with open(path) as fd:
            assert "<svg" in fd.read()

    def test_echograph_figure(self, disk_scene, tmp_path):
        theta = np.linspace(0., 1., 20)
        arcs  = [(0, np.stack([11*np.cos(theta), 11*np.sin(theta)], axis=1)),
                 (1, np.stack([12*np.cos(theta), 12*np.sin(theta)], axis=1))]
        FIG, AXES = Output.echograph_figure(disk_scene, Echograph(arcs, [(0, 1, 0, 1)]))
        assert len(AXES.lines) == 5
        Output.save_figure(FIG, str(tmp_path/"echograph.svg"))
        assert os.path.isfile(str(tmp_path/"echograph.svg"))

    def test_overlay_figure(self, disk_scene, tmp_path):
        theta  = np.linspace(0., 2*np.pi, 32, endpoint=False)
        points = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        obstacle = ReconstructedObstacle([Envelope(points, [], np.zeros_like(points))], [0], True, 0.)
        FIG, AXES = Output.overlay_figure(disk_scene, [obstacle])
        assert len(AXES.lines) == 4
        assert len(AXES.lines[-1].get_xdata()) == 33
        path = str(tmp_path/"boundaries.csv")
        Output.write_boundaries(path, [obstacle])
        header, rows = Output.read_table(path)
        assert header == ["obstacle", "vertex", "x", "y"]
        assert len(rows) == 32
