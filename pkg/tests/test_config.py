"""
Scene configuration files: defaults, strict keys, error locations and
the scene they build.
"""
# standard libraries imports
import json

# external libraries imports
import numpy as np
import pytest

# riembill imports
from riembill.Core.Errors import ConfigError
from riembill.Config import SceneConfig, DEFAULTS, build_scene


def _data(**overrides):
    data = {"schema":1,
            "obstacles":[{"type":"circle", "center":[-3., 0.], "radius":1., "name":"west"},
                         {"type":"circle", "center":[3., 1.], "radius":1.}],
            "sampling":{"curveSamples":256}}
    data.update(overrides)
    return data


class TestSceneConfig(object):
    def test_defaults(self):
        config = SceneConfig({"schema":1})
        assert config.sampling["nStart"] == DEFAULTS["sampling"]["nStart"]
        assert config.tolerances["tangency"] == pytest.approx(1e-6)
        assert config.get("billiard.maxOrder") == 12
        assert config.seed == 0
        assert config.outputDirectory == "riembill_output"
        assert config.path is None

    def test_partial_section_keeps_defaults(self):
        config = SceneConfig(_data())
        assert config.sampling["curveSamples"] == 256
        assert config.sampling["nDirections"] == DEFAULTS["sampling"]["nDirections"]

    def test_schema(self):
        with pytest.raises(ConfigError) as info:
            SceneConfig({"surface":{"name":"euclidean-plane"}})
        assert info.value.key == "schema"
        with pytest.raises(ConfigError):
            SceneConfig({"schema":2})

    def test_unknown_key_path(self):
        with pytest.raises(ConfigError) as info:
            SceneConfig(_data(tolerances={"tangancy":1e-6}))
        assert info.value.key == "tolerances.tangancy"
        with pytest.raises(ConfigError) as info:
            SceneConfig(_data(obstacles=[{"type":"circle", "center":[0, 0], "radius":1, "colour":"red"}]))
        assert info.value.key == "obstacles[0].colour"

    def test_bad_values(self):
        with pytest.raises(ConfigError) as info:
            SceneConfig(_data(sampling={"nStart":-4}))
        assert info.value.key == "sampling.nStart"
        with pytest.raises(ConfigError) as info:
            SceneConfig(_data(surface={"name":"sphere"}))
        assert info.value.key == "surface.name"
        with pytest.raises(ConfigError) as info:
            SceneConfig(_data(surface={"name":"custom-metric", "g11":"1"}))
        assert info.value.key == "surface.g12"

    def test_invalid_json_location(self, tmp_path):
        path = tmp_path/"scene.json"
        path.write_text('{"schema": 1,\n "seed": }\n')
        with pytest.raises(ConfigError) as info:
            SceneConfig.from_file(str(path))
        assert info.value.line == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(IOError):
            SceneConfig.from_file(str(tmp_path/"missing.json"))

    def test_from_file(self, tmp_path):
        path = tmp_path/"scene.json"
        path.write_text(json.dumps(_data()))
        config = SceneConfig.from_file(str(path))
        assert config.path == str(path)
        scene = build_scene(str(path))
        assert scene.nObstacles == 2

    def test_build_scene(self):
        scene = SceneConfig(_data()).build_scene()
        assert scene.nObstacles == 2
        assert scene.obstacles[0].name == "west"
        assert scene.obstacles[1].name == "K2"
        assert scene.diam_S == pytest.approx(20., rel=1e-4)

    def test_invalid_curve_key(self):
        bad = {"type":"fourier-circle", "center":[0., 0.], "radius":1., "coefficients":[[2, 1.5, 0.]]}
        config = SceneConfig(_data(obstacles=[_data()["obstacles"][0], bad]))
        with pytest.raises(ConfigError) as info:
            config.build_scene()
        assert info.value.key == "obstacles[1]"

    def test_set_value(self):
        config = SceneConfig(_data())
        config.set_value("sampling.stations", 32)
        assert config.sampling["stations"] == 32
        with pytest.raises(ConfigError):
            config.set_value("sampling.stations", 0)
        assert config.sampling["stations"] == 32
        with pytest.raises(ConfigError) as info:
            config.set_value("sampling.station", 4)
        assert info.value.key == "sampling.station"

    def test_trace_options(self):
        config  = SceneConfig(_data())
        options = config.trace_options(config.build_scene())
        assert options["maxOrder"] == 12
        assert options["maxTime"] == pytest.approx(400., rel=1e-4)
        assert options["marchStep"] == pytest.approx(20./32, rel=1e-4)
        assert options["tangencyTolerance"] == pytest.approx(1e-6)

    def test_to_json(self):
        config = SceneConfig(_data())
        again  = SceneConfig(json.loads(config.to_json()))
        assert again.data == config.data

    def test_data_is_a_copy(self):
        config = SceneConfig(_data())
        data = config.data
        data["sampling"]["nStart"] = 1
        assert config.sampling["nStart"] == DEFAULTS["sampling"]["nStart"]

    def test_half_plane_scene(self):
        config = SceneConfig({"schema":1, "surface":{"name":"poincare-half-plane"},
                              "domain":{"type":"circle", "center":[0., 3.], "radius":2.},
                              "obstacles":[{"type":"circle", "center":[-0.5, 3.], "radius":0.3},
                                           {"type":"circle", "center":[0.6, 2.8], "radius":0.3}],
                              "sampling":{"curveSamples":256}})
        scene = config.build_scene()
        assert np.all(scene.domain.samples[:,1] > 0)
