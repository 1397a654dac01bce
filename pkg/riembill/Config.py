"""
Config reads and validates scene configuration files.

A configuration is a json document with an explicit schema version.
Every key it holds must be known: a misspelled tolerance name is an error
naming the full key path rather than a silently ignored value.

.. code-block:: json

    {
        "schema": 1,
        "surface": {"name": "euclidean-plane"},
        "domain": {"type": "circle", "center": [0, 0], "radius": 10},
        "obstacles": [
            {"type": "circle", "center": [-3, 0], "radius": 1},
            {"type": "circle", "center": [3, 1], "radius": 1}
        ],
        "sampling": {"nStart": 256, "nDirections": 256},
        "seed": 0
    }

.. code-block:: python

    from riembill.Config import SceneConfig

    config = SceneConfig.from_file("scene.json")
    scene  = config.build_scene()
"""
# standard libraries imports
import os
import copy
import json

# external libraries imports
import numpy as np

# riembill imports
from riembill.Globals import FLOAT_TYPE, CONFIG_SCHEMA_VERSION, LOGGER
from riembill.Core.Collection import raise_error, is_number, is_integer
from riembill.Core.Errors import ConfigError, ValidationError
from riembill.Core.Chart import get_chart
from riembill.Core.Curve import ConvexCurve
from riembill.Scene import Scene

DEFAULTS = {"schema"    : CONFIG_SCHEMA_VERSION,
            "surface"   : {"name":"euclidean-plane"},
            "domain"    : {"type":"circle", "center":[0.,0.], "radius":10.},
            "obstacles" : [],
            "sampling"  : {"nStart":256,
                           "nDirections":256,
                           "stations":256,
                           "curveSamples":2048,
                           "bitangentSeeds":64,
                           "monteCarloChords":10000,
                           "stabilitySample":0,
                           "envelopeRefinement":2,
                           "x1":0.},
            "tolerances": {"tangency":1e-6,
                           "bisection":1e-10,
                           "stitch":1e-4,
                           "generalPosition":1e-6,
                           "cusp":1e-5,
                           "dedup":1e-5,
                           "eventAngle":0.1,
                           "stitchAngle":0.25,
                           "gradientJump":0.05},
            "billiard"  : {"maxOrder":12,
                           "maxTimeFactor":20.,
                           "maxSegmentFactor":4.,
                           "marchFraction":1./32},
            "trapping"  : {"foci":[[-1.,0.],[1.,0.]],
                           "r":4.,
                           "nSamples":1024,
                           "depth":0.05,
                           "skew":0.,
                           "nRays":512,
                           "bounces":200},
            "seed"      : 0,
            "output"    : {"directory":"riembill_output"}}

SURFACE_KEYS = {"euclidean-plane"     : ("name",),
                "poincare-half-plane" : ("name",),
                "custom-metric"       : ("name", "g11", "g12", "g22", "injectivityRadius", "bounds", "tolerance")}
CURVE_KEYS   = ("type", "center", "radius", "coefficients", "name", "nSamples")
CURVE_TYPES  = ("circle", "fourier-circle")


def _merge(defaults, data, path):
    merged = copy.deepcopy(defaults)
    for key, value in data.items():
        keyPath = "%s.%s"%(path, key) if path else key
        if key not in defaults:
            raise_error(ConfigError, "unknown configuration key '%s'"%keyPath, key=keyPath)
        if isinstance(defaults[key], dict) and key != "surface":
            if not isinstance(value, dict):
                raise_error(ConfigError, "configuration key '%s' must be an object"%keyPath, key=keyPath)
            merged[key] = _merge(defaults[key], value, keyPath)
        else:
            merged[key] = copy.deepcopy(value)
    return merged

def _check_number(value, keyPath, positive=False, integer=False):
    ok = is_integer(value) if integer else is_number(value)
    if not ok or (positive and float(value) <= 0):
        raise_error(ConfigError, "configuration key '%s' must be a %snumber, got %r"%(keyPath, "positive " if positive else "", value), key=keyPath)
    return int(value) if integer else FLOAT_TYPE(value)

def _check_point(value, keyPath):
    if not isinstance(value, (list, tuple)) or len(value) != 2 or not all(is_number(v) for v in value):
        raise_error(ConfigError, "configuration key '%s' must be a point [x, y], got %r"%(keyPath, value), key=keyPath)
    return np.array(value, dtype=FLOAT_TYPE)

def _check_curve(spec, keyPath):
    if not isinstance(spec, dict):
        raise_error(ConfigError, "configuration key '%s' must be a curve object"%keyPath, key=keyPath)
    for key in spec:
        if key not in CURVE_KEYS:
            raise_error(ConfigError, "unknown configuration key '%s.%s'"%(keyPath, key), key="%s.%s"%(keyPath, key))
    if spec.get("type") not in CURVE_TYPES:
        raise_error(ConfigError, "configuration key '%s.type' must be one of %s"%(keyPath, list(CURVE_TYPES)), key="%s.type"%keyPath)
    _check_point(spec.get("center"), "%s.center"%keyPath)
    _check_number(spec.get("radius"), "%s.radius"%keyPath, positive=True)
    if spec["type"] == "fourier-circle":
        rows = spec.get("coefficients", [])
        if not isinstance(rows, list) or not all(isinstance(r, (list, tuple)) and len(r)==3 and all(is_number(v) for v in r) for r in rows):
            raise_error(ConfigError, "configuration key '%s.coefficients' must be a list of [k, a, b] rows"%keyPath, key="%s.coefficients"%keyPath)
    elif "coefficients" in spec:
        raise_error(ConfigError, "configuration key '%s.coefficients' needs type 'fourier-circle'"%keyPath, key="%s.coefficients"%keyPath)


class SceneConfig(object):
    """
    A validated scene configuration.

    :Parameters:
        #. data (dict): Configuration content. Missing keys take their
           DEFAULTS value.
        #. path (None, str): File the configuration was read from.
    """
    def __init__(self, data=None, path=None):
        data = {} if data is None else data
        if not isinstance(data, dict):
            raise_error(ConfigError, "configuration must be a json object")
        schema = data.get("schema", None)
        if schema != CONFIG_SCHEMA_VERSION:
            raise_error(ConfigError, "configuration key 'schema' must be %i, got %r"%(CONFIG_SCHEMA_VERSION, schema), key="schema")
        self.__path = path
        self.__data = _merge(DEFAULTS, data, "")
        self.__validate()

    def __repr__(self):
        return "SceneConfig(path=%s, surface=%s, obstacles=%i)"%(self.__path, self.__data["surface"].get("name"), len(self.__data["obstacles"]))

    @classmethod
    def from_file(cls, path):
        """
        Read a json configuration file.

        :Parameters:
            #. path (str): File path.

        :Returns:
            #. config (SceneConfig): The configuration.
        """
        with open(path, "r") as fd:
            text = fd.read()
        try:
            data = json.loads(text)
        except ValueError as err:
            line, column = getattr(err, "lineno", None), getattr(err, "colno", None)
            raise_error(ConfigError, "configuration '%s' is not valid json at line %s column %s: %s"%(path, line, column, getattr(err, "msg", err)),
                        line=line, column=column)
        return cls(data, path=path)

    def __validate(self):
        data = self.__data
        surface = data["surface"]
        if not isinstance(surface, dict):
            raise_error(ConfigError, "configuration key 'surface' must be an object", key="surface")
        name = surface.get("name")
        if name not in SURFACE_KEYS:
            raise_error(ConfigError, "configuration key 'surface.name' must be one of %s, got %r"%(sorted(SURFACE_KEYS), name), key="surface.name")
        for key in surface:
            if key not in SURFACE_KEYS[name]:
                raise_error(ConfigError, "unknown configuration key 'surface.%s' for surface '%s'"%(key, name), key="surface.%s"%key)
        if name == "custom-metric":
            for key in ("g11", "g12", "g22", "injectivityRadius"):
                if key not in surface:
                    raise_error(ConfigError, "configuration key 'surface.%s' is required for 'custom-metric'"%key, key="surface.%s"%key)
        _check_curve(data["domain"], "domain")
        if not isinstance(data["obstacles"], list):
            raise_error(ConfigError, "configuration key 'obstacles' must be a list", key="obstacles")
        for i, spec in enumerate(data["obstacles"]):
            _check_curve(spec, "obstacles[%i]"%i)
        for key in ("nStart", "nDirections", "stations", "curveSamples", "bitangentSeeds", "monteCarloChords", "envelopeRefinement"):
            _check_number(data["sampling"][key], "sampling.%s"%key, positive=True, integer=True)
        _check_number(data["sampling"]["stabilitySample"], "sampling.stabilitySample", integer=True)
        _check_number(data["sampling"]["x1"], "sampling.x1")
        for key, value in data["tolerances"].items():
            _check_number(value, "tolerances.%s"%key, positive=True)
        _check_number(data["billiard"]["maxOrder"], "billiard.maxOrder", positive=True, integer=True)
        for key in ("maxTimeFactor", "maxSegmentFactor", "marchFraction"):
            _check_number(data["billiard"][key], "billiard.%s"%key, positive=True)
        trapping = data["trapping"]
        if not isinstance(trapping["foci"], list) or len(trapping["foci"]) != 2:
            raise_error(ConfigError, "configuration key 'trapping.foci' must hold two points", key="trapping.foci")
        for i, f in enumerate(trapping["foci"]):
            _check_point(f, "trapping.foci[%i]"%i)
        _check_number(trapping["r"], "trapping.r", positive=True)
        _check_number(trapping["depth"], "trapping.depth")
        _check_number(trapping["skew"], "trapping.skew")
        for key in ("nSamples", "nRays", "bounces"):
            _check_number(trapping[key], "trapping.%s"%key, positive=True, integer=True)
        _check_number(data["seed"], "seed", integer=True)
        if not isinstance(data["output"]["directory"], str):
            raise_error(ConfigError, "configuration key 'output.directory' must be a string", key="output.directory")

    @property
    def path(self):
        return self.__path

    @property
    def data(self):
        """Deep copy of the merged configuration."""
        return copy.deepcopy(self.__data)

    @property
    def surface(self):
        return dict(self.__data["surface"])

    @property
    def sampling(self):
        return dict(self.__data["sampling"])

    @property
    def tolerances(self):
        return dict(self.__data["tolerances"])

    @property
    def billiard(self):
        return dict(self.__data["billiard"])

    @property
    def trapping(self):
        return copy.deepcopy(self.__data["trapping"])

    @property
    def seed(self):
        return int(self.__data["seed"])

    @property
    def outputDirectory(self):
        return self.__data["output"]["directory"]

    def get(self, keyPath):
        """Value at a dotted key path such as 'tolerances.tangency'."""
        value = self.__data
        for key in keyPath.split("."):
            if not isinstance(value, dict) or key not in value:
                raise_error(ConfigError, "unknown configuration key '%s'"%keyPath, key=keyPath)
            value = value[key]
        return copy.deepcopy(value)

    def set_value(self, keyPath, value):
        """
        Override the value at a dotted key path and re-validate, used for
        command line flags.

        :Parameters:
            #. keyPath (str): Dotted key path, e.g. 'sampling.stations'.
            #. value (object): New value.
        """
        keys   = keyPath.split(".")
        target = self.__data
        for key in keys[:-1]:
            if not isinstance(target, dict) or key not in target:
                raise_error(ConfigError, "unknown configuration key '%s'"%keyPath, key=keyPath)
            target = target[key]
        if keys[-1] not in target:
            raise_error(ConfigError, "unknown configuration key '%s'"%keyPath, key=keyPath)
        old = target[keys[-1]]
        target[keys[-1]] = value
        try:
            self.__validate()
        except ConfigError:
            target[keys[-1]] = old
            raise
        LOGGER.fixed("configuration key '%s' set to %r"%(keyPath, value))

    def build_chart(self):
        """The configured SurfaceChart."""
        parameters = dict(self.__data["surface"])
        name = parameters.pop("name")
        try:
            return get_chart(name, **parameters)
        except (TypeError, AssertionError) as err:
            raise_error(ConfigError, "surface '%s' parameters are invalid: %s"%(name, err), key="surface")

    def build_curve(self, chart, spec, name=None):
        """A ConvexCurve from a curve spec."""
        nSamples = int(spec.get("nSamples", self.__data["sampling"]["curveSamples"]))
        name     = spec.get("name", name)
        if spec["type"] == "circle":
            return ConvexCurve.circle(chart, spec["center"], spec["radius"], nSamples=nSamples, name=name)
        return ConvexCurve.fourier_circle(chart, spec["center"], spec["radius"], coefficients=spec.get("coefficients", []),
                                          nSamples=nSamples, name=name)

    def build_scene(self):
        """
        Build the configured scene. Curve failures are reported with the
        key path of the failing curve.

        :Returns:
            #. scene (Scene): The scene.
        """
        chart = self.build_chart()
        try:
            domain = self.build_curve(chart, self.__data["domain"], name="domain")
        except ValidationError as err:
            raise_error(ConfigError, "configuration key 'domain' describes an invalid curve: %s"%err, key="domain")
        obstacles = []
        for i, spec in enumerate(self.__data["obstacles"]):
            try:
                obstacles.append(self.build_curve(chart, spec, name="K%i"%(i+1)))
            except ValidationError as err:
                raise_error(ConfigError, "configuration key 'obstacles[%i]' describes an invalid curve: %s"%(i, err), key="obstacles[%i]"%i)
        return Scene(chart, domain, obstacles)

    def trace_options(self, scene):
        """Billiard.trace keyword options from the billiard section."""
        b = self.__data["billiard"]
        return {"maxOrder":int(b["maxOrder"]), "maxTime":FLOAT_TYPE(b["maxTimeFactor"])*scene.diam_S,
                "tangencyTolerance":FLOAT_TYPE(self.__data["tolerances"]["tangency"]),
                "maxSegment":FLOAT_TYPE(b["maxSegmentFactor"])*scene.diam_S,
                "marchStep":FLOAT_TYPE(b["marchFraction"])*scene.diam_S}

    def to_json(self):
        """Canonical json text of the merged configuration."""
        return json.dumps(self.__data, indent=2, sort_keys=True)


def build_scene(config):
    """Build a scene from a SceneConfig, a dict or a file path."""
    if isinstance(config, str):
        config = SceneConfig.from_file(config)
    elif isinstance(config, dict):
        config = SceneConfig(config)
    assert isinstance(config, SceneConfig), LOGGER.error("config must be a SceneConfig, a dict or a path")
    return config.build_scene()
