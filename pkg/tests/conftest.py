"""
Shared fixtures for riembill tests. Logging to file is switched off and
the console only receives errors.
"""
# standard libraries imports
import os, sys

# external libraries imports
import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

# riembill imports
from riembill.Globals import LOGGER
from riembill.Core.Chart import get_chart
from riembill.Core.Curve import ConvexCurve
from riembill.Scene import Scene
from riembill.TravelTimes import generate_dataset
from riembill.Strata import tangent_strata

LOGGER.set_log_to_file_flag(False)
LOGGER.set_minimum_level(40, stdoutFlag=True, fileFlag=False)


@pytest.fixture
def euclidean():
    return get_chart("euclidean-plane")

@pytest.fixture
def disk_scene(euclidean):
    """Radius 10 disk with a unit obstacle at the origin and a second one
    off the horizontal diameter."""
    domain    = ConvexCurve.circle(euclidean, center=(0., 0.), radius=10., nSamples=1024, name="domain")
    central   = ConvexCurve.circle(euclidean, center=(0., 0.), radius=1., nSamples=512, name="central")
    offAxis   = ConvexCurve.circle(euclidean, center=(0., 5.), radius=1., nSamples=512, name="offAxis")
    return Scene(euclidean, domain, [central, offAxis])

@pytest.fixture
def two_circles_scene(euclidean):
    domain = ConvexCurve.circle(euclidean, center=(3., 0.), radius=12., nSamples=1024, name="domain")
    left   = ConvexCurve.circle(euclidean, center=(0., 0.), radius=1., nSamples=512, name="left")
    right  = ConvexCurve.circle(euclidean, center=(6., 0.), radius=1., nSamples=512, name="right")
    return Scene(euclidean, domain, [left, right])

@pytest.fixture
def rng():
    return np.random.RandomState(0)

@pytest.fixture(scope="session")
def three_circles_scene():
    """Three unit circles in general position in a radius 10 disk."""
    chart     = get_chart("euclidean-plane")
    domain    = ConvexCurve.circle(chart, center=(0., 0.), radius=10., nSamples=2048, name="domain")
    obstacles = [ConvexCurve.circle(chart, center=c, radius=1., nSamples=1024, name=n)
                 for c, n in [((-3., -1.), "west"), ((3., -1.5), "east"), ((0.5, 3.5), "north")]]
    return Scene(chart, domain, obstacles)

@pytest.fixture(scope="session")
def three_circles_dataset(three_circles_scene):
    dataset, _ = generate_dataset(three_circles_scene, 128, 256, nThreads=4)
    return dataset

@pytest.fixture(scope="session")
def three_circles_strata(three_circles_scene, three_circles_dataset):
    return tangent_strata(three_circles_scene, three_circles_dataset, nThreads=4)
