# standard libraries imports
import os

# external libraries imports
import numpy as np
import matplotlib.pyplot as plt

# riembill library imports
from riembill.Core.Chart import PhaseState
from riembill.Billiard import first_hit, reflect
from riembill.Config import SceneConfig
from riembill.Trapping import build_ellipse, build_trapping_obstacle
from riembill import Output

# build
DIR_PATH = os.path.dirname( os.path.realpath(__file__) )
CONFIG   = SceneConfig.from_file(os.path.join(DIR_PATH, "scene.json"))
TRAP     = CONFIG.trapping
CHART    = CONFIG.build_chart()
ELLIPSE  = build_ellipse(CHART, TRAP["foci"][0], TRAP["foci"][1], TRAP["r"], nSamples=TRAP["nSamples"])
OBSTACLE = build_trapping_obstacle(ELLIPSE, depth=TRAP["depth"], skew=TRAP["skew"])

# follow one corridor ray for a few bounces
foot  = CHART.flow(ELLIPSE.gamma, 0.7*ELLIPSE.focalDistance)
state = PhaseState(foot.point, CHART.direction(foot.point, foot.velocity, 1.1))
path  = [state.point]
for _ in range(30):
    hit = first_hit(OBSTACLE.scene, state, obstacles=False)
    normal = ELLIPSE.normal(hit.point) if OBSTACLE.classify(hit.point).startswith("l1") else hit.normal
    state  = PhaseState(hit.point, reflect(CHART, hit.point, hit.velocity, normal))
    path.append(hit.point)
path = np.array(path)

# plot
FIG, AXES = plt.subplots(1, 1)
Output.trapping_figure(ELLIPSE, OBSTACLE, ax=AXES)
AXES.plot(path[:,0], path[:,1], 'g', linewidth=0.6)
plt.show()
