# standard libraries imports
import os

# external libraries imports
import numpy as np
import matplotlib.pyplot as plt

# riembill library imports
from riembill.Config import SceneConfig
from riembill import Output

# dirname
DIR_PATH      = os.path.dirname( os.path.realpath(__file__) )
boundaryPath  = os.path.join(DIR_PATH, "output", "boundaries.csv")

# load and plot
SCENE = SceneConfig.from_file(os.path.join(DIR_PATH, "scene.json")).build_scene()
FIG, AXES = plt.subplots(1, 1)
Output.scene_figure(SCENE, ax=AXES, title="recovered boundaries")
if os.path.isfile(boundaryPath):
    header, rows = Output.read_table(boundaryPath)
    rows = np.array(rows, dtype=float)
    for index in np.unique(rows[:,0]):
        P = rows[rows[:,0]==index][:,2:]
        AXES.plot(np.append(P[:,0], P[0,0]), np.append(P[:,1], P[0,1]), 'r', linewidth=1.5)
else:
    print("run 'run.py' first, '%s' not found"%boundaryPath)
plt.show()
