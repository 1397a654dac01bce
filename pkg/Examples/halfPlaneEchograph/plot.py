# standard libraries imports
import os

# external libraries imports
import numpy as np
import matplotlib.pyplot as plt

# riembill library imports
from riembill import Output

# dirname
DIR_PATH = os.path.dirname( os.path.realpath(__file__) )
arcsPath = os.path.join(DIR_PATH, "output", "arcs.csv")

# load and plot travelling times against the start parameter
if os.path.isfile(arcsPath):
    header, rows = Output.read_table(arcsPath)
    arc   = np.array([int(r[0]) for r in rows])
    order = np.array([int(r[1]) for r in rows])
    x     = np.array([float(r[3]) for r in rows])
    t     = np.array([float(r[4]) for r in rows])
    FIG, AXES = plt.subplots(1, 1)
    for index in np.unique(arc):
        sel = arc==index
        o   = order[sel][0]
        AXES.plot(x[sel], t[sel], color=Output.ORDER_COLORS[o%len(Output.ORDER_COLORS)], linewidth=1.)
    AXES.set_xlabel("$x$")
    AXES.set_ylabel("$t$")
    AXES.set_title("travelling-time graph")
    plt.show()
else:
    print("run 'run.py' first, '%s' not found"%arcsPath)
