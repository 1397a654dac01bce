#  ####################################################################################  #
#  ########################### IMPORTING USEFUL DEFINITIONS ###########################  #
## standard library imports
import os

## external libraries imports
import numpy as np

## riembill imports
from riembill.Globals import LOGGER
from riembill.Config import SceneConfig
from riembill.Trapping import (build_ellipse, verify_foci_property, focal_ray_path,
                               build_trapping_obstacle, verify_trapping)
from riembill import Output


#  ####################################################################################  #
#  ############################# DECLARE USEFUL VARIABLES #############################  #
DIR_PATH   = os.path.dirname( os.path.realpath(__file__) )
configPath = os.path.join(DIR_PATH, "scene.json")
outputPath = os.path.join(DIR_PATH, "output")
N_THREADS  = 4


#  ####################################################################################  #
#  ################################# BUILD THE CURVES #################################  #
CONFIG   = SceneConfig.from_file(configPath)
TRAP     = CONFIG.trapping
CHART    = CONFIG.build_chart()
ELLIPSE  = build_ellipse(CHART, TRAP["foci"][0], TRAP["foci"][1], TRAP["r"], nSamples=TRAP["nSamples"])
OBSTACLE = build_trapping_obstacle(ELLIPSE, depth=TRAP["depth"], skew=TRAP["skew"])
if not os.path.isdir(outputPath):
    os.makedirs(outputPath)


#  ####################################################################################  #
#  ############################### DEFINE DIFFERENT RUNS ##############################  #
def foci_run(nRays=256):
    report = verify_foci_property(ELLIPSE, nRays=nRays, seed=CONFIG.seed)
    LOGGER.info("focal miss: max %.3e, mean %.3e"%(report["maxMiss"], report["meanMiss"]))
    return report

def trapping_run():
    report = verify_trapping(OBSTACLE, nRays=TRAP["nRays"], bounces=TRAP["bounces"], seed=CONFIG.seed, nThreads=N_THREADS)
    ## a ray crossing the axis outside the foci escapes the corridor
    uA1, _  = OBSTACLE.axisPoints
    control = verify_trapping(OBSTACLE, bounces=TRAP["bounces"], starts=[(0.5*uA1, np.pi/3)])
    LOGGER.info("%i escapes over %i corridor rays, control escaped: %s"%(report["escapes"], report["nRays"], control["escapes"]==1))
    return report, control


#  ####################################################################################  #
#  ################################## RUN SIMULATION ##################################  #
FOCI = foci_run()
TRAPPING, CONTROL = trapping_run()
Output.write_json(os.path.join(outputPath, "trapping.json"), {"foci":FOCI, "trapping":TRAPPING, "control":CONTROL})
PATHS  = [focal_ray_path(ELLIPSE, angle) for angle in np.linspace(0.1, 2*np.pi-0.1, 8)]
FIG, _ = Output.trapping_figure(ELLIPSE, OBSTACLE, PATHS)
Output.save_figure(FIG, os.path.join(outputPath, "trapping.svg"))
