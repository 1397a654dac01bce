#  ####################################################################################  #
#  ########################### IMPORTING USEFUL DEFINITIONS ###########################  #
## standard library imports
import os

## riembill imports
from riembill.Globals import LOGGER
from riembill.Config import SceneConfig
from riembill.TravelTimes import generate_dataset, build_graph, extract_arcs, detect_cusps, echograph, gradient_of_time
from riembill import Output


#  ####################################################################################  #
#  ############################# DECLARE USEFUL VARIABLES #############################  #
DIR_PATH    = os.path.dirname( os.path.realpath(__file__) )
configPath  = os.path.join(DIR_PATH, "scene.json")
outputPath  = os.path.join(DIR_PATH, "output")
datasetPath = os.path.join(outputPath, "dataset.csv")
N_THREADS   = 4
MAX_ORDER   = 3


#  ####################################################################################  #
#  ################################### CREATE SCENE ###################################  #
CONFIG  = SceneConfig.from_file(configPath)
SCENE   = CONFIG.build_scene()
OPTIONS = CONFIG.trace_options(SCENE)
OPTIONS.pop("tangencyTolerance")
if not os.path.isdir(outputPath):
    os.makedirs(outputPath)


#  ####################################################################################  #
#  ################################## RUN SIMULATION ##################################  #
## dataset, traced once and resumed afterwards
done, existing = Output.completed_indexes(datasetPath)
dataset, report = generate_dataset(SCENE, CONFIG.sampling["nStart"], CONFIG.sampling["nDirections"],
                                   nThreads=N_THREADS, done=done, **OPTIONS)
DATASET = existing + dataset
Output.write_dataset(datasetPath, DATASET)

## travelling time graph of x1 and its echograph
x1     = CONFIG.sampling["x1"]
GRAPH  = build_graph(SCENE, DATASET, x1, **OPTIONS)
ARCS   = extract_arcs(GRAPH, SCENE, gradientJump=CONFIG.tolerances["gradientJump"], **OPTIONS)
CUSPS  = detect_cusps(ARCS, tolerance=CONFIG.tolerances["cusp"])
ECHO   = echograph(SCENE, ARCS, CUSPS, maxOrder=MAX_ORDER)
LOGGER.info("%i arcs, %i cusps, adjacency valid: %s"%(len(ARCS), len(CUSPS), ECHO.adjacencyValid))
LOGGER.info("largest gradient deviation %.3e"%gradient_of_time(ARCS)["maxDeviation"])

## save
Output.write_arcs(os.path.join(outputPath, "arcs.csv"), ARCS)
FIG, _ = Output.echograph_figure(SCENE, ECHO)
Output.save_figure(FIG, os.path.join(outputPath, "echograph.svg"))
