#  ####################################################################################  #
#  ########################### IMPORTING USEFUL DEFINITIONS ###########################  #
## standard library imports
import os

## riembill imports
from riembill.Globals import LOGGER
from riembill.Config import SceneConfig
from riembill.Scene import validate_scene
from riembill.TravelTimes import generate_dataset
from riembill.Strata import tangent_strata
from riembill.Bitangents import all_bitangents, count_obstacles
from riembill.Reconstruct import build_tangent_arcs, reconstruct
from riembill import Output


#  ####################################################################################  #
#  ############################# DECLARE USEFUL VARIABLES #############################  #
DIR_PATH    = os.path.dirname( os.path.realpath(__file__) )
configPath  = os.path.join(DIR_PATH, "scene.json")
outputPath  = os.path.join(DIR_PATH, "output")
datasetPath = os.path.join(outputPath, "dataset.csv")
N_THREADS   = 4
FRESH_START = False


#  ####################################################################################  #
#  ################################### CREATE SCENE ###################################  #
CONFIG = SceneConfig.from_file(configPath)
CONFIG.set_value("output.directory", outputPath)
SCENE  = CONFIG.build_scene()
if not os.path.isdir(outputPath):
    os.makedirs(outputPath)
if FRESH_START and os.path.isfile(datasetPath):
    os.remove(datasetPath)


#  ####################################################################################  #
#  ############################### DEFINE DIFFERENT RUNS ##############################  #
def validate_run():
    report = validate_scene(SCENE, nChords=CONFIG.sampling["monteCarloChords"], seed=CONFIG.seed, nThreads=N_THREADS)
    Output.write_json(os.path.join(outputPath, "validation.json"), report.to_dict())
    assert report.passed, LOGGER.error("scene does not satisfy its hypotheses\n%s"%report)

def generate_run():
    ## trace only rays missing from a previous run
    done, existing = Output.completed_indexes(datasetPath)
    options = CONFIG.trace_options(SCENE)
    options.pop("tangencyTolerance")
    dataset, report = generate_dataset(SCENE, CONFIG.sampling["nStart"], CONFIG.sampling["nDirections"],
                                       nThreads=N_THREADS, done=done, **options)
    dataset = existing + dataset
    Output.write_dataset(datasetPath, dataset)
    Output.write_json(os.path.join(outputPath, "generate.json"), report)
    return dataset

def bitangents_run():
    records = all_bitangents(SCENE, nSeeds=CONFIG.sampling["bitangentSeeds"])
    Output.write_bitangents(os.path.join(outputPath, "bitangents.csv"), records)
    LOGGER.info("%i directed bitangents, %i obstacles"%(len(records), count_obstacles(len(records), convention="directed")))

def reconstruct_run(dataset):
    stride = max(1, CONFIG.sampling["nStart"]//CONFIG.sampling["stations"])
    options = CONFIG.trace_options(SCENE)
    strata = tangent_strata(SCENE, dataset, stationStride=stride, nThreads=N_THREADS, **options)
    LOGGER.info("obstacles counted from double tangencies: %s"%count_obstacles(strata.t02Count, convention="directed"))
    arcs = build_tangent_arcs(SCENE, strata)
    obstacles, report = reconstruct(SCENE, arcs=arcs)
    report["strata"] = strata.report()
    Output.write_boundaries(os.path.join(outputPath, "boundaries.csv"), obstacles)
    Output.write_json(os.path.join(outputPath, "reconstruction.json"), report)
    FIG, _ = Output.overlay_figure(SCENE, obstacles)
    Output.save_figure(FIG, os.path.join(outputPath, "overlay.svg"))


#  ####################################################################################  #
#  ################################## RUN SIMULATION ##################################  #
validate_run()
bitangents_run()
DATASET = generate_run()
reconstruct_run(DATASET)
