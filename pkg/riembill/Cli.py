"""
Cli is the riembill command line tool.

.. code-block:: text

    riembill validate    --config scene.json
    riembill generate    --config scene.json --out run --threads 4
    riembill echograph   --config scene.json --out run --max-order 3
    riembill reconstruct --config scene.json --out run
    riembill bitangents  --config scene.json --out run
    riembill trapping    --config ellipse.json --out run

Exit codes are 0 on success, 1 on invalid input or a failed validation,
2 on a numerical failure and 3 on a file error.
"""
# standard libraries imports
import os
import argparse

# external libraries imports
import numpy as np

# riembill imports
from riembill import __version__
from riembill.Globals import FLOAT_TYPE, PI, LOGGER
from riembill.Core.Errors import ValidationError, NumericalError, NoIntegerSolution
from riembill.Config import SceneConfig
from riembill.Scene import validate_scene
from riembill.TravelTimes import generate_dataset, build_graph, extract_arcs, gradient_of_time, detect_cusps, echograph
from riembill.Strata import tangent_strata
from riembill.Bitangents import all_bitangents, sign_rule_holds, count_obstacles, classify_t01_arcs
from riembill.Reconstruct import reconstruct, build_tangent_arcs
from riembill.Trapping import build_ellipse, verify_foci_property, build_trapping_obstacle, verify_trapping, focal_ray_path
from riembill import Output

EXIT_SUCCESS    = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL  = 2
EXIT_IO         = 3


def _output_directory(config):
    directory = config.outputDirectory
    if not os.path.isdir(directory):
        os.makedirs(directory)
    return directory

def _dataset_path(config):
    return os.path.join(config.outputDirectory, "dataset.csv")

def _load_dataset(config):
    path = _dataset_path(config)
    if not os.path.isfile(path):
        raise IOError("dataset file '%s' does not exist, run 'riembill generate' first"%path)
    return Output.read_dataset(path)

def _station_stride(config, dataset):
    nStart = len(set(s.xIndex for s in dataset))
    return max(1, nStart//int(config.sampling["stations"]))

def _split_options(config, scene):
    options = config.trace_options(scene)
    return options.pop("maxOrder"), options.pop("tangencyTolerance"), options


def cmd_validate(config, nThreads=1):
    """
    Validate the configured scene.

    :Returns:
        #. report (ValidationReport): The report, also written as
           validation.json.
    """
    scene  = config.build_scene()
    tol    = config.tolerances
    report = validate_scene(scene, nChords=config.sampling["monteCarloChords"], seed=config.seed, nThreads=nThreads,
                            generalPositionTolerance=tol["generalPosition"], bitangentSeeds=config.sampling["bitangentSeeds"])
    print(str(report))
    Output.write_json(os.path.join(_output_directory(config), "validation.json"), report.to_dict())
    return report

def cmd_generate(config, nThreads=1):
    """
    Trace the dataset grid and write dataset.csv. Rows already present in
    the file are kept and their indexes skipped.

    :Returns:
        #. dataset (list): TravelSample list.
        #. report (dict): Generation report, also written as generate.json.
    """
    scene = config.build_scene()
    _output_directory(config)
    path  = _dataset_path(config)
    done, existing = Output.completed_indexes(path)
    if len(done):
        LOGGER.info("resuming from '%s' with %i completed rays"%(path, len(done)))
    maxOrder, tangency, options = _split_options(config, scene)
    sampling = config.sampling
    dataset, report = generate_dataset(scene, sampling["nStart"], sampling["nDirections"], nThreads=nThreads,
                                       tangencyTolerance=tangency, maxOrder=maxOrder, done=done,
                                       stabilitySample=sampling["stabilitySample"], seed=config.seed, **options)
    dataset = existing + dataset
    Output.write_dataset(path, dataset)
    Output.write_json(os.path.join(config.outputDirectory, "generate.json"), report)
    return dataset, report

def cmd_echograph(config, x1=None, maxOrder=3, nThreads=1):
    """
    Travelling-time graph of end point x1, its arcs, cusps and echograph.
    Writes arcs.csv, echograph.svg and echograph.json.

    :Returns:
        #. graph (Echograph): The echograph.
        #. report (dict): The report.
    """
    scene   = config.build_scene()
    dataset = _load_dataset(config)
    x1      = config.sampling["x1"] if x1 is None else x1
    options = config.trace_options(scene)
    tol     = config.tolerances
    graph   = build_graph(scene, dataset, x1, **options)
    arcs    = extract_arcs(graph, scene, gradientJump=tol["gradientJump"], **options)
    unpaired = []
    cusps   = detect_cusps(arcs, tolerance=tol["cusp"], unpaired=unpaired)
    echo    = echograph(scene, arcs, cusps, maxOrder=maxOrder)
    report  = {"x1":x1, "graphPoints":len(graph), "arcs":len(arcs), "drawnArcs":len(echo.arcs),
               "orders":sorted(set(a.order for a in arcs)), "cusps":len(cusps), "unpairedEnds":len(unpaired),
               "adjacency":echo.adjacency, "adjacencyValid":echo.adjacencyValid,
               "gradient":gradient_of_time(arcs), "maxOrder":maxOrder}
    directory = _output_directory(config)
    Output.write_arcs(os.path.join(directory, "arcs.csv"), arcs)
    FIG, _ = Output.echograph_figure(scene, echo)
    Output.save_figure(FIG, os.path.join(directory, "echograph.svg"))
    Output.write_json(os.path.join(directory, "echograph.json"), report)
    return echo, report

def _reconstruct_once(config, scene, dataset, stride, nThreads):
    tol = config.tolerances
    options = config.trace_options(scene)
    strata = tangent_strata(scene, dataset, stationStride=stride, angleTolerance=tol["bisection"],
                            stitchAngle=tol["stitchAngle"], eventAngle=tol["eventAngle"], nThreads=nThreads, **options)
    arcs = build_tangent_arcs(scene, strata)
    obstacles, report = reconstruct(scene, arcs=arcs)
    return strata, obstacles, report

def cmd_reconstruct(config, nThreads=1, refine=False):
    """
    Recover the obstacles from the dataset. Writes boundaries.csv,
    overlay.svg and reconstruction.json.

    :Parameters:
        #. config (SceneConfig): The configuration.
        #. nThreads (int): Worker processes.
        #. refine (bool): Also run at the configured fraction of the
           station density and report the error ratio.

    :Returns:
        #. obstacles (list): ReconstructedObstacle list.
        #. report (dict): The report.
    """
    scene   = config.build_scene()
    dataset = _load_dataset(config)
    stride  = _station_stride(config, dataset)
    strata, obstacles, report = _reconstruct_once(config, scene, dataset, stride, nThreads)
    report["strata"] = strata.report()
    try:
        report["inferredObstacles"] = count_obstacles(strata.t02Count, convention="directed")
    except NoIntegerSolution as err:
        report["inferredObstacles"] = None
        report["countError"] = {"candidates":err.candidates, "residual":err.residual}
    report["configuredObstacles"] = scene.nObstacles
    report["t01Inventory"] = classify_t01_arcs(strata, nObstacles=report["inferredObstacles"])
    if refine:
        factor = int(config.sampling["envelopeRefinement"])
        _, coarse, _ = _reconstruct_once(config, scene, dataset, stride*factor, nThreads)
        fine   = max([o.hausdorff for o in obstacles if o.hausdorff is not None] or [np.nan])
        rough  = max([o.hausdorff for o in coarse if o.hausdorff is not None] or [np.nan])
        report["refinement"] = {"factor":factor, "coarseHausdorff":rough, "fineHausdorff":fine,
                                "ratio":FLOAT_TYPE(rough/fine) if fine>0 else None}
    directory = _output_directory(config)
    Output.write_boundaries(os.path.join(directory, "boundaries.csv"), obstacles)
    FIG, _ = Output.overlay_figure(scene, obstacles)
    Output.save_figure(FIG, os.path.join(directory, "overlay.svg"))
    Output.write_json(os.path.join(directory, "reconstruction.json"), report)
    return obstacles, report

def cmd_bitangents(config):
    """
    Directed bitangents of every obstacle pair. Writes bitangents.csv and
    bitangents.json.
    """
    scene   = config.build_scene()
    records = all_bitangents(scene, nSeeds=config.sampling["bitangentSeeds"], dedupTolerance=config.tolerances["dedup"])
    pairs   = {}
    for b in records:
        pairs.setdefault(b.pair, []).append(b)
    report  = {"directed":len(records), "undirected":len(records)//2,
               "signRule":dict(("%i-%i"%p, sign_rule_holds(v)) for p, v in pairs.items()),
               "obstacles":count_obstacles(len(records), convention="directed") if len(records) else None}
    directory = _output_directory(config)
    Output.write_bitangents(os.path.join(directory, "bitangents.csv"), records)
    Output.write_json(os.path.join(directory, "bitangents.json"), report)
    return records, report

def cmd_trapping(config, nThreads=1):
    """
    Build the configured ellipse and trapping curve, check the focal
    property and the trapping of corridor rays. Writes trapping.svg and
    trapping.json.
    """
    trap    = config.trapping
    chart   = config.build_chart()
    ellipse = build_ellipse(chart, trap["foci"][0], trap["foci"][1], trap["r"], nSamples=trap["nSamples"])
    foci    = verify_foci_property(ellipse, nRays=min(256, trap["nRays"]), seed=config.seed)
    obstacle = build_trapping_obstacle(ellipse, depth=trap["depth"], skew=trap["skew"])
    report  = verify_trapping(obstacle, nRays=trap["nRays"], bounces=trap["bounces"], seed=config.seed, nThreads=nThreads)
    uA1, _  = obstacle.axisPoints
    control = verify_trapping(obstacle, bounces=trap["bounces"], starts=[(0.5*uA1, PI/3)])
    result  = {"foci":foci, "trapping":report, "control":control}
    paths   = [focal_ray_path(ellipse, angle) for angle in np.linspace(0.1, 2*PI-0.1, 8)]
    FIG, _  = Output.trapping_figure(ellipse, obstacle, paths)
    directory = _output_directory(config)
    Output.save_figure(FIG, os.path.join(directory, "trapping.svg"))
    Output.write_json(os.path.join(directory, "trapping.json"), result)
    return result


def get_parser():
    """The argparse parser of the riembill command."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="scene configuration json file")
    common.add_argument("--out", default=None, help="output directory, overrides output.directory")
    common.add_argument("--seed", type=int, default=None, help="random seed, overrides seed")
    common.add_argument("--stations", type=int, default=None, help="end point stations, overrides sampling.stations")
    common.add_argument("--max-order", type=int, default=None, dest="maxOrder", help="order budget, overrides billiard.maxOrder")
    common.add_argument("--threads", type=int, default=1, help="worker processes")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="log every message")
    verbosity.add_argument("--quiet", action="store_true", help="log warnings and errors only")
    parser = argparse.ArgumentParser(prog="riembill", description="Riemannian billiards and obstacle reconstruction from travelling times")
    parser.add_argument("--version", action="version", version="%(prog)s "+__version__)
    sub = parser.add_subparsers(dest="command")
    sub.required = True
    sub.add_parser("validate", parents=[common], help="check the standing hypotheses of a scene")
    sub.add_parser("generate", parents=[common], help="trace the travelling time dataset")
    echo = sub.add_parser("echograph", parents=[common], help="travelling time graph and echograph of one end point")
    echo.add_argument("--x1", type=float, default=None, help="end point parameter, overrides sampling.x1")
    rec = sub.add_parser("reconstruct", parents=[common], help="recover the obstacles from the dataset")
    rec.add_argument("--refine", action="store_true", help="report the station density refinement ratio")
    sub.add_parser("bitangents", parents=[common], help="enumerate common tangent geodesics")
    sub.add_parser("trapping", parents=[common], help="ellipse foci property and trapping demo")
    return parser

def _configure(args):
    config = SceneConfig.from_file(args.config)
    if args.out is not None:
        config.set_value("output.directory", args.out)
    if args.seed is not None:
        config.set_value("seed", args.seed)
    if args.stations is not None:
        config.set_value("sampling.stations", args.stations)
    if args.maxOrder is not None and args.command != "echograph":
        config.set_value("billiard.maxOrder", args.maxOrder)
    return config

def run(args):
    """Dispatch parsed arguments and return the exit code."""
    if args.verbose:
        LOGGER.set_minimum_level(0, stdoutFlag=True, fileFlag=True)
    elif args.quiet:
        LOGGER.set_minimum_level(30, stdoutFlag=True, fileFlag=True)
    config = _configure(args)
    if args.command == "validate":
        report = cmd_validate(config, nThreads=args.threads)
        return EXIT_SUCCESS if report.passed else EXIT_VALIDATION
    if args.command == "generate":
        cmd_generate(config, nThreads=args.threads)
    elif args.command == "echograph":
        maxOrder = 3 if args.maxOrder is None else args.maxOrder
        cmd_echograph(config, x1=args.x1, maxOrder=maxOrder, nThreads=args.threads)
    elif args.command == "reconstruct":
        cmd_reconstruct(config, nThreads=args.threads, refine=args.refine)
    elif args.command == "bitangents":
        cmd_bitangents(config)
    elif args.command == "trapping":
        cmd_trapping(config, nThreads=args.threads)
    return EXIT_SUCCESS

def main(argv=None):
    """
    Entry point of the riembill command.

    :Returns:
        #. code (int): Exit code.
    """
    args = get_parser().parse_args(argv)
    try:
        return run(args)
    except (ValidationError, AssertionError) as err:
        LOGGER.error("invalid input: %s"%err)
        return EXIT_VALIDATION
    except NumericalError as err:
        LOGGER.error("numerical failure: %s"%err)
        return EXIT_NUMERICAL
    except (IOError, OSError) as err:
        LOGGER.error("file error: %s"%err)
        return EXIT_IO
