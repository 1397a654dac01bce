"""
TravelTimes generates travelling-time datasets and analyses them.

A dataset is the list of traced rays on the grid of boundary parameters
x_a = a L / nStart and start angles a_b = -pi/2 + (b+1/2) pi / nDirections.
For a fixed end point x1 the travelling-time graph is the set of (x, t)
such that a ray from x reaches x1 after time t. It decomposes into
smooth arcs of constant order, whose generators satisfy

.. math::

    \\frac{d\\tau}{dx} = -g(\\omega(x), T(x)) = -\\sin(a)

Arcs of consecutive orders meet at cusps where a ray grazes an obstacle.
Branches are told apart by their order, their tangency count and the
continuity of their times, never by which obstacle a ray touched. The
echograph draws the graph by sending (x, t) to P(x) + t eta(x).

Two graphs of an end point are available. build_graph re-aims the rays of
every start station at x1. station_graph reads the rays leaving a station
backwards: a ray from x1 to y after t is a ray from y to x1 after t.

.. code-block:: python

    from riembill.TravelTimes import generate_dataset, build_graph, extract_arcs, detect_cusps

    dataset, report = generate_dataset(scene, nStart=256, nDirections=256)
    graph = build_graph(scene, dataset, x1=0.)
    arcs  = extract_arcs(graph, scene=scene)
    cusps = detect_cusps(arcs)
"""
# standard libraries imports
import time
from collections import namedtuple

# external libraries imports
import numpy as np
from scipy.optimize import brentq
from scipy.interpolate import CubicSpline

# riembill imports
from riembill.Globals import FLOAT_TYPE, PRECISION, PI, LOGGER
from riembill.Core.Collection import raise_error, is_integer, is_number, periodic_difference, wrap_parameter, get_elapsed_time, chunked_map
from riembill.Core.Errors import Trapped, ShootingFailed, AmbiguousChaining, NumericalError, OrderBoundViolation
from riembill.Billiard import trace_angle, boundary_angle, TANGENCY_TOLERANCE, MAX_ORDER

TravelSample = namedtuple("TravelSample", ["x", "omega", "y", "t", "order", "tangencyCount",
                                           "xIndex", "directionIndex", "omegaOut"])
TravelSample.__doc__ = """One traced ray: start parameter x, start angle omega from the inward
normal, end parameter y, time t, order, tangency count, grid indexes and
outgoing angle from the outward normal at y."""

GraphPoint = namedtuple("GraphPoint", ["x", "angle", "t", "y", "order", "tangencyCount",
                                       "gradient", "endAngle", "index"])
GraphPoint.__doc__ = """A ray from x at angle to the end point y ~ x1 after t.
endAngle is the angle at x1 of the reversed ray. index orders the points of
a graph: the start station for build_graph, the direction index at x1 for
station_graph."""

ArcEnd = namedtuple("ArcEnd", ["x", "t", "gradient", "endAngle", "kind", "side", "grazePosition"])
ArcEnd.__doc__ = """Limit of an arc at one end. kind is 'graze' when a contact
appears or vanishes, 'boundary' when the ray becomes tangent to the boundary
of S and 'station' when not refined. side is +1 when the arc lies at x > x
of the end, -1 otherwise. grazePosition is 'first' or 'last' when the
limit ray leaving x1 grazes at its first or last obstacle contact, None
otherwise."""
ArcEnd.__new__.__defaults__ = (None,)

CuspPoint = namedtuple("CuspPoint", ["x", "t", "arcs", "gradient", "orders", "side", "startAngle",
                                     "endAngle", "grazePosition"])
CuspPoint.__doc__ = """Cusp of a travelling-time graph at x after time t. The
tangent ray leaves x at startAngle, its limit direction -grad tau, and
reaches x1 where the reversed ray leaves at endAngle."""
CuspPoint.__new__.__defaults__ = (None, None)


def branch_key(point):
    """(order, tangency count) of a sample, graph point or trajectory."""
    return (int(point.order), int(point.tangencyCount))

def is_continuous(tA, yA, tB, yB, period, tolerance=1e-9):
    """
    Whether two rays from a common point can lie on one smooth branch.
    Along a branch the time changes at most as fast as the end parameter,
    so |tA-tB| <= |yA-yB| up to tolerance.
    """
    return abs(tA-tB) <= abs(periodic_difference(yA, yB, period)) + tolerance


def sample_from_trajectory(scene, trajectory, x, angle, xIndex=-1, directionIndex=-1):
    """Build a TravelSample from a complete trajectory."""
    end = trajectory.end
    y   = trajectory.endParameter
    return TravelSample(FLOAT_TYPE(x), FLOAT_TYPE(angle), FLOAT_TYPE(y), trajectory.totalTime, trajectory.order,
                        trajectory.tangencyCount, int(xIndex), int(directionIndex),
                        boundary_angle(scene, y, end.velocity, outgoing=True))

def _trace_rows(args):
    scene, rows, options = args
    results = []
    for xIndex, directionIndex, x, angle in rows:
        try:
            trajectory = trace_angle(scene, x, angle, **options)
        except Trapped:
            results.append( ("trapped", xIndex, directionIndex) )
            continue
        except OrderBoundViolation:
            results.append( ("bound", xIndex, directionIndex) )
            continue
        sample = sample_from_trajectory(scene, trajectory, x, angle, xIndex, directionIndex)
        results.append( ("traced", sample, trajectory.tangencyPositionValid) )
    return results

def start_grid(scene, nStart, nDirections):
    """
    Grid of start parameters and angles.

    :Returns:
        #. xs (np.ndarray): nStart boundary parameters.
        #. angles (np.ndarray): nDirections angles in (-pi/2, pi/2).
    """
    assert is_integer(nStart) and nStart>=1, LOGGER.error("nStart must be an integer >= 1")
    assert is_integer(nDirections) and nDirections>=1, LOGGER.error("nDirections must be an integer >= 1")
    xs     = np.arange(int(nStart), dtype=FLOAT_TYPE)*scene.domain.length/int(nStart)
    angles = -PI/2 + (np.arange(int(nDirections), dtype=FLOAT_TYPE)+0.5)*PI/int(nDirections)
    return xs, angles

def generate_dataset(scene, nStart, nDirections, nThreads=1, tangencyTolerance=TANGENCY_TOLERANCE,
                     maxOrder=MAX_ORDER, done=None, stabilitySample=0, seed=0, chunkSize=64, **traceOptions):
    """
    Trace the grid of rays over the boundary of S and its inward directions.

    :Parameters:
        #. scene (Scene): The scene.
        #. nStart (int): Number of start parameters.
        #. nDirections (int): Number of start angles.
        #. nThreads (int): Worker processes.
        #. tangencyTolerance (number): Tangency tolerance of the tracer.
        #. maxOrder (int): Order budget of the tracer.
        #. done (None, set): (xIndex, directionIndex) pairs to skip, used to
           resume a partially written dataset.
        #. stabilitySample (int): Number of rays re-traced with a ten times
           smaller tangency tolerance to measure bucket stability.
        #. seed (int): Seed of the stability sample.
        #. chunkSize (int): Rays per worker task.
        #. traceOptions (kwargs): Further Billiard.trace options.

    :Returns:
        #. dataset (list): TravelSample list in grid order.
        #. report (dict): Counts of traced, trapped and excluded rays,
           order bound and tangency position violations, bucket histogram
           and stability fraction.
    """
    tic = time.time()
    xs, angles = start_grid(scene, nStart, nDirections)
    done = set() if done is None else set(done)
    # fill the scene cache before it is shipped to workers
    _ = scene.diam_S, scene.dK, scene.boundaryClearance
    rows, excluded = [], 0
    for a, x in enumerate(xs):
        for b, angle in enumerate(angles):
            if (a, b) in done:
                continue
            if abs(angle) > PI/2 - tangencyTolerance:
                excluded += 1
                continue
            rows.append( (a, b, x, angle) )
    if excluded:
        LOGGER.warn("%i starts tangent to the boundary of S are excluded"%excluded)
    options = dict(traceOptions, maxOrder=maxOrder, tangencyTolerance=tangencyTolerance)
    items   = [(scene, rows[i:i+chunkSize], options) for i in range(0, len(rows), chunkSize)]
    LOGGER.info("tracing %i rays on %i workers"%(len(rows), nThreads))
    results = [r for part in chunked_map(_trace_rows, items, nThreads=nThreads) for r in part]
    dataset = [r[1] for r in results if r[0] == "traced"]
    trapped = sum(1 for r in results if r[0] == "trapped")
    orderViolations    = sum(1 for r in results if r[0] == "bound")
    tangencyViolations = sum(1 for r in results if r[0] == "traced" and not r[2])
    buckets = {}
    for s in dataset:
        key = "%i,%i"%branch_key(s)
        buckets[key] = buckets.get(key, 0) + 1
    report = {"rays":len(rows), "traced":len(dataset), "trapped":trapped, "excluded":excluded,
              "skipped":len(done), "orderViolations":orderViolations, "tangencyViolations":tangencyViolations,
              "maxTangencyCount":max([s.tangencyCount for s in dataset] or [0]), "buckets":buckets}
    if orderViolations:
        LOGGER.warn("%i rays break the order bound and are left out"%orderViolations)
    if tangencyViolations:
        LOGGER.warn("%i rays have a tangency that is neither the first nor the last contact"%tangencyViolations)
    if stabilitySample and len(dataset):
        report["bucketStability"] = bucket_stability(scene, dataset, stabilitySample, seed=seed,
                                                     tangencyTolerance=tangencyTolerance, maxOrder=maxOrder, nThreads=nThreads)
    LOGGER.info("dataset of %i rays generated in %s"%(len(dataset), get_elapsed_time(tic)))
    return dataset, report

def bucket_stability(scene, dataset, nSamples, seed=0, tangencyTolerance=TANGENCY_TOLERANCE, maxOrder=MAX_ORDER, nThreads=1):
    """
    Fraction of rays whose (order, tangency count) bucket changes when the
    tangency tolerance is divided by 10.
    """
    rng   = np.random.RandomState(seed)
    picks = rng.choice(len(dataset), size=min(int(nSamples), len(dataset)), replace=False)
    rows  = [(dataset[i].xIndex, dataset[i].directionIndex, dataset[i].x, dataset[i].omega) for i in picks]
    options = {"maxOrder":maxOrder, "tangencyTolerance":tangencyTolerance/10.}
    items   = [(scene, rows[i:i+64], options) for i in range(0, len(rows), 64)]
    retraced = [r for part in chunked_map(_trace_rows, items, nThreads=nThreads) for r in part]
    changed  = 0
    for i, r in zip(picks, retraced):
        if r[0] != "traced" or branch_key(r[1]) != branch_key(dataset[i]):
            changed += 1
    fraction = FLOAT_TYPE(changed)/max(1, len(picks))
    LOGGER.report("tangency tolerance /10 changes the bucket of %.4g%% of %i rays"%(100*fraction, len(picks)))
    return fraction

def reversal_closure(scene, dataset, nSamples=None, seed=0, **traceOptions):
    """
    Trace the reverses of dataset rays: the ray leaving y against the
    outgoing direction must come back to x after the same time.

    :Parameters:
        #. scene (Scene): The scene.
        #. dataset (list): TravelSample list.
        #. nSamples (None, int): Number of randomly picked rays, None for
           all of them.
        #. seed (int): Seed of the pick.

    :Returns:
        #. report (dict): checked rays, failures and maximum parameter and
           time errors.
    """
    picks = np.arange(len(dataset))
    if nSamples is not None and nSamples < len(dataset):
        picks = np.sort(np.random.RandomState(seed).choice(len(dataset), size=int(nSamples), replace=False))
    L = scene.domain.length
    xError, tError, failures = FLOAT_TYPE(0), FLOAT_TYPE(0), 0
    for i in picks:
        s = dataset[i]
        try:
            trajectory = trace_angle(scene, s.y, -s.omegaOut, **traceOptions)
        except NumericalError:
            failures += 1
            continue
        xError = max(xError, abs(periodic_difference(trajectory.endParameter, s.x, L)))
        tError = max(tError, abs(trajectory.totalTime-s.t))
    report = {"checked":len(picks), "failures":failures, "maxParameterError":xError, "maxTimeError":tError}
    LOGGER.report("reversal closure of %i rays: parameter error %.3g, time error %.3g"%(len(picks), xError, tError))
    return report


class TravelGraph(object):
    """
    Travelling-time graph of a fixed end point x1.

    :Parameters:
        #. x1 (number): End parameter on the boundary of S.
        #. points (list): GraphPoint list.
        #. period (number): Length of the boundary of S.
        #. nIndexes (int): Number of point indexes, stations or directions.
        #. sweep (str): 'station' when points are indexed by periodic start
           stations, 'angle' when indexed by the direction at x1.
    """
    def __init__(self, x1, points, period, nIndexes, sweep="station"):
        assert sweep in ("station", "angle"), LOGGER.error("sweep must be 'station' or 'angle'")
        self.__x1       = FLOAT_TYPE(x1)
        self.__points   = sorted(points, key=lambda p: (p.index, p.angle))
        self.__period   = FLOAT_TYPE(period)
        self.__nIndexes = int(nIndexes)
        self.__sweep    = sweep

    def __len__(self):
        return len(self.__points)

    def __iter__(self):
        return iter(self.__points)

    @property
    def x1(self):
        return self.__x1

    @property
    def points(self):
        return list(self.__points)

    @property
    def period(self):
        return self.__period

    @property
    def nIndexes(self):
        return self.__nIndexes

    @property
    def sweep(self):
        return self.__sweep

    @property
    def periodic(self):
        """Whether the last index neighbours the first one."""
        return self.__sweep == "station"

    @property
    def spacing(self):
        """Parameter distance between stations."""
        return self.__period/self.__nIndexes


def _aim(scene, x, lo, hi, x1, key, tolerance, options):
    def miss(angle):
        trajectory = trace_angle(scene, x, angle, **options)
        return periodic_difference(trajectory.endParameter, x1, scene.domain.length)
    try:
        angle = brentq(miss, lo, hi, xtol=1e-14, maxiter=200)
        trajectory = trace_angle(scene, x, angle, **options)
    except (ValueError, NumericalError) as err:
        raise_error(ShootingFailed, "shooting from x=%.10g to x1=%.10g failed (%s)"%(x, x1, err))
    residual = abs(periodic_difference(trajectory.endParameter, x1, scene.domain.length))
    if residual > tolerance or branch_key(trajectory) != key:
        raise_error(ShootingFailed, "shooting from x=%.10g reached x1 within %.3g on branch %s instead of %s"%(x, residual, branch_key(trajectory), key))
    return angle, trajectory

def build_graph(scene, dataset, x1, window=None, tolerance=1e-8, **traceOptions):
    """
    Travelling-time graph of end point x1. Consecutive dataset angles of a
    station on one (order, tangency count) branch whose end parameters
    straddle x1 within window are re-aimed by Brent's method on the start
    angle until the end parameter equals x1 within tolerance. A re-aimed
    ray whose time is not continuous with the bracketing rays is dropped.

    :Parameters:
        #. scene (Scene): The scene.
        #. dataset (list): TravelSample list.
        #. x1 (number): End parameter.
        #. window (None, number): Parameter window around x1. None is a
           quarter of the boundary length.
        #. tolerance (number): End parameter tolerance of re-aimed rays.

    :Returns:
        #. graph (TravelGraph): The graph.
    """
    assert len(dataset), LOGGER.error("dataset is empty")
    L  = scene.domain.length
    x1 = wrap_parameter(FLOAT_TYPE(x1), L)
    if window is None:
        window = L/4.
    stations = {}
    for s in dataset:
        stations.setdefault(s.xIndex, []).append(s)
    nStations = int(round(L/np.min(np.diff(sorted(set([s.x for s in dataset])))))) if len(stations)>1 else 1
    points, dropped = [], 0
    for xIndex in sorted(stations):
        row = sorted(stations[xIndex], key=lambda s: s.omega)
        for lo, hi in zip(row[:-1], row[1:]):
            if branch_key(lo) != branch_key(hi) or hi.directionIndex != lo.directionIndex+1:
                continue
            dlo = periodic_difference(lo.y, x1, L)
            dhi = periodic_difference(hi.y, x1, L)
            if abs(dlo) > window or abs(dhi) > window or dlo*dhi > 0 or dlo == dhi:
                continue
            try:
                angle, trajectory = _aim(scene, lo.x, lo.omega, hi.omega, x1, branch_key(lo), tolerance, traceOptions)
                t = trajectory.totalTime
                if not (is_continuous(t, x1, lo.t, lo.y, L) and is_continuous(t, x1, hi.t, hi.y, L)):
                    raise_error(ShootingFailed, "shot from x=%.10g jumps off its branch"%lo.x)
            except ShootingFailed:
                dropped += 1
                LOGGER.warn("graph sample of station %i dropped"%xIndex)
                continue
            end = trajectory.end
            points.append( GraphPoint(lo.x, FLOAT_TYPE(angle), trajectory.totalTime, trajectory.endParameter,
                                      trajectory.order, trajectory.tangencyCount, FLOAT_TYPE(-np.sin(angle)),
                                      boundary_angle(scene, x1, -end.velocity), xIndex) )
    LOGGER.report("graph of x1=%.6g has %i points, %i dropped"%(x1, len(points), dropped))
    return TravelGraph(x1, points, L, nStations, sweep="station")

def station_graph(scene, dataset, xIndex):
    """
    Travelling-time graph of the end point x1 of station xIndex, read from
    the dataset rays leaving x1. A ray leaving x1 at angle a, reaching y
    after t with outgoing angle b, reversed, is a ray from y at angle -b
    reaching x1 after t. No ray is traced.

    :Parameters:
        #. scene (Scene): The scene.
        #. dataset (list): TravelSample list.
        #. xIndex (int): Station index of the end point.

    :Returns:
        #. graph (TravelGraph): The graph, indexed by direction at x1.
    """
    row = [s for s in dataset if s.xIndex == xIndex]
    assert len(row), LOGGER.error("station %s has no ray"%xIndex)
    nDirections = max(s.directionIndex for s in dataset)+1
    points = [GraphPoint(s.y, FLOAT_TYPE(-s.omegaOut), s.t, s.x, s.order, s.tangencyCount,
                         FLOAT_TYPE(np.sin(s.omegaOut)), s.omega, s.directionIndex) for s in row]
    return TravelGraph(row[0].x, points, scene.domain.length, nDirections, sweep="angle")


class ArcSegment(object):
    """
    Maximal smooth arc of a travelling-time graph: points of one order and
    tangency count chained by continuity.

    :Parameters:
        #. x1 (number): End parameter of the graph.
        #. points (list): GraphPoint list in increasing x.
        #. x (np.ndarray): Unwrapped start parameters of the points.
        #. period (number): Boundary length.
    """
    def __init__(self, x1, points, x, period):
        assert len(points)>=1, LOGGER.error("an arc needs at least one point")
        self.__x1        = FLOAT_TYPE(x1)
        self.__points    = list(points)
        self.__x         = np.asarray(x, dtype=FLOAT_TYPE)
        self.__period    = FLOAT_TYPE(period)
        self.__t         = np.array([p.t for p in points], dtype=FLOAT_TYPE)
        self.__gradients = np.array([p.gradient for p in points], dtype=FLOAT_TYPE)
        self.__key       = branch_key(points[0])
        first, last = points[0], points[-1]
        self.__ends = [ArcEnd(self.__x[0], first.t, first.gradient, first.endAngle, "station", 1),
                       ArcEnd(self.__x[-1], last.t, last.gradient, last.endAngle, "station", -1)]

    def __repr__(self):
        return "ArcSegment(order=%i, tangencies=%i, n=%i, x=[%.6g, %.6g])"%(self.__key[0], self.__key[1], len(self.__points), self.__x[0], self.__x[-1])

    @property
    def x1(self):
        return self.__x1

    @property
    def points(self):
        return list(self.__points)

    @property
    def x(self):
        """Unwrapped start parameters."""
        return self.__x

    @property
    def t(self):
        return self.__t

    @property
    def gradients(self):
        """dtau/dx from the start angles."""
        return self.__gradients

    @property
    def key(self):
        """(order, tangency count)."""
        return self.__key

    @property
    def order(self):
        return self.__key[0]

    @property
    def tangencyCount(self):
        return self.__key[1]

    @property
    def period(self):
        return self.__period

    @property
    def ends(self):
        """[lower end, upper end] ArcEnd limits."""
        return list(self.__ends)

    @property
    def generator(self):
        """Interpolant tau(x) over the arc samples."""
        if len(self.__x) >= 4:
            return CubicSpline(self.__x, self.__t)
        return lambda x: np.interp(x, self.__x, self.__t)

    def set_end(self, index, end):
        """Replace the lower (0) or upper (1) end limit."""
        assert index in (0, 1), LOGGER.error("end index must be 0 or 1")
        assert isinstance(end, ArcEnd), LOGGER.error("end must be an ArcEnd")
        self.__ends[index] = end


def _chain_ok(p, q, dx, gradientJump):
    jump = abs(q.gradient-p.gradient)
    trapezoid = abs((q.t-p.t) - 0.5*dx*(p.gradient+q.gradient))
    return trapezoid <= 5*abs(dx)*jump + 1e-6 and (gradientJump is None or jump <= gradientJump)

def _chain(byIndex, L, key, gradientJump):
    runs, open_ = [], []
    for i in sorted(byIndex):
        candidates = byIndex[i]
        alive = [run for run in open_ if run[-1].index == i-1]
        links = {}
        for a, run in enumerate(alive):
            for b, q in enumerate(candidates):
                if _chain_ok(run[-1], q, periodic_difference(q.x, run[-1].x, L), gradientJump):
                    links.setdefault(("run", a), []).append(b)
                    links.setdefault(("point", b), []).append(a)
        for (kind, k), linked in links.items():
            if len(linked) > 1:
                raise_error(AmbiguousChaining, "%i continuations of branch %s pass the thresholds at index %i"%(len(linked), key, i))
        used, nextOpen = set(), []
        for a, run in enumerate(alive):
            if ("run", a) in links:
                b = links[("run", a)][0]
                run.append(candidates[b])
                used.add(b)
                nextOpen.append(run)
            elif len(candidates):
                LOGGER.report("branch %s broken at index %i by continuity thresholds"%(str(key), i))
        for b, q in enumerate(candidates):
            if b not in used:
                run = [q]
                runs.append(run)
                nextOpen.append(run)
        open_ = nextOpen
    return runs

def extract_arcs(graph, scene=None, gradientJump=0.05, refine=True, angleTolerance=1e-12, **traceOptions):
    """
    Chain graph points into arcs. Points of one (order, tangency count)
    branch on consecutive indexes are chained when the trapezoid residual
    of the time increment passes its threshold and, for station sweeps, the
    gradient jump stays under gradientJump. When a scene is given, arc ends
    are refined by bisection on the angle at x1 of the reversed rays until
    the order changes or the time stops being continuous.

    :Parameters:
        #. graph (TravelGraph): The graph.
        #. scene (None, Scene): Scene used to refine the ends.
        #. gradientJump (number): Maximum gradient jump between stations.
        #. refine (bool): Whether to refine the ends.
        #. angleTolerance (number): Angle tolerance of the end bisection.

    :Returns:
        #. arcs (list): ArcSegment list.

    :Raises:
        #. AmbiguousChaining: when two continuations pass the thresholds.
    """
    n, L = graph.nIndexes, graph.period
    jump = gradientJump if graph.periodic else None
    byKey = {}
    for p in graph:
        byKey.setdefault(branch_key(p), {}).setdefault(p.index, []).append(p)
    arcs = []
    for key in sorted(byKey):
        runs = _chain(byKey[key], L, key, jump)
        # periodic wrap
        if graph.periodic:
            for run in list(runs):
                if run not in runs or run[-1].index != n-1:
                    continue
                heads = [h for h in runs if h is not run and h[0].index == 0 and
                         _chain_ok(run[-1], h[0], periodic_difference(h[0].x, run[-1].x, L), jump)]
                if len(heads) == 1:
                    run.extend(heads[0])
                    runs.remove(heads[0])
        for run in runs:
            x = [run[0].x]
            for p, q in zip(run[:-1], run[1:]):
                x.append(x[-1] + periodic_difference(q.x, p.x, L))
            if x[-1] < x[0]:
                run, x = run[::-1], x[::-1]
            arcs.append( ArcSegment(graph.x1, run, x, L) )
    if scene is not None and refine:
        if graph.periodic:
            for arc in arcs:
                for index in (0, 1):
                    arc.set_end(index, refine_arc_end(scene, arc, index, angleTolerance=angleTolerance, **traceOptions))
        else:
            refine_sweep_ends(scene, graph, arcs, angleTolerance=angleTolerance, **traceOptions)
    LOGGER.report("graph of x1=%.6g has %i arcs"%(graph.x1, len(arcs)))
    return arcs

def _reverse_ray(scene, x1, angle, options):
    try:
        trajectory = trace_angle(scene, x1, angle, **options)
    except NumericalError:
        return None
    return trajectory

def _same_branch(trajectory, reference, period):
    return trajectory is not None and trajectory.order == reference.order and \
           is_continuous(trajectory.totalTime, trajectory.endParameter, reference.totalTime, reference.endParameter, period)

def _graze_position(trajectory):
    positions = trajectory.tangencyPositions
    if len(positions) == 1 and positions[0] != "inner":
        return positions[0]
    return None

def _limit_end(scene, arc, point, angle, inside, outside, boundary=False):
    """End limit of arc next to point from the rays leaving x1 on both sides
    of a transition. Returns the end index and the ArcEnd."""
    L  = arc.period
    y  = inside.endParameter
    k  = [p.index for p in arc.points].index(point.index)
    xk = arc.x[k]
    x  = xk + periodic_difference(y, xk, L)
    side = 1 if x <= xk else -1
    out  = boundary_angle(scene, y, inside.end.velocity, outgoing=True)
    kind, position = ("boundary" if boundary else "station"), None
    if outside is not None and abs(outside.order-inside.order) == 1 and \
       is_continuous(inside.totalTime, y, outside.totalTime, outside.endParameter, L, tolerance=1e-6):
        kind = "graze"
        position = _graze_position(inside if inside.order > outside.order else outside)
    return (0 if side == 1 else 1), ArcEnd(FLOAT_TYPE(x), inside.totalTime, FLOAT_TYPE(np.sin(out)), FLOAT_TYPE(angle), kind, side, position)

def refine_arc_end(scene, arc, index, angleTolerance=1e-12, maxStep=0.5, **traceOptions):
    """
    Limit of an arc of a station sweep at its lower (0) or upper (1) end.
    Rays of the arc are the reverses of rays leaving x1, so the end is found
    by moving the angle at x1 away from the arc until the order changes or
    the time jumps, then bisecting.

    :Returns:
        #. end (ArcEnd): The refined end.
    """
    L       = arc.period
    end     = arc.ends[index]
    point   = arc.points[0] if index == 0 else arc.points[-1]
    outward = -1 if index == 0 else 1
    phi0    = end.endAngle
    limit   = PI/2 - 1e-9
    start   = _reverse_ray(scene, arc.x1, phi0, traceOptions)
    if start is None or start.order != arc.order:
        LOGGER.warn("arc end of branch %s at x=%.6g does not trace back to its branch"%(str(arc.key), end.x))
        return end
    def moves_out(phi):
        trajectory = _reverse_ray(scene, arc.x1, phi, traceOptions)
        if not _same_branch(trajectory, start, L):
            return False
        return np.sign(periodic_difference(trajectory.endParameter, start.endParameter, L)) == outward
    direction = None
    for d in (1., -1.):
        if moves_out(np.clip(phi0 + d*1e-6, -limit, limit)):
            direction = d
            break
    if direction is None:
        LOGGER.warn("arc end of branch %s at x=%.6g could not be refined"%(str(arc.key), end.x))
        return end
    inside, insideRay, step = phi0, start, 1e-4
    outside, outsideRay     = None, None
    while True:
        phi = inside + direction*step
        if abs(phi) >= limit:
            phi = direction*limit
        trajectory = _reverse_ray(scene, arc.x1, phi, traceOptions)
        if not _same_branch(trajectory, insideRay, L):
            outside, outsideRay = phi, trajectory
            break
        inside, insideRay = phi, trajectory
        if abs(phi) >= limit:
            break
        step = min(2*step, maxStep)
    if outside is not None:
        while abs(outside-inside) > angleTolerance:
            middle = 0.5*(inside+outside)
            trajectory = _reverse_ray(scene, arc.x1, middle, traceOptions)
            if _same_branch(trajectory, insideRay, L):
                inside, insideRay = middle, trajectory
            else:
                outside, outsideRay = middle, trajectory
    _, limitEnd = _limit_end(scene, arc, point, inside, insideRay, outsideRay, boundary=outside is None)
    return limitEnd

def _sweep_transitions(scene, x1, lo, hi, tolerance, options, depth=0):
    # [((angle, ray), (angle, ray))] brackets of elementary branch changes between lo and hi
    L = scene.domain.length
    (a, A), (b, B) = lo, hi
    while b-a > tolerance:
        m = 0.5*(a+b)
        M = _reverse_ray(scene, x1, m, options)
        if M is None:
            return []
        onLo, onHi = _same_branch(M, A, L), _same_branch(M, B, L)
        if onLo and onHi:
            return []
        if onLo:
            a, A = m, M
        elif onHi:
            b, B = m, M
        else:
            if depth > 12:
                return []
            return _sweep_transitions(scene, x1, (a, A), (m, M), tolerance, options, depth+1) + \
                   _sweep_transitions(scene, x1, (m, M), (b, B), tolerance, options, depth+1)
    return [((a, A), (b, B))]

def refine_sweep_ends(scene, graph, arcs, angleTolerance=1e-12, **traceOptions):
    """
    Refine the ends of the arcs of a station graph in place. Neighbouring
    directions at x1 owned by different arcs bracket one or more branch
    changes, located by bisection on the angle at x1. The first change
    ends the lower arc, the last one the upper arc.

    :Parameters:
        #. scene (Scene): The scene.
        #. graph (TravelGraph): A graph with sweep 'angle'.
        #. arcs (list): ArcSegment list extracted from graph.
        #. angleTolerance (number): Angle tolerance of the bisection.
    """
    assert graph.sweep == "angle", LOGGER.error("sweep ends are refined on station graphs only")
    owner = {}
    for a, arc in enumerate(arcs):
        for p in arc.points:
            owner[p.index] = (a, p)
    indexes = sorted(owner)
    for i, j in zip(indexes[:-1], indexes[1:]):
        (a, p), (b, q) = owner[i], owner[j]
        if a == b:
            continue
        P = _reverse_ray(scene, graph.x1, p.endAngle, traceOptions)
        Q = _reverse_ray(scene, graph.x1, q.endAngle, traceOptions)
        if P is None or Q is None:
            continue
        transitions = _sweep_transitions(scene, graph.x1, (p.endAngle, P), (q.endAngle, Q), angleTolerance, traceOptions)
        if not len(transitions):
            LOGGER.report("no branch change located between directions %i and %i at x1=%.6g"%(i, j, graph.x1))
            continue
        if len(transitions) > 1:
            LOGGER.report("%i branch changes between directions %i and %i at x1=%.6g"%(len(transitions), i, j, graph.x1))
        (angle, inside), (_, outside) = transitions[0]
        k, end = _limit_end(scene, arcs[a], p, angle, inside, outside)
        arcs[a].set_end(k, end)
        (_, outside), (angle, inside) = transitions[-1]
        k, end = _limit_end(scene, arcs[b], q, angle, inside, outside)
        arcs[b].set_end(k, end)

def gradient_of_time(arcs, minSamples=5, threshold=1e-4):
    """
    Compare the derivative of every arc generator with the gradient
    predicted by the start directions, at interior samples.

    :Returns:
        #. report (dict): maxDeviation, per arc deviations, number of arcs
           checked and whether the maximum is under threshold.
    """
    deviations = []
    for arc in arcs:
        if len(arc.x) < max(5, minSamples):
            deviations.append(None)
            continue
        spline = CubicSpline(arc.x, arc.t)
        d = np.abs(spline(arc.x[2:-2], 1) - arc.gradients[2:-2])
        deviations.append(FLOAT_TYPE(np.max(d)) if len(d) else None)
    checked = [d for d in deviations if d is not None]
    maxDeviation = FLOAT_TYPE(max(checked)) if len(checked) else FLOAT_TYPE(0)
    return {"maxDeviation":maxDeviation, "deviations":deviations, "checked":len(checked),
            "passed":bool(maxDeviation<=threshold)}

def detect_cusps(arcs, tolerance=1e-5, unpaired=None):
    """
    Pair graze ends of arcs sharing their limit position, time and
    gradient. Paired arcs must differ in order by exactly one and lie on
    the same side of the cusp.

    :Parameters:
        #. arcs (list): ArcSegment list with refined ends.
        #. tolerance (number): Matching tolerance.
        #. unpaired (None, list): Filled with (arc index, end index) of
           graze ends left unpaired.

    :Returns:
        #. cusps (list): CuspPoint list.
    """
    ends = [(i, k, arc.ends[k]) for i, arc in enumerate(arcs) for k in (0, 1) if arc.ends[k].kind == "graze"]
    cusps, used = [], set()
    for a, (i, k, e) in enumerate(ends):
        if (i, k) in used:
            continue
        matches = [(j, m, f) for (j, m, f) in ends[a+1:] if j != i and (j, m) not in used and
                   abs(periodic_difference(e.x, f.x, arcs[i].period)) < tolerance and
                   abs(e.t-f.t) < tolerance and abs(e.gradient-f.gradient) < tolerance]
        if len(matches) != 1:
            continue
        j, m, f = matches[0]
        lower, upper = (i, j) if arcs[i].order < arcs[j].order else (j, i)
        assert abs(arcs[i].order-arcs[j].order) == 1, LOGGER.error("cusp arcs of orders %i and %i do not differ by one"%(arcs[i].order, arcs[j].order))
        assert e.side == f.side, LOGGER.error("cusp arcs at x=%.10g are not on the same side"%e.x)
        used.update([(i, k), (j, m)])
        cusps.append( CuspPoint(e.x, e.t, (lower, upper), e.gradient, (arcs[lower].order, arcs[upper].order),
                                e.side, FLOAT_TYPE(-np.arcsin(np.clip(e.gradient, -1, 1))), e.endAngle,
                                e.grazePosition if e.grazePosition is not None else f.grazePosition) )
    left = [(i, k) for (i, k, e) in ends if (i, k) not in used]
    for i, k in left:
        LOGGER.warn("arc %i end %i at x=%.10g is unpaired"%(i, k, arcs[i].ends[k].x))
    if unpaired is not None:
        unpaired.extend(left)
    return cusps


class Echograph(object):
    """
    Planar embedding of a travelling-time graph, one polyline per arc.

    :Parameters:
        #. arcs (list): (order, (m,2) points) tuples.
        #. adjacency (list): (arc, arc, order, order) tuples at cusps.
    """
    def __init__(self, arcs, adjacency):
        self.__arcs      = list(arcs)
        self.__adjacency = list(adjacency)

    @property
    def arcs(self):
        return list(self.__arcs)

    @property
    def adjacency(self):
        return list(self.__adjacency)

    @property
    def adjacencyValid(self):
        """Whether arcs meeting at cusps differ in order by exactly one."""
        return all(abs(a[3]-a[2]) == 1 for a in self.__adjacency)

def embed(scene, x, t):
    """Send (x, t) to P(x) + t eta(x), eta the chart unit outward normal."""
    x = np.atleast_1d(x)
    t = np.atleast_1d(t)
    P = scene.domain.position(x)
    N = np.array([scene.domain.outward_normal(s) for s in x])
    N = N/np.linalg.norm(N, axis=1)[:,None]
    return P + t[:,None]*N

def echograph(scene, arcs, cusps=(), maxOrder=3):
    """
    Echograph of a graph's arcs up to maxOrder.

    :Parameters:
        #. scene (Scene): The scene.
        #. arcs (list): ArcSegment list.
        #. cusps (list): CuspPoint list for the adjacency.
        #. maxOrder (int): Highest drawn order.

    :Returns:
        #. echograph (Echograph): The embedding.
    """
    kept, lines = {}, []
    for i, arc in enumerate(arcs):
        if arc.order > maxOrder:
            continue
        x = np.concatenate([[arc.ends[0].x], arc.x, [arc.ends[1].x]])
        t = np.concatenate([[arc.ends[0].t], arc.t, [arc.ends[1].t]])
        kept[i] = len(lines)
        lines.append( (arc.order, embed(scene, x, t)) )
    adjacency = [(kept[c.arcs[0]], kept[c.arcs[1]], c.orders[0], c.orders[1]) for c in cusps
                 if c.arcs[0] in kept and c.arcs[1] in kept]
    graph = Echograph(lines, adjacency)
    if not graph.adjacencyValid:
        LOGGER.warn("echograph has cusps joining arcs whose orders do not differ by one")
    return graph
