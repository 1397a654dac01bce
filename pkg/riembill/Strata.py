"""
Strata sorts the singly tangent rays of a dataset into maximal families
and isolates the doubly tangent ones.

Every station of the dataset is an end point x1. Its travelling-time
graph is read from the rays leaving it, split into arcs and searched for
cusps. A cusp at x is a ray from x, in the limit direction -grad tau,
that reaches x1 grazing an obstacle: its reverse leaves the station
grazing at its first or last contact. Grazing rays of neighbouring
stations with the same orders on both sides of the cusp, the same graze
position and the same side form a family. Families end where a ray
grazes twice: four families meet at such an event and, for non-reflecting
rays, two of them are initial families whose rays touch nothing but the
grazed boundary.
"""
# standard libraries imports
import time
from collections import namedtuple

# external libraries imports
import numpy as np

# riembill imports
from riembill.Globals import FLOAT_TYPE, LOGGER
from riembill.Core.Collection import raise_error, wrap_parameter, get_elapsed_time, chunked_map
from riembill.Core.Errors import StratumInconsistency, AmbiguousChaining
from riembill.TravelTimes import station_graph, extract_arcs, detect_cusps

TangentRay = namedtuple("TangentRay", ["xIndex", "x", "angle", "y", "yAngle", "t", "orders", "firstContact", "side"])
TangentRay.__doc__ = """A grazing ray leaving station x at angle, reaching y
after t. yAngle is the start angle at y of the reversed ray, the limit
direction of the cusp at y. orders are the orders on both sides of the
cusp, side is +1 when both arcs of the cusp lie at larger parameters than y."""

StrataEvent = namedtuple("StrataEvent", ["xIndex", "x", "angle", "members", "nInitial", "sideSplit"])
StrataEvent.__doc__ = """Double tangency located between stations xIndex and
xIndex+1. members are family indexes, sideSplit the number of members
ending and starting there."""


def _station_rays(args):
    scene, k, row, angleTolerance, options = args
    graph = station_graph(scene, row, row[0].xIndex)
    try:
        arcs = extract_arcs(graph, scene=scene, angleTolerance=angleTolerance, **options)
    except AmbiguousChaining as err:
        LOGGER.warn("station %i dropped: %s"%(k, err))
        return None, 0
    unpaired = []
    cusps = detect_cusps(arcs, unpaired=unpaired)
    L = scene.domain.length
    rays = []
    for c in cusps:
        if c.grazePosition is None:
            LOGGER.report("cusp at x=%.6g of station %i has no single first or last graze"%(c.x, k))
            continue
        rays.append( TangentRay(k, FLOAT_TYPE(graph.x1), FLOAT_TYPE(c.endAngle), FLOAT_TYPE(wrap_parameter(c.x, L)),
                                FLOAT_TYPE(c.startAngle), c.t, tuple(c.orders), c.grazePosition == "first", int(c.side)) )
    return rays, len(unpaired)


class TangentFamily(object):
    """
    Maximal family of grazing rays sharing graze position, side and the
    orders on both sides of their cusps, over consecutive stations.

    :Parameters:
        #. rays (list): TangentRay list in station order.
        #. closed (bool): Whether the family goes all around the boundary.
    """
    def __init__(self, rays, closed=False):
        assert len(rays), LOGGER.error("a family needs at least one ray")
        self.__rays   = list(rays)
        self.__closed = bool(closed)

    def __repr__(self):
        r = self.__rays[0]
        return "TangentFamily(orders=%s, first=%s, side=%i, n=%i)"%(r.orders, r.firstContact, r.side, len(self.__rays))

    def __len__(self):
        return len(self.__rays)

    @property
    def rays(self):
        return list(self.__rays)

    @property
    def key(self):
        r = self.__rays[0]
        return (r.firstContact, r.side, r.orders)

    @property
    def orders(self):
        return self.__rays[0].orders

    @property
    def firstContact(self):
        return self.__rays[0].firstContact

    @property
    def isInitial(self):
        """Family of non-reflecting rays grazing once: the cusps join
        orders 0 and 1."""
        return tuple(self.__rays[0].orders) == (0, 1)

    @property
    def closed(self):
        return self.__closed

    @property
    def stations(self):
        return [r.xIndex for r in self.__rays]

    @property
    def angles(self):
        return np.array([r.angle for r in self.__rays], dtype=FLOAT_TYPE)

    @property
    def maxAngleJump(self):
        """Largest angle change between consecutive stations."""
        return FLOAT_TYPE(np.max(np.abs(np.diff(self.angles)))) if len(self.__rays)>1 else FLOAT_TYPE(0)

    def append(self, ray):
        self.__rays.append(ray)

    def extend(self, family):
        self.__rays.extend(family.rays)

    def set_closed(self, closed):
        self.__closed = bool(closed)


class TangentStrata(object):
    """
    Grazing rays, their families and the double tangency events.

    :Parameters:
        #. rays (list): TangentRay list.
        #. families (list): TangentFamily list.
        #. events (list): StrataEvent list.
        #. nStations (int): Number of analysed stations.
        #. droppedStations (int): Stations whose arcs could not be chained.
        #. unpairedEnds (int): Graze ends of arcs left without a cusp.
    """
    def __init__(self, rays, families, events, nStations, droppedStations=0, unpairedEnds=0):
        self.__rays      = list(rays)
        self.__families  = list(families)
        self.__events    = list(events)
        self.__nStations = int(nStations)
        self.__dropped   = int(droppedStations)
        self.__unpaired  = int(unpairedEnds)

    @property
    def rays(self):
        return list(self.__rays)

    @property
    def families(self):
        return list(self.__families)

    @property
    def events(self):
        return list(self.__events)

    @property
    def nStations(self):
        return self.__nStations

    @property
    def droppedStations(self):
        return self.__dropped

    @property
    def unpairedEnds(self):
        return self.__unpaired

    @property
    def initialFamilies(self):
        return [f for f in self.__families if f.isInitial]

    @property
    def t02Events(self):
        """Events where two initial families meet: directed doubly tangent
        non-reflecting rays."""
        return [e for e in self.__events if e.nInitial == 2]

    @property
    def t02Count(self):
        return len(self.t02Events)

    def report(self):
        """Json ready summary."""
        splits = {}
        for e in self.__events:
            key = "%i/%i"%e.sideSplit
            splits[key] = splits.get(key, 0) + 1
        return {"rays":len(self.__rays), "families":len(self.__families), "initialFamilies":len(self.initialFamilies),
                "lastContactFamilies":sum(1 for f in self.__families if not f.firstContact),
                "events":len(self.__events), "t02":self.t02Count, "undirectedT02":self.t02Count/2.,
                "fourMemberEvents":sum(1 for e in self.__events if len(e.members)==4), "sideSplits":splits,
                "maxAngleJump":FLOAT_TYPE(max([f.maxAngleJump for f in self.__families] or [0])),
                "droppedStations":self.__dropped, "unpairedEnds":self.__unpaired}


def _stitch(rays, nStations, stitchAngle):
    byStation = {}
    for r in rays:
        byStation.setdefault(r.xIndex, []).append(r)
    families, open_ = [], {}
    for k in range(nStations):
        nextOpen = {}
        for r in sorted(byStation.get(k, []), key=lambda r: r.angle):
            key = (r.firstContact, r.side, r.orders)
            candidates = [f for f in open_.get(key, []) if f not in nextOpen.get(key, []) and
                          abs(f.rays[-1].angle-r.angle) < stitchAngle]
            if len(candidates):
                family = min(candidates, key=lambda f: abs(f.rays[-1].angle-r.angle))
                family.append(r)
            else:
                family = TangentFamily([r])
                families.append(family)
            nextOpen.setdefault(key, []).append(family)
        open_ = nextOpen
    # periodic wrap
    for family in list(families):
        if family.stations[-1] != nStations-1 or family not in families:
            continue
        r = family.rays[-1]
        heads = [f for f in families if f is not family and f.stations[0] == 0 and f.key == family.key and
                 abs(f.rays[0].angle-r.angle) < stitchAngle]
        if len(heads):
            head = min(heads, key=lambda f: abs(f.rays[0].angle-r.angle))
            family.extend(head)
            families.remove(head)
        elif len(family) == nStations:
            family.set_closed(True)
    for family in families:
        if family.stations[0] == 0 and len(family) >= nStations:
            family.set_closed(True)
    return families

def _events(families, nStations, eventAngle):
    ends = []
    for i, f in enumerate(families):
        if f.closed:
            continue
        last, first = f.rays[-1], f.rays[0]
        ends.append( (last.xIndex % nStations, last.angle, i, "end") )
        ends.append( ((first.xIndex-1) % nStations, first.angle, i, "start") )
    events = []
    for k in sorted(set(e[0] for e in ends)):
        here = sorted([e for e in ends if e[0] == k], key=lambda e: e[1])
        cluster = [here[0]]
        for e in here[1:]:
            if e[1]-cluster[-1][1] < eventAngle:
                cluster.append(e)
            else:
                events.append(cluster)
                cluster = [e]
        events.append(cluster)
    return events

def tangent_strata(scene, dataset, stationStride=1, angleTolerance=1e-12, stitchAngle=0.25, eventAngle=0.1,
                   strict=False, nThreads=1, **traceOptions):
    """
    Grazing rays, tangent families and double tangency events of a dataset.
    Only the travelling times, orders, tangency counts and directions of
    the rays are read. Arc ends are located by re-aiming rays at the
    stations.

    :Parameters:
        #. scene (Scene): The scene.
        #. dataset (list): TravelSample list.
        #. stationStride (int): Use every stationStride-th station.
        #. angleTolerance (number): Angle tolerance of the arc end
           bisection.
        #. stitchAngle (number): Largest angle change of a family between
           neighbouring stations.
        #. eventAngle (number): Angle tolerance clustering family ends into
           events.
        #. strict (bool): Raise StratumInconsistency when an event does not
           have exactly four members.
        #. nThreads (int): Worker processes.

    :Returns:
        #. strata (TangentStrata): The strata.
    """
    tic = time.time()
    rows = {}
    for s in dataset:
        rows.setdefault(s.xIndex, []).append(s)
    allStations = sorted(rows)
    stations    = allStations[::int(stationStride)]
    nStations   = len(stations)
    items = [(scene, k, rows[xIndex], angleTolerance, traceOptions) for k, xIndex in enumerate(stations)]
    results  = chunked_map(_station_rays, items, nThreads=nThreads)
    rays     = [r for part, _ in results if part is not None for r in part]
    dropped  = sum(1 for part, _ in results if part is None)
    unpaired = sum(n for _, n in results)
    families = _stitch(rays, nStations, stitchAngle)
    events   = []
    for cluster in _events(families, nStations, eventAngle):
        members  = sorted(set(e[2] for e in cluster))
        nInitial = sum(1 for m in members if families[m].isInitial)
        split    = (sum(1 for e in cluster if e[3]=="end"), sum(1 for e in cluster if e[3]=="start"))
        k        = cluster[0][0]
        event    = StrataEvent(k, FLOAT_TYPE(rows[stations[k]][0].x), FLOAT_TYPE(np.mean([e[1] for e in cluster])),
                               members, nInitial, split)
        if len(members) != 4:
            message = "double tangency near station %i has %i families instead of 4"%(k, len(members))
            if strict:
                raise_error(StratumInconsistency, message, event=event)
            LOGGER.warn(message)
        events.append(event)
    strata = TangentStrata(rays, families, events, nStations, droppedStations=dropped, unpairedEnds=unpaired)
    LOGGER.info("tangent strata: %i rays, %i families, %i events in %s"%(len(rays), len(families), len(events), get_elapsed_time(tic)))
    return strata
