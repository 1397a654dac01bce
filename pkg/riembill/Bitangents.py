"""
Bitangents enumerates the smooth geodesics tangent to two obstacles and
infers the number of obstacles from the count of doubly tangent
non-reflecting rays.

Every pair of disjoint strictly convex obstacles has exactly four
undirected common tangent geodesics, two outer and two inner ones, each
carrying a distinct sign pattern (r_l, r_j). Here r_l is the sign of the
geodesic direction against the anti-clockwise tangent of obstacle l at the
contact. Each undirected bitangent is two directed rays, so n obstacles
give 4n(n-1) directed doubly tangent rays.
"""
# standard libraries imports
import time
from collections import namedtuple

# external libraries imports
import numpy as np
from scipy.optimize import root

# riembill imports
from riembill.Globals import FLOAT_TYPE, PRECISION, LOGGER
from riembill.Core.Collection import raise_error, is_integer, periodic_difference, wrap_parameter, get_elapsed_time
from riembill.Core.Errors import CountMismatch, NoIntegerSolution, NumericalError
from riembill.Core.Chart import PhaseState
from riembill.Billiard import first_hit

Bitangent = namedtuple("Bitangent", ["pair", "sl", "sj", "signs", "fromIndex", "toIndex",
                                     "start", "end", "length", "contacts", "startParameter", "endParameter"])
Bitangent.__doc__ = """A directed common tangent geodesic of obstacles pair=(l,j),
l<j. sl and sj are the contact parameters, signs=(r_l, r_j). The ray starts
on the boundary of S with state start, touches fromIndex then toIndex at
arclengths contacts and leaves S at end after length."""


def _contact_points(scene, l, j, sl, sj):
    Kl, Kj = scene.obstacles[l], scene.obstacles[j]
    return Kl.position(sl), Kj.position(sj)

def _tangency_residual(scene, l, j, x):
    chart  = scene.chart
    Kl, Kj = scene.obstacles[l], scene.obstacles[j]
    p, q   = _contact_points(scene, l, j, x[0], x[1])
    u = chart.geodesic_between(p, q).velocity
    w = -chart.geodesic_between(q, p).velocity
    return np.array([chart.inner(p, u, Kl.outward_normal(x[0])),
                     chart.inner(q, w, Kj.outward_normal(x[1]))], dtype=FLOAT_TYPE)

def _solve_pair(scene, l, j, nSeeds, tolerance):
    Kl, Kj = scene.obstacles[l], scene.obstacles[j]
    seedsL = (np.arange(nSeeds)+0.5)*Kl.length/nSeeds
    seedsJ = (np.arange(nSeeds)+0.5)*Kj.length/nSeeds
    solutions = []
    for a in seedsL:
        for b in seedsJ:
            try:
                sol = root(lambda x: _tangency_residual(scene, l, j, x), [a, b], method="hybr", options={"xtol":1e-13})
            except NumericalError:
                continue
            if not sol.success or np.max(np.abs(sol.fun)) > 1e-10:
                continue
            s = np.array([wrap_parameter(sol.x[0], Kl.length), wrap_parameter(sol.x[1], Kj.length)])
            duplicate = any(abs(periodic_difference(s[0], t[0], Kl.length))<tolerance and
                            abs(periodic_difference(s[1], t[1], Kj.length))<tolerance for t in solutions)
            if not duplicate:
                solutions.append(s)
    return solutions

def _directed_record(scene, l, j, sl, sj, reverse):
    chart  = scene.chart
    Kl, Kj = scene.obstacles[l], scene.obstacles[j]
    p, q   = _contact_points(scene, l, j, sl, sj)
    u  = chart.geodesic_between(p, q).velocity
    w  = -chart.geodesic_between(q, p).velocity
    rl = int(np.sign(chart.inner(p, u, Kl.tangent(sl))))
    rj = int(np.sign(chart.inner(q, w, Kj.tangent(sj))))
    d  = chart.distance(p, q)
    if reverse:
        first, firstVelocity, second, secondVelocity = q, -w, p, -u
        fromIndex, toIndex = j, l
    else:
        first, firstVelocity, second, secondVelocity = p, u, q, w
        fromIndex, toIndex = l, j
    back = first_hit(scene, PhaseState(first, -firstVelocity), obstacles=False)
    ahead = first_hit(scene, PhaseState(second, secondVelocity), obstacles=False)
    start = PhaseState(back.point, -back.velocity)
    return Bitangent((l, j), FLOAT_TYPE(sl), FLOAT_TYPE(sj), (rl, rj), fromIndex, toIndex, start,
                     PhaseState(ahead.point, ahead.velocity), back.arclength+d+ahead.arclength,
                     (back.arclength, back.arclength+d), back.parameter, ahead.parameter)

def find_bitangents(scene, l, j, nSeeds=64, dedupTolerance=1e-5, retries=1):
    """
    Find the common tangent geodesics of obstacles l and j. The tangency
    system g(u, N_l(s_l)) = 0, g(w, N_j(s_j)) = 0, where u and w are the
    directions of the geodesic from the contact on l to the contact on j
    at both ends, is solved by Powell's hybrid method from a grid of
    nSeeds x nSeeds seeds.

    :Parameters:
        #. scene (Scene): The scene.
        #. l, j (int): Obstacle indexes, l != j.
        #. nSeeds (int): Seeds per curve parameter.
        #. dedupTolerance (number): Parameter distance merging solutions.
        #. retries (int): Retries with twice the seeds per parameter when the
           count of undirected solutions is not 4.

    :Returns:
        #. bitangents (list): 8 directed Bitangent records, the two
           directions of each of the 4 undirected bitangents.
    """
    assert is_integer(l) and is_integer(j), LOGGER.error("obstacle indexes must be integers")
    assert l != j, LOGGER.error("obstacle indexes must differ")
    assert is_integer(nSeeds) and nSeeds>=2, LOGGER.error("nSeeds must be an integer >= 2")
    l, j = (int(l), int(j)) if l<j else (int(j), int(l))
    tic = time.time()
    solutions = _solve_pair(scene, l, j, int(nSeeds), dedupTolerance)
    for _ in range(retries):
        if len(solutions) == 4:
            break
        nSeeds = 2*nSeeds
        LOGGER.warn("obstacles %i and %i gave %i bitangents, retrying with %i seeds per parameter"%(l, j, len(solutions), nSeeds))
        solutions = _solve_pair(scene, l, j, nSeeds, dedupTolerance)
    if len(solutions) != 4:
        raise_error(CountMismatch, "obstacles %i and %i have %i bitangents instead of 4"%(l, j, len(solutions)), solutions=solutions)
    records = []
    for sl, sj in sorted(solutions, key=lambda s: (s[0], s[1])):
        records.append(_directed_record(scene, l, j, sl, sj, False))
        records.append(_directed_record(scene, l, j, sl, sj, True))
    LOGGER.report("obstacles %i and %i bitangents found in %s"%(l, j, get_elapsed_time(tic)))
    return records

def sign_rule_holds(bitangents):
    """
    Check the sign rule on the undirected bitangents of one pair: the four
    sign patterns are distinct.
    """
    patterns = set(b.signs for b in bitangents if b.fromIndex == b.pair[0])
    return len(patterns) == len([b for b in bitangents if b.fromIndex == b.pair[0]])

def all_bitangents(scene, nSeeds=64, dedupTolerance=1e-5):
    """Directed bitangents of every obstacle pair."""
    records = []
    for l in range(scene.nObstacles):
        for j in range(l+1, scene.nObstacles):
            records.extend(find_bitangents(scene, l, j, nSeeds=nSeeds, dedupTolerance=dedupTolerance))
    return records

def count_obstacles(t02, convention="any", allowPairBound=False):
    """
    Number of obstacles n from the number of doubly tangent non-reflecting
    rays. The directed count is 4n(n-1), the undirected one 2n(n-1).

    :Parameters:
        #. t02 (int, collection): The count or the collection of points.
        #. convention (str): 'directed', 'undirected' or 'any'. 'any' tries
           the directed reading first.
        #. allowPairBound (bool): Accept counts below the two obstacle
           value as n=2, following the at most 8 points rule.

    :Returns:
        #. n (int): Number of obstacles.
    """
    count = t02 if is_integer(t02) else len(t02)
    count = int(count)
    assert count>=0, LOGGER.error("count must be >= 0")
    assert convention in ("directed", "undirected", "any"), LOGGER.error("convention must be 'directed', 'undirected' or 'any'")
    readings = {"directed":4, "undirected":2}
    order    = ["directed", "undirected"] if convention=="any" else [convention]
    candidates, residuals = [], []
    for reading in order:
        factor = readings[reading]
        n = 0.5*(1.+np.sqrt(1.+4.*count/factor))
        nearest = int(round(n))
        residual = count - factor*nearest*(nearest-1)
        if nearest>=2 and residual == 0:
            return nearest
        candidates.append( (reading, max(2, int(np.floor(n))), int(np.ceil(n))) )
        residuals.append(residual)
        if allowPairBound and 0 < count < 2*factor:
            return 2
    raise_error(NoIntegerSolution, "no integer obstacle count solves %s*n(n-1) = %i"%(" or ".join(str(readings[r]) for r in order), count),
                candidates=candidates, residual=residuals)

def classify_t01_arcs(strata, nObstacles=None):
    """
    Inventory of the maximal single tangency non-reflecting ray families.

    :Parameters:
        #. strata (TangentStrata): Result of Strata.tangent_strata.
        #. nObstacles (None, int): Expected obstacle count. None infers it
           from the double tangency events.

    :Returns:
        #. inventory (dict): count, expected, matches and counts per cusp side.
    """
    initial = [f for f in strata.families if f.isInitial]
    if nObstacles is None:
        try:
            nObstacles = count_obstacles(strata.t02Count, convention="directed")
        except NoIntegerSolution:
            nObstacles = None
    expected = 4*nObstacles*(nObstacles-1) if nObstacles is not None else None
    bySide = {}
    for f in initial:
        bySide[f.rays[0].side] = bySide.get(f.rays[0].side, 0) + 1
    inventory = {"count":len(initial), "expected":expected, "nObstacles":nObstacles,
                 "matches":expected is not None and len(initial)==expected, "bySide":bySide}
    if not inventory["matches"]:
        LOGGER.warn("found %i initial tangent families, expected %s"%(len(initial), expected))
    return inventory
