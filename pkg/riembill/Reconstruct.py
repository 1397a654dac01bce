"""
Reconstruct recovers the obstacles' boundaries from grazing ray families.

Every first contact family is a one parameter family of geodesics tangent
to one obstacle. Its envelope, computed from the intersections of
consecutive geodesics, is a piece of that obstacle's boundary. Pieces are
chained by extension: an arc B extends an arc A when the ray closing A
belongs to B's family, B's envelope starts where A's ends and the joined
curve stays strictly convex. Chains that come back to their start are
closed obstacle boundaries. Only the rays (start point, start direction,
time and the orders on both sides of their cusps) are used, the obstacles
themselves are read only to report the Hausdorff distance to the truth.

.. code-block:: python

    from riembill.Strata import tangent_strata
    from riembill.Reconstruct import reconstruct

    strata = tangent_strata(scene, dataset)
    obstacles, report = reconstruct(scene, strata)
    for obstacle in obstacles:
        print(obstacle.closed, obstacle.hausdorff)
"""
# standard libraries imports
import time
from collections import namedtuple

# external libraries imports
import numpy as np
from scipy.optimize import root

# riembill imports
from riembill.Globals import FLOAT_TYPE, PRECISION, PI, LOGGER
from riembill.Core.Collection import raise_error, get_elapsed_time, periodic_difference, cross2, hausdorff_distance, \
                                     point_polyline_distances, discrete_turning
from riembill.Core.Errors import NoIntersection, DivergedEnvelope, Ambiguity, IncompleteCoverage, \
                                 StitchFailure, NumericalError
from riembill.Core.Chart import PhaseState, EuclideanPlane
from riembill.Billiard import boundary_state, trace_angle

STITCH_TOLERANCE = FLOAT_TYPE(1e-4)
MIN_PIECE_FRACTION = FLOAT_TYPE(1e-4)
RAY_TOLERANCE = FLOAT_TYPE(1e-5)
VERIFY_TOLERANCE = FLOAT_TYPE(1e-6)

Extension = namedtuple("Extension", ["kind", "arc"])
Extension.__doc__ = """Result of an extension step. kind is 'next' with the
extending arc, 'conjugate' with the conjugate arc to continue from, 'closed'
when the chain came back to its start or 'stuck'."""


def geodesic_intersection(chart, first, second, firstLength, secondLength, nSamples=256):
    """
    Intersection of two geodesic segments.

    :Parameters:
        #. chart (SurfaceChart): The chart.
        #. first, second (PhaseState): Segment starts.
        #. firstLength, secondLength (number): Segment lengths.

    :Returns:
        #. point (np.ndarray): The intersection.
        #. s (np.ndarray): Arclengths (s1, s2) of the point on both.
    """
    if isinstance(chart, EuclideanPlane):
        v1 = first.velocity/np.linalg.norm(first.velocity)
        v2 = second.velocity/np.linalg.norm(second.velocity)
        det = cross2(v1, -v2)
        if abs(det) < 1e-14:
            raise_error(NoIntersection, "geodesics are parallel")
        d  = second.point-first.point
        s1 = cross2(d, -v2)/det
        s2 = cross2(v1, d)/det
        return first.point+s1*v1, np.array([s1, s2])
    s1 = np.linspace(0., firstLength, nSamples)
    s2 = np.linspace(0., secondLength, nSamples)
    P, _ = chart.flow_points(first, s1)
    Q, _ = chart.flow_points(second, s2)
    # segment pair intersections of both polylines
    A, B = P[:-1], P[1:]
    C, D = Q[:-1], Q[1:]
    r  = (B-A)[:,None,:]
    q  = (D-C)[None,:,:]
    den = cross2(r, q)
    w   = C[None,:,:]-A[:,None,:]
    with np.errstate(divide="ignore", invalid="ignore"):
        u = cross2(w, q)/den
        v = cross2(w, r)/den
    hits = np.argwhere((u>=0) & (u<=1) & (v>=0) & (v<=1) & (np.abs(den)>0))
    if not len(hits):
        raise_error(NoIntersection, "geodesics do not intersect within their lengths")
    i, j = hits[0]
    guess = [s1[i]+u[i,j]*(s1[1]-s1[0]), s2[j]+v[i,j]*(s2[1]-s2[0])]
    sol = root(lambda s: chart.flow(first, s[0]).point-chart.flow(second, s[1]).point, guess, method="hybr", options={"xtol":1e-13})
    if not sol.success:
        raise_error(NoIntersection, "geodesic intersection refinement failed")
    return chart.flow(first, sol.x[0]).point, sol.x


class Envelope(object):
    """
    Ordered envelope polyline of a tangent family.

    :Parameters:
        #. points (np.ndarray): (m,2) chart points.
        #. provenance (list): (arc id, ray index, ray index) per point.
        #. velocities (np.ndarray): Direction of the first ray of each pair
           at its point.
        #. reliable (bool): False for single point envelopes.
    """
    def __init__(self, points, provenance, velocities, reliable=True):
        self.__points     = np.asarray(points, dtype=FLOAT_TYPE).reshape(-1,2)
        self.__provenance = list(provenance)
        self.__velocities = np.asarray(velocities, dtype=FLOAT_TYPE).reshape(-1,2)
        self.__reliable   = bool(reliable)

    def __len__(self):
        return len(self.__points)

    @property
    def points(self):
        return self.__points

    @property
    def provenance(self):
        return list(self.__provenance)

    @property
    def velocities(self):
        return self.__velocities

    @property
    def reliable(self):
        return self.__reliable

    @property
    def convexity(self):
        """Discrete turning sign at interior points."""
        return np.sign(discrete_turning(self.__points))

    @property
    def isConvex(self):
        return bool(np.all(self.convexity>0))

    @property
    def spacing(self):
        """Largest distance between consecutive points."""
        if len(self.__points) < 2:
            return FLOAT_TYPE(0)
        return FLOAT_TYPE(np.max(np.linalg.norm(np.diff(self.__points, axis=0), axis=1)))

    @property
    def chartLength(self):
        if len(self.__points) < 2:
            return FLOAT_TYPE(0)
        return FLOAT_TYPE(np.sum(np.linalg.norm(np.diff(self.__points, axis=0), axis=1)))

    def reversed(self):
        return Envelope(self.__points[::-1], self.__provenance[::-1], -self.__velocities[::-1], self.__reliable)


class TangentArc(object):
    """
    A family of geodesics tangent to one obstacle.

    :Parameters:
        #. id (int): Arc id.
        #. states (list): PhaseState starts of the rays, in family order.
        #. lengths (list): Search lengths of the rays.
        #. firstContact (bool): Whether rays graze at their first contact.
        #. isInitial (bool): Whether rays touch nothing else.
        #. rays (None, list): Source TangentRay records.
    """
    def __init__(self, id, states, lengths, firstContact=True, isInitial=False, rays=None):
        assert len(states) == len(lengths), LOGGER.error("states and lengths must have the same size")
        self.__id           = int(id)
        self.__states       = list(states)
        self.__lengths      = [FLOAT_TYPE(l) for l in lengths]
        self.__firstContact = bool(firstContact)
        self.__isInitial    = bool(isInitial)
        self.__rays         = list(rays) if rays is not None else []
        self.__conjugate    = None
        self.__envelope     = None

    def __repr__(self):
        return "TangentArc(id=%i, n=%i, initial=%s)"%(self.__id, len(self.__states), self.__isInitial)

    @classmethod
    def from_family(cls, scene, family, id):
        """Build an arc from a Strata.TangentFamily."""
        rays   = family.rays
        states = [boundary_state(scene, r.x, r.angle) for r in rays]
        return cls(id, states, [r.t for r in rays], firstContact=family.firstContact,
                   isInitial=family.isInitial, rays=rays)

    @property
    def id(self):
        return self.__id

    @property
    def states(self):
        return list(self.__states)

    @property
    def lengths(self):
        return list(self.__lengths)

    @property
    def rays(self):
        return list(self.__rays)

    @property
    def firstContact(self):
        return self.__firstContact

    @property
    def isInitial(self):
        return self.__isInitial

    @property
    def conjugate(self):
        """Id of the conjugate arc or None."""
        return self.__conjugate

    @property
    def envelope(self):
        """Envelope, None until computed."""
        return self.__envelope

    @property
    def terminalRays(self):
        """Start states of the first and last rays."""
        return self.__states[0], self.__states[-1]

    def set_conjugate(self, id):
        self.__conjugate = id

    def set_envelope(self, envelope):
        assert envelope is None or isinstance(envelope, Envelope), LOGGER.error("envelope must be an Envelope")
        self.__envelope = envelope


def envelope(chart, arc, outlierFactor=20.):
    """
    Envelope of a tangent arc from the intersections of consecutive
    geodesics, oriented anti-clockwise.

    :Parameters:
        #. chart (SurfaceChart): The chart.
        #. arc (TangentArc): The arc, at least 2 rays.
        #. outlierFactor (number): Points farther than outlierFactor times
           the median spacing from both neighbours are dropped.

    :Returns:
        #. envelope (Envelope): The envelope.
    """
    states, lengths = arc.states, arc.lengths
    if len(states) < 2:
        raise_error(NoIntersection, "arc %i has fewer than 2 rays"%arc.id)
    points, provenance, velocities = [], [], []
    for k in range(len(states)-1):
        try:
            p, s = geodesic_intersection(chart, states[k], states[k+1], lengths[k], lengths[k+1])
        except NoIntersection:
            LOGGER.warn("arc %i rays %i and %i do not intersect"%(arc.id, k, k+1))
            continue
        points.append(p)
        provenance.append( (arc.id, k, k+1) )
        velocities.append( chart.flow(states[k], s[0]).velocity )
    if not len(points):
        raise_error(NoIntersection, "arc %i has no intersecting consecutive rays"%arc.id)
    points, velocities = np.array(points), np.array(velocities)
    if len(points) >= 3:
        steps  = np.linalg.norm(np.diff(points, axis=0), axis=1)
        median = max(np.median(steps), PRECISION)
        far    = np.concatenate([[steps[0]], steps]) > outlierFactor*median
        far   &= np.concatenate([steps, [steps[-1]]]) > outlierFactor*median
        if np.sum(far) > len(points)//2:
            raise_error(DivergedEnvelope, "arc %i envelope diverges"%arc.id)
        if np.any(far):
            LOGGER.warn("arc %i envelope drops %i outlying points"%(arc.id, np.sum(far)))
            keep = ~far
            points, velocities = points[keep], velocities[keep]
            provenance = [p for p, k in zip(provenance, keep) if k]
    result = Envelope(points, provenance, velocities, reliable=len(points)>=2)
    if len(points) >= 3 and np.sum(discrete_turning(points)) < 0:
        result = result.reversed()
    return result

def join_tolerance(a, b):
    """Distance under which the envelopes of arcs a and b are joined."""
    return FLOAT_TYPE(3*max(a.envelope.spacing, b.envelope.spacing) + STITCH_TOLERANCE)

def terminal_ray(arc):
    """Index of the ray of arc tangent at the end of its envelope."""
    provenance = arc.envelope.provenance
    _, k, l = provenance[-1]
    if len(provenance) >= 2 and provenance[-1][1] < provenance[0][1]:
        return k
    return l

def ray_mismatch(state, arc, maxReach=4.):
    """
    Compare a ray with the ray family of arc interpolated at the ray's
    footpoint. The family is interpolated linearly between its two rays
    nearest the footpoint, extrapolated by at most maxReach rays.

    :Parameters:
        #. state (PhaseState): The ray.
        #. arc (TangentArc): The family.
        #. maxReach (number): Extrapolation limit in rays.

    :Returns:
        #. footpoint (number): Footpoint mismatch.
        #. direction (number): Unit direction mismatch.
        #. allowances (tuple): Interpolation error bounds of footpoint and
           direction from the second differences of the family.
    """
    P = np.array([s.point for s in arc.states], dtype=FLOAT_TYPE)
    V = np.array([s.velocity/np.linalg.norm(s.velocity) for s in arc.states], dtype=FLOAT_TYPE)
    p = np.asarray(state.point, dtype=FLOAT_TYPE)
    v = np.asarray(state.velocity, dtype=FLOAT_TYPE)/np.linalg.norm(state.velocity)
    n = len(P)
    j = int(np.argmin(np.linalg.norm(P-p, axis=1)))
    best = None
    for i in (j-1, j):
        if i < 0 or i+1 >= n:
            continue
        d = P[i+1]-P[i]
        u = np.dot(p-P[i], d)/max(np.dot(d, d), PRECISION)
        outside = max(0., -u, u-1.)
        if best is None or outside < best[0]:
            best = (outside, i, u)
    if best is None or best[0] > maxReach:
        return np.inf, np.inf, (FLOAT_TYPE(0), FLOAT_TYPE(0))
    _, i, u = best
    Q = P[i] + u*(P[i+1]-P[i])
    W = V[i] + u*(V[i+1]-V[i])
    W = W/np.linalg.norm(W)
    allowances = (FLOAT_TYPE(0), FLOAT_TYPE(0))
    if n >= 3:
        m = min(max(i, 1), n-2)
        # linear interpolation error of a quadratic
        weight = abs(u*(u-1.))/2. + 0.125
        allowances = (FLOAT_TYPE(2*weight*np.linalg.norm(P[m-1]-2*P[m]+P[m+1])),
                      FLOAT_TYPE(2*weight*np.linalg.norm(V[m-1]-2*V[m]+V[m+1])))
    return FLOAT_TYPE(np.linalg.norm(Q-p)), FLOAT_TYPE(np.linalg.norm(W-v)), allowances

def is_extension(chart, arcA, arcB, joinTolerance=None, rayTolerance=RAY_TOLERANCE):
    """
    Whether arcB extends arcA. The ray of arcA tangent at the end of its
    envelope must belong to arcB's family: footpoint and direction match
    within rayTolerance beyond the interpolation error of arcB's sampling.
    arcB's envelope must then pass within the join tolerance of the end of
    arcA's envelope, continue beyond it, and the joined polyline must turn
    positively at the joint.

    :Returns:
        #. result (bool): The extension verdict.
    """
    if arcA is arcB or arcA.id == arcB.id:
        return False
    A, B = arcA.envelope, arcB.envelope
    if A is None or B is None or len(A)<2 or len(B)<2:
        return False
    foot, direction, (footAllowance, directionAllowance) = ray_mismatch(arcA.states[terminal_ray(arcA)], arcB)
    if foot > rayTolerance+footAllowance or direction > rayTolerance+directionAllowance:
        return False
    tol = join_tolerance(arcA, arcB) if joinTolerance is None else joinTolerance
    end = A.points[-1]
    d   = np.linalg.norm(B.points-end, axis=1)
    k   = int(np.argmin(d))
    if d[k] > tol or k >= len(B)-1:
        return False
    beyond = B.points[k+1:]
    if np.min(point_polyline_distances(beyond[-1:], A.points, closed=False)) <= tol:
        return False
    joined  = np.vstack([A.points[-3:], beyond[:3]])
    turning = discrete_turning(joined)
    scale   = max(A.spacing, B.spacing)**2
    return bool(np.all(turning > -1e-3*scale))

def _same_envelope(a, b):
    tol = 2*join_tolerance(a, b)
    if hausdorff_distance(a.envelope.points, b.envelope.points, closed=False) > tol:
        return False
    i = len(a.envelope)//2
    j = int(np.argmin(np.linalg.norm(b.envelope.points-a.envelope.points[i], axis=1)))
    va, vb = a.envelope.velocities[i], b.envelope.velocities[j]
    return bool(np.dot(va, vb) < 0)

def build_tangent_arcs(scene, strata, minRays=3, verify=False, **traceOptions):
    """
    First contact tangent arcs of a strata, with envelopes and conjugates.

    :Parameters:
        #. scene (Scene): The scene, its chart and the boundary of S.
        #. strata (TangentStrata): Result of Strata.tangent_strata.
        #. minRays (int): Families with fewer rays are skipped.
        #. verify (bool): Re-trace the first, middle and last rays of every
           family and check they reach their cusp point after their time with
           one of the orders of the cusp.

    :Returns:
        #. arcs (list): TangentArc list.
    """
    arcs = []
    for family in strata.families:
        if not family.firstContact or len(family) < minRays:
            continue
        arc = TangentArc.from_family(scene, family, len(arcs))
        if verify:
            for r in [arc.rays[0], arc.rays[len(arc.rays)//2], arc.rays[-1]]:
                trajectory = trace_angle(scene, r.x, r.angle, **traceOptions)
                if trajectory.order not in r.orders or abs(trajectory.totalTime-r.t) > VERIFY_TOLERANCE or \
                   abs(periodic_difference(trajectory.endParameter, r.y, scene.domain.length)) > VERIFY_TOLERANCE:
                    raise_error(StitchFailure, "arc %i ray at x=%.10g does not reach its cusp at y=%.10g"%(arc.id, r.x, r.y))
        try:
            arc.set_envelope(envelope(scene.chart, arc))
        except (NoIntersection, DivergedEnvelope) as err:
            LOGGER.warn("arc %i skipped: %s"%(arc.id, err))
            continue
        arcs.append(arc)
    initial = [a for a in arcs if a.isInitial]
    for i, a in enumerate(initial):
        if a.conjugate is not None:
            continue
        for b in initial[i+1:]:
            if b.conjugate is None and _same_envelope(a, b):
                a.set_conjugate(b.id)
                b.set_conjugate(a.id)
                break
    LOGGER.report("%i tangent arcs, %i initial, %i conjugate pairs"%(len(arcs), len(initial), sum(1 for a in initial if a.conjugate is not None)//2))
    return arcs

def extend_step(chart, chain, arc, arcs):
    """
    One extension step of a chain.

    :Parameters:
        #. chart (SurfaceChart): The chart.
        #. chain (list): Arcs of the chain so far, chain[0] its start.
        #. arc (TangentArc): Current arc.
        #. arcs (list): All arcs.

    :Returns:
        #. extension (Extension): The step result.
    """
    start = chain[0]
    if len(chain) > 1 and arc is not start:
        tol = join_tolerance(arc, start)
        if np.linalg.norm(arc.envelope.points[-1]-start.envelope.points[0]) <= tol or is_extension(chart, arc, start):
            return Extension("closed", start)
    byId = dict((a.id, a) for a in arcs)
    candidates = [b for b in arcs if is_extension(chart, arc, b)]
    # conjugate arcs count once
    unique = []
    for b in candidates:
        if b.conjugate is not None and any(u.id == b.conjugate for u in unique):
            continue
        unique.append(b)
    if len(unique) >= 2:
        raise_error(Ambiguity, "arc %i is extended by arcs %s"%(arc.id, [b.id for b in unique]), candidates=[b.id for b in unique])
    if len(unique) == 1:
        if unique[0] is start or unique[0].id == start.conjugate:
            return Extension("closed", start)
        return Extension("next", unique[0])
    if arc.isInitial and arc.conjugate is not None and byId[arc.conjugate] not in chain:
        return Extension("conjugate", byId[arc.conjugate])
    return Extension("stuck", None)


class ReconstructedObstacle(object):
    """
    A recovered boundary.

    :Parameters:
        #. pieces (list): Envelope list in chain order.
        #. arcIds (list): Arc ids of the chain.
        #. closed (bool): Whether the chain closed.
        #. closureResidual (number): Gap between the chain end and start.
    """
    def __init__(self, pieces, arcIds, closed, closureResidual):
        self.__pieces   = list(pieces)
        self.__arcIds   = list(arcIds)
        self.__closed   = bool(closed)
        self.__residual = FLOAT_TYPE(closureResidual)
        points   = np.vstack([p.points for p in pieces])
        centroid = np.mean(points, axis=0)
        order    = np.argsort(np.arctan2(points[:,1]-centroid[1], points[:,0]-centroid[0]), kind="mergesort")
        self.__polyline  = points[order]
        self.__hausdorff = None
        self.__truth     = None

    def __repr__(self):
        return "ReconstructedObstacle(closed=%s, arcs=%s, points=%i)"%(self.__closed, self.__arcIds, len(self.__polyline))

    @property
    def pieces(self):
        return list(self.__pieces)

    @property
    def arcIds(self):
        return list(self.__arcIds)

    @property
    def closed(self):
        return self.__closed

    @property
    def closureResidual(self):
        return self.__residual

    @property
    def polyline(self):
        """Closed polyline sorted by angle around the centroid."""
        return self.__polyline

    @property
    def hausdorff(self):
        """Hausdorff distance to the matched true obstacle, diagnostic."""
        return self.__hausdorff

    @property
    def truth(self):
        """Index of the matched true obstacle."""
        return self.__truth

    def compare(self, obstacles):
        """Match the nearest true obstacle by Hausdorff distance."""
        distances = [hausdorff_distance(self.__polyline, o.samples) for o in obstacles]
        if len(distances):
            self.__truth     = int(np.argmin(distances))
            self.__hausdorff = FLOAT_TYPE(distances[self.__truth])
        return self.__hausdorff


def _walk(chart, arc, arcs, maxSteps):
    chain, current = [arc], arc
    for _ in range(maxSteps):
        step = extend_step(chart, chain, current, arcs)
        if step.kind == "closed":
            return chain, True
        if step.kind == "stuck":
            return chain, False
        if step.arc in chain:
            LOGGER.warn("chain from arc %i loops on arc %i"%(arc.id, step.arc.id))
            return chain, False
        if step.arc.firstContact != current.firstContact:
            LOGGER.warn("chain from arc %i mixes first and last contact arcs"%arc.id)
        chain.append(step.arc)
        current = step.arc
        if step.kind == "next" and step.arc.envelope.chartLength < MIN_PIECE_FRACTION*_scale(chain):
            LOGGER.surrogate("chain from arc %i stops on a piece shorter than %.3g of its scale"%(arc.id, MIN_PIECE_FRACTION))
            return chain, _gap(chain) < join_tolerance(chain[-1], chain[0])
    LOGGER.warn("chain from arc %i exceeds %i steps"%(arc.id, maxSteps))
    return chain, False

def _scale(chain):
    points = np.vstack([a.envelope.points for a in chain])
    return FLOAT_TYPE(np.max(np.linalg.norm(points-np.mean(points, axis=0), axis=1)))

def _gap(chain):
    return FLOAT_TYPE(np.linalg.norm(chain[-1].envelope.points[-1]-chain[0].envelope.points[0]))

def reconstruct(scene, strata=None, arcs=None, maxSteps=200, strict=False, compare=True):
    """
    Recover the obstacles' boundaries.

    :Parameters:
        #. scene (Scene): The scene. Its chart and the boundary of S are
           used for the rays, its obstacles only for the comparison.
        #. strata (None, TangentStrata): Tangent strata, used when arcs is
           None.
        #. arcs (None, list): Prebuilt TangentArc list.
        #. maxSteps (int): Extension steps budget per chain.
        #. strict (bool): Raise IncompleteCoverage when a chain stays open.
        #. compare (bool): Compare recovered boundaries with the scene's.

    :Returns:
        #. obstacles (list): ReconstructedObstacle list of closed chains.
        #. report (dict): Chains, open chains with their gaps, conjugate
           envelope agreement and per obstacle diagnostics.
    """
    tic = time.time()
    if arcs is None:
        assert strata is not None, LOGGER.error("strata or arcs must be given")
        arcs = build_tangent_arcs(scene, strata)
    chart  = scene.chart
    closed, open_ = [], []
    covered = set()
    for arc in sorted([a for a in arcs if a.isInitial], key=lambda a: a.id):
        if arc.id in covered:
            continue
        chain, isClosed = _walk(chart, arc, arcs, maxSteps)
        if isClosed:
            LOGGER.surrogate("chain from arc %i closes with residual %.3g"%(arc.id, _gap(chain)))
            closed.append(chain)
            for a in chain:
                covered.add(a.id)
                if a.conjugate is not None:
                    covered.add(a.conjugate)
        else:
            open_.append(chain)
    # merge closed chains describing the same boundary
    obstacles = []
    for chain in closed:
        candidate = ReconstructedObstacle([a.envelope for a in chain], [a.id for a in chain], True, _gap(chain))
        same = [o for o in obstacles if hausdorff_distance(o.polyline, candidate.polyline) <= 10*join_tolerance(chain[0], chain[-1])]
        if len(same):
            continue
        obstacles.append(candidate)
    gaps = [{"arcs":[a.id for a in chain], "gap":_gap(chain)} for chain in open_ if not any(a.id in covered for a in chain)]
    for g in gaps:
        LOGGER.warn("open chain %s with gap %.6g"%(g["arcs"], g["gap"]))
    if strict and len(gaps):
        raise_error(IncompleteCoverage, "%i chains stay open"%len(gaps), gaps=gaps)
    conjugateErrors = [hausdorff_distance(a.envelope.points, [b for b in arcs if b.id == a.conjugate][0].envelope.points, closed=False)
                       for a in arcs if a.isInitial and a.conjugate is not None and a.id < a.conjugate]
    if compare:
        for o in obstacles:
            o.compare(scene.obstacles)
    report = {"arcs":len(arcs), "initialArcs":sum(1 for a in arcs if a.isInitial), "closedChains":len(closed),
              "obstacles":len(obstacles), "openChains":gaps,
              "conjugateEnvelopeError":FLOAT_TYPE(max(conjugateErrors)) if len(conjugateErrors) else None,
              "closureResiduals":[o.closureResidual for o in obstacles],
              "hausdorff":[o.hausdorff for o in obstacles],
              "stoppingRule":"numerical surrogate: closure residual under the join tolerance or piece shorter than %.0e of the chain scale"%MIN_PIECE_FRACTION}
    LOGGER.info("%i obstacles reconstructed from %i arcs in %s"%(len(obstacles), len(arcs), get_elapsed_time(tic)))
    return obstacles, report
