"""
Trapping builds Riemannian ellipses, checks their focal reflection
property and uses one half of an ellipse to build a curve that traps
billiard rays.

A Riemannian ellipse with foci F1 and F2 is the level set

.. math::

    E = \\{ x : d_g(x, F_1) + d_g(x, F_2) = r \\}

with d_g(F1, F2) < r below the injectivity radius. A geodesic through one
focus reflects on E into a geodesic through the other one, and a geodesic
crossing the focal segment reflects into a geodesic crossing it again.

The trapping curve keeps the half l1 of E on the left of the focal
geodesic gamma, between the axis points A1 and A2, and closes it below
gamma. The closing part touches gamma tangentially at F1 and F2 and dips
into a pocket under the focal segment. Rays crossing the focal segment
reflect on l1, come back through the segment into the pocket and leave it
through the segment again, so they never reach the rest of the table.

.. code-block:: python

    from riembill.Core.Chart import PoincareHalfPlane
    from riembill.Trapping import build_ellipse, build_trapping_obstacle, verify_trapping

    chart    = PoincareHalfPlane()
    ellipse  = build_ellipse(chart, [0,1], [0,2], r=1.5)
    obstacle = build_trapping_obstacle(ellipse, depth=0.05)
    print(verify_trapping(obstacle, nRays=64, bounces=50))
"""
# standard libraries imports
import time

# external libraries imports
import numpy as np
from scipy.optimize import brentq, minimize_scalar

# riembill imports
from riembill.Globals import FLOAT_TYPE, PRECISION, PI, LOGGER
from riembill.Core.Collection import raise_error, is_number, is_integer, get_elapsed_time, chunked_map
from riembill.Core.Errors import InvalidRadius, InvalidCurve, CompletionInfeasible, NumericalError
from riembill.Core.Chart import PhaseState, SurfaceChart
from riembill.Core.Curve import ConvexCurve
from riembill.Scene import Scene
from riembill.Billiard import first_hit, reflect

LEVEL_TOLERANCE = FLOAT_TYPE(1e-12)


class RiemannianEllipse(object):
    """
    Level set of the sum of the geodesic distances to two foci.

    :Parameters:
        #. chart (SurfaceChart): The chart.
        #. F1, F2 (np.ndarray): The foci.
        #. r (number): The level.
        #. points (np.ndarray): (n,2) level set points, the k-th on the
           geodesic leaving the focal midpoint with angle 2 pi k/n from the
           focal direction.
        #. nSamples (None, int): Boundary curve samples.
    """
    def __init__(self, chart, F1, F2, r, points, nSamples=None):
        self.__chart  = chart
        self.__F1     = np.array(F1, dtype=FLOAT_TYPE)
        self.__F2     = np.array(F2, dtype=FLOAT_TYPE)
        self.__r      = FLOAT_TYPE(r)
        self.__points = np.array(points, dtype=FLOAT_TYPE)
        self.__focalDistance = chart.distance(self.__F1, self.__F2)
        self.__gamma    = chart.geodesic_between(self.__F1, self.__F2)
        self.__boundary = ConvexCurve(chart, self.__points, nSamples=nSamples, name="ellipse")

    def __repr__(self):
        return "RiemannianEllipse(F1=%s, F2=%s, r=%.6g)"%(list(self.__F1), list(self.__F2), self.__r)

    @property
    def chart(self):
        return self.__chart

    @property
    def F1(self):
        return self.__F1

    @property
    def F2(self):
        return self.__F2

    @property
    def r(self):
        return self.__r

    @property
    def focalDistance(self):
        """d_g(F1, F2)."""
        return self.__focalDistance

    @property
    def gamma(self):
        """Unit state at F1 of the focal geodesic towards F2."""
        return self.__gamma

    @property
    def points(self):
        """Level set points in midpoint angle order."""
        return self.__points

    @property
    def boundary(self):
        """Boundary ConvexCurve."""
        return self.__boundary

    @property
    def A1(self):
        """Axis point beyond F1."""
        return self.__points[len(self.__points)//2]

    @property
    def A2(self):
        """Axis point beyond F2."""
        return self.__points[0]

    @property
    def upperHalf(self):
        """Points of the half l1 on the left of gamma, from A2 to A1."""
        return self.__points[:len(self.__points)//2+1]

    def level(self, points):
        """d_g(x,F1)+d_g(x,F2)-r at (m,2) or (2,) points."""
        points = np.atleast_2d(np.asarray(points, dtype=FLOAT_TYPE))
        F1 = np.tile(self.__F1, (len(points),1))
        F2 = np.tile(self.__F2, (len(points),1))
        return self.__chart.distances(points, F1) + self.__chart.distances(points, F2) - self.__r

    def focal_directions(self, point):
        """Unit directions at point of the geodesics to F1 and F2."""
        return self.__chart.geodesic_between(point, self.__F1).velocity, \
               self.__chart.geodesic_between(point, self.__F2).velocity

    def normal(self, point):
        """Exact outward unit normal, along minus the sum of the focal
        directions."""
        u1, u2 = self.focal_directions(point)
        return self.__chart.normalize(point, -(u1+u2))

    def level_residuals(self):
        """Level residual at every boundary sample."""
        return self.level(self.__boundary.samples)

    def orthogonality_residuals(self):
        """g(T, u1+u2) at every boundary sample, T the unit tangent."""
        chart, boundary = self.__chart, self.__boundary
        residuals = []
        for s, p in zip(boundary.parameters, boundary.samples):
            u1, u2 = self.focal_directions(p)
            residuals.append(chart.inner(p, boundary.tangent(s), u1+u2))
        return np.array(residuals, dtype=FLOAT_TYPE)


def build_ellipse(chart, F1, F2, r, nSamples=1024, nRays=None):
    """
    Build a Riemannian ellipse. Along each geodesic leaving the focal
    midpoint the level equation is solved by Brent's method.

    :Parameters:
        #. chart (SurfaceChart): The chart.
        #. F1, F2 (list): The foci.
        #. r (number): Level, d_g(F1,F2) < r < injectivity radius.
        #. nSamples (int): Boundary curve samples.
        #. nRays (None, int): Geodesics from the midpoint, even. Defaults
           to nSamples.

    :Returns:
        #. ellipse (RiemannianEllipse): The ellipse.
    """
    assert isinstance(chart, SurfaceChart), LOGGER.error("chart must be a SurfaceChart instance")
    assert is_number(r), LOGGER.error("r must be a number")
    assert is_integer(nSamples) and nSamples>=16, LOGGER.error("nSamples must be an integer >= 16")
    nRays = int(nSamples) if nRays is None else int(nRays)
    assert nRays>=16 and nRays%2==0, LOGGER.error("nRays must be an even integer >= 16")
    F1 = np.array(F1, dtype=FLOAT_TYPE)
    F2 = np.array(F2, dtype=FLOAT_TYPE)
    r  = FLOAT_TYPE(r)
    d12 = chart.distance(F1, F2)
    if not d12 < r:
        raise_error(InvalidRadius, "r=%.10g must exceed the focal distance %.10g"%(r, d12))
    if not r < chart.injectivityRadius:
        raise_error(InvalidRadius, "r=%.10g must be below the injectivity radius %.10g"%(r, chart.injectivityRadius))
    gamma    = chart.geodesic_between(F1, F2)
    midpoint = chart.flow(gamma, 0.5*d12)
    level    = lambda p: chart.distance(p, F1) + chart.distance(p, F2) - r
    points   = []
    for k in range(nRays):
        state = PhaseState(midpoint.point, chart.direction(midpoint.point, midpoint.velocity, 2*PI*k/nRays))
        s = brentq(lambda s: level(chart.flow(state, s).point), 0., r, xtol=LEVEL_TOLERANCE)
        points.append(chart.flow(state, s).point)
    ellipse  = RiemannianEllipse(chart, F1, F2, r, points, nSamples=nSamples)
    if not np.all(ellipse.boundary.curvatures() > 0):
        raise_error(InvalidCurve, "ellipse with r=%.10g is not strictly convex"%r)
    LOGGER.report("ellipse built, max level residual %.3e"%np.max(np.abs(ellipse.level_residuals())))
    return ellipse

def _refined_hit(ellipse, scene, state):
    hit = first_hit(scene, state, obstacles=False)
    chart = ellipse.chart
    f = lambda s: ellipse.level(chart.flow(state, s).point)[0]
    h = 4*ellipse.boundary.spacing
    lo, hi = max(0., hit.arclength-h), hit.arclength+h
    s = brentq(f, lo, hi, xtol=LEVEL_TOLERANCE) if f(lo)*f(hi) < 0 else hit.arclength
    return chart.flow(state, s)

def focal_miss(ellipse, angle, scene=None):
    """
    Distance to F2 of the geodesic leaving F1 with the given metric angle
    from the focal direction, after one reflection on the ellipse.
    """
    chart = ellipse.chart
    if scene is None:
        scene = Scene(chart, ellipse.boundary, [])
    F1, F2 = ellipse.F1, ellipse.F2
    state  = PhaseState(F1, chart.direction(F1, ellipse.gamma.velocity, angle))
    end    = _refined_hit(ellipse, scene, state)
    out    = PhaseState(end.point, reflect(chart, end.point, end.velocity, ellipse.normal(end.point)))
    span   = 1.5*chart.distance(end.point, F2) + 1e-6
    f      = lambda s: chart.distance(chart.flow(out, s).point, F2)
    res    = minimize_scalar(f, bounds=(0., span), method="bounded", options={"xatol":1e-12})
    return FLOAT_TYPE(res.fun)

def focal_ray_path(ellipse, angle, nPoints=32):
    """Chart points of the ray from F1 to the ellipse and on to F2."""
    chart = ellipse.chart
    scene = Scene(chart, ellipse.boundary, [])
    state = PhaseState(ellipse.F1, chart.direction(ellipse.F1, ellipse.gamma.velocity, angle))
    end   = _refined_hit(ellipse, scene, state)
    d1    = chart.distance(ellipse.F1, end.point)
    P, _  = chart.flow_points(state, np.linspace(0., d1, nPoints))
    out   = PhaseState(end.point, reflect(chart, end.point, end.velocity, ellipse.normal(end.point)))
    Q, _  = chart.flow_points(out, np.linspace(0., chart.distance(end.point, ellipse.F2), nPoints))
    return np.vstack([P, Q[1:]])

def verify_foci_property(ellipse, nRays=256, seed=0):
    """
    Shoot rays from F1 in random directions, reflect them once on the
    ellipse and measure how close the reflected geodesics pass to F2.

    :Parameters:
        #. ellipse (RiemannianEllipse): The ellipse.
        #. nRays (int): Number of rays.
        #. seed (int): Random generator seed.

    :Returns:
        #. report (dict): maxMiss, meanMiss, axisMiss along the focal
           direction, the level and orthogonality residuals.
    """
    assert is_integer(nRays) and nRays>0, LOGGER.error("nRays must be a positive integer")
    tic    = time.time()
    scene  = Scene(ellipse.chart, ellipse.boundary, [])
    angles = np.random.RandomState(seed).uniform(0., 2*PI, int(nRays))
    misses = np.array([focal_miss(ellipse, a, scene) for a in angles], dtype=FLOAT_TYPE)
    report = {"nRays":int(nRays), "maxMiss":FLOAT_TYPE(np.max(misses)), "meanMiss":FLOAT_TYPE(np.mean(misses)),
              "axisMiss":focal_miss(ellipse, PI, scene),
              "maxLevelResidual":FLOAT_TYPE(np.max(np.abs(ellipse.level_residuals()))),
              "maxOrthogonality":FLOAT_TYPE(np.max(np.abs(ellipse.orthogonality_residuals())))}
    LOGGER.info("foci property over %i rays: max miss %.3e in %s"%(nRays, report["maxMiss"], get_elapsed_time(tic)))
    return report


def _hermite5(p0, d0, p1, d1, tau):
    # quintic Hermite with zero second derivatives at both ends
    tau = tau[:,None]
    h0 = 1-10*tau**3+15*tau**4-6*tau**5
    h1 = tau-6*tau**3+8*tau**4-3*tau**5
    h4 = -4*tau**3+7*tau**4-3*tau**5
    return h0*p0 + (1-h0)*p1 + h1*d0 + h4*d1

def pocket_profile(u, focalDistance, depth, skew):
    """
    Pocket depth below gamma at Fermi abscissa u in [0, focalDistance]:
    a quintic vanishing with its slope at both foci.
    """
    t = np.asarray(u, dtype=FLOAT_TYPE)/focalDistance
    return -depth*focalDistance*16*t**2*(1-t)**2*(1+skew*(2*t-1))


class TrappingObstacle(object):
    """
    Closed curve made of the half l1 of an ellipse and its completion.

    :Parameters:
        #. ellipse (RiemannianEllipse): The ellipse.
        #. curve (ConvexCurve): The closed curve. It is not convex.
        #. completion (np.ndarray): Fermi (u, w) points of the completion.
        #. depth, skew (number): Pocket shape parameters.
    """
    def __init__(self, ellipse, curve, completion, depth, skew):
        self.__ellipse    = ellipse
        self.__curve      = curve
        self.__completion = np.array(completion, dtype=FLOAT_TYPE)
        self.__depth      = FLOAT_TYPE(depth)
        self.__skew       = FLOAT_TYPE(skew)
        self.__scene      = Scene(ellipse.chart, curve, [])
        d12 = ellipse.focalDistance
        self.__uA1 = -0.5*(ellipse.r-d12)
        self.__uA2 = d12 + 0.5*(ellipse.r-d12)

    @property
    def ellipse(self):
        return self.__ellipse

    @property
    def curve(self):
        return self.__curve

    @property
    def scene(self):
        """Scene whose domain is the trapping curve."""
        return self.__scene

    @property
    def completion(self):
        return self.__completion

    @property
    def depth(self):
        return self.__depth

    @property
    def skew(self):
        return self.__skew

    @property
    def axisPoints(self):
        """Fermi abscissas of A1 and A2."""
        return self.__uA1, self.__uA2

    def fermi(self, points):
        """Fermi coordinates along gamma, F1 at u=0 and F2 at u=d_g(F1,F2)."""
        return self.__ellipse.chart.fermi_coordinates(self.__ellipse.gamma, points)

    def classify(self, point, tolerance=1e-9):
        """Part of the curve a point lies on: 'l1:A1F1', 'l1:F1F2',
        'l1:F2A2', 'pocket' or 'side'."""
        u, w = self.fermi(point)[0]
        d12  = self.__ellipse.focalDistance
        if w > tolerance:
            if u < 0:
                return "l1:A1F1"
            if u > d12:
                return "l1:F2A2"
            return "l1:F1F2"
        if 0 <= u <= d12:
            return "pocket"
        return "side"


def build_trapping_obstacle(ellipse, depth=0.05, skew=0., nSamples=2048, nCompletion=None, tolerance=1e-12):
    """
    Close the half l1 of an ellipse below its focal geodesic gamma. The
    completion is drawn in Fermi coordinates (u, w) along gamma: a quintic
    from A1 down and back up to F1, tangent to gamma there, the pocket
    profile between the foci, and the mirror quintic from F2 to A2.

    :Parameters:
        #. ellipse (RiemannianEllipse): The ellipse.
        #. depth (number): Pocket depth relative to d_g(F1,F2).
        #. skew (number): Pocket asymmetry, |skew| < 1 keeps it below gamma.
        #. nSamples (int): Samples of the closed curve.
        #. nCompletion (None, int): Completion points, default nSamples/2.
        #. tolerance (number): Largest w allowed on the completion.

    :Returns:
        #. obstacle (TrappingObstacle): The trapping curve.
    """
    assert isinstance(ellipse, RiemannianEllipse), LOGGER.error("ellipse must be a RiemannianEllipse instance")
    assert is_number(depth), LOGGER.error("depth must be a number")
    assert is_number(skew), LOGGER.error("skew must be a number")
    chart = ellipse.chart
    gamma = ellipse.gamma
    d12   = ellipse.focalDistance
    nCompletion = int(nSamples)//2 if nCompletion is None else int(nCompletion)
    uA1, uA2 = -0.5*(ellipse.r-d12), d12+0.5*(ellipse.r-d12)
    nSide   = max(16, nCompletion//4)
    nPocket = max(16, nCompletion-2*nSide)
    tau     = np.linspace(0., 1., nSide+1)
    L1, L2  = 1.5*abs(uA1), 1.5*abs(uA2-d12)
    side1   = _hermite5(np.array([uA1,0.]), np.array([0.,-L1]), np.array([0.,0.]), np.array([L1,0.]), tau)
    side2   = _hermite5(np.array([d12,0.]), np.array([L2,0.]), np.array([uA2,0.]), np.array([0.,L2]), tau)
    u       = np.linspace(0., d12, nPocket+1)
    pocket  = np.stack([u, pocket_profile(u, d12, depth, skew)], axis=1)
    # conditions on the exact completion
    inner = np.vstack([side1[1:-1], pocket[1:-1], side2[1:-1]])
    if np.any(inner[:,1] >= -tolerance):
        raise_error(CompletionInfeasible, "completion with depth=%.6g and skew=%.6g meets the focal geodesic"%(depth, skew))
    if np.any((side1[:,0] > 0) | (side2[:,0] < d12)):
        raise_error(CompletionInfeasible, "completion sides enter the column under the focal segment")
    completion = np.vstack([side1[:-1], pocket[:-1], side2[:-1]])
    points = [chart.fermi_point(gamma, cu, cw) for cu, cw in completion]
    # l1 from A2 back to A1, axis points included once
    points = np.vstack([np.array(points), ellipse.upperHalf[:-1]])
    curve  = ConvexCurve(chart, points, nSamples=nSamples, name="trapping obstacle")
    obstacle = TrappingObstacle(ellipse, curve, completion, depth, skew)
    LOGGER.report("trapping obstacle built with pocket depth %.6g and skew %.6g"%(depth, skew))
    return obstacle


def _trap_ray(args):
    obstacle, u0, angle, bounces, marchStep = args
    chart = obstacle.ellipse.chart
    gamma = obstacle.ellipse.gamma
    d12   = obstacle.ellipse.focalDistance
    scene = obstacle.scene
    foot  = chart.flow(gamma, u0)
    state = PhaseState(foot.point, chart.direction(foot.point, foot.velocity, angle))
    crossings = [(0, u0, 1)]
    parts     = []
    escaped, failed = False, False
    w0 = 0.
    for b in range(bounces):
        try:
            hit = first_hit(scene, state, obstacles=False, marchStep=marchStep)
        except NumericalError:
            failed = True
            break
        u1, w1 = obstacle.fermi(hit.point)[0]
        if w0*w1 < 0:
            f = lambda s: obstacle.fermi(chart.flow(state, s).point)[0][1]
            s = brentq(f, 0., hit.arclength, xtol=1e-12)
            uc = obstacle.fermi(chart.flow(state, s).point)[0][0]
            crossings.append( (b, uc, int(np.sign(w1))) )
            if not 0 < uc < d12:
                escaped = True
                break
        part   = obstacle.classify(hit.point)
        normal = obstacle.ellipse.normal(hit.point) if part.startswith("l1") else hit.normal
        parts.append( (b, part, u1) )
        state = PhaseState(hit.point, reflect(chart, hit.point, hit.velocity, normal))
        w0 = w1
    # l1 reflections must be separated by a down then an up crossing
    sequencing, alternation = 0, 0
    l1 = [p for p in parts if p[1].startswith("l1")]
    for (b0, part0, _), (b1, part1, _) in zip(l1[:-1], l1[1:]):
        between = [c[2] for c in crossings if b0 < c[0] <= b1]
        if between != [-1, 1]:
            sequencing += 1
        if part0 != "l1:F1F2" and part1 != "l1:F1F2" and part0 == part1:
            alternation += 1
    return {"escaped":escaped, "failed":failed, "sequencing":sequencing, "alternation":alternation,
            "l1":len(l1), "pocket":sum(1 for p in parts if p[1]=="pocket"),
            "side":sum(1 for p in parts if p[1]=="side"), "bounces":len(parts)}

def corridor_starts(obstacle, nRays, seed=0, margin=0.02):
    """
    Random starts (u, angle) on the focal segment, u strictly between the
    foci and angle from gamma in (0, pi).
    """
    d12 = obstacle.ellipse.focalDistance
    rng = np.random.RandomState(seed)
    u   = rng.uniform(margin*d12, (1-margin)*d12, int(nRays))
    a   = rng.uniform(margin*PI, (1-margin)*PI, int(nRays))
    return list(zip(u, a))

def verify_trapping(obstacle, nRays=512, bounces=200, seed=0, starts=None, nThreads=1, marchFraction=1./256):
    """
    Trace rays crossing the focal segment and count escapes and violations
    of the alternation property.

    :Parameters:
        #. obstacle (TrappingObstacle): The trapping curve.
        #. nRays (int): Number of random corridor rays.
        #. bounces (int): Reflection budget per ray.
        #. seed (int): Random generator seed.
        #. starts (None, list): Explicit (u, angle) starts, replacing the
           random corridor starts. u is the Fermi abscissa on gamma.
        #. nThreads (int): Worker processes.
        #. marchFraction (number): Marching step as a fraction of the
           curve's diameter.

    :Returns:
        #. report (dict): escapes, failures, sequencing and alternation
           violations, and reflection counts per part of the curve.
    """
    assert is_integer(bounces) and bounces>0, LOGGER.error("bounces must be a positive integer")
    tic = time.time()
    if starts is None:
        starts = corridor_starts(obstacle, nRays, seed=seed)
    marchStep = marchFraction*obstacle.scene.diam_S
    items   = [(obstacle, FLOAT_TYPE(u), FLOAT_TYPE(a), int(bounces), marchStep) for u, a in starts]
    results = chunked_map(_trap_ray, items, nThreads=nThreads)
    report  = {"nRays":len(results), "bounces":int(bounces),
               "escapes":sum(1 for r in results if r["escaped"]),
               "failures":sum(1 for r in results if r["failed"]),
               "sequencingViolations":sum(r["sequencing"] for r in results),
               "alternationViolations":sum(r["alternation"] for r in results),
               "l1Reflections":sum(r["l1"] for r in results),
               "pocketReflections":sum(r["pocket"] for r in results),
               "sideReflections":sum(r["side"] for r in results),
               "escaped":[i for i, r in enumerate(results) if r["escaped"]]}
    LOGGER.info("trapping over %i rays: %i escapes, %i alternation violations in %s"%(report["nRays"], report["escapes"], report["alternationViolations"], get_elapsed_time(tic)))
    return report
