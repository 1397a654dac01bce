"""
Scene contains the billiard table: a strictly convex domain S of a surface
chart and n >= 2 strictly convex obstacles K_1 ... K_n inside it, together
with the scalars the analysis needs (d_K, diam_S, kappa_S, kappa_K) and
the validation of every standing hypothesis.

.. code-block:: python

    from riembill.Core.Chart import EuclideanPlane
    from riembill.Core.Curve import ConvexCurve
    from riembill.Scene import Scene, validate_scene

    chart  = EuclideanPlane()
    domain = ConvexCurve.circle(chart, (0,0), 20, name="S")
    obstacles = [ConvexCurve.circle(chart, c, 1, name="K%i"%i) for i, c in
                 enumerate([(8/3**0.5,0), (-4/3**0.5,4), (-4/3**0.5,-4)])]
    scene  = Scene(chart, domain, obstacles)
    report = validate_scene(scene, nChords=1000)
    print(report)
"""
# standard libraries imports
import time

# external libraries imports
import numpy as np
from scipy.optimize import minimize, minimize_scalar
from matplotlib.path import Path

# riembill imports
from riembill.Globals import FLOAT_TYPE, PRECISION, PI, DOMAIN_INDEX, LOGGER
from riembill.Core.Collection import raise_error, is_number, is_integer, get_elapsed_time, chunked_map
from riembill.Core.Errors import InvalidCurve, NumericalError
from riembill.Core.Chart import SurfaceChart, PhaseState
from riembill.Core.Curve import ConvexCurve

CONTAINMENT_FLOOR = FLOAT_TYPE(1e-6)


def curve_distance(chart, curveA, curveB, nCoarse=256, farthest=False):
    """
    Metric distance between two curves, or the largest distance between
    their points when farthest is True. A coarse sample search is refined
    by a Nelder-Mead minimization over both arclength parameters.

    :Returns:
        #. distance (float): The distance.
        #. sA (float): Parameter on curveA.
        #. sB (float): Parameter on curveB.
    """
    sA = np.arange(nCoarse)*curveA.length/nCoarse
    sB = np.arange(nCoarse)*curveB.length/nCoarse
    PA = curveA.position(sA)
    PB = curveB.position(sB)
    if chart.hasClosedForm:
        D = chart.distances(PA[:,None,:], PB[None,:,:])
    else:
        D = np.sqrt(np.sum((PA[:,None,:]-PB[None,:,:])**2, axis=-1))
    i, j = np.unravel_index(np.argmax(D) if farthest else np.argmin(D), D.shape)
    sign = -1. if farthest else 1.
    def f(s):
        return sign*chart.distance(curveA.position(s[0]), curveB.position(s[1]))
    hA, hB = curveA.length/nCoarse, curveB.length/nCoarse
    x0 = np.array([sA[i], sB[j]])
    simplex = np.array([x0, x0+[hA, 0.], x0+[0., hB]])
    result  = minimize(f, x0, method="Nelder-Mead", options={"xatol":1e-11, "fatol":1e-14, "initial_simplex":simplex, "maxiter":2000})
    return FLOAT_TYPE(sign*result.fun), FLOAT_TYPE(result.x[0]), FLOAT_TYPE(result.x[1])


class ValidationReport(object):
    """
    Ordered list of named checks. A check carries a pass flag and free
    details. The report passes when every check passes.
    """
    def __init__(self, title="scene validation"):
        self.__title   = title
        self.__entries = []

    def __str__(self):
        lines = ["%s: %s"%(self.__title, "PASSED" if self.passed else "FAILED")]
        for name, passed, details in self.__entries:
            info = ", ".join("%s=%s"%(k, details[k]) for k in sorted(details))
            lines.append("  [%s] %s %s"%("ok" if passed else "!!", name, info))
        return "\n".join(lines)

    @property
    def entries(self):
        """List of (name, passed, details) tuples."""
        return list(self.__entries)

    @property
    def passed(self):
        return all(e[1] for e in self.__entries)

    def add(self, name, passed, **details):
        """Append a check."""
        self.__entries.append( (str(name), bool(passed), details) )

    def get(self, name):
        """Get the first check with given name or None."""
        for e in self.__entries:
            if e[0] == name:
                return e
        return None

    def failures(self):
        """Names of failed checks."""
        return [e[0] for e in self.__entries if not e[1]]

    def to_dict(self):
        """Json ready dictionary."""
        def clean(value):
            if isinstance(value, (np.floating, np.integer, np.bool_)):
                return value.item()
            if isinstance(value, np.ndarray):
                return value.tolist()
            if isinstance(value, (list, tuple)):
                return [clean(v) for v in value]
            return value
        return {"title":self.__title, "passed":self.passed,
                "checks":[{"name":n, "passed":p, "details":dict((k, clean(v)) for k, v in d.items())} for n, p, d in self.__entries]}


class Scene(object):
    """
    Billiard table. A scene is immutable once built: derived scalars are
    computed lazily and cached.

    :Parameters:
        #. chart (SurfaceChart): The surface chart.
        #. domain (ConvexCurve): Boundary of S.
        #. obstacles (list): ConvexCurve boundaries of K_1 ... K_n. Hypotheses
           need n >= 2, fewer obstacles are accepted for diagnostics.
    """
    def __init__(self, chart, domain, obstacles):
        assert isinstance(chart, SurfaceChart), LOGGER.error("chart must be a SurfaceChart instance")
        assert isinstance(domain, ConvexCurve), LOGGER.error("domain must be a ConvexCurve instance")
        assert isinstance(obstacles, (list, tuple)), LOGGER.error("obstacles must be a list")
        for o in obstacles:
            assert isinstance(o, ConvexCurve), LOGGER.error("every obstacle must be a ConvexCurve instance")
            assert o.chart is chart, LOGGER.error("obstacle '%s' is not defined on the scene chart"%o.name)
        assert domain.chart is chart, LOGGER.error("domain is not defined on the scene chart")
        self.__chart     = chart
        self.__domain    = domain
        self.__obstacles = tuple(obstacles)
        self.__cache     = {}

    def __repr__(self):
        return "Scene(chart=%s, nObstacles=%i)"%(self.__chart.__class__.__name__, len(self.__obstacles))

    @property
    def chart(self):
        """The surface chart."""
        return self.__chart

    @property
    def domain(self):
        """Boundary of S."""
        return self.__domain

    @property
    def obstacles(self):
        """Tuple of obstacle boundaries."""
        return self.__obstacles

    @property
    def nObstacles(self):
        return len(self.__obstacles)

    def curve(self, index):
        """Curve by event index, DOMAIN_INDEX being the boundary of S."""
        if index == DOMAIN_INDEX:
            return self.__domain
        return self.__obstacles[index]

    def __cached(self, key, function):
        if key not in self.__cache:
            self.__cache[key] = function()
        return self.__cache[key]

    @property
    def pairDistances(self):
        """Dictionary (l,j) -> metric distance between obstacles l < j."""
        def compute():
            result = {}
            for l in range(self.nObstacles):
                for j in range(l+1, self.nObstacles):
                    result[(l,j)] = curve_distance(self.__chart, self.__obstacles[l], self.__obstacles[j])[0]
            return result
        return self.__cached("pairDistances", compute)

    @property
    def dK(self):
        """Minimum pairwise obstacle distance d_K."""
        if self.nObstacles < 2:
            return FLOAT_TYPE(np.inf)
        return FLOAT_TYPE(min(self.pairDistances.values()))

    @property
    def diam_S(self):
        """Diameter of S."""
        return self.__cached("diam_S", lambda: curve_distance(self.__chart, self.__domain, self.__domain, farthest=True)[0])

    @property
    def boundaryClearance(self):
        """Minimum metric distance between an obstacle and the boundary of S."""
        return self.__cached("boundaryClearance", lambda: FLOAT_TYPE(min([curve_distance(self.__chart, o, self.__domain)[0] for o in self.__obstacles] or [np.inf])))

    @property
    def kappa_S(self):
        """Maximum Gaussian curvature over S, on a grid plus boundary samples."""
        def compute():
            samples = self.__domain.samples
            lo, hi  = np.min(samples, axis=0), np.max(samples, axis=0)
            X, Y    = np.meshgrid(np.linspace(lo[0], hi[0], 24), np.linspace(lo[1], hi[1], 24))
            grid    = np.stack([X.ravel(), Y.ravel()], axis=1)
            grid    = grid[Path(samples).contains_points(grid)]
            points  = np.vstack([grid, samples[::max(1, len(samples)//64)]])
            return FLOAT_TYPE(max(self.__chart.gaussian_curvature(p) for p in points))
        return self.__cached("kappa_S", compute)

    @property
    def kappa_K(self):
        """Minimum geodesic curvature over the obstacles' boundaries."""
        return self.__cached("kappa_K", lambda: FLOAT_TYPE(min([np.min(o.curvatures()) for o in self.__obstacles] or [np.inf])))

    def inside_domain(self, points):
        """Whether chart points are strictly inside S."""
        return self.__domain.contains(points)

    def in_free_region(self, points):
        """Whether chart points are in S and outside every obstacle."""
        points = np.atleast_2d(points)
        result = self.__domain.contains(points)
        for o in self.__obstacles:
            result &= ~o.contains(points)
        return result


def geodesic_curvature(chart, curve, s):
    """
    Signed geodesic curvature of curve at arclength s, with respect to the
    curve's traversal direction.

    :Parameters:
        #. chart (SurfaceChart): Chart the curve lives in.
        #. curve (ConvexCurve): The curve.
        #. s (number): Arclength parameter.
    """
    assert curve.chart is chart, LOGGER.error("curve is not defined on the given chart")
    return curve.geodesic_curvature(s)

def side_of_geodesic(chart, state, point, tolerance=1e-9):
    """
    Side of a point with respect to the smooth geodesic through state, read
    from the sign of the normal coordinate of the point in Fermi
    coordinates centred on the geodesic.

    :Parameters:
        #. chart (SurfaceChart): The chart.
        #. state (PhaseState): A state of the geodesic.
        #. point (np.ndarray): Chart point.
        #. tolerance (number): Normal distance under which the point is on
           the geodesic.

    :Returns:
        #. side (str): 'left', 'right' or 'on'.
    """
    w = chart.fermi_coordinates(state, np.asarray(point, dtype=FLOAT_TYPE))[0,1]
    if abs(w) <= tolerance:
        return "on"
    return "left" if w > 0 else "right"

def chord_clearance(scene, state, length, curve, nSamples=256):
    """
    Minimum signed distance of a geodesic segment to a curve. Negative
    values mean the segment enters the curve.

    :Parameters:
        #. scene (Scene): The scene.
        #. state (PhaseState): Segment start.
        #. length (number): Segment length.
        #. curve (ConvexCurve): The curve.
    """
    s = np.linspace(0., length, nSamples)
    P, _ = scene.chart.flow_points(state, s)
    d = curve.signed_chart_distance(P)
    i = int(np.argmin(d))
    h = length/(nSamples-1)
    f = lambda u: curve.signed_chart_distance(scene.chart.flow(state, u).point)
    sol = minimize_scalar(f, bounds=(max(0., s[i]-h), min(length, s[i]+h)), method="bounded", options={"xatol":1e-12})
    return FLOAT_TYPE(min(d[i], sol.fun))

def _count_chord_obstacles(args):
    scene, pairs = args
    counts = []
    for a, b in pairs:
        p = scene.domain.position(a)
        q = scene.domain.position(b)
        try:
            state  = scene.chart.geodesic_between(p, q)
            length = scene.chart.distance(p, q)
        except NumericalError:
            counts.append(-1)
            continue
        counts.append(sum(1 for o in scene.obstacles if chord_clearance(scene, state, length, o, nSamples=128) < 0))
    return counts

def validate_scene(scene, nChords=10000, seed=0, nThreads=1, generalPositionTolerance=1e-6, bitangentSeeds=64):
    """
    Check every standing hypothesis of a scene.

    :Parameters:
        #. scene (Scene): The scene.
        #. nChords (int): Number of Monte-Carlo chords for the general
           position confirmation. 0 skips it.
        #. seed (int): Random seed of the chords.
        #. nThreads (int): Worker processes for the chords.
        #. generalPositionTolerance (number): Minimum clearance of every
           bitangent against third obstacles.
        #. bitangentSeeds (int): Multistart seeds per dimension of the
           bitangent search.

    :Returns:
        #. report (ValidationReport): The validation report.
    """
    from riembill.Bitangents import find_bitangents
    assert isinstance(scene, Scene), LOGGER.error("scene must be a Scene instance")
    assert is_integer(nChords) and nChords>=0, LOGGER.error("nChords must be a positive integer")
    tic    = time.time()
    report = ValidationReport()
    chart  = scene.chart
    curves = [scene.domain] + list(scene.obstacles)
    report.add("obstacle count", scene.nObstacles>=2, n=scene.nObstacles)
    # convexity and closedness
    for curve in curves:
        kappa = curve.curvatures()
        report.add("convexity %s"%curve.name, curve.orientation>0 and np.min(kappa)>0,
                   minCurvature=FLOAT_TYPE(np.min(kappa)), orientation=curve.orientation)
        report.add("closed %s"%curve.name, curve.closureError<1e-9, gap=curve.closureError)
    # disjointness
    disjoint = True
    for l in range(scene.nObstacles):
        for j in range(l+1, scene.nObstacles):
            A, B = scene.obstacles[l], scene.obstacles[j]
            overlap = bool(np.any(A.contains(B.samples)) or np.any(B.contains(A.samples)))
            d = FLOAT_TYPE(0) if overlap else scene.pairDistances[(l,j)]
            ok = (not overlap) and d>CONTAINMENT_FLOOR
            disjoint &= ok
            report.add("disjoint %s %s"%(A.name, B.name), ok, distance=d)
    # containment
    for o in scene.obstacles:
        inside = bool(np.all(scene.domain.contains(o.samples)))
        clearance = curve_distance(chart, o, scene.domain)[0] if inside else FLOAT_TYPE(0)
        report.add("contained %s"%o.name, inside and clearance>10*CONTAINMENT_FLOOR, clearance=clearance)
    # first and last segments together must cover d_K
    if disjoint and scene.nObstacles >= 2:
        report.add("order bound clearance", bool(scene.boundaryClearance >= 0.5*scene.dK),
                   clearance=scene.boundaryClearance, dK=scene.dK)
    report.add("diameter", scene.diam_S<chart.injectivityRadius, diam_S=scene.diam_S, rho=chart.injectivityRadius)
    # curvature conditions
    kS, kK, rho = scene.kappa_S, scene.kappa_K, chart.injectivityRadius
    if kS <= 0:
        report.add("curvature", True, kappa_S=kS, kappa_K=kK, reading="non-positive curvature")
    else:
        root    = np.sqrt(kS)
        first   = bool(rho*root < PI/2)
        printed = bool(first and root*np.tan(rho*kS) < kK) if np.isfinite(rho) else False
        other   = bool(first and root*np.tan(rho*root) < kK) if np.isfinite(rho) else False
        if printed != other:
            LOGGER.warn("curvature condition readings disagree: tan(rho*kappa_S) gives %s, tan(rho*sqrt(kappa_S)) gives %s"%(printed, other))
        report.add("curvature", printed, kappa_S=kS, kappa_K=kK, printedReading=printed, rootReading=other)
    if not (disjoint and report.passed):
        LOGGER.warn("scene fails basic checks, general position is not evaluated")
        report.add("general position", False, reason="basic checks failed")
        return report
    # general position from bitangents
    margin, worst = np.inf, None
    for l in range(scene.nObstacles):
        for j in range(l+1, scene.nObstacles):
            try:
                records = find_bitangents(scene, l, j, nSeeds=bitangentSeeds)
            except NumericalError as err:
                report.add("bitangents %s %s"%(l, j), False, error=str(err))
                continue
            for record in records:
                if record.fromIndex != l:
                    continue
                for k in range(scene.nObstacles):
                    if k in (l, j):
                        continue
                    c = chord_clearance(scene, record.start, record.length, scene.obstacles[k])
                    if c < margin:
                        margin, worst = c, (l, j, k)
    report.add("general position", margin>generalPositionTolerance, margin=FLOAT_TYPE(margin), worst=worst)
    # monte-carlo confirmation
    if nChords > 0:
        rng   = np.random.RandomState(seed)
        pairs = rng.uniform(0., scene.domain.length, size=(nChords, 2))
        keep  = np.abs(pairs[:,0]-pairs[:,1]) > 1e-3*scene.domain.length
        pairs = pairs[keep]
        chunk = 250
        items = [(scene, pairs[i:i+chunk]) for i in range(0, len(pairs), chunk)]
        counts = np.array([c for part in chunked_map(_count_chord_obstacles, items, nThreads=nThreads) for c in part])
        report.add("monte-carlo chords", bool(np.all(counts<=2)), chords=len(counts),
                   violations=int(np.sum(counts>2)), failures=int(np.sum(counts<0)))
    LOGGER.info("scene validated in %s"%get_elapsed_time(tic))
    return report
