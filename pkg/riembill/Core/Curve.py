"""
Curve contains ConvexCurve, the closed strictly convex curves used for the
boundary of the billiard domain and for the obstacles' boundaries.

A curve is stored as a dense closed polyline of chart points sampled
uniformly in metric arclength, interpolated by a periodic cubic spline.
The same representation serves analytic curves (chart circles, Fourier
perturbed circles) and user supplied samples.

.. code-block:: python

    from riembill.Core.Chart import PoincareHalfPlane
    from riembill.Core.Curve import ConvexCurve

    chart = PoincareHalfPlane()
    curve = ConvexCurve.circle(chart, center=(0,2), radius=0.5)
    print(curve.length, curve.geodesic_curvature(0.))
"""
# external libraries imports
import numpy as np
from scipy.interpolate import CubicSpline
from scipy.spatial import cKDTree
from scipy.optimize import minimize_scalar

# riembill imports
from riembill.Globals import FLOAT_TYPE, PRECISION, PI, LOGGER
from riembill.Core.Collection import raise_error, is_number, is_integer, polygon_signed_area, wrap_parameter
from riembill.Core.Errors import InvalidCurve
from riembill.Core.Chart import SurfaceChart


class ConvexCurve(object):
    """
    Closed curve parameterised by metric arclength s in [0, length).

    :Parameters:
        #. chart (SurfaceChart): The chart the points live in.
        #. points (np.ndarray): (m,2) chart points along the curve, the
           closing point not repeated. Anti-clockwise order is expected
           for convex boundaries. Clockwise curves are kept as given and
           get a negative geodesic curvature.
        #. nSamples (None, int): Number of uniform arclength samples.
           None keeps len(points).
        #. name (None, str): Curve name used in logs and reports.
    """
    def __init__(self, chart, points, nSamples=None, name=None):
        assert isinstance(chart, SurfaceChart), LOGGER.error("chart must be a SurfaceChart instance")
        self.__chart = chart
        self.__name  = str(name) if name is not None else "curve"
        try:
            points = np.array(points, dtype=FLOAT_TYPE)
        except Exception:
            raise_error(InvalidCurve, "curve '%s' points must be a numeric (m,2) array"%self.__name)
        if points.ndim != 2 or points.shape[1] != 2 or points.shape[0] < 8:
            raise_error(InvalidCurve, "curve '%s' needs at least 8 points of dimension 2"%self.__name)
        if not np.all(np.isfinite(points)):
            raise_error(InvalidCurve, "curve '%s' has non finite points"%self.__name)
        if np.linalg.norm(points[0]-points[-1]) < PRECISION:
            points = points[:-1]
        if nSamples is None:
            nSamples = len(points)
        assert is_integer(nSamples), LOGGER.error("nSamples must be an integer")
        nSamples = int(nSamples)
        assert nSamples>=8, LOGGER.error("nSamples must be >= 8")
        for p in points:
            if not chart.in_domain(p):
                raise_error(InvalidCurve, "curve '%s' leaves the chart domain at %s"%(self.__name, list(p)))
        segments = np.linalg.norm(np.diff(np.vstack([points, points[:1]]), axis=0), axis=1)
        if np.any(segments < PRECISION):
            raise_error(InvalidCurve, "curve '%s' has repeated consecutive points"%self.__name)
        self.__build(points, nSamples)

    def __build(self, points, nSamples):
        # first pass on metric chord lengths
        closed = np.vstack([points, points[:1]])
        middle = 0.5*(closed[1:]+closed[:-1])
        diffs  = np.diff(closed, axis=0)
        chords = np.array([self.__chart.norm(m, d) for m, d in zip(middle, diffs)], dtype=FLOAT_TYPE)
        t      = np.concatenate([[0.], np.cumsum(chords)])
        spline = CubicSpline(t, closed, bc_type="periodic")
        # accurate arclength of the first spline, then uniform resampling
        fine   = np.linspace(0., t[-1], 8*max(nSamples, len(points))+1)
        speeds = np.array([self.__chart.norm(p, d) for p, d in zip(spline(fine), spline(fine, 1))], dtype=FLOAT_TYPE)
        arc    = np.concatenate([[0.], np.cumsum(0.5*(speeds[1:]+speeds[:-1])*np.diff(fine))])
        length = arc[-1]
        s      = np.arange(nSamples, dtype=FLOAT_TYPE)*length/nSamples
        tOfS   = np.interp(s, arc, fine)
        samples = spline(tOfS)
        self.__length     = FLOAT_TYPE(length)
        self.__parameters = s
        self.__samples    = samples
        self.__spline     = CubicSpline(np.concatenate([s, [length]]), np.vstack([samples, samples[:1]]), bc_type="periodic")
        self.__tree       = cKDTree(samples)
        self.__boundingCenter = np.mean(samples, axis=0)
        self.__boundingRadius = FLOAT_TYPE(np.max(np.linalg.norm(samples-self.__boundingCenter, axis=1)))
        self.__orientation    = int(np.sign(polygon_signed_area(samples)))

    def __repr__(self):
        return "ConvexCurve(name=%s, length=%.6g, nSamples=%i)"%(self.__name, self.__length, len(self.__samples))

    @classmethod
    def circle(cls, chart, center, radius, nSamples=2048, name=None, clockwise=False):
        """
        Chart circle of given center and chart radius.

        :Parameters:
            #. chart (SurfaceChart): The chart.
            #. center (list): Chart center.
            #. radius (number): Chart radius.
            #. nSamples (int): Number of arclength samples.
            #. name (None, str): Curve name.
            #. clockwise (bool): Traverse the circle clockwise.
        """
        return cls.fourier_circle(chart, center, radius, coefficients=(), nSamples=nSamples, name=name, clockwise=clockwise)

    @classmethod
    def fourier_circle(cls, chart, center, radius, coefficients=(), nSamples=2048, name=None, clockwise=False):
        """
        Chart curve r(theta) = radius + sum_k a_k cos(k theta) + b_k sin(k theta)
        around center.

        :Parameters:
            #. coefficients (list): Rows [k, a_k, b_k].
        """
        assert is_number(radius) and radius>0, LOGGER.error("radius must be a positive number")
        center = np.array(center, dtype=FLOAT_TYPE).reshape(2)
        theta  = np.arange(nSamples, dtype=FLOAT_TYPE)*2*PI/nSamples
        r      = FLOAT_TYPE(radius)*np.ones_like(theta)
        for row in coefficients:
            assert len(row)==3, LOGGER.error("fourier coefficients rows must be [k, a_k, b_k]")
            k, a, b = row
            assert is_integer(k) and k>0, LOGGER.error("fourier order k must be a positive integer")
            r += a*np.cos(int(k)*theta) + b*np.sin(int(k)*theta)
        if np.any(r<=0):
            raise_error(InvalidCurve, "fourier circle radius becomes non positive")
        if clockwise:
            theta = -theta
        points = center[None,:] + r[:,None]*np.stack([np.cos(theta), np.sin(theta)], axis=1)
        return cls(chart, points, nSamples=nSamples, name=name)

    @property
    def chart(self):
        """The surface chart."""
        return self.__chart

    @property
    def name(self):
        """Curve name."""
        return self.__name

    @property
    def length(self):
        """Metric length."""
        return self.__length

    @property
    def samples(self):
        """(n,2) uniform arclength samples."""
        return self.__samples

    @property
    def parameters(self):
        """Arclength parameters of the samples."""
        return self.__parameters

    @property
    def nSamples(self):
        return len(self.__samples)

    @property
    def spacing(self):
        """Metric arclength between consecutive samples."""
        return self.__length/len(self.__samples)

    @property
    def boundingCenter(self):
        """Chart center of the bounding circle."""
        return self.__boundingCenter

    @property
    def boundingRadius(self):
        """Chart radius of the bounding circle."""
        return self.__boundingRadius

    @property
    def orientation(self):
        """1 for anti-clockwise, -1 for clockwise."""
        return self.__orientation

    @property
    def closureError(self):
        """Chart gap between position(0) and position(length)."""
        return FLOAT_TYPE(np.linalg.norm(self.__spline(0.)-self.__spline(self.__length)))

    def position(self, s):
        """Chart position at arclength s, s is wrapped."""
        return self.__spline(wrap_parameter(s, self.__length))

    def derivative(self, s, order=1):
        """Chart derivative of the position with respect to s."""
        return self.__spline(wrap_parameter(s, self.__length), order)

    def tangent(self, s):
        """Unit metric tangent at s."""
        return self.__chart.normalize(self.position(s), self.derivative(s))

    def outward_normal(self, s):
        """Unit tangent rotated by -pi/2 in the metric. Outward for
        anti-clockwise curves."""
        p = self.position(s)
        return -self.__chart.rotate_quarter(p, self.__chart.normalize(p, self.derivative(s)))

    def geodesic_curvature(self, s):
        """
        Signed geodesic curvature with respect to the curve's traversal
        direction, positive when the curve turns left.

        :Parameters:
            #. s (number): Arclength parameter.

        :Returns:
            #. kappa (float): Geodesic curvature.
        """
        p   = self.position(s)
        d1  = self.derivative(s, 1)
        d2  = self.derivative(s, 2)
        acc = d2 + np.einsum("kij,i,j->k", self.__chart.christoffel(p), d1, d1)
        n   = self.__chart.norm(p, d1)
        return FLOAT_TYPE(self.__chart.inner(p, acc, self.__chart.rotate_quarter(p, d1))/n**3)

    def curvatures(self):
        """Geodesic curvature at every sample."""
        return np.array([self.geodesic_curvature(s) for s in self.__parameters], dtype=FLOAT_TYPE)

    def nearest_parameter(self, points, iterations=6):
        """
        Arclength parameter of the nearest curve point in chart distance,
        by nearest sample search and Newton refinement on the spline.

        :Parameters:
            #. points (np.ndarray): (m,2) or (2,) chart points.

        :Returns:
            #. s (np.ndarray, float): Parameters.
        """
        points = np.asarray(points, dtype=FLOAT_TYPE)
        single = points.ndim == 1
        points = np.atleast_2d(points)
        _, idx = self.__tree.query(points)
        s = self.__parameters[idx].copy()
        h = self.spacing
        for _ in range(iterations):
            x  = self.__spline(wrap_parameter(s, self.__length))
            d1 = self.__spline(wrap_parameter(s, self.__length), 1)
            d2 = self.__spline(wrap_parameter(s, self.__length), 2)
            r  = x-points
            f  = np.sum(r*d1, axis=1)
            df = np.sum(d1*d1, axis=1) + np.sum(r*d2, axis=1)
            step = np.where(df>0, f/np.where(df>0, df, 1.), 0.)
            s = s - np.clip(step, -h, h)
        s = wrap_parameter(s, self.__length)
        return s[0] if single else s

    def signed_chart_distance(self, points):
        """
        Signed chart (Euclidean coordinate) distance to the curve, positive
        on the outer side of an anti-clockwise curve. Contact detection
        uses it as a sign test: its sign and zero set do not depend on the
        chart.

        :Parameters:
            #. points (np.ndarray): (m,2) or (2,) chart points.

        :Returns:
            #. distance (np.ndarray, float): Signed chart distances.
        """
        points = np.asarray(points, dtype=FLOAT_TYPE)
        single = points.ndim == 1
        points = np.atleast_2d(points)
        s  = np.atleast_1d(self.nearest_parameter(points))
        x  = self.__spline(s)
        d1 = self.__spline(s, 1)
        r  = points-x
        # chart normal (d1_y, -d1_x) is outward for anti-clockwise traversal
        side = np.sign(r[:,0]*d1[:,1]-r[:,1]*d1[:,0])*self.__orientation
        dist = np.sqrt(np.sum(r*r, axis=1))*np.where(side==0, 1., side)
        return dist[0] if single else dist

    def signed_distance(self, points, tolerance=1e-12):
        """
        Signed metric distance to the curve, positive outside. The nearest
        sample in metric distance is refined by a bounded minimization of
        the metric distance along the spline.

        :Parameters:
            #. points (np.ndarray): (m,2) or (2,) chart points.
            #. tolerance (number): Arclength tolerance of the refinement.

        :Returns:
            #. distance (np.ndarray, float): Signed metric distances.
        """
        points = np.asarray(points, dtype=FLOAT_TYPE)
        single = points.ndim == 1
        points = np.atleast_2d(points)
        side   = np.sign(self.signed_chart_distance(points))
        dist   = np.empty(len(points), dtype=FLOAT_TYPE)
        h      = self.spacing
        for i, p in enumerate(points):
            d = self.__chart.distances(np.repeat(p[None,:], len(self.__samples), axis=0), self.__samples)
            k = int(np.argmin(d))
            s = self.__parameters[k]
            res = minimize_scalar(lambda u: self.__chart.distance(p, self.position(wrap_parameter(u, self.__length))),
                                  bounds=(s-h, s+h), method="bounded", options={"xatol":tolerance})
            dist[i] = min(d[k], res.fun)
        dist = dist*np.where(side==0, 1., side)
        return dist[0] if single else dist

    def contains(self, points):
        """Whether points are strictly inside the curve."""
        return self.signed_chart_distance(points) < 0

    def reversed(self):
        """Same curve traversed the other way."""
        return ConvexCurve(self.__chart, self.__samples[::-1], nSamples=len(self.__samples), name=self.__name)
