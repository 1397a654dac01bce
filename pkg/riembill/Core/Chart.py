"""
Chart contains the surface charts riembill works on and the geodesic
machinery built upon them.

A chart is a domain of R^2 carrying a Riemannian metric g. Geodesics solve
the second order system

.. math::

    \\ddot{x}^k + \\Gamma^k_{ij} \\dot{x}^i \\dot{x}^j = 0

which is integrated by an adaptive embedded Runge-Kutta pair with the
velocity renormalised to unit speed after every accepted step. The
Euclidean plane and the Poincare half-plane also know their geodesics in
closed form. Those closed forms serve as oracles for the integrator and
as the fast path used by the billiard tracer.

.. inheritance-diagram:: riembill.Core.Chart
    :parts: 1
"""
# standard libraries imports
import inspect

# external libraries imports
import numpy as np
from scipy.integrate import RK45
from scipy.optimize import root, minimize_scalar

# riembill imports
from riembill.Globals import FLOAT_TYPE, PRECISION, PI, FLOAT_PLUS_INFINITY, LOGGER
from riembill.Core.Collection import raise_error, is_number
from riembill.Core.Errors import ChartDomainExceeded, NoConvergence, DegenerateEndpoints


class PhaseState(object):
    """
    A point of the tangent bundle: chart coordinates and a tangent vector.

    :Parameters:
        #. point (list, np.ndarray): Chart coordinates (2,).
        #. velocity (list, np.ndarray): Tangent vector (2,).
    """
    __slots__ = ("point", "velocity")

    def __init__(self, point, velocity):
        self.point    = np.array(point, dtype=FLOAT_TYPE).reshape(2)
        self.velocity = np.array(velocity, dtype=FLOAT_TYPE).reshape(2)

    def __repr__(self):
        return "PhaseState(point=%s, velocity=%s)"%(list(self.point), list(self.velocity))

    def copy(self):
        """Get a copy of the state."""
        return PhaseState(self.point, self.velocity)

    def reversed(self):
        """Get the same point with the opposite velocity."""
        return PhaseState(self.point, -self.velocity)


class SurfaceChart(object):
    """
    Parent class of all surface charts. It implements everything from the
    metric tensor alone: Christoffel symbols and Gaussian curvature by
    central differences, geodesic integration, distance and two point
    geodesics by shooting. Sub-classes with analytic expressions overload
    what they know better.

    **N.B. This class can't be instantiated but its sub-classes might be.**

    :Parameters:
        #. injectivityRadius (number): The injectivity radius rho of the
           chart. Use numpy.inf when geodesics have no conjugate points.
        #. tolerance (number): Relative and absolute tolerance of the
           adaptive integrator.
        #. differenceStep (number): Step of the central differences.
    """
    kind = None

    def __init__(self, injectivityRadius=np.inf, tolerance=1e-12, differenceStep=1e-5):
        if self.__class__.__name__ == "SurfaceChart":
            raise Exception(LOGGER.usage("%s instanciation is not allowed"%(self.__class__.__name__)))
        self.set_injectivity_radius(injectivityRadius)
        self.set_tolerance(tolerance)
        assert is_number(differenceStep), LOGGER.error("differenceStep must be a number")
        assert differenceStep>0, LOGGER.error("differenceStep must be positive")
        self.__differenceStep = FLOAT_TYPE(differenceStep)

    def __repr__(self):
        return "%s(injectivityRadius=%s)"%(self.__class__.__name__, self.__injectivityRadius)

    @property
    def injectivityRadius(self):
        """Injectivity radius rho."""
        return self.__injectivityRadius

    @property
    def tolerance(self):
        """Integrator tolerance."""
        return self.__tolerance

    @property
    def differenceStep(self):
        """Central differences step."""
        return self.__differenceStep

    @property
    def hasClosedForm(self):
        """Whether geodesics are known in closed form."""
        return False

    def set_injectivity_radius(self, injectivityRadius):
        """
        Set the chart injectivity radius.

        :Parameters:
            #. injectivityRadius (number): Positive length or numpy.inf.
        """
        assert is_number(injectivityRadius), LOGGER.error("injectivityRadius must be a number")
        injectivityRadius = FLOAT_TYPE(injectivityRadius)
        assert injectivityRadius>0, LOGGER.error("injectivityRadius must be positive")
        self.__injectivityRadius = injectivityRadius

    def set_tolerance(self, tolerance):
        """
        Set the integrator tolerance.

        :Parameters:
            #. tolerance (number): Positive tolerance smaller than 1e-3.
        """
        assert is_number(tolerance), LOGGER.error("tolerance must be a number")
        tolerance = FLOAT_TYPE(tolerance)
        assert 0<tolerance<1e-3, LOGGER.error("tolerance must be in (0, 1e-3)")
        self.__tolerance = tolerance

    # ------------------------------------------------------------ metric
    def metric(self, p):
        """
        Get the metric tensor at chart point p.
        This method must be overloaded in all SurfaceChart sub-classes.

        :Parameters:
            #. p (np.ndarray): Chart point (2,).

        :Returns:
            #. g (np.ndarray): Symmetric positive definite (2,2) matrix.
        """
        raise Exception(LOGGER.impl("%s '%s' method must be overloaded"%(self.__class__.__name__,inspect.stack()[0][3])))

    def in_domain(self, p):
        """Whether p belongs to the chart domain."""
        return bool(np.all(np.isfinite(p)))

    def check_domain(self, p):
        """Raise ChartDomainExceeded when p is outside the chart domain."""
        if not self.in_domain(p):
            raise_error(ChartDomainExceeded, "point %s is outside the domain of %s"%(list(np.asarray(p)), self.__class__.__name__), point=np.asarray(p))

    def inner(self, p, u, v):
        """Metric inner product g_p(u,v)."""
        return FLOAT_TYPE(np.dot(u, np.dot(self.metric(p), v)))

    def norm(self, p, v):
        """Metric norm of v at p."""
        return FLOAT_TYPE(np.sqrt(self.inner(p, v, v)))

    def normalize(self, p, v):
        """Rescale v to unit metric length at p."""
        v = np.asarray(v, dtype=FLOAT_TYPE)
        n = self.norm(p, v)
        assert n>PRECISION**2, LOGGER.error("can't normalize a null vector")
        return v/n

    def max_chart_speed(self, p):
        """Largest chart length of a unit tangent vector at p."""
        return FLOAT_TYPE(1./np.sqrt(np.min(np.linalg.eigvalsh(self.metric(p)))))

    def rotate_quarter(self, p, v):
        """
        Rotate v by +pi/2 in the metric sense: the result is g-orthogonal to
        v, has the same norm and the pair (v, result) is positively oriented.
        """
        v = np.asarray(v, dtype=FLOAT_TYPE)
        g = self.metric(p)
        w = -np.linalg.solve(g, np.array([v[1], -v[0]], dtype=FLOAT_TYPE))
        n = self.norm(p, w)
        return w*(self.norm(p, v)/n) if n>0 else w

    def direction(self, p, v, angle):
        """Rotate unit vector v at p by angle in the metric sense."""
        return np.cos(angle)*np.asarray(v, dtype=FLOAT_TYPE) + np.sin(angle)*self.rotate_quarter(p, v)

    def angle_between(self, p, u, v):
        """Signed metric angle from u to v at p."""
        u = self.normalize(p, u)
        v = self.normalize(p, v)
        return FLOAT_TYPE(np.arctan2(self.inner(p, self.rotate_quarter(p, u), v), self.inner(p, u, v)))

    def unit_vector(self, p, angle):
        """Unit vector at p making a metric angle with the chart x axis direction."""
        e1 = self.normalize(p, np.array([1., 0.], dtype=FLOAT_TYPE))
        return self.direction(p, e1, angle)

    def christoffel(self, p):
        """
        Get the Christoffel symbols at p by central differences of the
        metric.

        :Returns:
            #. gamma (np.ndarray): (2,2,2) array, gamma[k,i,j] is
               Gamma^k_ij.
        """
        p  = np.asarray(p, dtype=FLOAT_TYPE)
        h  = self.__differenceStep
        dg = np.empty((2,2,2), dtype=FLOAT_TYPE)
        for a in range(2):
            e = np.zeros(2, dtype=FLOAT_TYPE)
            e[a] = h
            dg[a] = (self.metric(p+e)-self.metric(p-e))/(2*h)
        gInv  = np.linalg.inv(self.metric(p))
        gamma = np.empty((2,2,2), dtype=FLOAT_TYPE)
        for k in range(2):
            for i in range(2):
                for j in range(2):
                    gamma[k,i,j] = 0.5*sum(gInv[k,l]*(dg[i][l,j]+dg[j][l,i]-dg[l][i,j]) for l in range(2))
        return gamma

    def gaussian_curvature(self, p):
        """
        Get the Gaussian curvature at p from central differences of the
        Christoffel symbols.
        """
        p  = np.asarray(p, dtype=FLOAT_TYPE)
        h  = 10*self.__differenceStep
        G  = self.christoffel(p)
        dG = []
        for a in range(2):
            e = np.zeros(2, dtype=FLOAT_TYPE)
            e[a] = h
            dG.append( (self.christoffel(p+e)-self.christoffel(p-e))/(2*h) )
        R = np.empty(2, dtype=FLOAT_TYPE)
        for l in range(2):
            R[l] = dG[0][l,1,1] - dG[1][l,0,1] + \
                   sum(G[l,0,m]*G[m,1,1] for m in range(2)) - \
                   sum(G[l,1,m]*G[m,0,1] for m in range(2))
        g = self.metric(p)
        return FLOAT_TYPE( (g[0,0]*R[0]+g[1,0]*R[1])/np.linalg.det(g) )

    def acceleration(self, p, v):
        """Geodesic acceleration -Gamma^k_ij v^i v^j."""
        G = self.christoffel(p)
        return -np.einsum("kij,i,j->k", G, v, v)

    # ---------------------------------------------------------- geodesics
    def _geodesic_rhs(self, s, z):
        return np.concatenate([z[2:], self.acceleration(z[:2], z[2:])])

    def geodesic_flow(self, state, arclength, tolerance=None):
        """
        Integrate the geodesic system for a given arclength with an
        adaptive Dormand-Prince 5(4) pair. The velocity is renormalised to
        unit speed after every accepted step.

        :Parameters:
            #. state (PhaseState): Unit speed initial state.
            #. arclength (number): Non negative arclength.
            #. tolerance (None, number): Integrator tolerance. None uses the
               chart tolerance.

        :Returns:
            #. state (PhaseState): The flowed state.
        """
        assert isinstance(state, PhaseState), LOGGER.error("state must be a PhaseState instance")
        assert is_number(arclength), LOGGER.error("arclength must be a number")
        arclength = FLOAT_TYPE(arclength)
        assert arclength>=0, LOGGER.error("arclength must be >= 0")
        self.check_domain(state.point)
        if arclength == 0:
            return state.copy()
        if tolerance is None:
            tolerance = self.__tolerance
        z0 = np.concatenate([state.point, self.normalize(state.point, state.velocity)])
        solver = RK45(self._geodesic_rhs, 0., z0, arclength, rtol=tolerance, atol=tolerance)
        while solver.status == "running":
            message = solver.step()
            if solver.status == "failed":
                raise_error(NoConvergence, "geodesic integration failed (%s)"%message)
            self.check_domain(solver.y[:2])
            solver.y[2:] = self.normalize(solver.y[:2], solver.y[2:])
            solver.f     = self._geodesic_rhs(solver.t, solver.y)
        return PhaseState(solver.y[:2], solver.y[2:])

    def closed_form_points(self, state, arclengths):
        """
        Evaluate the geodesic in closed form at several arclengths.
        This method must be overloaded in sub-classes with closed forms.

        :Returns:
            #. points (np.ndarray): (m,2) chart points.
            #. velocities (np.ndarray): (m,2) unit velocities.
        """
        raise Exception(LOGGER.impl("%s '%s' method must be overloaded"%(self.__class__.__name__,inspect.stack()[0][3])))

    def flow(self, state, arclength):
        """
        Flow a state along its geodesic. Closed forms are used when the
        chart has them, the integrator otherwise.
        """
        if self.hasClosedForm:
            P, V = self.closed_form_points(state, np.array([arclength], dtype=FLOAT_TYPE))
            return PhaseState(P[0], V[0])
        return self.geodesic_flow(state, abs(arclength)) if arclength>=0 else \
               self.geodesic_flow(state.reversed(), -arclength).reversed()

    def flow_points(self, state, arclengths):
        """
        Points and velocities of a geodesic at several arclengths.

        :Parameters:
            #. state (PhaseState): Initial state.
            #. arclengths (np.ndarray): Arclengths, any order and sign.

        :Returns:
            #. points (np.ndarray): (m,2) chart points.
            #. velocities (np.ndarray): (m,2) unit velocities.
        """
        arclengths = np.asarray(arclengths, dtype=FLOAT_TYPE).reshape(-1)
        if self.hasClosedForm:
            return self.closed_form_points(state, arclengths)
        order  = np.argsort(arclengths)
        points = np.empty((len(arclengths),2), dtype=FLOAT_TYPE)
        vels   = np.empty((len(arclengths),2), dtype=FLOAT_TYPE)
        # negative side walks backward from zero, positive side forward
        for sign in (-1, 1):
            idx = [i for i in order if np.sign(arclengths[i]) in ((sign,) if sign<0 else (0, sign))]
            if sign<0:
                idx = idx[::-1]
            current, position = (state.reversed() if sign<0 else state.copy()), 0.
            for i in idx:
                step     = abs(arclengths[i]) - position
                current  = self.geodesic_flow(current, step)
                position = abs(arclengths[i])
                points[i] = current.point
                vels[i]   = current.velocity if sign>0 else -current.velocity
        return points, vels

    def distance(self, p, q):
        """
        Geodesic distance between p and q, by shooting. Sub-classes with
        closed forms overload it.

        :Returns:
            #. distance (float): The geodesic distance.
        """
        p = np.asarray(p, dtype=FLOAT_TYPE)
        q = np.asarray(q, dtype=FLOAT_TYPE)
        if np.linalg.norm(p-q) < PRECISION**2:
            return FLOAT_TYPE(0)
        _, length = self._shoot(p, q)
        return length

    def distances(self, P, Q):
        """Pairwise distances between rows of P and rows of Q, element wise."""
        P = np.atleast_2d(P)
        Q = np.atleast_2d(Q)
        return np.array([self.distance(p, q) for p, q in zip(P, Q)], dtype=FLOAT_TYPE)

    def geodesic_between(self, p, q):
        """
        Initial unit state at p of the geodesic reaching q.

        :Returns:
            #. state (PhaseState): The state at p.
        """
        p = np.asarray(p, dtype=FLOAT_TYPE)
        q = np.asarray(q, dtype=FLOAT_TYPE)
        if np.linalg.norm(p-q) < PRECISION**2:
            raise_error(DegenerateEndpoints, "geodesic endpoints %s and %s coincide"%(list(p), list(q)))
        velocity, _ = self._shoot(p, q)
        return PhaseState(p, velocity)

    def _chart_segment_length(self, p, q, n=32):
        t  = (np.arange(n)+0.5)/n
        d  = q-p
        return FLOAT_TYPE(sum(self.norm(p+ti*d, d) for ti in t)/n)

    def _shoot(self, p, q, maxIterations=100):
        e1 = self.normalize(p, np.array([1., 0.], dtype=FLOAT_TYPE))
        a0 = self.angle_between(p, e1, q-p)
        L0 = self._chart_segment_length(p, q)
        scale = max(1., np.linalg.norm(q-p))
        def residual(x):
            v = self.direction(p, e1, x[0])
            try:
                end = self.geodesic_flow(PhaseState(p, v), abs(x[1])).point
            except ChartDomainExceeded:
                return np.array([1e3, 1e3])*scale
            return (end-q)/scale
        solution = root(residual, [a0, L0], method="hybr", options={"maxfev":maxIterations, "xtol":1e-13})
        if np.linalg.norm(residual(solution.x))*scale > 1e-8:
            raise_error(NoConvergence, "shooting from %s to %s did not converge"%(list(p), list(q)))
        return self.direction(p, e1, solution.x[0]), FLOAT_TYPE(abs(solution.x[1]))

    # ------------------------------------------------------ fermi frames
    def fermi_coordinates(self, state, points):
        """
        Fermi coordinates (u, w) of points with respect to the geodesic of
        state: u is the arclength of the foot point, w the signed distance,
        positive on the left of the geodesic.

        :Returns:
            #. coordinates (np.ndarray): (m,2) array of (u, w).
        """
        points = np.atleast_2d(np.asarray(points, dtype=FLOAT_TYPE))
        result = np.empty((len(points),2), dtype=FLOAT_TYPE)
        for i, point in enumerate(points):
            guess = self._chart_segment_length(state.point, point) if np.linalg.norm(point-state.point)>0 else 0.
            span  = 2*guess + 1.
            f = lambda u: self.distance(self.flow(state, u).point, point) if abs(np.linalg.norm(self.flow(state, u).point-point))>PRECISION**2 else 0.
            sol  = minimize_scalar(f, bounds=(-span, span), method="bounded", options={"xatol":1e-12})
            foot = self.flow(state, sol.x)
            side = np.sign(self.inner(foot.point, self.rotate_quarter(foot.point, foot.velocity), point-foot.point))
            result[i] = sol.x, side*sol.fun
        return result

    def fermi_point(self, state, u, w):
        """Inverse of fermi_coordinates for a single (u, w)."""
        foot = self.flow(state, u)
        if w == 0:
            return foot.point
        normal = PhaseState(foot.point, self.rotate_quarter(foot.point, foot.velocity))
        return self.flow(normal, w).point


class EuclideanPlane(SurfaceChart):
    """
    The Euclidean plane. Geodesics are straight lines and the injectivity
    radius is infinite.
    """
    kind = "euclidean-plane"

    def __init__(self, tolerance=1e-12):
        super(EuclideanPlane, self).__init__(injectivityRadius=np.inf, tolerance=tolerance)

    @property
    def hasClosedForm(self):
        return True

    def metric(self, p):
        return np.eye(2, dtype=FLOAT_TYPE)

    def christoffel(self, p):
        return np.zeros((2,2,2), dtype=FLOAT_TYPE)

    def gaussian_curvature(self, p):
        return FLOAT_TYPE(0)

    def max_chart_speed(self, p):
        return FLOAT_TYPE(1)

    def closed_form_points(self, state, arclengths):
        arclengths = np.asarray(arclengths, dtype=FLOAT_TYPE).reshape(-1)
        v = state.velocity/np.linalg.norm(state.velocity)
        P = state.point[None,:] + arclengths[:,None]*v[None,:]
        V = np.repeat(v[None,:], len(arclengths), axis=0)
        return P, V

    def distance(self, p, q):
        return FLOAT_TYPE(np.linalg.norm(np.asarray(q, dtype=FLOAT_TYPE)-np.asarray(p, dtype=FLOAT_TYPE)))

    def distances(self, P, Q):
        return np.sqrt(np.sum((np.atleast_2d(P)-np.atleast_2d(Q))**2, axis=-1))

    def geodesic_between(self, p, q):
        p = np.asarray(p, dtype=FLOAT_TYPE)
        q = np.asarray(q, dtype=FLOAT_TYPE)
        d = np.linalg.norm(q-p)
        if d < PRECISION**2:
            raise_error(DegenerateEndpoints, "geodesic endpoints %s and %s coincide"%(list(p), list(q)))
        return PhaseState(p, (q-p)/d)

    def fermi_coordinates(self, state, points):
        points = np.atleast_2d(np.asarray(points, dtype=FLOAT_TYPE))
        v = state.velocity/np.linalg.norm(state.velocity)
        d = points-state.point[None,:]
        return np.stack([d.dot(v), v[0]*d[:,1]-v[1]*d[:,0]], axis=1)

    def fermi_point(self, state, u, w):
        v = state.velocity/np.linalg.norm(state.velocity)
        return state.point + u*v + w*np.array([-v[1], v[0]], dtype=FLOAT_TYPE)


class PoincareHalfPlane(SurfaceChart):
    """
    The Poincare half-plane y > 0 with metric (dx^2+dy^2)/y^2. Gaussian
    curvature is -1 everywhere. Geodesics are vertical half-lines and half
    circles centred on the x axis. They are evaluated in closed form as
    images of the vertical geodesic through i under the Moebius rotation
    fixing i, which stays accurate for every direction.
    """
    kind = "poincare-half-plane"

    def __init__(self, tolerance=1e-12):
        super(PoincareHalfPlane, self).__init__(injectivityRadius=np.inf, tolerance=tolerance)

    @property
    def hasClosedForm(self):
        return True

    def in_domain(self, p):
        return bool(np.all(np.isfinite(p)) and p[1] > 0)

    def metric(self, p):
        return np.eye(2, dtype=FLOAT_TYPE)/(FLOAT_TYPE(p[1])**2)

    def christoffel(self, p):
        y = FLOAT_TYPE(p[1])
        gamma = np.zeros((2,2,2), dtype=FLOAT_TYPE)
        gamma[0,0,1] = gamma[0,1,0] = -1./y
        gamma[1,0,0] =  1./y
        gamma[1,1,1] = -1./y
        return gamma

    def gaussian_curvature(self, p):
        return FLOAT_TYPE(-1)

    def max_chart_speed(self, p):
        return FLOAT_TYPE(p[1])

    def closed_form_points(self, state, arclengths):
        arclengths = np.asarray(arclengths, dtype=FLOAT_TYPE).reshape(-1)
        x0, y0 = state.point
        phi = np.arctan2(state.velocity[1], state.velocity[0]) - PI/2
        c, s = np.cos(phi/2), np.sin(phi/2)
        w    = 1j*np.exp(arclengths)
        den  = -s*w + c
        z    = x0 + y0*(c*w + s)/den
        dz   = y0*1j*w/den**2
        P = np.stack([z.real, z.imag], axis=1)
        V = np.stack([dz.real, dz.imag], axis=1)
        return P, V

    def distance(self, p, q):
        p = np.asarray(p, dtype=FLOAT_TYPE)
        q = np.asarray(q, dtype=FLOAT_TYPE)
        return FLOAT_TYPE( 2*np.arcsinh(np.linalg.norm(q-p)/(2*np.sqrt(p[1]*q[1]))) )

    def distances(self, P, Q):
        P = np.atleast_2d(P)
        Q = np.atleast_2d(Q)
        return 2*np.arcsinh(np.sqrt(np.sum((P-Q)**2, axis=-1))/(2*np.sqrt(P[...,1]*Q[...,1])))

    def geodesic_between(self, p, q):
        p = np.asarray(p, dtype=FLOAT_TYPE)
        q = np.asarray(q, dtype=FLOAT_TYPE)
        if np.linalg.norm(p-q) < PRECISION**2:
            raise_error(DegenerateEndpoints, "geodesic endpoints %s and %s coincide"%(list(p), list(q)))
        w     = complex((q[0]-p[0])/p[1], q[1]/p[1])
        theta = np.angle((w-1j)/(w+1j)) + PI/2
        return PhaseState(p, p[1]*np.array([np.cos(theta), np.sin(theta)], dtype=FLOAT_TYPE))

    def _moebius(self, state):
        # real Moebius map sending the geodesic of state onto the upward imaginary axis
        x0, y0 = state.point
        vx, vy = state.velocity/np.linalg.norm(state.velocity)
        if abs(vx) < 1e-14:
            if vy > 0:
                return (1., -x0, 0., 1.)
            return (0., -1., 1., -x0)
        cx = x0 + y0*vy/vx
        R  = np.hypot(x0-cx, y0)
        a, b = (cx-R, cx+R) if vx>0 else (cx+R, cx-R)
        if a > b:
            return (1., -a, 1., -b)
        return (-1., a, 1., -b)

    def fermi_coordinates(self, state, points):
        points = np.atleast_2d(np.asarray(points, dtype=FLOAT_TYPE))
        al, be, ga, de = self._moebius(state)
        T  = lambda z: (al*z+be)/(ga*z+de)
        z0 = T(complex(state.point[0], state.point[1]))
        z  = T(points[:,0]+1j*points[:,1])
        u  = np.log(np.abs(z)) - np.log(np.abs(z0))
        w  = -np.arcsinh(z.real/z.imag)
        return np.stack([u, w], axis=1)

    def fermi_point(self, state, u, w):
        al, be, ga, de = self._moebius(state)
        z0  = (al*complex(*state.point)+be)/(ga*complex(*state.point)+de)
        rho = np.abs(z0)*np.exp(u)
        zm  = complex(-rho*np.tanh(w), rho/np.cosh(w))
        # inverse of (al z + be)/(ga z + de)
        z   = (de*zm - be)/(-ga*zm + al)
        return np.array([z.real, z.imag], dtype=FLOAT_TYPE)


class CustomMetric(SurfaceChart):
    """
    A chart with user supplied metric components. Components are callables
    of (x, y) or numpy expression strings in x and y, for instance
    ``"1+0.1*x**2"``. Christoffel symbols, curvature, geodesics and
    distances all derive from the components numerically.

    :Parameters:
        #. g11, g12, g22 (callable, str): Metric components.
        #. injectivityRadius (number): rho, must be supplied by the user.
        #. bounds (None, list): Chart box [xmin, xmax, ymin, ymax].
        #. tolerance (number): Integrator tolerance.
    """
    kind = "custom-metric"
    _NAMESPACE = dict( (name, getattr(np, name)) for name in ("sin","cos","tan","exp","log","sqrt",
                                                              "sinh","cosh","tanh","arctan","abs","pi") )

    def __init__(self, g11, g12, g22, injectivityRadius=np.inf, bounds=None, tolerance=1e-10):
        super(CustomMetric, self).__init__(injectivityRadius=injectivityRadius, tolerance=tolerance)
        self.__sources    = (g11, g12, g22)
        self.__components = [self.__compile(c) for c in self.__sources]
        if bounds is not None:
            assert len(bounds)==4, LOGGER.error("bounds must be [xmin, xmax, ymin, ymax]")
            bounds = [FLOAT_TYPE(b) for b in bounds]
            assert bounds[0]<bounds[1] and bounds[2]<bounds[3], LOGGER.error("bounds must be increasing")
        self.__bounds = bounds

    def __getstate__(self):
        state = dict(self.__dict__)
        state.pop("_CustomMetric__components")
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self.__components = [self.__compile(c) for c in self.__sources]

    def __compile(self, component):
        if callable(component):
            return component
        if is_number(component):
            value = FLOAT_TYPE(component)
            return lambda x, y: value
        assert isinstance(component, str), LOGGER.error("metric component must be a callable, a number or an expression string")
        code = compile(component, "<metric>", "eval")
        namespace = dict(self._NAMESPACE)
        return lambda x, y: eval(code, {"__builtins__":{}}, dict(namespace, x=x, y=y))

    @property
    def sources(self):
        """Metric components as given."""
        return self.__sources

    @property
    def bounds(self):
        """Chart box or None."""
        return self.__bounds

    def metric(self, p):
        x, y = FLOAT_TYPE(p[0]), FLOAT_TYPE(p[1])
        g11, g12, g22 = [FLOAT_TYPE(c(x, y)) for c in self.__components]
        return np.array([[g11, g12],[g12, g22]], dtype=FLOAT_TYPE)

    def in_domain(self, p):
        if not np.all(np.isfinite(p)):
            return False
        if self.__bounds is not None:
            if not (self.__bounds[0] <= p[0] <= self.__bounds[1] and self.__bounds[2] <= p[1] <= self.__bounds[3]):
                return False
        g = self.metric(p)
        return bool(g[0,0] > 0 and np.linalg.det(g) > 0)


def get_chart(name, **parameters):
    """
    Build a chart from its kind name.

    :Parameters:
        #. name (str): 'euclidean-plane', 'poincare-half-plane' or
           'custom-metric'.
        #. parameters (kwargs): Chart constructor parameters.

    :Returns:
        #. chart (SurfaceChart): The chart instance.
    """
    charts = dict((c.kind, c) for c in (EuclideanPlane, PoincareHalfPlane, CustomMetric))
    assert name in charts, LOGGER.error("unknown surface name '%s', must be one of %s"%(name, sorted(charts)))
    return charts[name](**parameters)

def geodesic_flow(chart, state, arclength, tolerance=None):
    """Integrate the geodesic of state for arclength on chart. See
    SurfaceChart.geodesic_flow."""
    return chart.geodesic_flow(state, arclength, tolerance=tolerance)

def distance(chart, p, q):
    """Geodesic distance between p and q on chart."""
    return chart.distance(p, q)

def geodesic_between(chart, p, q):
    """Initial unit state at p of the geodesic from p to q on chart."""
    return chart.geodesic_between(p, q)
