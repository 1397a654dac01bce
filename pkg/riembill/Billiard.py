"""
Billiard traces generalised geodesics: geodesic segments joined by specular
reflections on the obstacles' boundaries, starting and ending on the
boundary of the domain S.

Rays start at a boundary point x of S with an inward unit direction. A
start is described either by the direction itself or by its angle a in
(-pi/2, pi/2) from the inward normal, positive towards the boundary
tangent:

.. math::

    \\omega = \\cos(a) (-\\nu_x) + \\sin(a) T_x

Contacts with |g(omega, nu)| below the tangency tolerance are recorded as
tangencies and leave the direction unchanged.

.. code-block:: python

    from riembill.Billiard import trace_angle

    trajectory = trace_angle(scene, x=0., angle=0.)
    print(trajectory.order, trajectory.totalTime, trajectory.signature)
"""
# standard libraries imports
from collections import namedtuple

# external libraries imports
import numpy as np
from scipy.optimize import brentq, minimize_scalar

# riembill imports
from riembill.Globals import FLOAT_TYPE, PRECISION, PI, DOMAIN_INDEX, LOGGER
from riembill.Core.Collection import raise_error, is_number, is_integer
from riembill.Core.Errors import NoHitWithinBudget, Trapped, OrderBoundViolation
from riembill.Core.Chart import PhaseState

TANGENCY_TOLERANCE = FLOAT_TYPE(1e-6)
GRAZE_TOLERANCE    = FLOAT_TYPE(1e-10)
MAX_ORDER          = 12
MAX_TIME_FACTOR    = FLOAT_TYPE(20)
MAX_SEGMENT_FACTOR = FLOAT_TYPE(4)
MARCH_FRACTION     = FLOAT_TYPE(1./32)
CHUNK              = 48

Hit = namedtuple("Hit", ["point", "arclength", "curve", "parameter", "velocity", "normal", "incidence"])
Hit.__doc__ = """First contact of a geodesic with a curve. curve is DOMAIN_INDEX
when the geodesic leaves S. incidence is arcsin|g(velocity, normal)|."""

Event = namedtuple("Event", ["point", "incoming", "outgoing", "tangency", "curve", "parameter"])
Event.__doc__ = """A contact of a trajectory with the boundary of S_K."""


class Trajectory(object):
    """
    One generalised geodesic.

    :Parameters:
        #. start (PhaseState): Start state on the boundary of S.
        #. startParameter (None, number): Arclength parameter of the start
           on the boundary of S.
    """
    def __init__(self, start, startParameter=None):
        assert isinstance(start, PhaseState), LOGGER.error("start must be a PhaseState instance")
        self.__start          = start
        self.__startParameter = startParameter
        self.__events         = []
        self.__segmentLengths = []

    def __repr__(self):
        return "Trajectory(order=%i, tangencies=%i, time=%.10g, signature=%s)"%(self.order, self.tangencyCount, self.totalTime, self.signature)

    @property
    def start(self):
        """Start state."""
        return self.__start

    @property
    def startParameter(self):
        return self.__startParameter

    @property
    def events(self):
        """Ordered events. The last one is on the boundary of S for complete
        trajectories."""
        return list(self.__events)

    @property
    def segmentLengths(self):
        return list(self.__segmentLengths)

    @property
    def totalTime(self):
        """Sum of segment lengths."""
        return FLOAT_TYPE(np.sum(self.__segmentLengths)) if len(self.__segmentLengths) else FLOAT_TYPE(0)

    @property
    def obstacleEvents(self):
        return [e for e in self.__events if e.curve != DOMAIN_INDEX]

    @property
    def order(self):
        """Number of contacts with obstacles, tangencies included."""
        return len(self.obstacleEvents)

    @property
    def tangencyCount(self):
        return sum(1 for e in self.__events if e.tangency)

    @property
    def signature(self):
        """Tuple of obstacle indexes in contact order."""
        return tuple(int(e.curve) for e in self.obstacleEvents)

    @property
    def isComplete(self):
        """Whether the trajectory reached the boundary of S."""
        return len(self.__events)>0 and self.__events[-1].curve == DOMAIN_INDEX

    @property
    def end(self):
        """End state on the boundary of S, None if not complete."""
        if not self.isComplete:
            return None
        e = self.__events[-1]
        return PhaseState(e.point, e.incoming)

    @property
    def endParameter(self):
        """Arclength parameter of the end point on the boundary of S."""
        if not self.isComplete:
            return None
        return self.__events[-1].parameter

    @property
    def tangencyPositionValid(self):
        """Whether every tangency is the first or the last obstacle contact."""
        contacts = self.obstacleEvents
        for i, e in enumerate(contacts):
            if e.tangency and i not in (0, len(contacts)-1):
                return False
        return True

    @property
    def tangencyPositions(self):
        """List of 'first', 'last' or 'inner' per tangency. A single contact
        is reported as 'first'."""
        contacts = self.obstacleEvents
        positions = []
        for i, e in enumerate(contacts):
            if e.tangency:
                positions.append("first" if i==0 else ("last" if i==len(contacts)-1 else "inner"))
        return positions

    def add_event(self, event, length):
        """
        Append an event reached after a segment of given length.

        :Parameters:
            #. event (Event): The event.
            #. length (number): Length of the segment ending at the event.
        """
        assert isinstance(event, Event), LOGGER.error("event must be an Event instance")
        assert length>=0, LOGGER.error("segment length must be >= 0")
        self.__events.append(event)
        self.__segmentLengths.append(FLOAT_TYPE(length))


def reflect(chart, x, omega, nu):
    """
    Specular reflection omega - 2 g(omega,nu) nu, renormalised.

    :Parameters:
        #. chart (SurfaceChart): The chart.
        #. x (np.ndarray): Chart point.
        #. omega (np.ndarray): Unit tangent vector at x.
        #. nu (np.ndarray): Unit normal at x.

    :Returns:
        #. omega (np.ndarray): Reflected unit vector.
    """
    omega = np.asarray(omega, dtype=FLOAT_TYPE)
    nu    = np.asarray(nu, dtype=FLOAT_TYPE)
    return chart.normalize(x, omega - 2*chart.inner(x, omega, nu)*nu)

def boundary_state(scene, x, angle):
    """
    Start state at boundary parameter x with angle from the inward normal.

    :Parameters:
        #. scene (Scene): The scene.
        #. x (number): Arclength parameter on the boundary of S.
        #. angle (number): Angle in (-pi/2, pi/2).

    :Returns:
        #. state (PhaseState): The start state.
    """
    domain = scene.domain
    p = domain.position(x)
    return PhaseState(p, np.cos(angle)*(-domain.outward_normal(x)) + np.sin(angle)*domain.tangent(x))

def boundary_angle(scene, x, omega, outgoing=False):
    """
    Angle of a unit vector at boundary parameter x, measured from the inward
    normal, or from the outward normal when outgoing is True.
    """
    domain = scene.domain
    p  = domain.position(x)
    nu = domain.outward_normal(x) if outgoing else -domain.outward_normal(x)
    T  = domain.tangent(x)
    return FLOAT_TYPE(np.arctan2(scene.chart.inner(p, omega, T), scene.chart.inner(p, omega, nu)))

def _segment_samples(chart, state, s0, s1, n):
    s = np.linspace(s0, s1, n)
    P, V = chart.flow_points(state, s)
    return s, P, V

def first_hit(scene, state, exclude=None, maxSegment=None, marchStep=None,
                    bisectionTolerance=1e-12, grazeTolerance=GRAZE_TOLERANCE, obstacles=True):
    """
    First contact of the geodesic of state with the boundary of S_K.
    Obstacle contacts are sign changes of the signed distance from positive
    to non positive, the exit from S a sign change from negative to non
    negative. Sign changes are refined by Brent's method and a bounded
    minimization looks for geodesics dipping into an obstacle between two
    samples. Grazes closer than grazeTolerance are contacts.

    :Parameters:
        #. scene (Scene): The scene.
        #. state (PhaseState): Unit speed state in S_K.
        #. exclude (None, int): Obstacle index to ignore, usually the last
           contact.
        #. maxSegment (None, number): Arclength budget, default 4 diam_S.
        #. marchStep (None, number): Sampling arclength, default diam_S/32.
        #. bisectionTolerance (number): Arclength tolerance of refinement.
        #. grazeTolerance (number): Chart distance counted as a contact.
        #. obstacles (bool): Whether obstacles are considered. When False
           only the exit from S is searched.

    :Returns:
        #. hit (Hit): The contact. hit.curve is DOMAIN_INDEX when the
           geodesic exits S.
    """
    chart = scene.chart
    if maxSegment is None:
        maxSegment = MAX_SEGMENT_FACTOR*scene.diam_S
    if marchStep is None:
        marchStep = MARCH_FRACTION*scene.diam_S
    state = PhaseState(state.point, chart.normalize(state.point, state.velocity))
    curves = [(DOMAIN_INDEX, scene.domain)] + [(i, o) for i, o in enumerate(scene.obstacles) if obstacles and i != exclude]
    sd  = lambda curve, u: curve.signed_chart_distance(chart.flow(state, u).point)
    s0  = 0.
    while s0 < maxSegment:
        s1 = min(maxSegment, s0 + (CHUNK-1)*marchStep)
        s, P, V = _segment_samples(chart, state, s0, s1, CHUNK)
        steps   = np.linalg.norm(np.diff(P, axis=0), axis=1)
        reach   = np.max(steps)
        found   = []
        for index, curve in curves:
            if index != DOMAIN_INDEX:
                if np.min(np.linalg.norm(P-curve.boundingCenter, axis=1)) > curve.boundingRadius + 2*reach:
                    continue
            d = curve.signed_chart_distance(P)
            if index == DOMAIN_INDEX:
                cross = np.nonzero((d[:-1]<0) & (d[1:]>=0))[0]
                if len(cross):
                    i = cross[0]
                    found.append( (brentq(lambda u: sd(curve, u), s[i], s[i+1], xtol=bisectionTolerance), index, curve) )
                continue
            cross = np.nonzero((d[:-1]>0) & (d[1:]<=0))[0]
            if len(cross):
                i = cross[0]
                found.append( (brentq(lambda u: sd(curve, u), s[i], s[i+1], xtol=bisectionTolerance), index, curve) )
                limit = s[i]
            else:
                limit = s[-1]
            # dips between samples
            for i in range(len(d)):
                if s[i] > limit or d[i] <= 0 or d[i] > 1.01*reach:
                    continue
                if (i>0 and d[i-1]<d[i]) or (i<len(d)-1 and d[i+1]<d[i]):
                    continue
                lo, hi = s[max(0,i-1)], s[min(len(s)-1,i+1)]
                res = minimize_scalar(lambda u: sd(curve, u), bounds=(lo, hi), method="bounded", options={"xatol":bisectionTolerance})
                if res.fun <= 0:
                    found.append( (brentq(lambda u: sd(curve, u), lo, res.x, xtol=bisectionTolerance), index, curve) )
                elif res.fun < grazeTolerance:
                    found.append( (res.x, index, curve) )
        if len(found):
            arclength, index, curve = min(found, key=lambda f: f[0])
            end = chart.flow(state, arclength)
            parameter = curve.nearest_parameter(end.point)
            normal    = curve.outward_normal(parameter)
            incidence = np.arcsin(min(1., abs(chart.inner(end.point, end.velocity, normal))))
            return Hit(end.point, FLOAT_TYPE(arclength), index, FLOAT_TYPE(parameter), end.velocity, normal, FLOAT_TYPE(incidence))
        s0 = s1
    raise_error(NoHitWithinBudget, "no contact within arclength %.6g from %s"%(maxSegment, list(state.point)), state=state)

def check_order_bound(scene, trajectory, tolerance=1e-9):
    """
    Check order*d_K <= time <= (order+1)*diam_S on a complete trajectory.
    The lower bound needs d_K, it is skipped for scenes with fewer than two
    obstacles. Validated scenes clear the boundary of S by d_K/2, which
    makes the lower bound hold for every ray.

    :Raises:
        #. OrderBoundViolation: carrying the trajectory.
    """
    order, t = trajectory.order, trajectory.totalTime
    lower = order*scene.dK if np.isfinite(scene.dK) else FLOAT_TYPE(0)
    upper = (order+1)*scene.diam_S
    if t < lower - tolerance or t > upper + tolerance:
        raise_error(OrderBoundViolation, "order bound violated: order %i, d_K %.10g, diam_S %.10g, time %.10g"%(order, scene.dK, scene.diam_S, t),
                    trajectory=trajectory)

def trace(scene, x, omega, maxOrder=MAX_ORDER, maxTime=None, tangencyTolerance=TANGENCY_TOLERANCE,
                maxSegment=None, marchStep=None, checkOrderBound=True):
    """
    Trace a generalised geodesic from the boundary of S until it reaches
    the boundary of S again.

    :Parameters:
        #. scene (Scene): The scene.
        #. x (number): Arclength parameter of the start on the boundary of S.
        #. omega (np.ndarray): Inward unit direction at x.
        #. maxOrder (int): Maximum number of obstacle contacts.
        #. maxTime (None, number): Time budget, default 20 diam_S.
        #. tangencyTolerance (number): |g(omega,nu)| under which a contact
           is a tangency.
        #. maxSegment (None, number): Segment budget, see first_hit.
        #. marchStep (None, number): Sampling arclength, see first_hit.
        #. checkOrderBound (bool): Check order*d_K <= time <= (order+1)*diam_S
           and raise OrderBoundViolation when it fails.

    :Returns:
        #. trajectory (Trajectory): The complete trajectory.
    """
    chart = scene.chart
    if maxTime is None:
        maxTime = MAX_TIME_FACTOR*scene.diam_S
    p = scene.domain.position(x)
    state = PhaseState(p, chart.normalize(p, omega))
    trajectory = Trajectory(state, startParameter=FLOAT_TYPE(x))
    exclude = None
    time    = 0.
    while True:
        try:
            hit = first_hit(scene, state, exclude=exclude, maxSegment=maxSegment, marchStep=marchStep)
        except NoHitWithinBudget:
            raise_error(Trapped, "ray from x=%.10g is trapped after %i contacts"%(x, trajectory.order), trajectory=trajectory)
        time += hit.arclength
        if hit.curve == DOMAIN_INDEX:
            trajectory.add_event(Event(hit.point, hit.velocity, hit.velocity, False, DOMAIN_INDEX, hit.parameter), hit.arclength)
            break
        tangency = abs(chart.inner(hit.point, hit.velocity, hit.normal)) < tangencyTolerance
        outgoing = hit.velocity if tangency else reflect(chart, hit.point, hit.velocity, hit.normal)
        trajectory.add_event(Event(hit.point, hit.velocity, outgoing, tangency, hit.curve, hit.parameter), hit.arclength)
        if trajectory.order > maxOrder or time > maxTime:
            raise_error(Trapped, "ray from x=%.10g exceeds its budgets (order %i, time %.6g)"%(x, trajectory.order, time), trajectory=trajectory)
        state   = PhaseState(hit.point, outgoing)
        exclude = hit.curve
    if checkOrderBound:
        check_order_bound(scene, trajectory)
    return trajectory

def trace_angle(scene, x, angle, **kwargs):
    """trace from boundary parameter x with angle from the inward normal."""
    return trace(scene, x, boundary_state(scene, x, angle).velocity, **kwargs)

def endpoint_map(scene, x, omega, **kwargs):
    """
    Scattering relation: end point, outgoing direction and travelling time
    of the ray (x, omega).

    :Returns:
        #. y (np.ndarray): End point on the boundary of S.
        #. omega (np.ndarray): Outgoing unit direction.
        #. t (float): Travelling time.
    """
    trajectory = trace(scene, x, omega, **kwargs)
    end = trajectory.end
    return end.point, end.velocity, trajectory.totalTime
