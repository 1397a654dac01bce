"""
It contains a collection of methods that are useful for the package.
"""
# standard libraries imports
import time
import multiprocessing

# external libraries imports
import numpy as np

# riembill imports
from riembill.Globals import INT_TYPE, FLOAT_TYPE, PI, PRECISION, LOGGER


def raise_error(errorClass, message, **payload):
    """
    Log message at error level and raise it as errorClass.

    :Parameters:
        #. errorClass (type): A riembill.Core.Errors exception class.
        #. message (str): The error message.
        #. payload (kwargs): Attributes attached to the raised exception.
    """
    LOGGER.error(message)
    raise errorClass(message, **payload)

def is_number(number):
    """
    Check if number is convertible to float.

    :Parameters:
        #. number (str, number): Input number.

    :Returns:
        #. result (bool): True if convertible, False otherwise
    """
    if isinstance(number, bool):
        return False
    if isinstance(number, (int, float, np.integer, np.floating)):
        return True
    try:
        float(number)
    except (TypeError, ValueError):
        return False
    else:
        return True

def is_integer(number, precision=10e-10):
    """
    Check if number is convertible to integer.

    :Parameters:
        #. number (str, number): Input number.
        #. precision (number): To avoid floating errors,
           a precision should be given.

    :Returns:
        #. result (bool): True if convertible, False otherwise.
    """
    if isinstance(number, bool):
        return False
    if isinstance(number, (int, np.integer)):
        return True
    try:
        number = float(number)
    except (TypeError, ValueError):
        return False
    return bool(np.abs(number-round(number)) < precision)

def get_elapsed_time(start, format="%d days, %d hours, %d minutes, %d seconds"):
    """
    Get formatted time elapsed.

    :Parameters:
        #. start (time.time): A time instance.
        #. format (string): The format string. must contain exactly four '%d'.

    :Returns:
        #. time (string): The formatted elapsed time.
    """
    days    = divmod(time.time()-start,86400)
    hours   = divmod(days[1],3600)
    minutes = divmod(hours[1],60)
    seconds = minutes[1]
    return format % (days[0],hours[0],minutes[0],seconds)

def wrap_parameter(s, period):
    """Wrap a curve parameter into [0, period)."""
    return np.mod(s, period)

def periodic_difference(a, b, period):
    """
    Signed difference a-b of two periodic parameters.

    :Returns:
        #. difference (number, np.ndarray): In [-period/2, period/2).
    """
    return np.mod(np.asarray(a)-np.asarray(b)+0.5*period, period) - 0.5*period

def cross2(u, v):
    """z component of the cross product of (stacks of) 2D vectors."""
    u = np.asarray(u, dtype=FLOAT_TYPE)
    v = np.asarray(v, dtype=FLOAT_TYPE)
    return u[...,0]*v[...,1] - u[...,1]*v[...,0]

def rotate_clockwise(v):
    """Rotate chart vectors by -pi/2."""
    v = np.asarray(v, dtype=FLOAT_TYPE)
    return np.stack([v[...,1], -v[...,0]], axis=-1)

def point_polyline_distances(points, polyline, closed=True):
    """
    Distance of every point to a polyline, computed segment by segment.

    :Parameters:
        #. points (np.ndarray): (m,2) points.
        #. polyline (np.ndarray): (k,2) vertices.
        #. closed (bool): Whether last vertex connects to the first one.

    :Returns:
        #. distances (np.ndarray): (m,) minimum distances.
    """
    points   = np.atleast_2d(np.asarray(points, dtype=FLOAT_TYPE))
    polyline = np.atleast_2d(np.asarray(polyline, dtype=FLOAT_TYPE))
    if len(polyline) == 1:
        return np.sqrt(np.sum((points-polyline[0])**2, axis=1))
    A = polyline
    B = np.roll(polyline, -1, axis=0) if closed else polyline[1:]
    if not closed:
        A = polyline[:-1]
    AB   = B-A
    AB2  = np.sum(AB**2, axis=1)
    AB2[AB2<PRECISION**2] = PRECISION**2
    distances = np.empty(len(points), dtype=FLOAT_TYPE)
    # chunk to bound memory
    chunk = max(1, int(2e6//max(1,len(A))))
    for start in range(0, len(points), chunk):
        P  = points[start:start+chunk, None, :]
        AP = P-A[None,:,:]
        t  = np.clip(np.sum(AP*AB[None,:,:], axis=2)/AB2[None,:], 0., 1.)
        C  = A[None,:,:] + t[:,:,None]*AB[None,:,:]
        distances[start:start+chunk] = np.sqrt(np.min(np.sum((P-C)**2, axis=2), axis=1))
    return distances

def hausdorff_distance(polylineA, polylineB, closed=True):
    """
    Symmetric Hausdorff distance between two polylines in chart
    coordinates. Vertices of each polyline are measured against the
    segments of the other one.

    :Parameters:
        #. polylineA (np.ndarray): (k,2) vertices.
        #. polylineB (np.ndarray): (m,2) vertices.
        #. closed (bool): Whether both polylines are closed.

    :Returns:
        #. distance (float): The Hausdorff distance.
    """
    dAB = point_polyline_distances(polylineA, polylineB, closed=closed)
    dBA = point_polyline_distances(polylineB, polylineA, closed=closed)
    return FLOAT_TYPE(max(np.max(dAB), np.max(dBA)))

def discrete_turning(points, closed=False):
    """
    Cross products of consecutive edges of a polyline. Positive values mean
    an anti-clockwise turn.

    :Returns:
        #. turning (np.ndarray): One value per interior vertex, or per
           vertex when closed.
    """
    points = np.asarray(points, dtype=FLOAT_TYPE)
    if closed:
        e0 = points - np.roll(points, 1, axis=0)
        e1 = np.roll(points, -1, axis=0) - points
    else:
        if len(points) < 3:
            return np.zeros(0, dtype=FLOAT_TYPE)
        e0 = points[1:-1]-points[:-2]
        e1 = points[2:]-points[1:-1]
    return cross2(e0, e1)

def polygon_signed_area(points):
    """Shoelace signed area, positive for anti-clockwise polygons."""
    points = np.asarray(points, dtype=FLOAT_TYPE)
    return FLOAT_TYPE(0.5*np.sum(cross2(points, np.roll(points, -1, axis=0))))

def check_threads(nThreads):
    """
    Validate a worker count.

    :Parameters:
        #. nThreads (None, int): Requested workers. None means 1.

    :Returns:
        #. nThreads (int): A count in [1, cpu_count()].
    """
    if nThreads is None:
        return 1
    assert is_integer(nThreads), LOGGER.error("threads must be an integer")
    nThreads = int(nThreads)
    assert nThreads>0, LOGGER.error("threads must be > 0")
    if nThreads > multiprocessing.cpu_count():
        LOGGER.warn("threads '%s' is reset to %s which is the number of available cores on your machine"%(nThreads, multiprocessing.cpu_count()))
        nThreads = multiprocessing.cpu_count()
    return nThreads

def chunked_map(function, items, nThreads=1, initializer=None, initargs=()):
    """
    Map function over items, optionally in a process pool. The result list
    is in input order whatever the number of workers.

    :Parameters:
        #. function (callable): Picklable module level function.
        #. items (list): Inputs.
        #. nThreads (int): Number of worker processes.
        #. initializer (None, callable): Worker initializer.
        #. initargs (tuple): Initializer arguments.

    :Returns:
        #. results (list): function(item) for every item.
    """
    items    = list(items)
    nThreads = check_threads(nThreads)
    if nThreads == 1 or len(items) < 2:
        if initializer is not None:
            initializer(*initargs)
        return [function(item) for item in items]
    chunksize = max(1, len(items)//(4*nThreads))
    pool = multiprocessing.Pool(processes=nThreads, initializer=initializer, initargs=initargs)
    try:
        results = pool.map(function, items, chunksize=chunksize)
    finally:
        pool.close()
        pool.join()
    return results
