"""
Output writes and reads the files riembill produces: comma separated
tables, matplotlib figures and json reports.

Floats are written with repr so that reading a table back gives the
exact values that were written. Files are written by the calling process
only.
"""
# standard libraries imports
import os
import json

# external libraries imports
import numpy as np

# riembill imports
from riembill.Globals import FLOAT_TYPE, LOGGER
from riembill.Core.Collection import raise_error
from riembill.Core.Errors import ValidationError
from riembill.TravelTimes import TravelSample

DATASET_HEADER = ["xIndex", "directionIndex", "x", "omega", "y", "t", "order", "tangencyCount", "omegaOut"]
ORDER_COLORS   = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"]


def _repr(value):
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (tuple, list)):
        return ";".join(str(int(v)) for v in value)
    return str(value)

def write_table(path, header, rows, comments=None):
    """
    Write rows as a comma separated table with a one line header.

    :Parameters:
        #. path (str): File path.
        #. header (list): Column names.
        #. rows (list): Rows of values. Floats are written with repr,
           tuples of integers as ';' joined lists.
        #. comments (None, str): Extra comment line written first.
    """
    data = np.array([[_repr(v) for v in row] for row in rows], dtype=object).reshape(-1, len(header))
    head = ",".join(header) if comments is None else "%s\n%s"%(comments, ",".join(header))
    np.savetxt(fname=path, X=data, fmt="%s", delimiter=",", header=head, comments="# ")

def read_table(path):
    """
    Read a table written by write_table.

    :Returns:
        #. header (list): Column names.
        #. rows (list): Rows of strings.
    """
    if not os.path.isfile(path):
        raise IOError("table file '%s' does not exist"%path)
    header, rows = None, []
    with open(path, "r") as fd:
        for line in fd:
            line = line.rstrip("\n")
            if not len(line):
                continue
            if line.startswith("# "):
                header = line[2:].split(",")
                continue
            rows.append(line.split(","))
    if header is None:
        raise_error(ValidationError, "table file '%s' has no header"%path)
    for i, row in enumerate(rows):
        if len(row) != len(header):
            raise_error(ValidationError, "table file '%s' row %i has %i columns instead of %i"%(path, i+1, len(row), len(header)))
    return header, rows


def write_dataset(path, dataset):
    """Write TravelSample records sorted by grid indexes."""
    rows = []
    for s in sorted(dataset, key=lambda s: (s.xIndex, s.directionIndex)):
        rows.append([s.xIndex, s.directionIndex, s.x, s.omega, s.y, s.t, s.order, s.tangencyCount, s.omegaOut])
    write_table(path, DATASET_HEADER, rows)
    LOGGER.info("%i samples written to '%s'"%(len(rows), path))

def read_dataset(path):
    """
    Read a dataset table.

    :Returns:
        #. dataset (list): TravelSample list in file order.
    """
    header, rows = read_table(path)
    if header != DATASET_HEADER:
        raise_error(ValidationError, "dataset file '%s' header %s is not %s"%(path, header, DATASET_HEADER))
    dataset = []
    for r in rows:
        dataset.append( TravelSample(FLOAT_TYPE(r[2]), FLOAT_TYPE(r[3]), FLOAT_TYPE(r[4]), FLOAT_TYPE(r[5]),
                                     int(r[6]), int(r[7]), int(r[0]), int(r[1]), FLOAT_TYPE(r[8])) )
    return dataset

def completed_indexes(path):
    """(xIndex, directionIndex) pairs already in a dataset file, empty when
    the file does not exist."""
    if not os.path.isfile(path):
        return set(), []
    dataset = read_dataset(path)
    return set((s.xIndex, s.directionIndex) for s in dataset), dataset

def write_bitangents(path, bitangents):
    """Write directed Bitangent records."""
    header = ["l", "j", "fromIndex", "toIndex", "sl", "sj", "rl", "rj", "startX", "startY", "startU", "startV", "length"]
    rows = [[b.pair[0], b.pair[1], b.fromIndex, b.toIndex, b.sl, b.sj, b.signs[0], b.signs[1],
             b.start.point[0], b.start.point[1], b.start.velocity[0], b.start.velocity[1], b.length] for b in bitangents]
    write_table(path, header, rows)

def write_boundaries(path, obstacles):
    """Write recovered polylines, one row per vertex."""
    rows = []
    for i, o in enumerate(obstacles):
        for k, p in enumerate(o.polyline):
            rows.append([i, k, p[0], p[1]])
    write_table(path, ["obstacle", "vertex", "x", "y"], rows)

def write_arcs(path, arcs):
    """Write travelling time graph arcs, one row per sample."""
    rows = []
    for i, arc in enumerate(arcs):
        for x, t, g in zip(arc.x, arc.t, arc.gradients):
            rows.append([i, arc.order, arc.tangencyCount, x, t, g])
    write_table(path, ["arc", "order", "tangencyCount", "x", "t", "gradient"], rows)

def _clean(value):
    if isinstance(value, dict):
        return dict((str(k), _clean(v)) for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if np.isfinite(value) else repr(value)
    if isinstance(value, np.ndarray):
        return _clean(value.tolist())
    if value is None or isinstance(value, str):
        return value
    return str(value)

def write_json(path, report):
    """Write a report as sorted json, numpy values converted."""
    with open(path, "w") as fd:
        fd.write(json.dumps(_clean(report), indent=2, sort_keys=True))
        fd.write("\n")


def _axes(ax, title=None):
    # Agg canvas, figures are written to files only
    from matplotlib.figure import Figure
    from matplotlib.backends.backend_agg import FigureCanvasAgg
    if ax is None:
        FIG  = Figure(figsize=(8,8))
        FigureCanvasAgg(FIG)
        AXES = FIG.add_subplot(111)
    else:
        AXES = ax
        FIG  = AXES.get_figure()
    AXES.set_aspect("equal")
    if title is not None:
        AXES.set_title(title)
    FIG.patch.set_facecolor('white')
    return FIG, AXES

def _closed(points):
    points = np.asarray(points, dtype=FLOAT_TYPE).reshape(-1,2)
    return np.vstack([points, points[:1]])

def save_figure(figure, path):
    """Write a matplotlib figure, the format follows the path extension."""
    figure.savefig(path, facecolor=figure.get_facecolor())
    LOGGER.info("figure written to '%s'"%path)

def scene_figure(scene, ax=None, color="#555555", title=None):
    """
    Draw the boundary of S and the obstacles.

    :Parameters:
        #. scene (Scene): The scene.
        #. ax (None, matplotlib Axes): Axes to draw in, a new figure is
           created when None.
        #. color (str): Curves colour.
        #. title (None, str): Axes title.

    :Returns:
        #. figure (matplotlib Figure): The figure.
        #. axes (matplotlib Axes): The axes.
    """
    FIG, AXES = _axes(ax, title)
    D = _closed(scene.domain.samples)
    AXES.plot(D[:,0], D[:,1], color=color, linewidth=1.)
    for o in scene.obstacles:
        P = _closed(o.samples)
        AXES.plot(P[:,0], P[:,1], color=color, linewidth=1.)
        AXES.annotate(o.name, xy=np.mean(o.samples, axis=0), ha="center", va="center", color=color, fontsize=8)
    return FIG, AXES

def echograph_figure(scene, graph, ax=None):
    """Echograph arcs coloured by order over the scene."""
    FIG, AXES = scene_figure(scene, ax=ax, color="#bbbbbb", title="echograph")
    drawn = set()
    for order, points in graph.arcs:
        points = np.asarray(points, dtype=FLOAT_TYPE).reshape(-1,2)
        if not len(points):
            continue
        label = None if order in drawn else "order %i"%order
        drawn.add(order)
        AXES.plot(points[:,0], points[:,1], color=ORDER_COLORS[order%len(ORDER_COLORS)], linewidth=0.8, label=label)
    if len(drawn):
        AXES.legend(frameon=False, loc="upper right", fontsize=8)
    return FIG, AXES

def overlay_figure(scene, obstacles, ax=None):
    """Recovered boundaries over the scene."""
    FIG, AXES = scene_figure(scene, ax=ax, color="#999999", title="reconstruction")
    for i, o in enumerate(obstacles):
        P = _closed(o.polyline) if o.closed else o.polyline
        AXES.plot(P[:,0], P[:,1], color="#d62728", linewidth=1.5, label="recovered %i"%i)
    if len(obstacles):
        AXES.legend(frameon=False, loc="upper right", fontsize=8)
    return FIG, AXES

def trapping_figure(ellipse, obstacle, paths=(), ax=None):
    """Ellipse, trapping curve, focal ray paths, foci and axis points."""
    FIG, AXES = _axes(ax, "trapping")
    E = _closed(ellipse.boundary.samples)
    C = _closed(obstacle.curve.samples)
    AXES.plot(E[:,0], E[:,1], color="#bbbbbb", linewidth=1., label="ellipse")
    AXES.plot(C[:,0], C[:,1], color="#d62728", linewidth=1.5, label="trapping curve")
    for path in paths:
        AXES.plot(path[:,0], path[:,1], color="#1f77b4", linewidth=0.5)
    P = np.array([ellipse.F1, ellipse.F2, ellipse.A1, ellipse.A2])
    AXES.plot(P[:,0], P[:,1], 'ko', markersize=3)
    AXES.legend(frameon=False, loc="upper right", fontsize=8)
    return FIG, AXES
