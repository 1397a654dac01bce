"""
riembill is a billiard simulator on two dimensional Riemannian surfaces
together with a constructive inverse scattering engine that recovers
strictly convex obstacles from their travelling times.

A billiard table is a strictly convex domain S of a surface chart with
n >= 2 strictly convex obstacles K_1 ... K_n inside it. Rays leave the
boundary of S, follow geodesics, reflect specularly on the obstacles and
terminate when they reach the boundary of S again. The set of triples
(x, y, t) of start point, end point and travelling time is the data.
From it riembill extracts the arcs and cusps of the travelling-time
graphs, the families of rays tangent to the obstacles and, from the
envelopes of those families, the obstacles' boundaries.

.. inheritance-diagram:: riembill.Core.Chart
    :parts: 1
    :private-bases:

Modules
=======
#. :mod:`riembill.Core.Chart`: metric charts, geodesic flow and distance.
#. :mod:`riembill.Core.Curve`: closed strictly convex curves.
#. :mod:`riembill.Scene`: billiard table and its standing hypotheses.
#. :mod:`riembill.Billiard`: generalised geodesics, reflections and events.
#. :mod:`riembill.TravelTimes`: datasets, travelling-time graphs, arcs,
   cusps and echographs.
#. :mod:`riembill.Strata`: tangent ray families and double tangencies.
#. :mod:`riembill.Bitangents`: common tangent geodesics and obstacle count.
#. :mod:`riembill.Reconstruct`: envelopes and extension of tangent arcs.
#. :mod:`riembill.Trapping`: Riemannian ellipses and a trapping obstacle.
#. :mod:`riembill.Config`, :mod:`riembill.Output`, :mod:`riembill.Cli`:
   configuration, CSV tables, matplotlib figures and the command line tool.

Usage
=====
.. code-block:: python

    from riembill.Config import SceneConfig
    from riembill.Scene import validate_scene

    config = SceneConfig.from_file("Examples/threeCircles/scene.json")
    scene  = config.build_scene()
    print(validate_scene(scene))
"""
from .__pkginfo__ import __version__
