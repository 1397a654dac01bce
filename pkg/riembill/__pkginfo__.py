"""
Version history:
================
   * **Version 0.1.0**:
       #. Riemannian billiard tracer on the Euclidean plane, the Poincare
          half-plane and user supplied metrics.
       #. Travelling-time datasets, arcs, cusps, tangency strata and
          echographs.
       #. Bitangent enumeration and obstacle counting.
       #. Envelope based obstacle reconstruction.
       #. Riemannian ellipses and the trapping obstacle demonstration.
       #. json scene configuration, CSV tables, svg figures, command line tool.
"""

__version__ = '0.1.0'
