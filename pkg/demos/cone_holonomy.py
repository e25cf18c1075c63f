"""Holonomy of cones over space forms.

The time-like cone over the unit sphere has holonomy so(1,2), all three
dimensions of it, while the cone over the hyperbolic plane is flat.  This
script computes both spans from curvature jets and confirms the sphere case
with small parallelogram loops.

Run: python3 demos/cone_holonomy.py
"""

import numpy as np

from conelab.charts import hyperbolic, sphere
from conelab.cones import cone, cone_curvature_norm
from conelab.holonomy import ambrose_singer_span, loop_span, span_compare

s2_cone = cone(sphere(2))
p = np.array([1.0, np.pi / 3, 0.0])
span = ambrose_singer_span(s2_cone, p, max_order=1)
print(f"cone over S^2 at {p}: holonomy dimension {span.dim} (converged: {span.converged})")

loops = loop_span(s2_cone, p)
print(f"  loop-generated span has dimension {loops.dim}, "
      f"principal distance to the curvature span {span_compare(span, loops).principal_distance:.2e}")

h2 = hyperbolic(2)
pts = [np.array([1.0, 0.3, 1.2]), np.array([2.0, -0.5, 0.7])]
print(f"cone over H^2: max curvature norm {cone_curvature_norm(h2, pts):.2e}")
