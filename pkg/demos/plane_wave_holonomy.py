"""The doubled e^z y^2 plane wave: computed holonomy against the two printed generators.

The double warped extension 2 du dv + u^2 g of the plane wave
g = 2 dx dz + e^z y^2 dz^2 + dy^2 keeps d_v parallel, so its holonomy sits in
the stabiliser of a null line.  Two generators are printed for it.  The
computation below finds a third direction, the curvature endomorphism of the
pair (d_y, d_z), which has no translational part.  The printed span is
contained in the computed one.

Run: python3 demos/plane_wave_holonomy.py
"""

import numpy as np

from conelab.charts import plane_wave_exp
from conelab.cones import double_warped
from conelab.charts import curvature_jet
from conelab.holonomy import (ambrose_singer_span, doubled_frame, printed_plane_wave_matrices, printed_to_chart,
                              span_compare, stabilizer_analysis)
from conelab.pseudo_linear import SubspaceBasis

dw = double_warped(plane_wave_exp())
q = np.array([1.0, 0.0, 0.0, 0.0, 0.0])  # (u, v, x, y, z)
span = ambrose_singer_span(dw, q, max_order=3)
print(f"computed holonomy dimension: {span.dim} (converged: {span.converged})")

printed = np.array(printed_to_chart(printed_plane_wave_matrices()))
cmp_ = span_compare(span, printed)
print(f"printed generators contained in the computed span: {cmp_.b_in_a}")
print(f"principal distance between the two spans: {cmp_.principal_distance:.3f}")

space, frame = doubled_frame(dw, q)
rep = stabilizer_analysis(span, frame)
print(f"stabiliser: linear part dim {rep.linear_part.dim}, translations dim {rep.translations.dim}")

# the extra direction: the component of R(d_y, d_z) orthogonal to the printed span
extra = curvature_jet(dw, q).curvature[3, 4].T
pr = SubspaceBasis(printed.reshape(2, -1).T)
resid = extra.ravel() - pr.projector() @ extra.ravel()
print(f"R(d_y, d_z) lies outside the printed span by {np.linalg.norm(resid):.3f}; nonzero entries:")
for (i, j), v in np.ndenumerate(extra):
    if abs(v) > 1e-12:
        print(f"  [{dw.coords[i]}, {dw.coords[j]}] = {v:+.3f}")
