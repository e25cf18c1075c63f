"""First cohomology of the Lorentzian null-line stabiliser algebras.

For each reductive g0 in {so(2), so(3), so(2) + so(3)} the script builds the
algebras of types 1 to 3 and prints dim H^1 of the standard module, next to
the closed-form prediction for type 2, dim S0(g0) + dim z(g0) + dim ker(g0).

Run: python3 demos/cohomology_table.py
"""

from conelab.cohomology import LieModule, cohomology, remark_h1_dimension
from conelab.lie_matrix import bbi_type
from conelab.suites import g0_battery

print(f"{'g0':10s} {'type':6s} {'dim g':>5s} {'h1':>3s} {'predicted':>9s}")
for name, g0 in g0_battery().items():
    for kind in ("type1", "type2", "type3"):
        if kind == "type3" and name == "so3":
            continue
        params = {"f": lambda z: 1.0} if kind == "type3" else None
        alg, _, _ = bbi_type(kind, g0, params)
        h1 = cohomology(LieModule.from_algebra(alg)).h1_dim
        pred = remark_h1_dimension(g0, g0.ambient_dim) if kind == "type2" else 0
        print(f"{name:10s} {kind:6s} {alg.dim:5d} {h1:3d} {pred:9d}")
